import random
from fractions import Fraction

import pytest
import sympy

from rauzy import graphs
from rauzy.generate import random_valid_graph
from rauzy.measured import (
    Infeasible,
    MeasuredRauzyGraph,
    integer_solution,
    rational_kernel,
    solve_at_least_one,
    validate_balance,
    _balance_system,
)
from rauzy.words import FreeGroup


def unit_weights(g):
    return MeasuredRauzyGraph(
        g, tuple(Fraction(1) for _ in g.vertices),
        tuple(Fraction(1) for _ in g.edges))


def test_validate_balance_cyc2(cyc2):
    assert validate_balance(unit_weights(cyc2)) == []


def test_validate_balance_reports_tampering(cyc2):
    m = [Fraction(1)] * len(cyc2.edges)
    m[0] = Fraction(2)
    bad = MeasuredRauzyGraph(cyc2, (Fraction(1), Fraction(1)), tuple(m))
    violations = validate_balance(bad)
    kinds = {(v.kind, v.vertex, v.letter) for v in violations}
    e0 = cyc2.edges[0]
    assert ("bar", 0, None) in kinds
    assert ("out", cyc2.vertices[e0.source], e0.label) in kinds
    assert ("in", cyc2.vertices[e0.target], e0.label) in kinds


def test_validate_balance_star3(star3):
    names = {v: i for i, v in enumerate(star3.vertices)}
    mu = [None] * 3
    mu[names["u"]], mu[names["v"]], mu[names["w"]] = 2, 1, 1
    m = []
    for e in star3.edges:
        if e.label in (2, 3):  # b loops carry the vertex weight
            m.append(Fraction(mu[e.source]))
        else:
            m.append(Fraction(1))
    mg = MeasuredRauzyGraph(star3, tuple(Fraction(x) for x in mu), tuple(m))
    assert validate_balance(mg) == []


def test_integer_solution_cyc2_is_all_ones(cyc2):
    sol = integer_solution(cyc2)
    assert sol.mu == (1, 1)
    assert set(sol.m) == {1}


def test_integer_solution_cyc2_kernel_oracle(cyc2):
    # independent check with sympy: the balance system has a 1-dimensional
    # kernel containing the solver's vector
    rows, n_cols = _balance_system(cyc2)
    M = sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows])
    kernel = M.nullspace()
    assert len(kernel) == 1
    sol = integer_solution(cyc2)
    vec = sympy.Matrix(list(sol.mu) + list(sol.m))
    assert M * vec == sympy.zeros(M.rows, 1)
    ratios = {sympy.nsimplify(vec[i] / kernel[0][i])
              for i in range(n_cols) if kernel[0][i] != 0}
    assert len(ratios) == 1


def test_integer_solution_hint_scales_by_lcm(cyc2):
    half = Fraction(1, 2)
    hint = MeasuredRauzyGraph(cyc2, (half, half),
                              tuple([half] * len(cyc2.edges)))
    sol = integer_solution(cyc2, hint)
    assert sol.mu == (1, 1) and set(sol.m) == {1}
    third = Fraction(2, 3)
    hint3 = MeasuredRauzyGraph(cyc2, (third, third),
                               tuple([third] * len(cyc2.edges)))
    sol3 = integer_solution(cyc2, hint3)
    assert sol3.mu == (2, 2) and set(sol3.m) == {2}


def test_integer_solution_rejects_bad_hint(cyc2):
    m = [Fraction(1)] * len(cyc2.edges)
    m[0] = Fraction(2)
    bad = MeasuredRauzyGraph(cyc2, (Fraction(1), Fraction(1)), tuple(m))
    with pytest.raises(ValueError, match="not balanced"):
        integer_solution(cyc2, bad)


def test_integer_solution_star3(star3):
    sol = integer_solution(star3)
    mu = dict(zip(star3.vertices, sol.mu))
    assert mu["u"] == mu["v"] + mu["w"]
    assert sol.has_full_support() and sol.is_integral()
    assert validate_balance(sol) == []


def test_no_full_support_verdict(group2):
    # the in-balance at vertex 0 forces the 0 -> 1 a-edge weight to zero
    g = graphs.RauzyGraph.from_relations(
        group2, 2, [{(0, 0), (0, 1), (1, 1)}, {(0, 0), (1, 1)}])
    assert graphs.validate(g) == []
    assert integer_solution(g) is None


def test_scaling_invariance(cyc2):
    sol = integer_solution(cyc2)
    doubled = MeasuredRauzyGraph(
        cyc2, tuple(2 * x for x in sol.mu), tuple(2 * x for x in sol.m))
    assert validate_balance(doubled) == []


def test_solver_proportional_to_hint_route(cyc2):
    sol = integer_solution(cyc2)
    hinted = integer_solution(cyc2, unit_weights(cyc2))
    ratios = {Fraction(a, b) for a, b in zip(
        (*sol.mu, *sol.m), (*hinted.mu, *hinted.m))}
    assert len(ratios) == 1


def test_deterministic_graph_solutions():
    group = FreeGroup(2)
    rng = random.Random(41)
    for _ in range(20):
        n = rng.randint(1, 4)
        rels = []
        for _ in range(group.rank):
            perm = list(range(n))
            rng.shuffle(perm)
            rels.append({(v, perm[v]) for v in range(n)})
        g = graphs.RauzyGraph.from_relations(group, n, rels)
        sol = integer_solution(g)
        assert sol is not None
        for i, e in enumerate(g.edges):
            assert sol.m[i] == sol.mu[e.source]


def test_random_graph_solver_outputs_are_solutions():
    group = FreeGroup(2)
    rng = random.Random(3)
    solved = 0
    for _ in range(150):
        g = random_valid_graph(group, rng, 3)
        sol = integer_solution(g)
        if sol is None:
            continue
        solved += 1
        assert sol.is_integral() and sol.has_full_support()
        assert validate_balance(sol) == []
    assert solved >= 20


def test_random_solutions_against_sympy_kernel():
    group = FreeGroup(2)
    rng = random.Random(8)
    checked = 0
    while checked < 10:
        g = random_valid_graph(group, rng, 3)
        sol = integer_solution(g)
        if sol is None:
            continue
        rows, _ = _balance_system(g)
        M = sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows])
        vec = sympy.Matrix(list(sol.mu) + list(sol.m))
        assert M * vec == sympy.zeros(M.rows, 1)
        checked += 1


def test_rational_kernel_simple():
    rows = [[Fraction(1), Fraction(-1)]]
    basis = rational_kernel(rows, 2)
    assert len(basis) == 1
    x, y = basis[0]
    assert x == y != 0


def test_simplex_feasibility_basics():
    one = Fraction(1)
    assert solve_at_least_one([[one]]) == [one]
    got = solve_at_least_one([[one, one], [one, -one]])
    assert got[0] + got[1] >= 1 and got[0] - got[1] >= 1
    with pytest.raises(Infeasible):
        solve_at_least_one([[one], [-one]])
