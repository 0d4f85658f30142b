"""Measured Rauzy graphs: vertex and edge weights with per-letter balance.

The balance equations say that at every vertex and for every letter, the
outgoing and the incoming edge weights each sum to the vertex weight, and
bar-paired edges carry equal weight.  Everything is exact rational
arithmetic: the homogeneous system is solved by Gaussian elimination over
Fraction, and a strictly positive solution is found (or refuted) by a small
exact phase-1 simplex with Bland's rule over the kernel coefficients.
Positive rational solutions scale to integer ones by clearing denominators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .graphs import RauzyGraph, require_valid
from .words import Letter


@dataclass(frozen=True)
class MeasuredRauzyGraph:
    """Weights are indexed like the graph: mu[v] per vertex, m[e] per edge."""

    graph: RauzyGraph
    mu: tuple
    m: tuple

    def __post_init__(self):
        if len(self.mu) != len(self.graph.vertices):
            raise ValueError("mu must have one weight per vertex")
        if len(self.m) != len(self.graph.edges):
            raise ValueError("m must have one weight per edge")
        for x in (*self.mu, *self.m):
            if x < 0:
                raise ValueError("weights must be non-negative")

    def has_full_support(self) -> bool:
        return all(x > 0 for x in self.m)

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in (*self.mu, *self.m))


@dataclass(frozen=True)
class BalanceViolation:
    kind: str            # "out", "in", or "bar"
    vertex: object       # vertex label ("bar": the edge id)
    letter: Letter | None
    lhs: Fraction
    rhs: Fraction

    def __str__(self):
        if self.kind == "bar":
            return (f"m(edge {self.vertex}) = {self.lhs} differs from its "
                    f"bar's weight {self.rhs}")
        return (f"{self.kind}-balance at ({self.vertex!r}, letter {self.letter}): "
                f"{self.lhs} != {self.rhs}")


def validate_balance(mg: MeasuredRauzyGraph) -> list[BalanceViolation]:
    """Exact check of every balance equation and the bar symmetry."""
    g = mg.graph
    require_valid(g)
    out = []
    for i, e in enumerate(g.edges):
        if mg.m[i] != mg.m[e.bar]:
            out.append(BalanceViolation("bar", i, None,
                                        Fraction(mg.m[i]), Fraction(mg.m[e.bar])))
    n = len(g.vertices)
    for v in range(n):
        for s in g.group.letters:
            o = sum((mg.m[i] for i in g.out_edges(v, s)), Fraction(0))
            if o != mg.mu[v]:
                out.append(BalanceViolation(
                    "out", g.vertices[v], s, o, Fraction(mg.mu[v])))
            i_sum = sum((mg.m[j] for j, e in enumerate(g.edges)
                         if e.target == v and e.label == s), Fraction(0))
            if i_sum != mg.mu[v]:
                out.append(BalanceViolation(
                    "in", g.vertices[v], s, i_sum, Fraction(mg.mu[v])))
    return out


# -- exact rational linear algebra

def rational_kernel(rows: Sequence[Sequence[Fraction]], n_cols: int) -> list[list[Fraction]]:
    """A basis of the kernel of the matrix, by Gaussian elimination over
    exact rationals.  Basis vectors are indexed by the free columns, with a
    1 in their own column."""
    mat = [list(map(Fraction, row)) for row in rows]
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n_cols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


class Infeasible(Exception):
    """The exact feasibility program has no solution."""


def solve_at_least_one(constraints: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Find free rationals alpha with (constraints @ alpha) >= 1 coordinatewise,
    by phase-1 simplex with Bland's rule, or raise Infeasible.

    Each constraint row is the coefficient vector of one >= 1 inequality.
    """
    n_rows = len(constraints)
    n_alpha = len(constraints[0]) if n_rows else 0
    # variables: alpha = u - v with u, v >= 0, plus one surplus per row;
    # equalities A u - A v - s = 1, then artificials to start the basis.
    n_struct = 2 * n_alpha + n_rows
    rows = []
    rhs = []
    for i, row in enumerate(constraints):
        r = [Fraction(0)] * n_struct
        for j, a in enumerate(row):
            r[j] = Fraction(a)
            r[n_alpha + j] = -Fraction(a)
        r[2 * n_alpha + i] = Fraction(-1)
        rows.append(r)
        rhs.append(Fraction(1))

    # artificial columns form the initial identity basis
    n_total = n_struct + n_rows
    tableau = []
    for i in range(n_rows):
        row = rows[i] + [Fraction(0)] * n_rows
        b = rhs[i]
        if b < 0:
            row = [-x for x in row]
            b = -b
        row[n_struct + i] = Fraction(1)
        tableau.append(row + [b])
    basis = [n_struct + i for i in range(n_rows)]

    # objective: minimize the sum of artificials; reduced cost of column j
    # is its own cost (1 for artificials, 0 otherwise) minus its column sum
    cost = [Fraction(0)] * (n_total + 1)
    for j in range(n_struct, n_total):
        cost[j] = Fraction(1)
    for i in range(n_rows):
        for j in range(n_total + 1):
            cost[j] -= tableau[i][j]

    while True:
        enter = next((j for j in range(n_total) if cost[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (tableau[i][n_total] / tableau[i][enter], basis[i], i)
            for i in range(n_rows) if tableau[i][enter] > 0
        ]
        if not ratios:
            raise Infeasible("phase-1 objective unbounded (cannot happen)")
        _, _, leave = min(ratios)  # Bland: least ratio, then least basis index
        piv = tableau[leave][enter]
        tableau[leave] = [x / piv for x in tableau[leave]]
        for i in range(n_rows):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [a - f * b
                              for a, b in zip(tableau[i], tableau[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, tableau[leave])]
        basis[leave] = enter

    if -cost[n_total] != 0:
        raise Infeasible("no solution with every coordinate >= 1")
    solution = [Fraction(0)] * n_struct
    for i, var in enumerate(basis):
        if var < n_struct:
            solution[var] = tableau[i][n_total]
    return [solution[j] - solution[n_alpha + j] for j in range(n_alpha)]


def _balance_system(g: RauzyGraph) -> tuple:
    """The homogeneous balance + bar-symmetry system.  Unknowns are ordered
    mu(v_0), ..., mu(v_{n-1}), m(e_0), ..., m(e_{k-1})."""
    n = len(g.vertices)
    k = len(g.edges)
    n_cols = n + k
    rows = []
    for i, e in enumerate(g.edges):
        if i < e.bar:
            row = [Fraction(0)] * n_cols
            row[n + i] = Fraction(1)
            row[n + e.bar] = Fraction(-1)
            rows.append(row)
    for v in range(n):
        for s in g.group.letters:
            row = [Fraction(0)] * n_cols
            row[v] = Fraction(-1)
            for i in g.out_edges(v, s):
                row[n + i] = Fraction(1)
            rows.append(row)
            row = [Fraction(0)] * n_cols
            row[v] = Fraction(-1)
            for i, e in enumerate(g.edges):
                if e.target == v and e.label == s:
                    row[n + i] += Fraction(1)
            rows.append(row)
    return rows, n_cols


def _to_integers(values: Iterable[Fraction], normalize: bool) -> list[int]:
    values = [Fraction(v) for v in values]
    mult = lcm(*(v.denominator for v in values)) if values else 1
    ints = [int(v * mult) for v in values]
    if normalize:
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
    return ints


def integer_solution(g: RauzyGraph,
                     hint: MeasuredRauzyGraph | None = None
                     ) -> MeasuredRauzyGraph | None:
    """An integer full-support measured structure on g, or None if no
    full-support solution exists.

    With a balanced full-support rational hint, simply clears denominators
    by their lcm.  Without one, computes an exact rational kernel basis of
    the balance system and searches for a kernel vector with every
    coordinate >= 1 (equivalent to strict positivity, by homogeneity); the
    found vector is scaled to integers and divided by the gcd.
    """
    require_valid(g)
    n = len(g.vertices)
    if hint is not None:
        if hint.graph is not g and hint.graph != g:
            raise ValueError("hint is for a different graph")
        violations = validate_balance(hint)
        if violations:
            raise ValueError(
                "hint is not balanced: " + "; ".join(map(str, violations)))
        if not hint.has_full_support():
            raise ValueError("hint does not have full support")
        ints = _to_integers((*hint.mu, *hint.m), normalize=False)
        return MeasuredRauzyGraph(g, tuple(ints[:n]), tuple(ints[n:]))

    rows, n_cols = _balance_system(g)
    basis = rational_kernel(rows, n_cols)
    if not basis:
        return None
    constraints = [[basis[b][c] for b in range(len(basis))]
                   for c in range(n_cols)]
    try:
        alpha = solve_at_least_one(constraints)
    except Infeasible:
        return None
    vec = [sum(basis[b][c] * alpha[b] for b in range(len(basis)))
           for c in range(n_cols)]
    assert all(x >= 1 for x in vec)
    ints = _to_integers(vec, normalize=True)
    solution = MeasuredRauzyGraph(g, tuple(ints[:n]), tuple(ints[n:]))
    assert not validate_balance(solution) and solution.has_full_support()
    return solution
