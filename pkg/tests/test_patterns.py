import itertools
import random

import pytest

from rauzy import graphs
from rauzy.patterns import (
    Alphabet,
    CapExceededError,
    Pattern,
    Sft,
    WindowConfig,
    compatible,
    disjoint_union,
    enumerate_window,
    full_shift,
    iota,
    is_locally_admissible,
    restrict_language,
    translate_pattern,
    window_j,
)
from rauzy.words import EPSILON, FreeGroup, concat, inverse, reduce_word


def test_alphabet_invariants():
    with pytest.raises(ValueError):
        Alphabet([])
    with pytest.raises(ValueError):
        Alphabet(["x", "x"])
    alph = Alphabet(["x", "y"])
    assert alph.index("y") == 1 and "x" in alph


def test_translate_pattern():
    a = (0,)
    p = Pattern({EPSILON: "x"})
    assert translate_pattern(EPSILON, p) == p
    q = translate_pattern(a, p)
    assert q.support == (a,) and q[a] == "x"
    assert translate_pattern(inverse(a), q) == p


def test_translate_is_group_action():
    rng = random.Random(5)
    for _ in range(200):
        u = reduce_word([rng.randrange(4) for _ in range(rng.randrange(4))])
        v = reduce_word([rng.randrange(4) for _ in range(rng.randrange(4))])
        supp = [reduce_word([rng.randrange(4) for _ in range(rng.randrange(3))])
                for _ in range(3)]
        p = Pattern({w: rng.randrange(2) for w in supp})
        assert translate_pattern(u, translate_pattern(v, p)) == \
            translate_pattern(concat(u, v), p)


def test_compatible():
    a, b = (0,), (2,)
    p = Pattern({EPSILON: 0, a: 1})
    assert compatible(p, Pattern({b: 1}))        # disjoint supports
    assert compatible(p, p)
    assert not compatible(p, Pattern({a: 0}))    # shared word, different value


def test_enumerate_window_full_shift(group2):
    sft = full_shift(group2, Alphabet([0, 1]))
    assert len(enumerate_window(sft, [EPSILON])) == 2
    for k in (1, 2):
        assert len(enumerate_window(sft, group2.ball(k))) == \
            2 ** len(group2.ball(k))


def test_enumerate_window_empty_shift(group2):
    alph = Alphabet([0, 1])
    forbidden = [Pattern({EPSILON: v}) for v in (0, 1)]
    sft = Sft(group2, alph, forbidden, [EPSILON])
    assert enumerate_window(sft, group2.ball(1)) == ()


def test_enumerate_window_cyc2_brute_force(group2, cyc2):
    # oracle: check all |V|^|B_2| colorings against the edge constraints
    sft = graphs.xg_sft(cyc2)
    ball = group2.ball(2)
    present = {(cyc2.vertices[e.source], e.label, cyc2.vertices[e.target])
               for e in cyc2.edges}
    pairs = [(w, concat(w, (s,)), s) for w in ball for s in group2.letters
             if concat(w, (s,)) in set(ball)]
    expected = set()
    for colors in itertools.product(cyc2.vertices, repeat=len(ball)):
        cfg = dict(zip(ball, colors))
        if all((cfg[w], s, cfg[ws]) in present for (w, ws, s) in pairs):
            expected.add(tuple(sorted(cfg.items())))
    got = enumerate_window(sft, ball)
    assert len(got) == 2
    assert {tuple(sorted(c.items)) for c in got} == expected


def test_enumerate_window_is_antitone(group2, cyc2):
    sft = graphs.xg_sft(cyc2)
    # adding forbidden patterns never adds configs
    extra = Sft(group2, sft.alphabet,
                list(sft.forbidden) + [Pattern({EPSILON: "u"})], sft.window)
    small = enumerate_window(extra, group2.ball(2))
    assert set(small) <= set(enumerate_window(sft, group2.ball(2)))
    # growing the domain never adds restrictions
    ball1 = group2.ball(1)
    restrict = {WindowConfig({w: c[w] for w in ball1})
                for c in enumerate_window(sft, group2.ball(2))}
    assert restrict <= set(enumerate_window(sft, ball1))


def test_enumerate_window_order_is_deterministic(group2, cyc2):
    sft = graphs.xg_sft(cyc2)
    first = enumerate_window(sft, group2.ball(2))
    second = enumerate_window(sft, group2.ball(2))
    assert first == second
    # first config follows alphabet order at the first free slot
    assert first[0][EPSILON] == sft.alphabet.symbols[0]


def test_enumerate_window_cap(group2):
    sft = full_shift(group2, Alphabet([0, 1]))
    with pytest.raises(CapExceededError):
        enumerate_window(sft, group2.ball(2), cap=100)


def test_enumerate_window_domain_validation(group2):
    sft = full_shift(group2, Alphabet([0, 1]))
    with pytest.raises(ValueError):
        enumerate_window(sft, [(0,)])            # identity missing
    with pytest.raises(ValueError):
        enumerate_window(sft, [EPSILON, (0, 0)])  # disconnected


def test_iota_identity_window(group2):
    # F = {eps}: iota is symbol-wise unpacking of one-point patterns
    c = WindowConfig({w: Pattern({EPSILON: 0}) for w in group2.ball(1)})
    flat = iota(group2, [EPSILON], c)
    assert all(v == 0 for _, v in flat.items)


def _pattern_graph_configs(group, alphabet, F, radius):
    pg = graphs.pattern_graph(group, alphabet, F)
    sft = graphs.xg_sft(pg)
    return enumerate_window(sft, group.ball(radius))


def test_iota_j_roundtrip_small(group2):
    # F = {eps, a}: every admissible config on B_1 round-trips
    F = [EPSILON, (0,)]
    alph = Alphabet([0, 1])
    configs = _pattern_graph_configs(group2, alph, F, 1)
    ball1 = group2.ball(1)
    images = set()
    for c in configs:
        flat = iota(group2, F, c)
        assert window_j(group2, F, flat, ball1) == c
        images.add(flat.items)
    assert len(images) == len(configs)


def test_iota_j_roundtrip_radius_two(group2):
    # random flat configs on B_3 repackage to admissible pattern configs on
    # B_2 and back; too many to enumerate, so sample via the inverse map
    F = group2.ball(1)
    pg = graphs.pattern_graph(group2, Alphabet([0, 1]), F)
    sft = graphs.xg_sft(pg)
    rng = random.Random(2024)
    ball2, ball3 = group2.ball(2), group2.ball(3)
    for _ in range(25):
        flat = WindowConfig({w: rng.randrange(2) for w in ball3})
        c = window_j(group2, F, flat, ball2)
        assert is_locally_admissible(sft, c)
        assert iota(group2, F, c) == flat
        assert window_j(group2, F, iota(group2, F, c), ball2) == c


def test_iota_constant_config(group2):
    F = group2.ball(1)
    p = Pattern({w: 1 for w in F})
    c = WindowConfig({w: p for w in group2.ball(1)})
    flat = iota(group2, F, c)
    assert flat[EPSILON] == 1 and all(v == 1 for _, v in flat.items)


def test_iota_rejects_disconnected_support(group2):
    c = WindowConfig({EPSILON: Pattern({EPSILON: 0, (0, 0): 0})})
    with pytest.raises(ValueError):
        iota(group2, [EPSILON, (0, 0)], c)


def test_j_reports_missing_words(group2):
    F = [EPSILON, (0,)]
    flat = WindowConfig({w: 0 for w in group2.ball(1)})
    with pytest.raises(ValueError, match="missing"):
        window_j(group2, F, flat, group2.ball(1))


def test_disjoint_union_two_singletons(group2):
    x = full_shift(group2, Alphabet(["x"]))
    y = full_shift(group2, Alphabet(["y"]))
    u = disjoint_union(x, y)
    for k in (0, 1, 2):
        assert len(enumerate_window(u, group2.ball(k))) == 2


def test_disjoint_union_language_is_tagged_union(group2, cyc2):
    x = graphs.xg_sft(cyc2)
    y = full_shift(group2, Alphabet(["z"]))
    u = disjoint_union(x, y)
    ball = group2.ball(1)
    got = {c.items for c in enumerate_window(u, ball)}
    want = set()
    for c in enumerate_window(x, ball):
        want.add(WindowConfig({w: f"L:{v}" for w, v in c.items}).items)
    for c in enumerate_window(y, ball):
        want.add(WindowConfig({w: f"R:{v}" for w, v in c.items}).items)
    assert got == want


def test_disjoint_union_with_empty_sft(group2, cyc2):
    x = graphs.xg_sft(cyc2)
    dead = Alphabet(["d"])
    empty = Sft(group2, dead, [Pattern({EPSILON: "d"})], [EPSILON])
    u = disjoint_union(x, empty)
    ball = group2.ball(2)
    got = {c.items for c in enumerate_window(u, ball)}
    want = {WindowConfig({w: f"L:{v}" for w, v in c.items}).items
            for c in enumerate_window(x, ball)}
    assert got == want


def test_restrict_language(group2, cyc2):
    sft = graphs.xg_sft(cyc2)
    configs = enumerate_window(sft, group2.ball(3))
    # F = {eps}: both vertices occur
    lang0 = restrict_language(configs, [EPSILON])
    assert {p[EPSILON] for p in lang0} == {"u", "v"}
    # F = {eps, a}: exactly the two patterns the a-edges allow
    lang = restrict_language(configs, [EPSILON, (0,)])
    got = {(p[EPSILON], p[(0,)]) for p in lang}
    assert got == {("u", "v"), ("v", "u")}


def test_restrict_language_constant():
    group = FreeGroup(2)
    c = WindowConfig({w: 7 for w in group.ball(2)})
    lang = restrict_language([c], group.ball(1))
    assert len(lang) == 1


def test_local_admissibility_matches_enumeration(group2, cyc2):
    sft = graphs.xg_sft(cyc2)
    ball = group2.ball(1)
    admissible = set(enumerate_window(sft, ball))
    for colors in itertools.product(cyc2.vertices, repeat=len(ball)):
        c = WindowConfig(dict(zip(ball, colors)))
        assert is_locally_admissible(sft, c) == (c in admissible)


def test_sft_window_invariants(group2):
    with pytest.raises(ValueError):
        Sft(group2, Alphabet([0]), [], [(0,)])   # window without identity
    with pytest.raises(ValueError):
        Sft(group2, Alphabet([0]), [Pattern({(0,): 0})], [EPSILON])
