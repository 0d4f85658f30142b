"""Rauzy graphs: labeled multigraphs with an edge-reversing involution.

A Rauzy graph must satisfy four axioms: the involution reverses source and
range, it inverts labels, (source, range, label) is injective, and every
(vertex, letter) has an outgoing edge.  A deterministic Rauzy graph is a
Schreier graph: one outgoing edge per (vertex, letter).

Minimality (every ordered edge pair is joined by a reduced path, up to
reversing the final edge) is decided by reachability in the edge-transition
automaton: states are edges, and e -> e' is allowed iff range(e) = source(e')
and label(e') is not the inverse of label(e).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Hashable, Iterable, Sequence

from .patterns import (
    Alphabet,
    Pattern,
    Sft,
    WindowLanguage,
    compatible,
    translate_pattern,
)
from .words import EPSILON, FreeGroup, Letter, Word, concat, inverse_letter


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    label: Letter
    bar: int


class RauzyGraph:
    """A candidate Rauzy graph.  Construction only checks structural sanity
    (indices in range); the Rauzy axioms are checked by `validate`."""

    def __init__(self, group: FreeGroup, vertices: Sequence[Hashable],
                 edges: Sequence[Edge]):
        self.group = group
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        n, m = len(self.vertices), len(self.edges)
        if len(set(self.vertices)) != n:
            raise ValueError("duplicate vertex labels")
        for i, e in enumerate(self.edges):
            if not (0 <= e.source < n and 0 <= e.target < n):
                raise ValueError(f"edge {i}: vertex index out of range")
            if e.label not in group.letters:
                raise ValueError(f"edge {i}: letter {e.label} out of range")
            if not 0 <= e.bar < m:
                raise ValueError(f"edge {i}: bar index out of range")
        self._out = None
        self._triples = None

    @classmethod
    def from_triples(cls, group: FreeGroup, vertices: Sequence[Hashable],
                     triples: Iterable[tuple]) -> "RauzyGraph":
        """Build a graph from (source_label, letter, target_label) triples.

        The reversed triple of each edge is added automatically and the edge
        list is sorted canonically, so the bar involution always exists.
        """
        vertices = tuple(vertices)
        vid = {v: i for i, v in enumerate(vertices)}
        tset = set()
        for (a, s, b) in triples:
            tset.add((vid[a], s, vid[b]))
            tset.add((vid[b], inverse_letter(s), vid[a]))
        ordered = sorted(tset)
        index = {t: i for i, t in enumerate(ordered)}
        edges = [
            Edge(v, w, s, index[(w, inverse_letter(s), v)])
            for (v, s, w) in ordered
        ]
        return cls(group, vertices, edges)

    @classmethod
    def from_relations(cls, group: FreeGroup, n_vertices: int,
                       relations: Sequence[Iterable[tuple]]) -> "RauzyGraph":
        """Build a graph on vertices 0..n-1 from one directed pair relation
        per positive generator: (v, w) in relations[i] gives an edge labeled
        generator i from v to w (and its reverse)."""
        if len(relations) != group.rank:
            raise ValueError("need one relation per positive generator")
        triples = []
        for i, rel in enumerate(relations):
            for (v, w) in rel:
                triples.append((v, 2 * i, w))
        return cls.from_triples(group, range(n_vertices), triples)

    # -- indexes

    def out_edges(self, v: int, s: Letter | None = None) -> tuple:
        if self._out is None:
            out = {}
            for i, e in enumerate(self.edges):
                out.setdefault((e.source, e.label), []).append(i)
                out.setdefault(e.source, []).append(i)
            self._out = {k: tuple(v) for k, v in out.items()}
        key = v if s is None else (v, s)
        return self._out.get(key, ())

    def edge_id(self, source: int, target: int, label: Letter) -> int | None:
        if self._triples is None:
            self._triples = {
                (e.source, e.target, e.label): i for i, e in enumerate(self.edges)
            }
        return self._triples.get((source, target, label))

    def vertex_id(self, label: Hashable) -> int:
        return self.vertices.index(label)

    def __repr__(self):
        return (f"RauzyGraph(d={self.group.rank}, |V|={len(self.vertices)}, "
                f"|E|={len(self.edges)})")

    def __eq__(self, other):
        return (isinstance(other, RauzyGraph)
                and self.group == other.group
                and self.vertices == other.vertices
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.group, self.vertices, self.edges))


def validate(g: RauzyGraph) -> list[str]:
    """Check the four Rauzy axioms; returns a list of violations (empty = ok)."""
    violations = []
    for i, e in enumerate(g.edges):
        eb = g.edges[e.bar]
        if eb.bar != i:
            violations.append(f"bar is not an involution at edge {i}")
        if eb.source != e.target or eb.target != e.source:
            violations.append(f"bar of edge {i} does not reverse it")
        if eb.label != inverse_letter(e.label):
            violations.append(f"bar of edge {i} does not invert its label")
    triples = [(e.source, e.target, e.label) for e in g.edges]
    if len(set(triples)) != len(triples):
        seen = set()
        for i, t in enumerate(triples):
            if t in seen:
                violations.append(
                    f"(source, range, label) not injective: edge {i} duplicates {t}")
            seen.add(t)
    for v in range(len(g.vertices)):
        for s in g.group.letters:
            if not g.out_edges(v, s):
                violations.append(
                    f"no outgoing edge at vertex {g.vertices[v]!r} "
                    f"labeled {g.group.format_letter(s)}")
    return violations


def require_valid(g: RauzyGraph) -> None:
    violations = validate(g)
    if violations:
        raise ValueError("invalid Rauzy graph: " + "; ".join(violations))


def is_deterministic(g: RauzyGraph) -> bool:
    """Whether (source, label) is injective on edges."""
    seen = set()
    for e in g.edges:
        key = (e.source, e.label)
        if key in seen:
            return False
        seen.add(key)
    return True


def edge_transitions(g: RauzyGraph) -> list[list[int]]:
    """Adjacency of the edge automaton: e -> e' iff the two-edge path (e, e')
    is reduced."""
    adj = []
    for e in g.edges:
        bad = inverse_letter(e.label)
        adj.append([i for i in g.out_edges(e.target) if g.edges[i].label != bad])
    return adj


def edge_reach(g: RauzyGraph) -> list[set]:
    """reach[e] = edges reachable from e in the edge automaton, e included
    (an f in reach[e] means some reduced path starts with e and ends with f)."""
    adj = edge_transitions(g)
    out = []
    for start in range(len(g.edges)):
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append(seen)
    return out


def is_minimal(g: RauzyGraph) -> tuple[bool, tuple[int, int] | None]:
    """Whether every ordered edge pair (e, f) is joined by a reduced path
    from e to f or to bar(f).  On failure returns the first unreachable pair."""
    reach = edge_reach(g)
    for e in range(len(g.edges)):
        r = reach[e]
        for f in range(len(g.edges)):
            if f not in r and g.edges[f].bar not in r:
                return False, (e, f)
    return True, None


def check_conditions(g: RauzyGraph) -> tuple[bool, bool, bool]:
    """The three reduced-path connectivity conditions, strongest last:

    (1) every ordered vertex pair is joined by a reduced path;
    (2) the graph is minimal (edge to edge up to reversing the final edge);
    (3) every ordered edge pair is joined by a reduced path, exactly.

    (3) implies (2) implies (1) for rank >= 2.
    """
    reach = edge_reach(g)
    m = len(g.edges)
    c3 = all(f in reach[e] for e in range(m) for f in range(m))
    c2 = all(f in reach[e] or g.edges[f].bar in reach[e]
             for e in range(m) for f in range(m))
    n = len(g.vertices)
    targets = [set(g.edges[f].target for f in reach[e]) for e in range(m)]
    c1 = True
    for v in range(n):
        reachable = set()
        for e in g.out_edges(v):
            reachable |= targets[e]
        if len(reachable) != n:
            c1 = False
            break
    return c1, c2, c3


def xg_sft(g: RauzyGraph) -> Sft:
    """The SFT X(G) over the vertex alphabet: configurations are morphisms
    from the Cayley graph, cut out by forbidding every two-word pattern
    {eps -> v1, s -> v2} with no edge v1 -s-> v2."""
    require_valid(g)
    group = g.group
    alphabet = Alphabet(g.vertices)
    present = {(e.source, e.target, e.label) for e in g.edges}
    forbidden = []
    n = len(g.vertices)
    for s in group.letters:
        sw = (s,)
        for v1 in range(n):
            for v2 in range(n):
                if (v1, v2, s) not in present:
                    forbidden.append(Pattern({
                        EPSILON: g.vertices[v1], sw: g.vertices[v2]}))
    window = {EPSILON} | {(s,) for s in group.letters}
    return Sft(group, alphabet, forbidden, window)


def pattern_graph(group: FreeGroup, alphabet: Alphabet,
                  F: Sequence[Word]) -> RauzyGraph:
    """The Rauzy graph on all F-patterns: p1 -s-> p2 iff p1 and s.p2 are
    compatible."""
    from .words import word_key

    F = tuple(sorted(set(F), key=word_key))
    if EPSILON not in F:
        raise ValueError("F must contain the identity")
    pats = [Pattern(zip(F, vals))
            for vals in product(alphabet.symbols, repeat=len(F))]
    triples = []
    for s in group.letters:
        sw = (s,)
        shifted = [(q, translate_pattern(sw, q)) for q in pats]
        for p1 in pats:
            for q, sq in shifted:
                if compatible(p1, sq):
                    triples.append((p1, s, q))
    return RauzyGraph.from_triples(group, pats, triples)


def graph_of_window(group: FreeGroup, lang: WindowLanguage,
                    F: Sequence[Word]) -> RauzyGraph:
    """The Rauzy graph read off a window language with support F: vertices
    are the occurring F-patterns, with an edge p1 -s-> p2 whenever the union
    p1 cup s.p2 occurs in the language's source configs.

    Raises ValueError if the window data is too small to give every
    (vertex, letter) an outgoing edge.
    """
    from .words import inverse, word_key

    F = tuple(sorted(set(F), key=word_key))
    if EPSILON not in F:
        raise ValueError("F must contain the identity")
    if tuple(lang.support) != F:
        raise ValueError("language support differs from F")
    if not lang.patterns:
        raise ValueError("empty window language")
    if not lang.sources:
        raise ValueError("language carries no source configs")
    vertices = lang.sorted_patterns()

    triples = set()
    for config in lang.sources:
        domain = set(config.domain)
        positions = {concat(w, inverse(f)) for w in config.domain for f in F}
        for g0 in positions:
            base = [concat(g0, f) for f in F]
            if not all(x in domain for x in base):
                continue
            p1 = Pattern(zip(F, (config[x] for x in base)))
            for s in group.letters:
                gs = concat(g0, (s,))
                shifted = [concat(gs, f) for f in F]
                if not all(x in domain for x in shifted):
                    continue
                p2 = Pattern(zip(F, (config[x] for x in shifted)))
                triples.add((p1, s, p2))
    graph = RauzyGraph.from_triples(group, vertices, triples)
    for v in range(len(vertices)):
        for s in group.letters:
            if not graph.out_edges(v, s):
                raise ValueError(
                    "window data insufficient: no outgoing "
                    f"{group.format_letter(s)}-edge at pattern {vertices[v]!r}")
    return graph


def is_graph_morphism(g1: RauzyGraph, g2: RauzyGraph, vertex_map: dict) -> bool:
    """Whether the vertex map (label -> label) preserves labeled edges."""
    for e in g1.edges:
        a = vertex_map[g1.vertices[e.source]]
        b = vertex_map[g1.vertices[e.target]]
        if g2.edge_id(g2.vertex_id(a), g2.vertex_id(b), e.label) is None:
            return False
    return True


def morphism_edge_map(g1: RauzyGraph, g2: RauzyGraph,
                      vertex_map: dict) -> tuple:
    """The edge map induced by a graph morphism: each edge goes to the
    unique target edge with the mapped endpoints and the same label
    (unique because (source, range, label) is injective)."""
    out = []
    for i, e in enumerate(g1.edges):
        a = vertex_map[g1.vertices[e.source]]
        b = vertex_map[g1.vertices[e.target]]
        f = g2.edge_id(g2.vertex_id(a), g2.vertex_id(b), e.label)
        if f is None:
            raise ValueError(f"not a morphism: edge {i} has no image")
        out.append(f)
    return tuple(out)


def canonical_form(g: RauzyGraph) -> tuple:
    """Lexicographically minimal edge encoding over vertex renamings.

    Intended for small graphs (<= 8 vertices); used to compare graphs up to
    renaming.
    """
    n = len(g.vertices)
    if n > 8:
        raise ValueError("canonical form only supported for <= 8 vertices")
    triples = [(e.source, e.target, e.label) for e in g.edges]
    best = None
    for perm in permutations(range(n)):
        enc = tuple(sorted((perm[a], perm[b], s) for (a, b, s) in triples))
        if best is None or enc < best:
            best = enc
    return (n, best)


def isomorphic(g1: RauzyGraph, g2: RauzyGraph) -> bool:
    return (g1.group == g2.group
            and canonical_form(g1) == canonical_form(g2))


# -- fixtures used across the package and its tests

def rose(group: FreeGroup) -> RauzyGraph:
    """One vertex with a loop for every letter."""
    return RauzyGraph.from_triples(
        group, ["v"], [("v", 2 * i, "v") for i in range(group.rank)])


def two_cycle(group: FreeGroup) -> RauzyGraph:
    """Two vertices u, v with a-edges u -> v -> u and b-loops at both."""
    if group.rank < 2:
        raise ValueError("two_cycle needs rank >= 2")
    triples = [("u", 0, "v"), ("v", 0, "u")]
    for i in range(1, group.rank):
        triples += [("u", 2 * i, "u"), ("v", 2 * i, "v")]
    return RauzyGraph.from_triples(group, ["u", "v"], triples)


def three_star(group: FreeGroup) -> RauzyGraph:
    """Vertices u, v, w with a-edges u -> v, u -> w, v -> u, w -> u and
    b-loops everywhere."""
    if group.rank < 2:
        raise ValueError("three_star needs rank >= 2")
    triples = [("u", 0, "v"), ("u", 0, "w"), ("v", 0, "u"), ("w", 0, "u")]
    for i in range(1, group.rank):
        triples += [(x, 2 * i, x) for x in ("u", "v", "w")]
    return RauzyGraph.from_triples(group, ["u", "v", "w"], triples)


def letter_flow_graph(group: FreeGroup, with_backtrack_pair: bool = False) -> RauzyGraph:
    """A graph separating the reduced-path connectivity conditions.

    One vertex per letter, a loop pair at each, and a forward edge
    v_mu -t-> v_t for every t outside {mu, mu^-1}: every edge whose label
    matches its target's letter points "with the flow", and the flow-aligned
    edges form a transition-closed half of the edge set.  The plain graph is
    minimal but some exact edge pair is not joined by a reduced path
    (condition (2) without (3)).  With the extra backtrack pair
    v_a -a^-1-> v_{a^-1} both sides avoid that pair entirely, so minimality
    fails while vertex-to-vertex connectivity survives ((1) without (2)).

    Exhaustive search shows no graph on <= 3 vertices separates the
    conditions for rank 2; these 2d-vertex graphs are minimal witnesses.
    """
    if group.rank < 2:
        raise ValueError("letter_flow_graph needs rank >= 2")
    letters = list(group.letters)
    names = [group.format_letter(t) for t in letters]
    triples = [(names[t], t, names[t]) for t in letters]
    for mu in letters:
        for t in letters:
            if t != mu and t != (mu ^ 1):
                triples.append((names[mu], t, names[t]))
    if with_backtrack_pair:
        triples.append((names[0], 1, names[1]))
    return RauzyGraph.from_triples(group, names, triples)


# -- exhaustive search for the condition separations

def _total_relations(n: int):
    """All directed pair relations on n vertices with every row and column
    nonempty (= all valid single-generator edge sets)."""
    cells = [(v, w) for v in range(n) for w in range(n)]
    for mask in range(1, 1 << len(cells)):
        rel = [cells[i] for i in range(len(cells)) if mask >> i & 1]
        rows = {v for v, _ in rel}
        cols = {w for _, w in rel}
        if len(rows) == n and len(cols) == n:
            yield tuple(rel)


def all_valid_graphs(group: FreeGroup, n_vertices: int):
    """Every valid Rauzy graph on exactly n_vertices vertices (up to the
    canonical vertex naming 0..n-1), enumerated deterministically."""
    rels = list(_total_relations(n_vertices))
    for combo in product(rels, repeat=group.rank):
        yield RauzyGraph.from_relations(group, n_vertices, combo)


def find_condition_witnesses(group: FreeGroup, max_vertices: int) -> dict:
    """Search all valid graphs on <= max_vertices vertices for separations of
    the three connectivity conditions.  Returns a dict with keys
    "c1_not_c2" and "c2_not_c3" (value None if no witness exists)."""
    witnesses = {"c1_not_c2": None, "c2_not_c3": None}
    for n in range(1, max_vertices + 1):
        for g in all_valid_graphs(group, n):
            c1, c2, c3 = check_conditions(g)
            if c1 and not c2 and witnesses["c1_not_c2"] is None:
                witnesses["c1_not_c2"] = g
            if c2 and not c3 and witnesses["c2_not_c3"] is None:
                witnesses["c2_not_c3"] = g
            if all(v is not None for v in witnesses.values()):
                return witnesses
    return witnesses
