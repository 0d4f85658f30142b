"""JSON document formats for graphs, selectors, actions, windows and SFTs.

One document shape per object kind; words are letter strings ("abA", "e"
for the identity), rationals are "p/q" strings, vertices and points are
named by strings.  Parsing is strict: any malformed field raises
DocumentError naming its location.  Emitted documents re-parse to equal
in-memory values, and emitting a parsed document reproduces it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .actions import FiniteAction
from .graphs import Edge, RauzyGraph
from .measured import MeasuredRauzyGraph
from .patterns import Alphabet, Pattern, Sft, WindowConfig
from .selectors import EdgeSelector
from .words import FreeGroup, word_key


class DocumentError(ValueError):
    """A malformed document, with the offending location in the message."""


def _need(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in doc:
        raise DocumentError(f"{where}.{key}: missing")
    return doc[key]


def _group(doc: dict, where: str) -> FreeGroup:
    rank = _need(doc, "rank", where)
    if not isinstance(rank, int) or rank < 1:
        raise DocumentError(f"{where}.rank: must be a positive integer")
    return FreeGroup(rank)


def _parse_word(group: FreeGroup, s: Any, where: str):
    if not isinstance(s, str):
        raise DocumentError(f"{where}: words must be strings")
    try:
        return group.parse_word(s)
    except ValueError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def _parse_fraction(s: Any, where: str) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise DocumentError(f"{where}: rationals must be 'p/q' strings")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"{where}: {exc}") from None
    return value


def format_fraction(x) -> str:
    return str(Fraction(x))


# -- graphs

def graph_to_doc(g: RauzyGraph, mg: MeasuredRauzyGraph | None = None) -> dict:
    names = [str(v) for v in g.vertices]
    if len(set(names)) != len(names):
        raise ValueError("vertex labels do not stringify uniquely")
    doc = {
        "rank": g.group.rank,
        "vertices": names,
        "edges": [
            {
                "source": names[e.source],
                "range": names[e.target],
                "label": g.group.format_letter(e.label),
                "bar": e.bar,
            }
            for e in g.edges
        ],
    }
    if mg is not None:
        doc["mu"] = {names[v]: format_fraction(mg.mu[v])
                     for v in range(len(names))}
        doc["m"] = [format_fraction(x) for x in mg.m]
    return doc


def measured_to_doc(mg: MeasuredRauzyGraph) -> dict:
    return graph_to_doc(mg.graph, mg)


def graph_from_doc(doc: dict) -> RauzyGraph | MeasuredRauzyGraph:
    """Parse a graph document; returns a MeasuredRauzyGraph when the
    document carries weights, else a bare RauzyGraph."""
    group = _group(doc, "graph")
    vertices = _need(doc, "vertices", "graph")
    if (not isinstance(vertices, list)
            or not all(isinstance(v, str) for v in vertices)):
        raise DocumentError("graph.vertices: must be a list of names")
    if len(set(vertices)) != len(vertices):
        raise DocumentError("graph.vertices: duplicate names")
    vid = {v: i for i, v in enumerate(vertices)}
    edges_doc = _need(doc, "edges", "graph")
    if not isinstance(edges_doc, list):
        raise DocumentError("graph.edges: must be a list")
    edges = []
    for i, ed in enumerate(edges_doc):
        where = f"graph.edges[{i}]"
        src = _need(ed, "source", where)
        rng = _need(ed, "range", where)
        lab = _need(ed, "label", where)
        bar = _need(ed, "bar", where)
        if src not in vid:
            raise DocumentError(f"{where}.source: unknown vertex {src!r}")
        if rng not in vid:
            raise DocumentError(f"{where}.range: unknown vertex {rng!r}")
        if not isinstance(lab, str) or len(lab) != 1:
            raise DocumentError(f"{where}.label: must be a single letter")
        try:
            letter = group.parse_letter(lab)
        except ValueError as exc:
            raise DocumentError(f"{where}.label: {exc}") from None
        if not isinstance(bar, int) or not 0 <= bar < len(edges_doc):
            raise DocumentError(f"{where}.bar: must index an edge")
        edges.append(Edge(vid[src], vid[rng], letter, bar))
    try:
        graph = RauzyGraph(group, vertices, edges)
    except ValueError as exc:
        raise DocumentError(f"graph: {exc}") from None
    if "mu" not in doc and "m" not in doc:
        return graph
    mu_doc = _need(doc, "mu", "graph")
    m_doc = _need(doc, "m", "graph")
    if not isinstance(mu_doc, dict):
        raise DocumentError("graph.mu: must map vertex names to rationals")
    if not isinstance(m_doc, list) or len(m_doc) != len(edges):
        raise DocumentError("graph.m: must list one rational per edge")
    mu = []
    for v in vertices:
        if v not in mu_doc:
            raise DocumentError(f"graph.mu.{v}: missing")
        mu.append(_parse_fraction(mu_doc[v], f"graph.mu.{v}"))
    m = [_parse_fraction(x, f"graph.m[{i}]") for i, x in enumerate(m_doc)]
    try:
        return MeasuredRauzyGraph(graph, tuple(mu), tuple(m))
    except ValueError as exc:
        raise DocumentError(f"graph: {exc}") from None


# -- selectors

def selector_to_doc(sel: EdgeSelector, cycle=None) -> dict:
    g = sel.graph
    fmt = g.group.format_letter
    doc = {
        "graph": graph_to_doc(g),
        "v0": str(g.vertices[sel.v0]),
        "t0": {fmt(s): sel.t0[s] for s in g.group.letters},
        "t1": [{fmt(s): row[s] for s in g.group.letters} for row in sel.t1],
    }
    if cycle is not None:
        doc["cycle"] = list(cycle)
    return doc


def selector_from_doc(doc: dict) -> tuple[EdgeSelector, tuple | None]:
    graph = graph_from_doc(_need(doc, "graph", "selector"))
    if isinstance(graph, MeasuredRauzyGraph):
        graph = graph.graph
    group = graph.group
    v0_name = _need(doc, "v0", "selector")
    if v0_name not in graph.vertices:
        raise DocumentError(f"selector.v0: unknown vertex {v0_name!r}")
    v0 = graph.vertices.index(v0_name)
    t0_doc = _need(doc, "t0", "selector")
    t1_doc = _need(doc, "t1", "selector")
    if not isinstance(t1_doc, list) or len(t1_doc) != len(graph.edges):
        raise DocumentError("selector.t1: must list one row per edge")

    def edge_ref(x, where):
        if not isinstance(x, int) or not 0 <= x < len(graph.edges):
            raise DocumentError(f"{where}: must index an edge")
        return x

    t0 = []
    for s in group.letters:
        c = group.format_letter(s)
        if not isinstance(t0_doc, dict) or c not in t0_doc:
            raise DocumentError(f"selector.t0.{c}: missing")
        t0.append(edge_ref(t0_doc[c], f"selector.t0.{c}"))
    t1 = []
    for i, row in enumerate(t1_doc):
        out = []
        for s in group.letters:
            c = group.format_letter(s)
            if not isinstance(row, dict) or c not in row:
                raise DocumentError(f"selector.t1[{i}].{c}: missing")
            out.append(edge_ref(row[c], f"selector.t1[{i}].{c}"))
        t1.append(tuple(out))
    try:
        sel = EdgeSelector(graph, v0, tuple(t0), tuple(t1))
    except ValueError as exc:
        raise DocumentError(f"selector: {exc}") from None
    cycle = None
    if "cycle" in doc:
        cyc = doc["cycle"]
        if (not isinstance(cyc, list)
                or not all(isinstance(e, int) and 0 <= e < len(graph.edges)
                           for e in cyc)):
            raise DocumentError("selector.cycle: must list edge indices")
        cycle = tuple(cyc)
    return sel, cycle


# -- actions

def point_name(p) -> str:
    if isinstance(p, tuple):
        return ".".join(point_name(x) for x in p)
    return str(p)


def action_to_doc(act: FiniteAction) -> dict:
    names = [point_name(p) for p in act.points]
    if len(set(names)) != len(names):
        raise ValueError("point labels do not stringify uniquely")
    return {
        "rank": act.group.rank,
        "points": names,
        "perms": {
            act.group.format_letter(2 * i): list(act.walks[i])
            for i in range(act.group.rank)
        },
    }


def action_from_doc(doc: dict) -> FiniteAction:
    group = _group(doc, "action")
    points = _need(doc, "points", "action")
    if (not isinstance(points, list)
            or not all(isinstance(p, str) for p in points)):
        raise DocumentError("action.points: must be a list of names")
    perms_doc = _need(doc, "perms", "action")
    walks = []
    for i in range(group.rank):
        c = group.format_letter(2 * i)
        if not isinstance(perms_doc, dict) or c not in perms_doc:
            raise DocumentError(f"action.perms.{c}: missing")
        w = perms_doc[c]
        if (not isinstance(w, list) or len(w) != len(points)
                or not all(isinstance(x, int) and 0 <= x < len(points)
                           for x in w)):
            raise DocumentError(
                f"action.perms.{c}: must be a permutation as an index list")
        walks.append(w)
    try:
        return FiniteAction(group, points, walks)
    except ValueError as exc:
        raise DocumentError(f"action: {exc}") from None


# -- windows, patterns, SFTs

def _symbol_to_json(v, where: str):
    if isinstance(v, (str, int)):
        return v
    raise DocumentError(f"{where}: symbol {v!r} is not serializable")


def window_to_doc(group: FreeGroup, config: WindowConfig,
                  alphabet: Alphabet | None = None) -> dict:
    doc = {
        "rank": group.rank,
        "values": {group.format_word(w): _symbol_to_json(v, "window")
                   for w, v in config.items},
    }
    if alphabet is not None:
        doc["alphabet"] = [_symbol_to_json(a, "window.alphabet")
                           for a in alphabet]
    return doc


def window_from_doc(doc: dict) -> tuple[FreeGroup, WindowConfig]:
    group = _group(doc, "window")
    values = _need(doc, "values", "window")
    if not isinstance(values, dict):
        raise DocumentError("window.values: must map words to symbols")
    out = {}
    for k, v in values.items():
        w = _parse_word(group, k, f"window.values.{k}")
        if w in out:
            raise DocumentError(f"window.values.{k}: duplicate word")
        out[w] = v
    return group, WindowConfig(out)


def pattern_to_doc(group: FreeGroup, p: Pattern) -> dict:
    return {"values": {group.format_word(w): _symbol_to_json(v, "pattern")
                       for w, v in p.items}}


def pattern_from_doc(group: FreeGroup, doc: dict) -> Pattern:
    values = _need(doc, "values", "pattern")
    if not isinstance(values, dict):
        raise DocumentError("pattern.values: must map words to symbols")
    out = {}
    for k, v in values.items():
        w = _parse_word(group, k, f"pattern.values.{k}")
        if w in out:
            raise DocumentError(f"pattern.values.{k}: duplicate word")
        out[w] = v
    return Pattern(out)


def sft_to_doc(sft: Sft) -> dict:
    group = sft.group
    return {
        "rank": group.rank,
        "alphabet": [_symbol_to_json(a, "sft.alphabet")
                     for a in sft.alphabet],
        "window": [group.format_word(w)
                   for w in sorted(sft.window, key=word_key)],
        "forbidden": [
            pattern_to_doc(group, p)["values"]
            for p in sorted(sft.forbidden, key=lambda p: tuple(
                (word_key(w), repr(v)) for w, v in p.items))
        ],
    }


def sft_from_doc(doc: dict) -> Sft:
    group = _group(doc, "sft")
    alphabet_doc = _need(doc, "alphabet", "sft")
    if not isinstance(alphabet_doc, list) or not alphabet_doc:
        raise DocumentError("sft.alphabet: must be a nonempty list")
    window_doc = _need(doc, "window", "sft")
    if not isinstance(window_doc, list):
        raise DocumentError("sft.window: must be a list of words")
    window = [_parse_word(group, w, f"sft.window[{i}]")
              for i, w in enumerate(window_doc)]
    forbidden_doc = _need(doc, "forbidden", "sft")
    if not isinstance(forbidden_doc, list):
        raise DocumentError("sft.forbidden: must be a list of patterns")
    forbidden = [pattern_from_doc(group, {"values": v})
                 for v in forbidden_doc]
    try:
        return Sft(group, Alphabet(alphabet_doc), forbidden, window)
    except ValueError as exc:
        raise DocumentError(f"sft: {exc}") from None


# -- DOT export (one arrow per bar pair, positively labeled representative)

def graph_to_dot(g: RauzyGraph) -> str:
    lines = ["digraph rauzy {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for e in g.edges:
        if e.label & 1:
            continue  # draw the positive representative of each bar pair
        lines.append(
            f'  "{g.vertices[e.source]}" -> "{g.vertices[e.target]}" '
            f'[label="{g.group.format_letter(e.label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def action_to_dot(act: FiniteAction) -> str:
    lines = ["digraph action {"]
    for p in act.points:
        lines.append(f'  "{point_name(p)}";')
    for i, w in enumerate(act.walks):
        c = act.group.format_letter(2 * i)
        for p in range(len(act.points)):
            lines.append(
                f'  "{point_name(act.points[p])}" -> '
                f'"{point_name(act.points[w[p]])}" [label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
