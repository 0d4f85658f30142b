"""Patterns, SFTs and locally admissible window enumeration.

A pattern is a finite partial coloring of the group: a map from a finite set
of reduced words to alphabet symbols.  An SFT is given by a finite forbidden
set of patterns together with a defining window.  Everything here is local:
``enumerate_window`` produces the *locally admissible* colorings of a finite
domain (no translate of a forbidden pattern fits inside it), which is all
that is decidable at finite scale.  Global admissibility is never claimed.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .words import EPSILON, FreeGroup, Word, concat, inverse, word_key


class CapExceededError(RuntimeError):
    """Raised when window enumeration would produce more configs than allowed."""


class Alphabet:
    """A finite ordered set of opaque symbols."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Sequence):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("alphabet must be nonempty")
        index = {}
        for i, s in enumerate(symbols):
            if s in index:
                raise ValueError(f"duplicate symbol {s!r}")
            index[s] = i
        self.symbols = symbols
        self._index = index

    def index(self, symbol) -> int:
        return self._index[symbol]

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({list(self.symbols)!r})"


class Pattern:
    """A finite partial coloring: words -> symbols, total on its support.

    Stored as a canonically sorted item tuple so patterns hash and compare
    by value.
    """

    __slots__ = ("items", "_map", "_hash")

    def __init__(self, values: Mapping | Iterable[tuple]):
        mapping = dict(values)
        items = tuple(sorted(mapping.items(), key=lambda kv: word_key(kv[0])))
        self.items = items
        self._map = mapping
        self._hash = hash(items)

    @property
    def support(self) -> tuple:
        return tuple(w for w, _ in self.items)

    def __getitem__(self, w: Word):
        return self._map[w]

    def get(self, w: Word, default=None):
        return self._map.get(w, default)

    def __contains__(self, w: Word) -> bool:
        return w in self._map

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.items == other.items

    def __hash__(self):
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{w}: {v!r}" for w, v in self.items)
        return f"{type(self).__name__}({{{body}}})"


class WindowConfig(Pattern):
    """A coloring of a finite window of the group (same data as a Pattern,
    read as an observed configuration rather than a constraint)."""

    @property
    def domain(self) -> tuple:
        return self.support


class WindowLanguage:
    """The set of patterns with a common support occurring in some configs.

    Keeps the source configs so that downstream constructions (graphs read
    off a window) can ask whether a larger pattern occurs in the same data.
    """

    __slots__ = ("support", "patterns", "sources")

    def __init__(self, support: Sequence[Word], patterns: Iterable[Pattern],
                 sources: Iterable[WindowConfig] = ()):
        self.support = tuple(sorted(support, key=word_key))
        self.patterns = frozenset(patterns)
        self.sources = tuple(sources)

    def sorted_patterns(self) -> tuple:
        return tuple(sorted(self.patterns, key=lambda p: tuple(repr(v) for _, v in p.items)))

    def __len__(self):
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __eq__(self, other):
        return (isinstance(other, WindowLanguage)
                and self.support == other.support
                and self.patterns == other.patterns)

    def __hash__(self):
        return hash((self.support, self.patterns))


class Sft:
    """A subshift of finite type: alphabet, forbidden patterns, defining window.

    The window may be strictly larger than the union of the forbidden
    supports; both are kept explicitly.
    """

    def __init__(self, group: FreeGroup, alphabet: Alphabet,
                 forbidden: Iterable[Pattern], window: Iterable[Word]):
        self.group = group
        self.alphabet = alphabet
        self.forbidden = frozenset(forbidden)
        self.window = frozenset(window)
        if EPSILON not in self.window:
            raise ValueError("defining window must contain the identity")
        for p in self.forbidden:
            missing = [w for w in p.support if w not in self.window]
            if missing:
                raise ValueError(
                    f"forbidden support {missing} outside the defining window")

    def __repr__(self):
        return (f"Sft(|A|={len(self.alphabet)}, forbidden={len(self.forbidden)}, "
                f"window={len(self.window)})")


def full_shift(group: FreeGroup, alphabet: Alphabet) -> Sft:
    return Sft(group, alphabet, (), (EPSILON,))


def translate_pattern(s: Word, p: Pattern) -> Pattern:
    """The translate s.p with support s*F and (s.p)(f) = p(s^-1 f)."""
    cls = type(p)
    return cls({concat(s, w): v for w, v in p.items})


def compatible(p1: Pattern, p2: Pattern) -> bool:
    """Whether two patterns agree on the intersection of their supports."""
    if len(p2) < len(p1):
        p1, p2 = p2, p1
    for w, v in p1.items:
        u = p2.get(w, v)
        if u != v:
            return False
    return True


def _placements(domain: Sequence[Word], supports: Iterable[tuple]) -> dict:
    """All ways to place each support shape inside the domain.

    Returns {support: [(g, placed_words), ...]} with g * support = placed_words.
    """
    domain_set = set(domain)
    out = {}
    for sup in supports:
        anchor = sup[0]
        anchor_inv = inverse(anchor)
        seen = set()
        spots = []
        for w in domain:
            g = concat(w, anchor_inv)
            if g in seen:
                continue
            seen.add(g)
            placed = tuple(concat(g, f) for f in sup)
            if all(x in domain_set for x in placed):
                spots.append((g, placed))
        out[sup] = spots
    return out


def enumerate_window(sft: Sft, domain: Iterable[Word],
                     cap: int = 10_000_000) -> tuple:
    """All locally admissible colorings of `domain`, in deterministic order.

    Depth-first backtracking in the canonical ball order; every forbidden
    translate is checked as soon as its support is fully colored.  Raises
    CapExceededError if more than `cap` configs would be produced.
    """
    order = sorted(set(domain), key=word_key)
    if not order or order[0] != EPSILON:
        raise ValueError("domain must contain the identity")
    group = sft.group
    if not group.is_connected(order):
        raise ValueError("domain must be connected in the Cayley graph")
    pos = {w: i for i, w in enumerate(order)}
    n = len(order)

    by_support: dict = {}
    for p in sft.forbidden:
        by_support.setdefault(p.support, []).append(p)
    spots = _placements(order, by_support.keys())

    # checks[k]: list of (index_tuple, forbidden value tuples) completed at k
    checks: list = [[] for _ in range(n)]
    grouped: dict = {}
    for sup, pats in by_support.items():
        vals = set(tuple(v for _, v in p.items) for p in pats)
        for g, placed in spots[sup]:
            idxs = tuple(pos[w] for w in placed)
            key = (max(idxs), idxs)
            grouped.setdefault(key, set()).update(vals)
    for (last, idxs), vals in sorted(grouped.items(), key=lambda kv: kv[0]):
        checks[last].append((idxs, vals))

    symbols = sft.alphabet.symbols
    out = []
    assignment = [None] * n

    def extend(k: int):
        if k == n:
            if len(out) >= cap:
                raise CapExceededError(
                    f"window enumeration cap exceeded ({cap} configs)")
            out.append(WindowConfig(zip(order, assignment)))
            return
        local = checks[k]
        for sym in symbols:
            assignment[k] = sym
            ok = True
            for idxs, vals in local:
                if tuple(assignment[i] for i in idxs) in vals:
                    ok = False
                    break
            if ok:
                extend(k + 1)
        assignment[k] = None

    extend(0)
    return tuple(out)


def is_locally_admissible(sft: Sft, config: WindowConfig) -> bool:
    """Whether no forbidden translate fits fully colored inside the config."""
    domain = config.domain
    domain_set = set(domain)
    by_support: dict = {}
    for p in sft.forbidden:
        by_support.setdefault(p.support, []).append(p)
    spots = _placements(domain, by_support.keys())
    for sup, pats in by_support.items():
        vals = set(tuple(v for _, v in p.items) for p in pats)
        for g, placed in spots[sup]:
            if tuple(config[w] for w in placed) in vals:
                return False
    return True


def iota(group: FreeGroup, F: Sequence[Word], config: WindowConfig) -> WindowConfig:
    """Flatten a config whose symbols are F-patterns into a plain config.

    The value at g*f is config(g)(f); the center rule value(g) = config(g)(eps)
    is the special case f = eps.  Overlapping placements must agree, which
    holds exactly for admissible configs of the pattern graph's SFT; a
    conflict raises ValueError.
    """
    F = sorted(set(F), key=word_key)
    if EPSILON not in F:
        raise ValueError("F must contain the identity")
    if not group.is_connected([inverse(f) for f in F]):
        raise ValueError("F^-1 must be connected in the Cayley graph")
    values: dict = {}
    for g, pat in config.items:
        if not isinstance(pat, Pattern):
            raise TypeError("iota needs a config over pattern symbols")
        for f in F:
            h = concat(g, f)
            v = pat[f]
            old = values.setdefault(h, v)
            if old != v:
                raise ValueError(
                    f"incompatible overlaps at {h}: {old!r} vs {v!r}")
    return WindowConfig(values)


def window_j(group: FreeGroup, F: Sequence[Word], config: WindowConfig,
             domain: Iterable[Word]) -> WindowConfig:
    """Repackage a plain config as a config over F-patterns on `domain`:
    the pattern at g has values f -> config(g*f).

    Inverse of `iota` where both are defined.  Raises ValueError naming the
    missing words if the config does not cover domain * F.
    """
    F = sorted(set(F), key=word_key)
    if EPSILON not in F:
        raise ValueError("F must contain the identity")
    if not group.is_connected([inverse(f) for f in F]):
        raise ValueError("F^-1 must be connected in the Cayley graph")
    domain = sorted(set(domain), key=word_key)
    missing = sorted(
        {concat(g, f) for g in domain for f in F} - set(config.domain),
        key=word_key)
    if missing:
        raise ValueError(f"config domain missing words: {missing}")
    values = {}
    for g in domain:
        values[g] = Pattern({f: config[concat(g, f)] for f in F})
    return WindowConfig(values)


def tag_symbol(tag: str, symbol) -> str:
    """Tagged copy of a symbol for disjoint unions ("L:.."/"R:..")."""
    return f"{tag}:{symbol}"


def _retag(pattern: Pattern, tag: str) -> Pattern:
    return Pattern({w: tag_symbol(tag, v) for w, v in pattern.items})


def disjoint_union(x: Sft, y: Sft) -> Sft:
    """The SFT of the disjoint union of two subshifts over tagged alphabets.

    Beyond the tagged copies of both forbidden sets, it forbids every mixed
    two-word pattern {eps, s} whose values carry different tags, which pins
    each configuration inside one of the two alphabets.
    """
    if x.group != y.group:
        raise ValueError("disjoint union needs a common group")
    group = x.group
    left = [tag_symbol("L", a) for a in x.alphabet]
    right = [tag_symbol("R", b) for b in y.alphabet]
    alphabet = Alphabet(left + right)
    forbidden = set()
    for p in x.forbidden:
        forbidden.add(_retag(p, "L"))
    for p in y.forbidden:
        forbidden.add(_retag(p, "R"))
    for s in group.letters:
        sw = (s,)
        for a in left:
            for b in right:
                forbidden.add(Pattern({EPSILON: a, sw: b}))
                forbidden.add(Pattern({EPSILON: b, sw: a}))
    window = x.window | y.window | {(s,) for s in group.letters} | {EPSILON}
    return Sft(group, alphabet, forbidden, window)


def restrict_language(configs: Iterable[WindowConfig], F: Sequence[Word],
                      group: FreeGroup | None = None) -> WindowLanguage:
    """All F-patterns occurring in the configs at any admissible position.

    A position is any g with g*F inside the config's domain; the recorded
    pattern is f -> config(g*f).
    """
    F = tuple(sorted(set(F), key=word_key))
    configs = tuple(configs)
    patterns = set()
    for config in configs:
        domain = set(config.domain)
        anchor_inv = inverse(F[0])
        seen = set()
        for w in config.domain:
            g = concat(w, anchor_inv)
            if g in seen:
                continue
            seen.add(g)
            placed = [concat(g, f) for f in F]
            if all(x in domain for x in placed):
                patterns.add(Pattern(zip(F, (config[x] for x in placed))))
    return WindowLanguage(F, patterns, configs)
