"""Pointed matched circles and their one-moving-strand algebras.

The algebra is modelled uniformly as chords on the cut circle: the basis is the
idempotents (one per matched pair) together with every chord ``(a, b)`` with
``a < b``.  Two chords multiply only when they concatenate end to start.
Elements are interned per circle, so equality is identity and the full
multiplication table is precomputed.
"""
from __future__ import annotations

import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import MixedCircles, NotAPartition, SurgeryDisconnected, UnknownElement

Pair = Tuple[int, int]


class AlgebraElement:
    """A basis element of B(Z): an idempotent or a chord."""

    __slots__ = ("circle", "index", "is_idempotent", "start", "end", "pair", "left", "right")

    def __init__(self, circle, index, is_idempotent, start, end, pair):
        self.circle = circle
        self.index = index
        self.is_idempotent = is_idempotent
        self.start = start
        self.end = end
        self.pair = pair
        self.left: AlgebraElement = self
        self.right: AlgebraElement = self

    @property
    def is_chord(self) -> bool:
        return not self.is_idempotent

    def token(self) -> str:
        return self.circle.token(self)

    def __repr__(self) -> str:
        return "<%s %s>" % (self.circle.name, self.token())

    def __lt__(self, other: "AlgebraElement") -> bool:
        return self.index < other.index

    def __reduce__(self):
        return (_lookup_element, (self.circle, self.index))

    def __mul__(self, other: "AlgebraElement") -> Optional["AlgebraElement"]:
        return multiply(self, other)


def _lookup_element(circle, index):
    return circle.elements[index]


def _surgery_components(num_points: int, matching: Sequence[Pair]) -> int:
    # Ends p- (arriving) and p+ (leaving) of each point; arcs join p+ to (p+1)-
    # around the circle, and surgery on a pair (a, b) joins a- to b+ and b- to a+.
    parent = list(range(2 * num_points))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    minus = lambda p: 2 * p
    plus = lambda p: 2 * p + 1
    for p in range(num_points):
        union(plus(p), minus((p + 1) % num_points))
    for a, b in matching:
        union(minus(a), plus(b))
        union(minus(b), plus(a))
    return len({find(i) for i in range(2 * num_points)})


class PointedMatchedCircle:
    """A validated pointed matched circle together with its algebra basis."""

    def __init__(self, num_points: int, matching: Iterable[Pair], name: str, shorthand: bool = False):
        pairs = sorted(tuple(sorted(p)) for p in matching)
        if num_points <= 0 or num_points % 2:
            raise NotAPartition("number of points must be positive and even, got %d" % num_points)
        seen = [q for p in pairs for q in p]
        if sorted(seen) != list(range(num_points)) or any(len(set(p)) != 2 for p in pairs):
            raise NotAPartition("matching %s is not a partition of 0..%d into pairs" % (pairs, num_points - 1))
        comps = _surgery_components(num_points, pairs)
        if comps != 1:
            raise SurgeryDisconnected(
                "surgery on matching %s yields %d circles, expected 1" % (pairs, comps))
        self.num_points = num_points
        self.matching: Tuple[Pair, ...] = tuple(pairs)
        self.name = name
        self.shorthand = shorthand and num_points <= 10
        self.genus = num_points // 4
        self.pair_of = {}
        for k, (a, b) in enumerate(pairs):
            self.pair_of[a] = k
            self.pair_of[b] = k
        self._build()

    def _build(self) -> None:
        elems: List[AlgebraElement] = []
        for k, pair in enumerate(self.matching):
            elems.append(AlgebraElement(self, k, True, None, None, k))
        chord_at: Dict[Pair, AlgebraElement] = {}
        for a in range(self.num_points):
            for b in range(a + 1, self.num_points):
                e = AlgebraElement(self, len(elems), False, a, b, None)
                elems.append(e)
                chord_at[(a, b)] = e
        self.idempotents: Tuple[AlgebraElement, ...] = tuple(elems[: len(self.matching)])
        for e in elems[len(self.matching):]:
            e.left = self.idempotents[self.pair_of[e.start]]
            e.right = self.idempotents[self.pair_of[e.end]]
        self.elements: Tuple[AlgebraElement, ...] = tuple(elems)
        self.chords: Tuple[AlgebraElement, ...] = tuple(elems[len(self.matching):])
        self._chord_at = chord_at
        n = len(elems)
        table: List[List[Optional[AlgebraElement]]] = [[None] * n for _ in range(n)]
        for x in elems:
            for y in elems:
                table[x.index][y.index] = self._product(x, y)
        self.table = table

    def _product(self, x: AlgebraElement, y: AlgebraElement) -> Optional[AlgebraElement]:
        if x.is_idempotent:
            return y if y.left is x else None
        if y.is_idempotent:
            return x if x.right is y else None
        if x.end == y.start:
            return self._chord_at[(x.start, y.end)]
        return None

    # lookup and names

    def chord(self, a: int, b: int) -> AlgebraElement:
        try:
            return self._chord_at[(a, b)]
        except KeyError:
            raise UnknownElement("no chord [%d,%d] on circle %s" % (a, b, self.name)) from None

    def idempotent(self, k: int) -> AlgebraElement:
        if not 0 <= k < len(self.idempotents):
            raise UnknownElement("no idempotent i%d on circle %s" % (k, self.name))
        return self.idempotents[k]

    def idempotent_for_pair(self, pair: Pair) -> AlgebraElement:
        pair = tuple(sorted(pair))
        if pair not in self.matching:
            raise UnknownElement("%s is not a matched pair of %s" % (pair, self.name))
        return self.idempotents[self.matching.index(pair)]

    def rho(self, digits: str) -> AlgebraElement:
        """Shorthand chord: ``rho("23")`` is Chord(1, 3)."""
        ds = [int(c) for c in digits]
        if not ds or any(ds[i + 1] != ds[i] + 1 for i in range(len(ds) - 1)):
            raise UnknownElement("r%s is not a run of consecutive digits" % digits)
        return self.chord(ds[0] - 1, ds[-1])

    def token(self, e: AlgebraElement) -> str:
        if e.is_idempotent:
            return "i%d" % e.pair
        if self.shorthand:
            return "r" + "".join(str(k) for k in range(e.start + 1, e.end + 1))
        return "[%d,%d]" % (e.start, e.end)

    def parse_element(self, tok: str) -> AlgebraElement:
        tok = tok.strip()
        m = re.fullmatch(r"i(\d+)", tok)
        if m:
            return self.idempotent(int(m[1]))
        m = re.fullmatch(r"r(\d+)", tok)
        if m:
            return self.rho(m[1])
        m = re.fullmatch(r"\[\s*(\d+)\s*,\s*(\d+)\s*\]", tok)
        if m:
            return self.chord(int(m[1]), int(m[2]))
        m = re.fullmatch(r"\|\(\s*(\d+)\s*(?:->|→)\s*(\d+)\s*\)\|", tok)
        if m:
            return self.chord(int(m[1]), int(m[2]))
        m = re.fullmatch(r"\|\(\s*(\d+)\s*,\s*(\d+)\s*\)\|", tok)
        if m:
            return self.idempotent_for_pair((int(m[1]), int(m[2])))
        raise UnknownElement("cannot read algebra element %r on circle %s" % (tok, self.name))

    def describe(self) -> str:
        return "circle %s points %d pairs %s" % (
            self.name, self.num_points, " ".join("(%d,%d)" % p for p in self.matching))

    def __repr__(self) -> str:
        return "PointedMatchedCircle(%s, %s)" % (self.name, self.matching)

    def __reduce__(self):
        return (_registered_circle, (self.num_points, self.matching, self.name, self.shorthand))


_CIRCLE_CACHE: Dict[tuple, PointedMatchedCircle] = {}


def _registered_circle(num_points, matching, name, shorthand=False):
    key = (num_points, tuple(matching), name)
    if key not in _CIRCLE_CACHE:
        _CIRCLE_CACHE[key] = PointedMatchedCircle(num_points, matching, name, shorthand)
    return _CIRCLE_CACHE[key]


def build_circle(points: int, matching: Iterable[Pair], name: str) -> PointedMatchedCircle:
    """Validate a matching and return the (interned) circle."""
    matching = tuple(sorted(tuple(sorted(p)) for p in matching))
    return _registered_circle(points, matching, name, name in ("Z1", "Z2"))


def basis(circle: PointedMatchedCircle) -> Tuple[AlgebraElement, ...]:
    return circle.elements


def multiply(a: AlgebraElement, b: AlgebraElement) -> Optional[AlgebraElement]:
    """Product in B(Z); ``None`` stands for zero."""
    if a.circle is not b.circle:
        raise MixedCircles("cannot multiply %r by %r" % (a, b))
    return a.circle.table[a.index][b.index]


def idempotent_of(x: AlgebraElement, side: str) -> AlgebraElement:
    if side == "left":
        return x.left
    if side == "right":
        return x.right
    raise ValueError("side must be 'left' or 'right'")


STANDARD_MATCHINGS = {
    "Z1": (4, ((0, 2), (1, 3))),
    "Z2": (8, ((0, 2), (1, 3), (4, 6), (5, 7))),
}


def z1() -> PointedMatchedCircle:
    return build_circle(*STANDARD_MATCHINGS["Z1"], "Z1")


def z2() -> PointedMatchedCircle:
    return build_circle(*STANDARD_MATCHINGS["Z2"], "Z2")


class CircleRegistry:
    """Named circles available to seed files."""

    def __init__(self, circles: Iterable[PointedMatchedCircle] = ()):
        self._by_name: Dict[str, PointedMatchedCircle] = {}
        for c in circles:
            self.add(c)

    def add(self, circle: PointedMatchedCircle) -> PointedMatchedCircle:
        old = self._by_name.get(circle.name)
        if old is not None and old is not circle:
            raise NotAPartition("circle %s already registered with a different matching" % circle.name)
        self._by_name[circle.name] = circle
        return circle

    def get(self, name: str) -> PointedMatchedCircle:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownElement("unknown circle %r (known: %s)" % (name, ", ".join(sorted(self._by_name)))) from None

    def names(self) -> List[str]:
        return sorted(self._by_name)

    def copy(self) -> "CircleRegistry":
        return CircleRegistry(self._by_name.values())

    def __contains__(self, name: str) -> bool:
        return name in self._by_name
