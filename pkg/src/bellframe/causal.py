"""Finite causal orders and the region constructions built on them.

A :class:`CausalSite` is a finite partial order of spacetime points.  All
past regions used by the locality checks (mutual past, joint past, slice
blocks, interposed slice regions) are computed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import InputError


@dataclass(frozen=True)
class Region:
    """A set of points, optionally named.  Equality ignores the name."""

    points: frozenset
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.points, frozenset):
            object.__setattr__(self, "points", frozenset(self.points))

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, point):
        return point in self.points

    def __and__(self, other):
        return Region(self.points & _pts(other))

    def __or__(self, other):
        return Region(self.points | _pts(other))

    def __sub__(self, other):
        return Region(self.points - _pts(other))

    def __le__(self, other):
        return self.points <= _pts(other)

    def __lt__(self, other):
        return self.points < _pts(other)

    def isdisjoint(self, other):
        return self.points.isdisjoint(_pts(other))

    @property
    def label(self):
        if self.name is not None:
            return self.name
        return "{" + ",".join(sorted(map(str, self.points))) + "}"


def _pts(r):
    return r.points if isinstance(r, Region) else frozenset(r)


class CausalSite:
    """Finite partial order ``x ≼ y`` over opaque point identifiers.

    ``relations`` may be any generating set of ``(before, after)`` pairs; the
    reflexive-transitive closure is taken and antisymmetry is enforced.
    """

    def __init__(self, points: Iterable, relations: Iterable = ()):
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise InputError("duplicate point identifiers")
        index = set(self.points)
        succ = {p: set() for p in self.points}
        for pair in relations:
            try:
                before, after = pair
            except (TypeError, ValueError):
                raise InputError(f"order entry {pair!r} is not a [before, after] pair") from None
            for p in (before, after):
                if p not in index:
                    raise InputError(f"order mentions unknown point {p!r}")
            if before != after:
                succ[before].add(after)
        above = {}
        for p in self.points:
            seen = {p}
            stack = [p]
            while stack:
                for q in succ[stack.pop()]:
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
            above[p] = frozenset(seen)
        for p in self.points:
            for q in above[p]:
                if q != p and p in above[q]:
                    raise InputError(f"order is not antisymmetric: {p!r} and {q!r} precede each other")
        below = {p: set() for p in self.points}
        for p in self.points:
            for q in above[p]:
                below[q].add(p)
        self._above = above
        self._below = {p: frozenset(s) for p, s in below.items()}
        self._rank = {p: i for i, p in enumerate(self.points)}

    def __repr__(self):
        return f"CausalSite({len(self.points)} points)"

    def __eq__(self, other):
        return (isinstance(other, CausalSite) and set(self.points) == set(other.points)
                and self._above == other._above)

    def __hash__(self):
        return hash(frozenset(self.points))

    def precedes(self, x, y):
        """True iff ``x ≼ y`` (reflexive)."""
        return y in self._above[self._check(x)]

    def comparable(self, x, y):
        return self.precedes(x, y) or self.precedes(y, x)

    def below(self, x):
        return self._below[self._check(x)]

    def above(self, x):
        return self._above[self._check(x)]

    def relations(self):
        """All strict pairs ``(x, y)`` with ``x ≺ y``, in point order."""
        return [(x, y) for x in self.points for y in self.sorted(self._above[x]) if x != y]

    def covers(self):
        """The covering pairs: the minimal generating set of the order."""
        out = []
        for x, y in self.relations():
            if not any(z not in (x, y) and z in self._above[x] and y in self._above[z]
                       for z in self.points):
                out.append((x, y))
        return out

    def successors(self, x):
        """Points covering ``x``: ``x ≺ y`` with nothing strictly between."""
        ups = self._above[self._check(x)] - {x}
        return frozenset(y for y in ups if not any(y in self._above[z] and z != y for z in ups))

    def sorted(self, pts):
        return sorted(pts, key=self._rank.__getitem__)

    def region(self, points, name=None):
        pts = frozenset(points)
        for p in pts:
            self._check(p)
        return Region(pts, name)

    def full(self, name=None):
        return Region(frozenset(self.points), name)

    def _check(self, p):
        if p not in self._rank:
            raise InputError(f"unknown point {p!r}")
        return p


@dataclass(frozen=True)
class Slice:
    """Order-convex region between two antichains ``lower`` and ``upper``."""

    lower: frozenset
    upper: frozenset
    points: frozenset
    name: str | None = field(default=None, compare=False)

    @property
    def region(self):
        return Region(self.points, self.name)


def is_antichain(site, pts):
    pts = list(pts)
    return all(not site.comparable(x, y) for i, x in enumerate(pts) for y in pts[i + 1:])


def make_slice(site, lower, upper, name=None):
    lower = frozenset(site.region(lower).points)
    upper = frozenset(site.region(upper).points)
    for label, side in (("lower", lower), ("upper", upper)):
        if not is_antichain(site, side):
            raise InputError(f"slice {name or ''} {label} boundary is not an antichain")
    pts = frozenset(x for x in site.points
                    if any(site.precedes(l, x) for l in lower)
                    and any(site.precedes(x, u) for u in upper))
    return Slice(lower, upper, pts, name)


def _check_slice(site, s):
    if not (s.lower | s.upper | s.points) <= set(site.points):
        raise InputError(f"slice {s.name or ''} refers to points outside the site")
    if not (is_antichain(site, s.lower) and is_antichain(site, s.upper)):
        raise InputError(f"slice {s.name or ''} boundaries are not antichains")
    expected = make_slice(site, s.lower, s.upper).points
    if expected != s.points:
        raise InputError(f"slice {s.name or ''} points do not match its boundaries")


def causal_past(site, r):
    """J⁻(r), inclusive of ``r``."""
    out = set()
    for p in _pts(r):
        out |= site.below(p)
    return Region(frozenset(out))


def causal_future(site, r):
    """J⁺(r), inclusive of ``r``."""
    out = set()
    for p in _pts(r):
        out |= site.above(p)
    return Region(frozenset(out))


def spacelike(site, a, b):
    a, b = _pts(a), _pts(b)
    if not a or not b:
        raise InputError("spacelike relation is undefined for an empty region")
    return not any(site.comparable(x, y) for x in a for y in b)


@dataclass(frozen=True)
class PastSelector:
    """Which past region a screening condition conditions on.

    ``kind`` is one of ``mutual``, ``joint``, ``past-a``, ``past-b``,
    ``slice`` (the slice block of both backward cones), ``srla`` (the
    interposed slice region for a timelike pair) or ``custom``.
    """

    kind: str
    slice: Slice | None = None
    region: Region | None = None

    KINDS = ("mutual", "joint", "past-a", "past-b", "slice", "srla", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InputError(f"unknown past selector {self.kind!r}")
        if self.kind in ("slice", "srla") and self.slice is None:
            raise InputError(f"{self.kind} selector needs a slice")
        if self.kind == "custom" and self.region is None:
            raise InputError("custom selector needs a region")

    @classmethod
    def mutual(cls):
        return cls("mutual")

    @classmethod
    def joint(cls):
        return cls("joint")

    @classmethod
    def past_a(cls):
        return cls("past-a")

    @classmethod
    def past_b(cls):
        return cls("past-b")

    @classmethod
    def slice_block(cls, s):
        return cls("slice", slice=s)

    @classmethod
    def srla_block(cls, s):
        return cls("srla", slice=s)

    @classmethod
    def custom(cls, region):
        return cls("custom", region=region if isinstance(region, Region) else Region(region))

    @property
    def label(self):
        if self.kind in ("slice", "srla"):
            return f"{self.kind}:{self.slice.name}"
        if self.kind == "custom":
            return f"custom:{self.region.label}"
        return self.kind

    @property
    def needs_spacelike(self):
        return self.kind not in ("custom", "srla")


MUTUAL_PAST = PastSelector.mutual()
JOINT_PAST = PastSelector.joint()
PAST_OF_A = PastSelector.past_a()
PAST_OF_B = PastSelector.past_b()


def resolve_past(site, a, b, sel):
    """The past region selected by ``sel`` for the pair ``(a, b)``, minus ``a ∪ b``."""
    a, b = Region(_pts(a)), Region(_pts(b))
    for r in (a, b):
        site.region(r.points)
    if sel.needs_spacelike and not spacelike(site, a, b):
        raise InputError(f"regions {a.label} and {b.label} are not spacelike")
    both = a | b
    kind = sel.kind
    if kind == "custom":
        return site.region(sel.region.points) - both
    if kind == "srla":
        return srla_region(site, a, b, sel.slice)
    pa, pb = causal_past(site, a), causal_past(site, b)
    if kind == "mutual":
        return (pa & pb) - both
    if kind == "joint":
        return (pa | pb) - both
    if kind == "past-a":
        return pa - both
    if kind == "past-b":
        return pb - both
    _check_slice(site, sel.slice)
    return (Region(sel.slice.points) & (pa | pb)) - both


def precedes_entirely(site, x, y):
    """Every point of ``x`` precedes some point of ``y`` and the two are disjoint."""
    x, y = _pts(x), _pts(y)
    return bool(x) and bool(y) and x.isdisjoint(y) and all(
        any(site.precedes(p, q) for q in y) for p in x)


def srla_region(site, x, y, s):
    """Slice points strictly between ``x`` and ``y``: ``s ∩ J⁺(x) ∩ J⁻(y) \\ (x ∪ y)``."""
    xs, ys = _pts(x), _pts(y)
    _check_slice(site, s)
    for p in xs | ys:
        site._check(p)
    for p in site.sorted(xs):
        if p in ys:
            raise InputError(f"point {p!r} lies in both regions")
        if not any(site.precedes(p, q) for q in ys):
            raise InputError(f"point {p!r} does not lie in the causal past of the later region")
    between = causal_future(site, xs) & causal_past(site, ys)
    return (Region(s.points) & between) - Region(xs | ys)


def separates(site, s, x, y):
    """True iff ``x`` lies entirely in the past of ``y``, neither meets the
    slice, and every causal chain from ``x`` to ``y`` passes through it."""
    xs, ys, sp = _pts(x), _pts(y), _pts(s.points if isinstance(s, Slice) else s)
    if not precedes_entirely(site, xs, ys) or not sp.isdisjoint(xs | ys):
        return False
    # search upward from x through points outside the slice
    seen = set(xs)
    stack = list(xs)
    while stack:
        p = stack.pop()
        for q in site.successors(p):
            if q in seen or q in sp:
                continue
            if q in ys:
                return False
            seen.add(q)
            stack.append(q)
    return True


def blocks(site, s, a, b):
    """True iff the slice misses ``a ∪ b`` and every causal chain from a
    minimal point of their joint past up to ``a ∪ b`` passes through it."""
    sp = _pts(s.points if isinstance(s, Slice) else s)
    wings = _pts(a) | _pts(b)
    if not sp.isdisjoint(wings):
        return False
    past = causal_past(site, wings).points - wings
    roots = [x for x in past if not (site.below(x) - {x}) & past and x not in sp]
    for x in roots:
        seen, stack = {x}, [x]
        while stack:
            for q in site.successors(stack.pop()):
                if q in wings:
                    return False
                if q in seen or q in sp:
                    continue
                seen.add(q)
                stack.append(q)
    return True
