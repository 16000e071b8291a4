"""Finite stochastic processes with events attached to regions.

Events are integer bitmasks over the ordered history space.  The assignment
of event algebras to regions is presented by homed generators: the algebra
of a region is generated by every generator whose home lies inside it.
Because that presentation does not enforce the intersection axiom on its
own, the axioms are checked rather than assumed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import kernels
from .causal import CausalSite, Region, Slice
from .errors import InputError, UndefinedConditional
from .reports import FAIL, PASS, CheckReport, Witness, finish


# -- algebras ---------------------------------------------------------------

@dataclass(frozen=True)
class Algebra:
    """Finite Boolean algebra given by its atoms (a partition of Ω)."""

    atoms: tuple
    nbits: int

    @property
    def omega(self):
        return (1 << self.nbits) - 1

    @property
    def size(self):
        return 2 ** len(self.atoms)

    @classmethod
    def trivial(cls, nbits):
        return cls((((1 << nbits) - 1),), nbits)

    def contains(self, event):
        return all(a & event in (0, a) for a in self.atoms)

    def events(self):
        """Every event of the algebra (use on small algebras only)."""
        for bits in itertools.product((0, 1), repeat=len(self.atoms)):
            e = 0
            for b, a in zip(bits, self.atoms):
                if b:
                    e |= a
            yield e

    def is_subalgebra_of(self, other):
        """Every event here is an event of ``other``."""
        return all(other.contains(a) for a in self.atoms)

    def same_as(self, other):
        return set(self.atoms) == set(other.atoms)

    def meet(self, other):
        """Intersection of the two algebras (finest common coarsening)."""
        blocks = list(self.atoms)
        for b in other.atoms:
            hit = [x for x in blocks if x & b]
            if len(hit) > 1:
                merged = 0
                for x in hit:
                    merged |= x
                blocks = [x for x in blocks if not x & b] + [merged]
        return Algebra(_ordered(blocks), self.nbits)

    def join(self, other):
        """Algebra generated by the union of the two (common refinement)."""
        return Algebra(_ordered(a & b for a in self.atoms for b in other.atoms if a & b), self.nbits)


def _ordered(blocks):
    return tuple(sorted(blocks, key=lambda m: (m & -m)))


# -- model ------------------------------------------------------------------

@dataclass(frozen=True)
class Generator:
    name: str
    event: int
    home: Region


class RegionUniverse:
    """Named regions closed under pairwise intersection and union.

    The empty region and the full site are always present.  Regions added
    by the closure are listed in ``added``.
    """

    def __init__(self, site: CausalSite, named: Mapping[str, Iterable] | Iterable[Region] = (),
                 close=True):
        self.site = site
        if isinstance(named, Mapping):
            items = [Region(frozenset(pts) if not isinstance(pts, Region) else pts.points, name)
                     for name, pts in named.items()]
        else:
            items = list(named)
        self._by_points = {}
        self._by_name = {}
        self.declared = {}
        self.regions = []
        self.added = []
        for r in items:
            if r.name is None:
                raise InputError("universe regions must be named")
            site.region(r.points)
            if r.name in self._by_name:
                raise InputError(f"duplicate region name {r.name!r}")
            self._add(r, declared=True)
        for special, name in ((frozenset(), "empty"), (frozenset(site.points), "site")):
            if special not in self._by_points:
                self._add(Region(special, self._fresh(name)), declared=False)
        if close:
            self._close()
        self.regions = tuple(self.regions)
        self.added = tuple(self.added)

    def _fresh(self, name):
        base, k = name, 1
        while name in self._by_name:
            k += 1
            name = f"{base}{k}"
        return name

    def _add(self, r, declared):
        if declared:
            self.declared[r.name] = r.points
        if r.points in self._by_points:
            # alias: same points under another declared name
            self._by_name[r.name] = self._by_points[r.points]
            return
        self._by_points[r.points] = r
        self._by_name[r.name] = r
        self.regions.append(r)
        if not declared:
            self.added.append(r.name)

    def _close(self):
        i = 0
        while i < len(self.regions):
            for j in range(i + 1):
                a, b = self.regions[i], self.regions[j]
                for pts in (a.points & b.points, a.points | b.points):
                    if pts not in self._by_points:
                        name = self._fresh("{" + ",".join(map(str, self.site.sorted(pts))) + "}")
                        self._add(Region(pts, name), declared=False)
            i += 1

    def __iter__(self):
        return iter(self.regions)

    def __len__(self):
        return len(self.regions)

    def __contains__(self, r):
        pts = r.points if isinstance(r, Region) else frozenset(r)
        return pts in self._by_points

    def __getitem__(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise InputError(f"unknown region {name!r}") from None

    def names(self):
        return list(self._by_name)

    def lookup(self, points):
        """The universe region with these points, or ``None``."""
        return self._by_points.get(frozenset(points))

    def named(self, r):
        """``r`` carrying its universe name when it has one."""
        hit = self._by_points.get(r.points)
        return hit if hit is not None else r


class Model:
    """History space, region universe, homed generators and exact measure.

    Treated as immutable after construction.  ``measure`` is aligned with
    ``histories``; internally it is held as integer ``weights`` over the
    common ``denominator``.
    """

    def __init__(self, site: CausalSite, histories: Iterable[str], universe: RegionUniverse,
                 generators: Iterable[Generator], measure: Iterable,
                 slices: Mapping[str, Slice] | None = None):
        self.site = site
        self.histories = tuple(histories)
        if not self.histories:
            raise InputError("history space is empty")
        if len(set(self.histories)) != len(self.histories):
            raise InputError("duplicate history identifiers")
        self.nbits = len(self.histories)
        self.omega = (1 << self.nbits) - 1
        self.universe = universe
        self.generators = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise InputError("duplicate generator names")
        for g in self.generators:
            if g.event & ~self.omega or g.event < 0:
                raise InputError(f"generator {g.name!r} mentions histories outside Ω")
            if g.home not in universe:
                raise InputError(f"home of generator {g.name!r} is not a universe region")
        self.measure = tuple(Fraction(x) for x in measure)
        if len(self.measure) != self.nbits:
            raise InputError("measure must give one value per history")
        if any(x < 0 for x in self.measure):
            raise InputError("measure has a negative entry")
        if sum(self.measure) != 1:
            raise InputError(f"measure sums to {sum(self.measure)}, not 1")
        self.denominator = math.lcm(*(x.denominator for x in self.measure))
        self.weights = tuple(int(x * self.denominator) for x in self.measure)
        self.slices = dict(slices or {})
        self._index = {h: i for i, h in enumerate(self.histories)}
        self._gen_by_name = {g.name: g for g in self.generators}
        self._alg_cache = {}
        self._weight_cache = {}

    def __repr__(self):
        return (f"Model({len(self.site.points)} points, {self.nbits} histories, "
                f"{len(self.generators)} generators, {len(self.universe)} regions)")

    def event(self, history_ids):
        mask = 0
        for h in history_ids:
            try:
                mask |= 1 << self._index[h]
            except KeyError:
                raise InputError(f"unknown history {h!r}") from None
        return mask

    def members(self, mask):
        return tuple(h for i, h in enumerate(self.histories) if (mask >> i) & 1)

    def generator(self, name):
        try:
            return self._gen_by_name[name]
        except KeyError:
            raise InputError(f"unknown generator {name!r}") from None

    def region(self, name):
        return self.universe[name]

    def weight(self, mask):
        w = self._weight_cache.get(mask)
        if w is None:
            w = self._weight_cache[mask] = kernels.mask_weight(self.weights, mask)
        return w

    def complement(self, mask):
        return self.omega & ~mask


# -- operations -------------------------------------------------------------

def generated_algebra(model, events):
    """G(events): atoms are the classes of histories with equal membership fingerprints."""
    return Algebra(kernels.refine(model.nbits, list(events)), model.nbits)


def region_algebra(model, r, strict=False):
    """Σ(r), generated by the generators homed inside ``r``."""
    pts = r.points if isinstance(r, Region) else frozenset(r)
    cached = model._alg_cache.get(pts)
    if cached is not None:
        return cached
    if strict and pts not in model.universe:
        raise InputError(f"region {Region(pts).label} is not in the region universe")
    model.site.region(pts)
    alg = generated_algebra(model, [g.event for g in model.generators if g.home.points <= pts])
    model._alg_cache[pts] = alg
    return alg


def full_specifications(model, r):
    """Atoms of Σ(r): events deciding every event of the region."""
    return list(region_algebra(model, r).atoms)


def probability(model, e):
    return Fraction(model.weight(e), model.denominator)


def conditional(model, e, given):
    wg = model.weight(given)
    if wg == 0:
        raise UndefinedConditional("conditioning event has probability zero")
    return Fraction(model.weight(e & given), wg)


def _first_outside(alg, candidate):
    """An atom of ``candidate`` that is not an event of ``alg``."""
    for a in candidate.atoms:
        if not alg.contains(a):
            return a
    return None


def check_localised_axioms(model):
    """Intersection and empty-region axioms, plus monotonicity and the union bound.

    Pairs and triples of universe regions are checked.  Each family is
    reported as its own clause so primary-axiom failures stay distinct from
    failures of the derived consequences.
    """
    regions = list(model.universe)
    alg = {r.points: region_algebra(model, r) for r in regions}
    witnesses = []
    clauses = {}

    def size_witness(clause, left, right, rs, event):
        witnesses.append(Witness(clause, Fraction(left.size), Fraction(right.size),
                                 regions=tuple(r.label for r in rs), event=model.members(event)))

    # intersection axiom, pairs then triples
    bad = False
    for a, b in itertools.combinations(regions, 2):
        m = alg[a.points].meet(alg[b.points])
        inner = region_algebra(model, a & b)
        if not m.same_as(inner):
            bad = True
            size_witness("intersection", m, inner, (a, b), _first_outside(inner, m) or model.omega)
    for a, b, c in itertools.combinations(regions, 3):
        m = alg[a.points].meet(alg[b.points]).meet(alg[c.points])
        inner = region_algebra(model, a & b & c)
        if not m.same_as(inner):
            bad = True
            size_witness("intersection", m, inner, (a, b, c), _first_outside(inner, m) or model.omega)
    clauses["intersection"] = FAIL if bad else PASS

    empty = region_algebra(model, Region(frozenset()))
    if len(empty.atoms) != 1:
        size_witness("empty_region", empty, Algebra.trivial(model.nbits), (Region(frozenset(), "empty"),),
                     empty.atoms[0])
        clauses["empty_region"] = FAIL
    else:
        clauses["empty_region"] = PASS

    bad = False
    for a, b in itertools.permutations(regions, 2):
        if a.points < b.points and not alg[a.points].is_subalgebra_of(alg[b.points]):
            bad = True
            size_witness("monotonicity", alg[a.points], alg[b.points], (a, b),
                         _first_outside(alg[b.points], alg[a.points]))
    clauses["monotonicity"] = FAIL if bad else PASS

    bad = False
    for a, b in itertools.combinations(regions, 2):
        joined = alg[a.points].join(alg[b.points])
        whole = region_algebra(model, a | b)
        if not joined.is_subalgebra_of(whole):
            bad = True
            size_witness("union_bound", joined, whole, (a, b), _first_outside(whole, joined))
    clauses["union_bound"] = FAIL if bad else PASS

    return finish("localised_events", witnesses, evaluated=len(regions), clauses=clauses)


def intrinsic_region(model, e):
    """Intersection of every universe region whose algebra contains ``e``."""
    if not region_algebra(model, model.site.full()).contains(e):
        raise InputError("event is not in the global algebra")
    pts = frozenset(model.site.points)
    for r in model.universe:
        if region_algebra(model, r).contains(e):
            pts &= r.points
    return model.universe.named(Region(pts))


def check_separability(model, parts):
    """Whether the parts' algebras generate the algebra of their union."""
    parts = [p if isinstance(p, Region) else Region(p) for p in parts]
    for p, q in itertools.combinations(parts, 2):
        if not p.isdisjoint(q):
            raise InputError(f"parts {p.label} and {q.label} overlap")
    union = Region(frozenset().union(*(p.points for p in parts)))
    whole = region_algebra(model, union)
    gen = Algebra.trivial(model.nbits)
    for p in parts:
        gen = gen.join(region_algebra(model, p))
    witnesses = []
    if not whole.same_as(gen):
        # prefer a generator event as the witness, since those are named
        hit = None
        for g in model.generators:
            if g.home.points <= union.points and not gen.contains(g.event):
                hit = g.event
                break
        if hit is None:
            hit = _first_outside(gen, whole)
        witnesses.append(Witness("separability", Fraction(gen.size), Fraction(whole.size),
                                 regions=tuple(p.label for p in parts), event=model.members(hit)))
    return finish("separability", witnesses, evaluated=1)


def nonseparable_generators(model):
    """Generators whose events are not combinations of point-level events
    within their intrinsic region."""
    out = []
    for g in model.generators:
        home = intrinsic_region(model, g.event)
        if len(home) < 2:
            continue
        gen = Algebra.trivial(model.nbits)
        for p in home:
            gen = gen.join(region_algebra(model, Region(frozenset([p]))))
        if not gen.contains(g.event):
            out.append(g)
    return out
