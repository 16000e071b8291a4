from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellframe import gallery
from bellframe.causal import CausalSite, Region
from bellframe.errors import InputError, UndefinedConditional
from bellframe.stochastic import (Algebra, Generator, Model, RegionUniverse,
                                  check_localised_axioms, check_separability, conditional,
                                  full_specifications, generated_algebra, intrinsic_region,
                                  nonseparable_generators, probability, region_algebra)

seeds = st.integers(0, 10**6)


def events_of(alg):
    return set(alg.events())


def brute_generated(nbits, masks):
    """Close {∅, Ω, masks} under complement and intersection."""
    omega = (1 << nbits) - 1
    out = {0, omega, *masks}
    while True:
        new = {omega & ~e for e in out} | {a & b for a in out for b in out}
        if new <= out:
            return out
        out |= new


@settings(max_examples=300)
@given(st.integers(1, 7), st.data())
def test_generated_algebra_matches_closure(force_backend, n, data):
    masks = data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=4))
    fake = type("M", (), {"nbits": n})()
    alg = generated_algebra(fake, masks)
    assert events_of(alg) == brute_generated(n, masks)
    assert alg.size == 2 ** len(alg.atoms) == len(events_of(alg))


@settings(max_examples=200)
@given(seeds)
def test_atom_property_and_measure(force_backend, seed):
    m = gallery.random_model(seed).model
    for r in m.universe:
        alg = region_algebra(m, r)
        atoms = full_specifications(m, r)
        for f in atoms:
            for x in alg.events():
                assert f & x in (0, f)
        assert sum(probability(m, f) for f in atoms) == 1
        assert alg.size == 2 ** len(atoms)


@settings(max_examples=200)
@given(seeds)
def test_union_bound_follows_from_axioms(seed):
    m = gallery.random_model(seed).model
    if not check_localised_axioms(m).passed:
        return
    regions = list(m.universe)
    for a in regions:
        for b in regions:
            joined = region_algebra(m, a).join(region_algebra(m, b))
            assert joined.is_subalgebra_of(region_algebra(m, a | b))


@settings(max_examples=100)
@given(seeds, st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(3, 4)]))
def test_injected_coin_breaks_separability(seed, p):
    doc = gallery.random_model(seed)
    parts = doc.partition_regions()[0]
    if len(parts) < 2 or not check_localised_axioms(doc.model).passed:
        return
    lifted = gallery.with_nonseparable(doc, p)
    assert check_localised_axioms(lifted.model).passed
    report = check_separability(lifted.model, lifted.partition_regions()[0])
    assert report.verdict == "fail"
    assert report.witnesses[0].lhs < report.witnesses[0].rhs


def test_algebra_meet_and_join_against_events():
    a = Algebra((0b0011, 0b1100), 4)
    b = Algebra((0b0101, 0b1010), 4)
    assert events_of(a.meet(b)) == events_of(a) & events_of(b)
    assert a.join(b).atoms == (0b0001, 0b0010, 0b0100, 0b1000)
    assert Algebra.trivial(3).atoms == (0b111,)
    assert a.meet(b).same_as(Algebra.trivial(4))


def test_small_algebra_examples():
    doc = gallery.build("nonseparable_minimal")
    m = doc.model
    x = m.generator("X").event
    assert set(full_specifications(m, m.region("X"))) == {x, m.complement(x)}
    for name in ("X1", "X23", "Y"):
        assert full_specifications(m, m.region(name)) == [m.omega]
    assert check_localised_axioms(m).passed
    report = check_separability(m, [m.region("X1"), m.region("X23")])
    assert report.verdict == "fail"
    assert report.witnesses[0].event == m.members(x)
    assert intrinsic_region(m, x).points == m.region("X").points
    assert [g.name for g in nonseparable_generators(m)] == ["X"]


def _two_point_model(events, homes, measure=None):
    site = CausalSite(["u", "v"])
    uni = RegionUniverse(site, {"U": ["u"], "V": ["v"]})
    gens = [Generator(f"g{i}", e, uni[h]) for i, (e, h) in enumerate(zip(events, homes))]
    return Model(site, ["h0", "h1", "h2", "h3"], uni, gens, measure or [Fraction(1, 4)] * 4)


def test_two_independent_generators_give_four_atoms():
    m = _two_point_model([0b0011, 0b0101], ["U", "V"])
    assert len(full_specifications(m, m.site.full())) == 4
    assert check_localised_axioms(m).passed
    assert check_separability(m, [m.region("U"), m.region("V")]).passed


def test_same_event_on_disjoint_homes_breaks_intersection():
    m = _two_point_model([0b0011, 0b0011], ["U", "V"])
    report = check_localised_axioms(m)
    assert report.verdict == "fail"
    assert report.clauses["intersection"] == "fail"
    assert report.clauses["empty_region"] == "pass"


def test_universe_closure_reports_added_regions():
    m = _two_point_model([], [])
    assert {r.points for r in m.universe} == {frozenset(), frozenset({"u"}), frozenset({"v"}),
                                             frozenset({"u", "v"})}
    assert m.universe.added


def test_conditionals_are_exact():
    m = _two_point_model([0b0011], ["U"], [Fraction(1, 3), Fraction(1, 6), Fraction(1, 4),
                                            Fraction(1, 4)])
    e = m.generator("g0").event
    assert probability(m, e) == Fraction(1, 2)
    assert conditional(m, 0b0001, e) == Fraction(2, 3)
    with pytest.raises(UndefinedConditional):
        conditional(m, e, 0)


@pytest.mark.parametrize("measure", [
    [Fraction(1, 2)] * 4,
    [Fraction(-1, 4), Fraction(1, 2), Fraction(1, 2), Fraction(1, 4)],
    [Fraction(1, 3)] * 3,
])
def test_bad_measures_rejected(measure):
    with pytest.raises(InputError):
        _two_point_model([], [], measure)


def test_separability_rejects_overlapping_parts():
    m = _two_point_model([], [])
    with pytest.raises(InputError):
        check_separability(m, [Region({"u"}), Region({"u", "v"})])
