import pytest

from bellframe import gallery
from bellframe.errors import InputError
from bellframe.polytope import BehaviorTable
from bellframe.stochastic import check_localised_axioms
from bellframe.suites import verdict_matrix
from conftest import golden_json

MODELS = [n for n, e in gallery.ENTRIES.items() if e.kind == "model"]


@pytest.mark.parametrize("name", MODELS)
def test_matrix_matches_entry_and_golden(name):
    got = verdict_matrix(gallery.build(name))
    assert got == gallery.ENTRIES[name].expected
    assert got == golden_json("gallery_matrices.json")[name]


@pytest.mark.parametrize("name", gallery.names())
def test_builds_are_byte_stable(name):
    frozen = golden_json("gallery_digests.json")[name]
    built = gallery.build(name)
    if isinstance(built, BehaviorTable):
        assert built.to_text() == frozen
    else:
        assert built.digest() == frozen


def test_random_digests_frozen():
    frozen = golden_json("random_digests.json")
    for key, digest in frozen.items():
        if key.startswith("eprb-"):
            assert gallery.random_eprb_model(int(key[5:])).digest() == digest
        else:
            assert gallery.random_model(int(key)).digest() == digest


def test_random_models_are_pure_and_vary():
    assert gallery.random_model(3).canonical() == gallery.random_model(3).canonical()
    assert gallery.random_model(3).digest() != gallery.random_model(4).digest()
    assert gallery.random_model(3).digest() != gallery.random_model(3, max_points=5).digest()


@pytest.mark.parametrize("seed", range(40))
def test_random_model_structure(seed):
    doc = gallery.random_model(seed)
    m = doc.model
    assert sum(m.measure) == 1
    assert max(x.denominator for x in m.measure) <= 64
    assert m.nbits <= 8 and len(m.site.points) <= 6 and len(m.generators) <= 4
    regions = list(m.universe)
    for a in regions:
        for b in regions:
            assert (a & b) in m.universe and (a | b) in m.universe
    assert "s0" in m.slices
    eprb = gallery.random_eprb_model(seed)
    assert eprb.model.nbits <= 64
    assert eprb.scenario.complete


def test_superdeterministic_breaks_axioms():
    assert check_localised_axioms(gallery.build("superdeterministic").model).verdict == "fail"


def test_unknown_entry():
    with pytest.raises(InputError):
        gallery.build("nope")


def test_bad_caps():
    with pytest.raises(InputError):
        gallery.random_model(0, max_points=0)
    with pytest.raises(InputError):
        gallery.random_model(0, max_generators=-1)
    with pytest.raises(InputError):
        gallery.with_nonseparable(gallery.random_model(0), 1)
