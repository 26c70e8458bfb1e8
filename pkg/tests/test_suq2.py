import pytest
from hypothesis import given, strategies as st

from app.errors import VerificationFailure
from app.scalar import ONE, qpow
from app.suq2 import (
    LETTERS,
    MOBIUS_TOLERANCE,
    PRESETS,
    coaction_homomorphism_check,
    get_algebra,
    homomorphism_residual,
    is_sphere_compatible,
    mobius_check,
    normalize_suq2,
    pbw_residual,
    star_suq2,
    stereographic_elements,
    verify_suq2,
)
from app.zalgebra import PODLES_LETTERS

suq2_words = st.lists(st.sampled_from(LETTERS), min_size=1, max_size=5).map(tuple)
podles_words = st.lists(st.sampled_from(PODLES_LETTERS), min_size=1, max_size=4).map(tuple)


@pytest.mark.parametrize("preset", PRESETS)
def test_generators_satisfy_relations(preset):
    algebra = get_algebra(preset)
    g = algebra.generators()
    for identity, residual in algebra.relations(g["a"], g["b"], g["c"], g["d"]):
        assert residual == 0, identity


def test_inverses():
    g = get_algebra("standard").generators()
    assert g["b"] * g["bi"] == 1
    assert g["ci"] * g["c"] == 1


def test_star():
    g = get_algebra("standard").generators()
    assert star_suq2(g["a"]) == g["d"]
    assert star_suq2(g["b"]) == g["c"] * (-qpow(1))
    for x in g.values():
        assert star_suq2(star_suq2(x)) == x


def test_normalize_quantum_determinant():
    ad = normalize_suq2({("a", "d"): ONE})
    g = get_algebra("standard").generators()
    assert ad == 1 + g["b"] * g["c"] * qpow(1)
    assert ad - normalize_suq2({("d", "a"): ONE}) == g["b"] * g["c"] * (qpow(1) - qpow(-1))


@given(suq2_words, st.sampled_from(["leftmost", "rightmost"]))
def test_rewriting_matches_pbw_product(word, strategy):
    assert pbw_residual(word, "standard", strategy) == 0


@given(podles_words)
def test_podles_homomorphism(word):
    assert homomorphism_residual(word) == 0


def test_stereographic_coordinates():
    images = stereographic_elements("standard")
    assert images.z * images.zb == images.zb * images.z * qpow(-2) + qpow(-2) - 1
    assert is_sphere_compatible("standard")


def test_inverted_preset_breaks_sphere_relations():
    assert not is_sphere_compatible("inverted")
    with pytest.raises(VerificationFailure):
        stereographic_elements("inverted")


def test_unknown_preset():
    with pytest.raises(ValueError):
        get_algebra("opposite")


def test_coaction():
    report = coaction_homomorphism_check()
    assert all(row["status"] == "pass" for row in report)


def test_mobius_action():
    result = mobius_check(seed=7)
    assert result["max_error"] <= MOBIUS_TOLERANCE


def test_verify_rows():
    rows = verify_suq2("standard", seed=3, word_count=4)
    assert rows
    assert all(row["status"] == "pass" for row in rows)
