from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freelukacs.laws import FreeBinomialLaw, FreePoissonLaw, fb_cumulants, fb_moments, mp_cumulants
from freelukacs.ncpart import (
    FreeMoments,
    NCPartition,
    Word,
    bls_moment,
    catalan,
    cumulant_sequence,
    cumulants_from_moments,
    enumerate_nc,
    free_mixed_moment,
    is_crossing,
    joint_cumulant,
    moment_sequence,
    moments_from_cumulants,
    nc_moment_sum,
)

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first], *part]
        for i in range(len(part)):
            yield part[:i] + [[first, *part[i]]] + part[i + 1:]


def test_enumerate_small():
    assert len(enumerate_nc(1)) == 1
    assert len(enumerate_nc(3)) == 5


def test_enumerate_four_against_brute_force():
    brute = [p for p in set_partitions([1, 2, 3, 4]) if not is_crossing(p)]
    assert len(list(set_partitions([1, 2, 3, 4]))) == 15
    assert len(brute) == 14
    got = {frozenset(frozenset(b) for b in p.blocks) for p in enumerate_nc(4)}
    assert got == {frozenset(frozenset(b) for b in p) for p in brute}


@pytest.mark.parametrize("k", range(1, 13))
def test_catalan_counts(k):
    parts = enumerate_nc(k)
    assert len(parts) == catalan(k)
    if k <= 8:
        assert all(p.is_noncrossing() for p in parts)
        assert len({p.blocks for p in parts}) == len(parts)


def test_enumerate_guard():
    with pytest.raises(ValueError):
        enumerate_nc(0)
    with pytest.raises(ValueError):
        enumerate_nc(15)


def test_crossing_partition_rejected():
    with pytest.raises(ValueError):
        NCPartition(((1, 3), (2, 4)), 4)


def test_moments_from_cumulants_examples():
    k1, k2 = Fraction(3), Fraction(5)
    assert moments_from_cumulants([k1, k2], 2) == k2 + k1**2
    assert moments_from_cumulants([1] * 3, 3) == 5
    assert moments_from_cumulants([2] * 3, 3) == 22


def test_moments_from_cumulants_needs_enough_input():
    with pytest.raises(ValueError):
        moments_from_cumulants([1, 2], 3)


def test_cumulants_from_moments_examples():
    assert cumulants_from_moments([Fraction(7, 3)], 1) == Fraction(7, 3)
    cat = [catalan(n) for n in range(1, 11)]
    assert cumulant_sequence(cat) == [1] * 10


def test_recursion_matches_nc_sum():
    kappa = [Fraction(1, 2), Fraction(-2, 3), Fraction(5), Fraction(1, 7), Fraction(2), Fraction(-1)]
    assert moment_sequence(kappa) == [nc_moment_sum(kappa, n) for n in range(1, 7)]


@given(st.lists(small_q, min_size=1, max_size=10))
@settings(max_examples=60, deadline=None)
def test_moment_cumulant_roundtrip(kappa):
    assert cumulant_sequence(moment_sequence(kappa)) == kappa
    assert moment_sequence(cumulant_sequence(kappa)) == kappa


def test_word_parse_and_runs():
    assert Word.parse("V^2U(VU)^3") == Word("VVUVUVUVU")
    assert Word("UUVU").runs == (("U", 2), ("V", 1), ("U", 1))
    assert str(Word("UUVU")) == "U^2VU"
    assert Word.from_runs([("X", 2), ("Y", 1)]) == Word("XXY")
    with pytest.raises(ValueError):
        Word.parse("(UV")


def uv_cumulants(K=8):
    return {"U": fb_cumulants(FreeBinomialLaw(1, 1), K), "V": mp_cumulants(FreePoissonLaw(2, 1), K)}


def test_free_mixed_moment_examples():
    cum = uv_cumulants()
    assert free_mixed_moment(Word("UV"), cum) == 1
    assert free_mixed_moment(Word("UVUV"), cum) == 2
    assert free_mixed_moment(Word("UUUU"), cum) == fb_moments(FreeBinomialLaw(1, 1), 4)[3]


def test_free_mixed_moment_missing_label():
    with pytest.raises(KeyError):
        free_mixed_moment(Word("UW"), uv_cumulants())


def test_free_mixed_moment_guard():
    with pytest.raises(ValueError):
        free_mixed_moment(Word("UV" * 8), uv_cumulants(16))


def test_bls_small_cases():
    cum = uv_cumulants()
    assert bls_moment(Word("V"), cum) == cum["V"][0]
    assert bls_moment(Word("VU"), cum) == cum["V"][0] * cum["U"][0]


def test_bls_alternating_matches_nc():
    cum = uv_cumulants(12)
    for n in range(1, 7):
        w = Word("VU") ** n
        assert bls_moment(w, cum) == free_mixed_moment(w, cum)


@given(st.lists(st.sampled_from("UV"), min_size=1, max_size=8))
@settings(max_examples=80, deadline=None)
def test_bls_matches_nc_on_random_words(letters):
    cum = uv_cumulants()
    w = Word(letters)
    assert bls_moment(w, cum) == free_mixed_moment(w, cum)


@given(st.lists(st.sampled_from("UV"), min_size=1, max_size=8), st.integers(0, 7))
@settings(max_examples=60, deadline=None)
def test_traciality(letters, k):
    engine = FreeMoments(uv_cumulants())
    w = Word(letters)
    assert engine(w) == engine(w.rotate(k))


@given(st.lists(st.sampled_from("UV"), min_size=1, max_size=7))
@settings(max_examples=60, deadline=None)
def test_centered_singleton_gives_zero(letters):
    # a letter with kappa_1 = 0 and occurring once: every NC partition
    # puts it in a singleton block
    cum = uv_cumulants()
    cum["C"] = [0, 1, 2, 3, 4, 5, 6, 7]
    w = Word(["C", *letters])
    assert free_mixed_moment(w, cum) == 0


def test_joint_cumulant_examples():
    engine = FreeMoments({"X": mp_cumulants(FreePoissonLaw(1, 1), 4), "Y": mp_cumulants(FreePoissonLaw(3, 2), 4)})
    assert joint_cumulant(Word("XY"), engine) == 0
    m1, m2 = engine(Word("X")), engine(Word("XX"))
    assert joint_cumulant(Word("XX"), engine) == m2 - m1**2


def test_joint_cumulants_of_free_pair_vanish():
    engine = FreeMoments(uv_cumulants(6))
    cache = {}
    for n in range(2, 6):
        for w in itertools.product("UV", repeat=n):
            k = joint_cumulant(Word(w), engine, cache)
            if len(set(w)) == 2:
                assert k == 0
