#!/usr/bin/env python3
"""Tests for single-entry Lipschitz bounds, Delta_k identities and the trace witness."""
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(str(Path(__file__).parent))

from src.bf_core import and_n, constant, flip_entry, from_bits, profile
from src.errors import CheckFailed, DomainError
from src.lipschitz_niho import (GaloisField, and_entropy_slack, delta_profile, delta_suite,
                                entropy_difference_from_deltas, entropy_gap, epsilon_corollary,
                                expected_niho_multiset, influence_gap, is_irreducible,
                                lipschitz_suite, niho, niho_gap, normalize_flip, or_tightness,
                                spectrum_multiset)


@st.composite
def flips(draw, max_n=7):
    n = draw(st.integers(min_value=1, max_value=max_n))
    bits = draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    index = draw(st.integers(min_value=0, max_value=(1 << n) - 1))
    return from_bits(n, bits), index


@settings(max_examples=80, deadline=None)
@given(flips())
def test_single_flip_bounds(case):
    f, index = case
    gap_i, bound_i = influence_gap(f, index)
    gap_h, bound_h = entropy_gap(f, index)
    assert gap_i <= bound_i
    assert gap_h <= bound_h


@settings(max_examples=60, deadline=None)
@given(flips())
def test_delta_identities_and_entropy(case):
    f, index = case
    if f.bits[index]:
        f = flip_entry(f, index)
    delta = delta_profile(f, index)
    delta.check()
    direct = profile(flip_entry(f, index)).H - profile(f).H
    assert entropy_difference_from_deltas(delta) == pytest.approx(direct, abs=1e-9)


def test_delta_profile_of_a_single_point():
    delta = delta_profile(constant(3, False), 7)
    assert delta.deltas.tolist() == [-7, 0, 0, 1]
    ids = delta.identities()
    assert ids['signed_sum'] == (0, 0)
    assert ids['count'] == (8, 8)
    assert ids['second_moment'] == (56, 56)
    assert ids['first_moment_squared'] == (196, 512)
    # equals H of the indicator of one point
    assert entropy_difference_from_deltas(delta) == pytest.approx(profile(and_n(3)).H, abs=1e-12)


def test_delta_profile_needs_false_entry():
    with pytest.raises(DomainError):
        delta_profile(constant(2, True), 0)


def test_normalize_flip_moves_entry_to_all_false_input():
    rng = np.random.default_rng(3)
    f = from_bits(4, rng.integers(0, 2, 16))
    for index in range(16):
        g = normalize_flip(f, index)
        assert g.bits[15] == f.bits[index]
        assert profile(g).I == profile(f).I
    with pytest.raises(DomainError):
        normalize_flip(f, 16)


def test_epsilon_corollary():
    f = from_bits(4, [1, 0] * 8)
    gap, bound = epsilon_corollary(f, [0, 3, 5])
    assert gap < bound
    assert epsilon_corollary(f, []) == (0.0, 0.0)


@pytest.mark.parametrize("n", range(2, 11))
def test_or_influence_bound_is_tight(n):
    gap_i, gap_h = or_tightness(n)
    assert gap_i == Fraction(2 * n, 1 << n)
    assert 0 < gap_h < 8 * n / (1 << n)


@pytest.mark.parametrize("n", range(1, 13))
def test_and_entropy_estimate(n):
    slack = and_entropy_slack(n)
    assert 0 < slack < 12 * n / 4 ** n


def test_suites_report_every_trial():
    frame = lipschitz_suite(trials=40, max_n=6, seed=2)
    assert len(frame) == 40
    assert (frame['entropy_gap'] <= frame['entropy_bound']).all()
    deltas = delta_suite(instances=25, max_n=6, seed=2)
    assert len(deltas) == 25
    assert np.allclose(deltas['predicted'], deltas['direct'], atol=1e-9)


def test_irreducibility():
    assert is_irreducible(0b111)
    assert is_irreducible(0b10011)
    assert not is_irreducible(0b101)
    assert not is_irreducible(0b10101)


def test_galois_field_arithmetic():
    field = GaloisField(4)
    assert field.modulus == 0b10011
    assert field.mul(0b10, 0b1000) == 0b11
    for a in range(1, 16):
        assert field.pow(a, 15) == 1
        assert field.trace(a) in (0, 1)
    assert field.trace(0) == 0
    with pytest.raises(DomainError):
        GaloisField(4, modulus=0b10101)
    with pytest.raises(DomainError):
        GaloisField(17)


def test_trace_is_additive():
    field = GaloisField(8)
    rng = np.random.default_rng(5)
    for a, b in rng.integers(0, 256, size=(50, 2)).tolist():
        assert field.trace(a ^ b) == field.trace(a) ^ field.trace(b)


@pytest.mark.parametrize("n", [4, 8])
def test_niho_spectrum_is_four_valued(n):
    counts = spectrum_multiset(niho(n))
    assert counts == expected_niho_multiset(n)
    assert sum(counts.values()) == 1 << n


def test_expected_multiset_sizes():
    counts = expected_niho_multiset(12)
    assert counts == {-64: 1344, 0: 2016, 64: 64, 128: 672}


def test_niho_gap_beats_threshold_at_n8():
    gap = niho_gap(8)
    assert gap.exceeds_threshold
    assert gap.gap < gap.bound
    assert gap.threshold == pytest.approx(8 / 48, abs=1e-15)


def test_niho_small_field_is_reported():
    gap = niho_gap(4, strict=False)
    assert math.isfinite(gap.gap)
    assert abs(gap.gap) <= gap.bound
    with pytest.raises(DomainError):
        niho(5)


def test_strict_gap_rejects_small_jump():
    gap = niho_gap(4, strict=False)
    if not gap.exceeds_threshold:
        with pytest.raises(CheckFailed):
            niho_gap(4, strict=True)


def test_suites_with_fixed_variable_count():
    frame = lipschitz_suite(trials=5, seed=3, n=4)
    assert (frame['n'] == 4).all()
    deltas = delta_suite(instances=5, seed=3, n=3)
    assert (deltas['n'] == 3).all()
    with pytest.raises(DomainError):
        lipschitz_suite(trials=1, n=0)
