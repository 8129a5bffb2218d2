#!/usr/bin/env python3
"""Tests for biased Fourier analysis and the composition lemma."""
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(str(Path(__file__).parent))

from src.bf_core import and_n, compose_tables, constant, dictator, from_bits, or_n, parity, profile
from src.biased import (PHI, TAU_BIAS, bias_fixed_points, bias_residual, biased_probability,
                        biased_profile, biased_spectrum, compose_levels, expectation_polynomial,
                        ot_compose, roots_of_bias_map)
from src.errors import DomainError
from src.formula import builtin, builtin_arity, evaluate
from src.profile_algebra import IOTA, FunctionProfile, self_composition

NAND = evaluate(builtin('tau'), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.floats(min_value=-0.95, max_value=0.95), st.data())
def test_biased_spectrum_is_normalised(n, eta, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    spectrum = biased_spectrum(from_bits(n, bits), eta)
    assert spectrum.distribution.sum() == pytest.approx(1.0, abs=1e-9)


def test_unbiased_case_matches_uniform_profile():
    f = evaluate(builtin('g', 2), 4)
    bp = biased_profile(f, 0.0)
    prof = profile(f)
    assert bp.I_tilde == pytest.approx(float(prof.I), abs=1e-12)
    assert bp.H_tilde == pytest.approx(prof.H, abs=1e-12)
    assert bp.coord_influences.sum() == pytest.approx(bp.I_tilde, abs=1e-12)


def test_nand_at_golden_bias():
    bp = biased_profile(NAND, TAU_BIAS)
    assert bp.I_tilde == pytest.approx(8 * PHI ** 4, abs=1e-12)
    expected = 8 * (1 - 2 * PHI) + 10 * (4 * PHI - 3) * math.log2(PHI)
    assert bp.H_tilde == pytest.approx(expected, abs=1e-12)


def test_bias_vector_validation():
    with pytest.raises(DomainError):
        biased_spectrum(and_n(2), 1.0)
    with pytest.raises(DomainError):
        biased_spectrum(and_n(2), [0.1, 0.2, 0.3])


def test_biased_probability_is_exact():
    assert biased_probability(and_n(2), [Fraction(1, 3), Fraction(1, 2)]) == Fraction(1, 6)
    assert biased_probability(or_n(2), [Fraction(1, 3), Fraction(1, 2)]) == Fraction(2, 3)
    assert biased_probability(dictator(2, 2), [Fraction(1, 5), Fraction(3, 7)]) == Fraction(3, 7)


def test_ot_compose_reduces_to_meet():
    composed = ot_compose(and_n(2), [IOTA, IOTA])
    assert composed.p == Fraction(1, 4)
    assert float(composed.I) == pytest.approx(1.0, abs=1e-12)
    assert composed.H == pytest.approx(2.0, abs=1e-12)


def _nonconstant(rng, n):
    while True:
        bits = rng.integers(0, 2, 1 << n)
        if 0 < bits.sum() < bits.size:
            return from_bits(n, bits)


def test_ot_compose_matches_truth_tables():
    rng = np.random.default_rng(11)
    for _ in range(60):
        k = int(rng.integers(1, 4))
        outer = from_bits(k, rng.integers(0, 2, 1 << k))
        inner = [_nonconstant(rng, int(rng.integers(1, 4))) for _ in range(k)]
        direct = profile(compose_tables(outer, inner))
        predicted = ot_compose(outer, [profile(g) for g in inner])
        assert float(predicted.p) == pytest.approx(float(direct.p), abs=1e-12)
        assert float(predicted.I) == pytest.approx(float(direct.I), abs=1e-8)
        assert predicted.H == pytest.approx(direct.H, abs=1e-8)


def test_ot_compose_rejects_constant_inner():
    with pytest.raises(DomainError):
        ot_compose(and_n(2), [IOTA, FunctionProfile(p=Fraction(1), I=0, H=0.0)])
    with pytest.raises(DomainError):
        ot_compose(and_n(2), [IOTA])


def test_compose_levels_follow_self_composition():
    chain = compose_levels(NAND, IOTA, 3)
    expected = IOTA
    for level in chain[1:]:
        expected = self_composition(expected)
        assert float(level.p) == pytest.approx(float(expected.p), abs=1e-12)
        assert float(level.I) == pytest.approx(float(expected.I), abs=1e-9)
        assert level.H == pytest.approx(expected.H, abs=1e-9)


def test_expectation_polynomial():
    # AND_2 in the +-1 convention: E(rho) = 1/2 + rho - rho^2/2
    assert expectation_polynomial(and_n(2)) == [Fraction(1, 2), Fraction(1), Fraction(-1, 2)]
    assert expectation_polynomial(dictator(1)) == [Fraction(0), Fraction(1)]
    assert expectation_polynomial(parity(3)) == [0, 0, 0, Fraction(1)]


def test_nand_fixed_point_is_golden():
    scan = bias_fixed_points(NAND)
    assert not scan.degenerate
    assert len(scan.points) == 1
    point = scan.points[0]
    assert point.p == pytest.approx(PHI, abs=1e-10)
    assert point.derivative == pytest.approx(-2 * PHI, abs=1e-9)
    assert not point.attractive
    assert bias_residual(NAND, PHI) < 1e-12


def test_dictator_is_degenerate():
    scan = bias_fixed_points(dictator(2, 1))
    assert scan.degenerate and scan.points == []
    assert roots_of_bias_map([Fraction(0), Fraction(1)]) is None


def test_fixed_points_of_majority():
    maj = evaluate(builtin('g3'), builtin_arity('g3'))  # balanced, so rho = 0 is a root
    scan = bias_fixed_points(maj)
    assert any(abs(fp.eta) < 1e-10 for fp in scan.points)
    for fp in scan.points:
        assert bias_residual(maj, fp.p) < 1e-9


def test_constant_has_no_interior_fixed_point():
    assert bias_fixed_points(constant(2, True)).points == []
