#!/usr/bin/env python3
"""Tests for the lower-bound constructions and their series."""
import math
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent))

from src.bf_core import and_n, or_n
from src.biased import PHI
from src.errors import DomainError, FormulaSyntaxError
from src.bounds import (TARGETS, beta, beta_m, beta_simplified, inner_conditional_probability,
                        emit_beta_curves, fibonacci, fibonacci_binet, finite_level_ratio, gamma,
                        gamma_partial, general_biased_bound, iterate_q, iterated_level_ratio, lb1,
                        lb2, lb3, lb_gamma, maximize_beta, named_profile, perturbation_gap,
                        profile_expression, q_pi, table1, tau_function)
from src.lex import golden_profile, lex_profile_exact
from src.profile_algebra import IOTA, self_composition


def test_fibonacci_extension():
    assert [fibonacci(m) for m in range(-4, 7)] == [-3, 2, -1, 1, 0, 1, 1, 2, 3, 5, 8]
    for m in range(-10, 31):
        assert fibonacci_binet(m) == pytest.approx(fibonacci(m), rel=1e-9, abs=1e-9)
    with pytest.raises(DomainError):
        fibonacci(91)


@pytest.mark.parametrize("z", [Fraction(1, 2), Fraction(1, 3), Fraction(5, 7)])
def test_closed_form_matches_iteration(z):
    qs = iterate_q(z, 12)
    pi = Fraction(1)
    for m in range(0, 13):
        state = q_pi(z, m)
        assert state.q == qs[m]
        if m:
            pi *= qs[m]
        assert state.pi == pi
    assert q_pi(z, -1).pi == 1 / z
    assert q_pi(z, -2).pi == 1 / (1 - z)


def test_beta_levels():
    assert beta_m(0.3, 0) == 0.0
    assert beta_m(0.5, 1) == pytest.approx(2.0, abs=1e-15)
    assert beta_m(0.5, 2) > beta_m(0.5, 1)
    with pytest.raises(DomainError):
        beta_m(0.5, -1)


@pytest.mark.parametrize("z", [0.2, 0.5, 0.50168825, 0.8])
def test_beta_limit_and_simplified_form_agree(z):
    assert beta(z) == pytest.approx(beta_m(z, 200), abs=1e-11)
    assert beta_simplified(z) == pytest.approx(beta(z), abs=1e-9)


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8])
def test_finite_level_closed_form_matches_recursion(m):
    assert finite_level_ratio(IOTA, m) == pytest.approx(iterated_level_ratio(IOTA, m), abs=1e-9)
    start = lex_profile_exact(Fraction(2, 3)).profile
    assert finite_level_ratio(start, m) == pytest.approx(iterated_level_ratio(start, m), abs=1e-9)


def test_first_level_is_lex_two_thirds():
    assert finite_level_ratio(IOTA, 1) == pytest.approx(1.5 * math.log2(3), abs=1e-12)


def test_lb1():
    report = lb1()
    assert report.value == pytest.approx(4 + 3 * math.log(3, 4), abs=1e-12)
    assert report.passed
    assert 0 < report.margin < 1e-9


def test_lb2_exact_and_general_forms():
    report = lb2()
    assert report.passed
    assert report.target == TARGETS['lb2']
    general = general_biased_bound(tau_function(), PHI, lex=golden_profile(100))
    assert general == pytest.approx(report.value, abs=1e-9)


def test_general_bound_requires_fixed_point():
    with pytest.raises(DomainError):
        general_biased_bound(and_n(2), 0.3)
    with pytest.raises(DomainError):
        general_biased_bound(or_n(2), 1.0)


def test_lb3_and_start_independence():
    report = lb3()
    assert report.passed
    assert report.value == pytest.approx(beta(0.5), abs=1e-12)
    other = lb3(lex_profile_exact(Fraction(2, 3)).profile)
    assert other.value == pytest.approx(report.value, abs=1e-9)
    assert abs(finite_level_ratio(IOTA, 40) - report.value) < 1e-6


def test_maximize_beta():
    best = maximize_beta()
    assert best.unimodal
    assert best.z_star == pytest.approx(0.50168825, abs=1e-6)
    assert best.beta_star >= beta(0.5)
    with pytest.raises(DomainError):
        maximize_beta(window=(0.6, 0.4))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_gamma_partials_match_nand_recursion(m):
    level = IOTA
    for _ in range(m):
        level = self_composition(level)
    assert gamma_partial(0.5, m) == pytest.approx(level.ratio, abs=1e-9)


def test_gamma_second_level_by_hand():
    # T_2 has p = 7/16, I = 3/2
    assert gamma_partial(0.5, 2) == pytest.approx(2.216917, abs=1e-6)


def test_gamma_below_beta():
    assert gamma(2 / 3) < beta(2 / 3)
    report = lb_gamma()
    assert report.tolerance == 1e-5
    assert report.informational is True
    assert lb1().informational is False
    assert math.isfinite(report.value)
    with pytest.raises(DomainError):
        gamma_partial(0.5, 0)


def test_gamma_at_the_golden_fixed_point_matches_lb2():
    # NAND keeps p = Phi fixed, so the recursion from l<Phi> is the biased NAND bound
    lex = golden_profile(100)
    assert lb_gamma(lex.profile).value == pytest.approx(lb2(lex=lex).value, abs=1e-5)


def test_table1_rows():
    rows = table1(max_m=6)
    assert rows['m'].tolist() == [2, 3, 4, 5, 6]
    assert rows['C'].iloc[0] == pytest.approx(6.0, abs=1e-12)
    assert (rows['C_margin'].iloc[1:] > 0).all()
    assert rows['I'].iloc[1] == Fraction(13, 8)
    with pytest.raises(DomainError):
        table1(max_m=13)


def test_inner_conditional_and_perturbation():
    for m in range(2, 6):
        assert inner_conditional_probability(m) == Fraction(2, 3)
    gap = perturbation_gap(4)
    assert gap.influence_gap <= gap.influence_bound
    assert gap.entropy_gap <= gap.entropy_bound


def test_beta_curve_frame():
    frame = emit_beta_curves(levels=(1, 2), grid=4)
    assert list(frame.columns) == ['z', 'm', 'beta_m']
    assert len(frame) == 10
    ends = frame[frame['z'].isin([0.0, 1.0])]
    assert len(ends) == 4
    assert (ends['beta_m'] == 0.0).all()
    row = frame[(frame['z'] == 0.5) & (frame['m'] == 1)]
    assert row['beta_m'].iloc[0] == pytest.approx(2.0, abs=1e-15)


def test_named_profiles():
    assert named_profile('iota') is IOTA
    assert named_profile('lex2/3').I == Fraction(4, 3)
    assert named_profile('lex:1/2').p == Fraction(1, 2)
    with pytest.raises(DomainError):
        named_profile('nand')


def test_profile_expressions():
    assert profile_expression("iota & iota").p == Fraction(1, 4)
    kappa = profile_expression("kappa(iota)")
    assert (kappa.p, kappa.I) == (Fraction(2, 3), Fraction(4, 3))
    assert profile_expression("~lex:1/3").p == Fraction(2, 3)
    combined = profile_expression("formula:x1 & x2@2 | iota")
    assert combined.p == 1 - Fraction(3, 4) * Fraction(1, 2)
    assert profile_expression("iota | false").p == Fraction(1, 2)


def test_profile_expression_table_atom():
    seen = []

    def reader(path):
        seen.append(path)
        return and_n(2)

    prof = profile_expression("table:and.tt & true", read_table=reader)
    assert seen == ['and.tt']
    assert prof.p == Fraction(1, 4)


@pytest.mark.parametrize("text", ["iota &", "lex:abc", "nand", "iota )", "formula:x1@", "(iota"])
def test_profile_expression_errors(text):
    with pytest.raises(FormulaSyntaxError):
        profile_expression(text)
