#!/usr/bin/env python3
"""Tests for truth tables, spectra and exact profiles."""
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(str(Path(__file__).parent))

from src.bf_core import (all_truth_tables, and_n, average_sensitivity, batch_profiles,
                         compose_tables, conditional_probability, constant, dictator, dual,
                         extend_with_dummy, flip_entry, from_bits, is_monotone, or_n, parity,
                         profile, read_truth_table, spectral_distribution, wht_spectrum,
                         write_truth_table)
from src.errors import DomainError
from src.formula import evaluate, parse


@st.composite
def truth_tables(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    bits = draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    return from_bits(n, bits)


def test_and2_profile():
    prof = profile(and_n(2))
    assert prof.p == Fraction(1, 4)
    assert prof.I == 1
    assert prof.H == pytest.approx(2.0, abs=1e-12)


def test_and_true_only_on_all_true_input():
    f = and_n(3)
    assert f.bits[0] == 1 and f.bits[1:].sum() == 0
    assert or_n(3).bits[-1] == 0


def test_parity_has_single_top_coefficient():
    for n in range(1, 7):
        prof = profile(parity(n))
        assert prof.I == n
        assert prof.H == 0.0


def test_dictator_and_constant():
    assert profile(dictator(4, 2)).I == 1
    assert profile(dictator(4, 2)).p == Fraction(1, 2)
    prof = profile(constant(3, True))
    assert (prof.p, prof.I, prof.H) == (1, 0, 0.0)


def test_spectrum_of_dictator_is_plus_one_at_its_variable():
    # x1 true is -1, so f = x1 as a real function and A({1}) = N
    f = dictator(3, 1)
    coeffs = wht_spectrum(f).coeffs
    assert coeffs[0b100] == 8
    assert np.count_nonzero(coeffs) == 1


@settings(max_examples=60, deadline=None)
@given(truth_tables())
def test_parseval(f):
    assert sum(spectral_distribution(wht_spectrum(f)).probs) == 1


@settings(max_examples=60, deadline=None)
@given(truth_tables())
def test_influence_equals_average_sensitivity(f):
    assert profile(f).I == average_sensitivity(f)


@settings(max_examples=40, deadline=None)
@given(truth_tables())
def test_dual_keeps_spectral_distribution(f):
    a, b = profile(f), profile(dual(f))
    assert b.p == 1 - a.p
    assert b.I == a.I
    assert b.H == pytest.approx(a.H, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(truth_tables(max_n=5), st.integers(min_value=1, max_value=3))
def test_dummy_variables_change_nothing(f, k):
    a, b = profile(f), profile(extend_with_dummy(f, k))
    assert (a.p, a.I) == (b.p, b.I)
    assert b.H == pytest.approx(a.H, abs=1e-12)


def test_flip_entry_changes_exactly_one_bit():
    f = and_n(3)
    g = flip_entry(f, 5)
    assert int(np.count_nonzero(f.bits != g.bits)) == 1
    with pytest.raises(DomainError):
        flip_entry(f, 8)


def test_monotone():
    assert is_monotone(and_n(3))
    assert is_monotone(or_n(4))
    assert not is_monotone(parity(2))
    assert not is_monotone(evaluate(parse("!x1"), 1))


def test_conditional_probability():
    x1 = dictator(2, 1)
    assert conditional_probability(x1, or_n(2)) == Fraction(2, 3)
    with pytest.raises(DomainError):
        conditional_probability(x1, constant(2, False))


def test_truth_table_text_format():
    assert write_truth_table(and_n(2)) == "n=2\n8\n"
    assert write_truth_table(dictator(1)) == "n=1\n8\n"
    f = read_truth_table("n=3\nc0\n")
    assert f.bits.tolist() == [1, 1, 0, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("text", ["n=2\n88\n", "n=x\n8\n", "n=2\nz\n", "n=1\n9\n", "8\n"])
def test_truth_table_text_rejects(text):
    with pytest.raises(DomainError):
        read_truth_table(text)


@settings(max_examples=40, deadline=None)
@given(truth_tables(max_n=8))
def test_truth_table_text_reads_back(f):
    assert read_truth_table(write_truth_table(f)) == f


def test_from_bits_validation():
    with pytest.raises(DomainError):
        from_bits(2, [0, 1, 1])
    with pytest.raises(DomainError):
        from_bits(1, [0, 2])
    with pytest.raises(DomainError):
        from_bits(25, [0])


def test_all_truth_tables_order():
    tables = all_truth_tables(2)
    assert tables.shape == (16, 4)
    for code in (0, 1, 8, 15):
        assert from_bits(2, tables[code]).to_int() == code
    with pytest.raises(DomainError):
        all_truth_tables(5)


@pytest.mark.parametrize("n,step", [(3, 7), (4, 97)])
def test_batch_profiles_matches_single(n, step):
    N = 1 << n
    tables = all_truth_tables(n)[::step]
    ones, infl, entropies = batch_profiles(tables, n)
    for row, (o, i, e) in enumerate(zip(ones, infl, entropies)):
        prof = profile(from_bits(n, tables[row]))
        assert Fraction(int(o), N) == prof.p
        assert Fraction(int(i), N * N) == prof.I
        assert float(e) == prof.H


def test_compose_tables_matches_formula():
    f = dictator(1)
    g = or_n(2)
    composed = compose_tables(and_n(2), [f, g])
    assert composed == evaluate(parse("x1 & (x2 | x3)"), 3)
    nand = evaluate(parse("!(x1 & x2)"), 2)
    assert compose_tables(nand, [g, g]) == evaluate(parse("!((x1 | x2) & (x3 | x4))"), 4)


def test_and_entropy_closed_form():
    # f^(empty) = 1 - 2/N, every other coefficient is +-2/N
    for n in range(1, 8):
        N = 1 << n
        top = (1 - 2 / N) ** 2
        rest = (2 / N) ** 2
        direct = -top * math.log2(top) if top > 0 else 0.0
        direct += (N - 1) * -rest * math.log2(rest)
        assert profile(and_n(n)).H == pytest.approx(direct, abs=1e-12)
