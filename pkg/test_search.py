#!/usr/bin/env python3
"""Tests for the exhaustive scans: named functions, base functions, balanced ratios."""
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

sys.path.append(str(Path(__file__).parent))

from src.bf_core import all_truth_tables, dual, from_bits, is_monotone, parity, profile
from src.errors import CheckFailed, DomainError
from src.search import (NAMED_TARGETS, canonical_codes, check_nand_leads, check_pruning,
                        monotone_codes,
                        search_balanced_ratio, search_biased_bases, tau_bound, verify_named)


def test_named_functions():
    rows = verify_named()
    assert rows['name'].tolist() == list(NAMED_TARGETS)
    assert (rows['C_margin'] > 0).all()
    assert rows.loc[rows['name'] == 'g4', 'I'].iloc[0] == Fraction(53, 32)


def test_canonical_codes_single_variable():
    # false ~ true under dualization; x1 and !x1 are self-dual
    assert canonical_codes(all_truth_tables(1), 1).tolist() == [0, 1, 2, 0]


@pytest.mark.parametrize("k", [2, 3])
def test_canonical_codes_are_class_invariants(k):
    tables = all_truth_tables(k)
    canon = canonical_codes(tables, k)
    assert (canon <= np.arange(tables.shape[0])).all()
    assert (canon[canon] == canon).all()
    for row in (1, 6, 7, tables.shape[0] - 2):
        f = from_bits(k, tables[row])
        assert canon[dual(f).to_int()] == canon[row]


def test_pruning_is_score_invariant():
    assert check_pruning(2, samples=16) == 16
    assert check_pruning(3, samples=8, seed=4) == 8


def test_nand_class_tops_two_input_bases():
    ranked = search_biased_bases(max_vars=2, top=5)
    assert ranked['bound'].iloc[0] == pytest.approx(tau_bound(), abs=1e-9)
    assert ranked['k'].iloc[0] == 2
    assert list(ranked['bound']) == sorted(ranked['bound'], reverse=True)


NAND_CODES = (0b0111, 0b0001)  # NAND and its dual NOR on two inputs


def test_nand_attains_the_top_score():
    ranked = search_biased_bases(max_vars=2, top=50, prune=False)
    lead = check_nand_leads(ranked)
    assert lead['k'] == 2
    assert lead['code'] in NAND_CODES
    assert lead['bound'] == pytest.approx(tau_bound(), abs=1e-9)


def test_ranking_without_nand_is_rejected():
    ranked = search_biased_bases(max_vars=2, top=50, prune=False)
    others = ranked[~ranked['code'].isin(NAND_CODES)]
    with pytest.raises(CheckFailed) as info:
        check_nand_leads(others)
    assert info.value.check == 'nand_attained'


def test_ranking_above_nand_is_rejected():
    ranked = search_biased_bases(max_vars=2, top=50, prune=False)
    majority = ranked.iloc[[0]].assign(k=3, code=0b00010111, bound=tau_bound() + 1e-6)
    ranked = pd.concat([ranked, majority], ignore_index=True)
    with pytest.raises(CheckFailed) as info:
        check_nand_leads(ranked)
    assert info.value.check == 'nand_optimal'


def test_pruning_keeps_the_best_bound():
    pruned = search_biased_bases(max_vars=2, top=1)
    full = search_biased_bases(max_vars=2, top=1, prune=False)
    assert pruned['bound'].iloc[0] == pytest.approx(full['bound'].iloc[0], abs=1e-12)


@pytest.mark.slow
def test_no_three_input_base_beats_nand():
    ranked = search_biased_bases(max_vars=3, top=3)
    assert ranked['bound'].iloc[0] <= tau_bound() + 1e-9


def test_search_arity_limit():
    with pytest.raises(DomainError):
        search_biased_bases(max_vars=5)


@pytest.mark.parametrize("n,count", [(0, 2), (1, 3), (2, 6), (3, 20), (4, 168), (5, 7581)])
def test_monotone_counts(n, count):
    codes = monotone_codes(n)
    assert codes.size == count
    assert np.unique(codes).size == count


def test_monotone_codes_are_monotone():
    for code in monotone_codes(3).tolist():
        bits = [(int(code) >> (7 - i)) & 1 for i in range(8)]
        assert is_monotone(from_bits(3, bits))
    with pytest.raises(DomainError):
        monotone_codes(7)


def test_balanced_two_variables_picks_parity():
    best = search_balanced_ratio(2)
    assert best.function == parity(2)
    assert best.candidates == 2
    assert best.C == 0.0


def test_balanced_four_variables_reaches_g2():
    best = search_balanced_ratio(4)
    assert best.C >= 6.0 - 1e-9
    assert best.function.probability == Fraction(1, 2)
    assert best.C == pytest.approx(profile(best.function).H / float(best.I - 1), abs=1e-12)


def test_balanced_five_variables_over_monotone_functions():
    best = search_balanced_ratio(5)
    assert is_monotone(best.function)
    assert best.function.probability == Fraction(1, 2)
    assert best.I > 1


@pytest.mark.parametrize("n", [0, 1, 7])
def test_balanced_search_limits(n):
    with pytest.raises(DomainError):
        search_balanced_ratio(n)
