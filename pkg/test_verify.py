#!/usr/bin/env python3
"""Tests for the acceptance-check registry."""
import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent))

from src.verify import CHECKS, check_names, run_all, summarize


def test_registry_names():
    names = check_names()
    assert len(names) == len(set(names))
    for expected in ('table1', 'lb1', 'lb2', 'lb3', 'lex', 'composition', 'niho', 'search'):
        assert expected in names
    informational = {c.name for c in CHECKS if c.informational}
    assert informational == {'gamma_bounds', 'niho_small_field', 'average_reads'}


def test_fast_subset_passes():
    seen = []
    results = run_all({}, quick=True, only=['table1', 'lb1', 'and_profile', 'inner_balance'],
                      progress=seen.append)
    assert [r.name for r in results] == ['table1', 'lb1', 'and_profile', 'inner_balance']
    assert seen == results
    assert all(r.passed for r in results)
    assert summarize(results) == {'passed': 4, 'failed': 0, 'warned': 0}


def test_failures_are_collected_not_raised():
    results = run_all({'table1': {'max_m': 13}}, only=['table1'])
    assert len(results) == 1
    assert not results[0].passed
    assert summarize(results)['failed'] == 1
