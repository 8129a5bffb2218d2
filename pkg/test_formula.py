#!/usr/bin/env python3
"""Tests for the formula parser, printer, evaluator and named constructions."""
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

sys.path.append(str(Path(__file__).parent))

from src.bf_core import dual, profile
from src.errors import DomainError, FormulaSyntaxError
from src.formula import (And, Not, Or, Var, builtin, builtin_arity, evaluate, max_variable, parse,
                         swap_connectives, to_text, variables)

formulas = st.recursive(
    st.integers(min_value=1, max_value=5).map(Var),
    lambda children: st.one_of(
        children.map(Not),
        st.tuples(children, children).map(lambda t: And(*t)),
        st.tuples(children, children).map(lambda t: Or(*t)),
    ),
    max_leaves=12,
)


def test_precedence_and_associativity():
    assert parse("x1 & x2 | x3") == Or(And(Var(1), Var(2)), Var(3))
    assert parse("x1 | x2 & x3") == Or(Var(1), And(Var(2), Var(3)))
    assert parse("!x1 & x2") == And(Not(Var(1)), Var(2))
    assert parse("x1 | x2 | x3") == Or(Or(Var(1), Var(2)), Var(3))
    assert parse("(x1 | x2) & x3") == And(Or(Var(1), Var(2)), Var(3))


def test_unicode_aliases():
    assert parse("x1 ∧ ¬x2 ∨ x3") == parse("x1 & !x2 | x3")


@pytest.mark.parametrize("text,position", [
    ("x1 $ x2", 3),
    ("x1 & ", 5),
    ("(x1 & x2", 8),
    ("x1 x2", 3),
])
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.position == position


def test_variable_index_range():
    with pytest.raises(FormulaSyntaxError):
        parse("x0")
    with pytest.raises(FormulaSyntaxError):
        parse("x25")


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_printed_text_parses_back(node):
    assert parse(to_text(node)) == node


def test_canonical_text():
    assert to_text(parse("((x1)) & (x2 & x3)")) == "x1 & (x2 & x3)"
    assert to_text(parse("!(x1 | x2)")) == "!(x1 | x2)"


def test_evaluate_variable_convention():
    # index 0 is the all-true input, x1 is the most significant index bit
    assert evaluate(Var(1), 2).bits.tolist() == [1, 1, 0, 0]
    assert evaluate(Var(2), 2).bits.tolist() == [1, 0, 1, 0]
    with pytest.raises(DomainError):
        evaluate(Var(3), 2)


@settings(max_examples=60, deadline=None)
@given(formulas)
def test_swapping_connectives_gives_the_dual(node):
    n = max_variable(node)
    assert evaluate(swap_connectives(node), n) == dual(evaluate(node, n))


def test_variables():
    node = parse("x3 & !(x1 | x3)")
    assert variables(node) == {1, 3}
    assert max_variable(node) == 3


def test_g2_profile():
    prof = profile(evaluate(builtin('g', 2), 4))
    assert prof.p == Fraction(1, 2)
    assert prof.I == Fraction(3, 2)
    assert prof.H == pytest.approx(3.0, abs=1e-12)


def test_g_sequence_influence():
    for m in range(2, 6):
        prof = profile(evaluate(builtin('g', m), 2 * m))
        assert prof.I == (5 - Fraction(2) ** (3 - 2 * m)) / 3


def test_named_constructions_are_balanced():
    for name in ('g3', 'gprime3', 'g4', 'gprime4'):
        f = evaluate(builtin(name), builtin_arity(name))
        assert f.probability == Fraction(1, 2)


def test_big_g_and_tau():
    assert to_text(builtin('G', 2)) == "x1 | x2 & x3"
    assert profile(evaluate(builtin('tau'), 2)).p == Fraction(3, 4)
    assert builtin_arity('G', 3) == 5
    assert builtin_arity('AND', 7) == 7


def test_unknown_builtin():
    with pytest.raises(DomainError):
        builtin('xor')
    with pytest.raises(DomainError):
        builtin('g', 13)
