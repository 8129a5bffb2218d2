"""
Boolean formula parsing, printing and evaluation.

Grammar (precedence ! > & > |, binary operators left-associative):

    expr   := term ('|' term)*
    term   := factor ('&' factor)*
    factor := '!' factor | '(' expr ')' | 'x' digits

Unicode aliases: '∧' for '&', '∨' for '|', '¬' for '!'.
"""
import re
from dataclasses import dataclass
from typing import List, Set, Tuple, Union

import numpy as np

from .bf_core import MAX_VARS, BooleanFunction, from_bits
from .errors import DomainError, FormulaSyntaxError


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    child: 'Formula'


@dataclass(frozen=True)
class And:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Or:
    left: 'Formula'
    right: 'Formula'


Formula = Union[Var, Not, And, Or]

_TOKEN = re.compile(r'\s*(?:(x\d+)|([&|!()∧∨¬]))')
_ALIASES = {'∧': '&', '∨': '|', '¬': '!'}


def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        m = _TOKEN.match(text, pos)
        if not m:
            offset = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FormulaSyntaxError(f"unexpected character {text[offset]!r}", offset)
        tok = m.group(1) or _ALIASES.get(m.group(2), m.group(2))
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(('<end>', len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Tuple[str, int]:
        return self.tokens[self.i]

    def take(self) -> Tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> Formula:
        node = self.term()
        while self.peek()[0] == '|':
            self.take()
            node = Or(node, self.term())
        return node

    def term(self) -> Formula:
        node = self.factor()
        while self.peek()[0] == '&':
            self.take()
            node = And(node, self.factor())
        return node

    def factor(self) -> Formula:
        tok, pos = self.take()
        if tok == '!':
            return Not(self.factor())
        if tok == '(':
            node = self.expr()
            closing, cpos = self.take()
            if closing != ')':
                raise FormulaSyntaxError("expected ')'", cpos)
            return node
        if tok.startswith('x'):
            index = int(tok[1:])
            if not 1 <= index <= MAX_VARS:
                raise FormulaSyntaxError(f"variable index {index} outside 1..{MAX_VARS}", pos)
            return Var(index)
        raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)


def parse(text: str) -> Formula:
    """Parse formula text into an AST."""
    parser = _Parser(text)
    node = parser.expr()
    tok, pos = parser.peek()
    if tok != '<end>':
        raise FormulaSyntaxError(f"unexpected token {tok!r}", pos)
    return node


def to_text(node: Formula) -> str:
    """Canonical ASCII text; parse(to_text(ast)) == ast."""
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Not):
        inner = to_text(node.child)
        if isinstance(node.child, (And, Or)):
            inner = f"({inner})"
        return f"!{inner}"
    if isinstance(node, And):
        left = to_text(node.left)
        right = to_text(node.right)
        if isinstance(node.left, Or):
            left = f"({left})"
        if isinstance(node.right, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    left = to_text(node.left)
    right = to_text(node.right)
    if isinstance(node.right, Or):
        right = f"({right})"
    return f"{left} | {right}"


def variables(node: Formula) -> Set[int]:
    if isinstance(node, Var):
        return {node.index}
    if isinstance(node, Not):
        return variables(node.child)
    return variables(node.left) | variables(node.right)


def max_variable(node: Formula) -> int:
    return max(variables(node))


def swap_connectives(node: Formula) -> Formula:
    """Exchange AND and OR throughout (computes the dual of a monotone formula)."""
    if isinstance(node, Var):
        return node
    if isinstance(node, Not):
        return Not(swap_connectives(node.child))
    left, right = swap_connectives(node.left), swap_connectives(node.right)
    return Or(left, right) if isinstance(node, And) else And(left, right)


def _truth(node: Formula, inputs: List[np.ndarray]) -> np.ndarray:
    if isinstance(node, Var):
        return inputs[node.index - 1]
    if isinstance(node, Not):
        return ~_truth(node.child, inputs)
    left = _truth(node.left, inputs)
    right = _truth(node.right, inputs)
    return (left & right) if isinstance(node, And) else (left | right)


def evaluate(node: Formula, n: int) -> BooleanFunction:
    """
    Truth table of a formula on n variables.

    Raises:
        DomainError: n below the largest variable index or above the cap
    """
    if not 1 <= n <= MAX_VARS:
        raise DomainError(f"n={n} outside 1..{MAX_VARS}")
    top = max_variable(node)
    if n < top:
        raise DomainError(f"formula uses x{top} but n={n}")

    idx = np.arange(1 << n, dtype=np.int64)
    # x_j is true exactly when index bit j (from the MSB) is 0
    inputs = [((idx >> (n - j)) & 1) == 0 for j in range(1, n + 1)]
    return from_bits(n, _truth(node, inputs).astype(np.uint8))


def _chain(op, indices: List[int]) -> Formula:
    node: Formula = Var(indices[0])
    for i in indices[1:]:
        node = op(node, Var(i))
    return node


def _clauses(*clauses: Tuple[int, ...]) -> Formula:
    node = _chain(Or, list(clauses[0]))
    for clause in clauses[1:]:
        node = And(node, _chain(Or, list(clause)))
    return node


def _big_g(m: int, offset: int = 0) -> Formula:
    """G_1(y1) = y1, G_{k+1}(y1, y2, ...) = y1 | (y2 & G_k(y3, ...))."""
    if m == 1:
        return Var(offset + 1)
    return Or(Var(offset + 1), And(Var(offset + 2), _big_g(m - 1, offset + 2)))


def _g_sequence(m: int) -> Formula:
    # (x1|x2) & (x3 | (x4 & (x5 | ... (x_{2m-1} | (x_{2m} & x1)))))
    inner: Formula = Var(1)
    for j in range(2 * m, 2, -1):
        inner = And(Var(j), inner) if j % 2 == 0 else Or(Var(j), inner)
    return And(Or(Var(1), Var(2)), inner)


BUILTIN_NAMES = ('AND', 'OR', 'g', 'g3', 'gprime3', 'g4', 'gprime4', 'G', 'tau', 'iota')


def builtin(name: str, param: int = 0) -> Formula:
    """
    Named constructions.

    Args:
        name: one of AND, OR (param = n), g (param = m, 2m variables),
              G (param = m, 2m-1 variables), g3, gprime3, g4, gprime4,
              tau (NAND of two variables), iota (x1)
        param: size parameter where applicable

    Returns:
        FormulaAst
    """
    if name in ('AND', 'OR'):
        if not 1 <= param <= MAX_VARS:
            raise DomainError(f"{name}_n needs 1 <= n <= {MAX_VARS}")
        return _chain(And if name == 'AND' else Or, list(range(1, param + 1)))
    if name == 'g':
        if param < 1 or 2 * param > MAX_VARS:
            raise DomainError(f"g_m needs 1 <= m and 2m <= {MAX_VARS}")
        return _g_sequence(param)
    if name == 'G':
        if param < 1 or 2 * param - 1 > MAX_VARS:
            raise DomainError(f"G_m needs 1 <= m and 2m-1 <= {MAX_VARS}")
        return _big_g(param)
    if name == 'g3':
        return _clauses((1, 2), (3, 4), (1, 3, 5), (3, 5, 6))
    if name == 'gprime3':
        return _clauses((1, 2), (3, 4), (1, 3, 5), (2, 4, 6))
    if name == 'g4':
        return _clauses((1, 2), (3, 4), (3, 5, 6), (1, 3, 5, 7), (3, 5, 7, 8))
    if name == 'gprime4':
        return _clauses((1, 2), (3, 4), (3, 5, 6), (1, 3, 5, 7), (2, 3, 6, 8))
    if name == 'tau':
        return Not(And(Var(1), Var(2)))
    if name == 'iota':
        return Var(1)
    raise DomainError(f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}")


def builtin_arity(name: str, param: int = 0) -> int:
    """Number of variables a builtin is defined on."""
    fixed = {'g3': 6, 'gprime3': 6, 'g4': 8, 'gprime4': 8, 'tau': 2, 'iota': 1}
    if name in fixed:
        return fixed[name]
    if name == 'g':
        return 2 * param
    if name == 'G':
        return 2 * param - 1
    return param
