"""
Lexicographic functions - finite truth tables and the limit objects l<mu>.

l_n<s> is true exactly on the first s inputs in index order. The limit
function l<mu> is reached bit by bit: writing mu = 0.b1 b2 ..., a 0 bit gives
l<mu> = x1 AND l<2mu> and a 1 bit gives l<mu> = x1 OR l<2mu - 1>, each time on
fresh variables. Every such step halves (I, H) and adds a constant that only
depends on the probability of the inner function, so periodic expansions
reduce to a one-dimensional affine fixed point.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .bf_core import MAX_VARS, BooleanFunction, all_truth_tables, batch_profiles, from_bits
from .errors import CheckFailed, DomainError
from .formula import And, Formula, Or, Var
from .profile_algebra import FunctionProfile, h, h_tilde

Rational = Union[Fraction, int]

FLOAT_MAX_BITS = 60
EXACT_MAX_BITS = 160
MIN_BITS = 8
FOUR_THIRDS = Fraction(4, 3)


@dataclass(frozen=True)
class BinaryExpansion:
    """
    mu = 0.(preperiod)(period)(period)... in binary.

    Dyadic rationals use period (0,); mu = 1 is period (1,).
    """
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise DomainError("period must be nonempty")
        if any(b not in (0, 1) for b in self.preperiod + self.period):
            raise DomainError("expansion digits must be 0 or 1")
        L = len(self.period)
        for d in range(1, L):
            if L % d == 0 and self.period == self.period[:d] * (L // d):
                raise DomainError(f"period {self.period} is a repetition of {self.period[:d]}")

    @classmethod
    def from_fraction(cls, mu: Rational) -> 'BinaryExpansion':
        """Exact expansion by long division, stopping at the first repeated remainder."""
        mu = Fraction(mu)
        if not 0 <= mu <= 1:
            raise DomainError(f"mu={mu} outside [0, 1]")
        if mu == 1:
            return cls((), (1,))

        r, d = mu.numerator, mu.denominator
        seen: Dict[int, int] = {}
        digits: List[int] = []
        while r not in seen:
            seen[r] = len(digits)
            r *= 2
            digits.append(r // d)
            r %= d
        start = seen[r]
        return cls(tuple(digits[:start]), tuple(digits[start:]))

    @property
    def value(self) -> Fraction:
        a, L = len(self.preperiod), len(self.period)
        pre = int(''.join(map(str, self.preperiod)) or '0', 2)
        per = int(''.join(map(str, self.period)), 2)
        return (pre + Fraction(per, (1 << L) - 1)) / (1 << a)

    @property
    def is_finite(self) -> bool:
        return self.period == (0,)

    def digit(self, k: int) -> int:
        """The k-th binary digit (k >= 1)."""
        a = len(self.preperiod)
        if k <= a:
            return self.preperiod[k - 1]
        return self.period[(k - a - 1) % len(self.period)]

    def one_positions(self, limit: int) -> List[int]:
        """Positions k <= limit of the 1 digits."""
        return [k for k in range(1, limit + 1) if self.digit(k)]

    def shifted(self, k: int) -> 'BinaryExpansion':
        """Expansion of the tail 0.b_{k+1} b_{k+2} ... ."""
        a = len(self.preperiod)
        if k <= a:
            return BinaryExpansion(self.preperiod[k:], self.period)
        j = (k - a) % len(self.period)
        return BinaryExpansion((), self.period[j:] + self.period[:j])


@dataclass(frozen=True)
class LexProfile:
    """
    (I, H) of l<mu>.

    The exact path has zero error bounds and a rational I; the truncated path
    reports the profile of l<mu_K> together with certified bounds on how far
    l<mu> can be from it.
    """
    mu: Union[Fraction, float]
    I: Union[Fraction, float]
    H: float
    error_bound_I: float = 0.0
    error_bound_H: float = 0.0
    bits: Optional[int] = field(default=None)

    def __post_init__(self):
        if self.I > FOUR_THIRDS + self.error_bound_I + 1e-12:
            raise CheckFailed("lex_influence_cap", f"I={float(self.I)} exceeds 4/3 at mu={self.mu}")
        if self.H < 0:
            raise CheckFailed("lex_entropy_sign", f"H={self.H} at mu={self.mu}")

    @property
    def profile(self) -> FunctionProfile:
        return FunctionProfile(p=self.mu, I=self.I, H=self.H)

    @property
    def I_upper(self) -> float:
        return float(self.I) + self.error_bound_I

    @property
    def H_lower(self) -> float:
        return self.H - self.error_bound_H


def lex_truth_table(n: int, s: int) -> BooleanFunction:
    """l_n<s>: true on indices 0..s-1."""
    if not 1 <= n <= MAX_VARS:
        raise DomainError(f"n={n} outside 1..{MAX_VARS}")
    N = 1 << n
    if not 0 <= s <= N:
        raise DomainError(f"s={s} outside 0..{N}")
    return from_bits(n, (np.arange(N) < s).astype(np.uint8))


def lex_size(n: int, mu: Union[Rational, float]) -> int:
    """floor(mu * 2^n), the initial segment size of l_n<mu>."""
    mu = Fraction(mu)
    if not 0 <= mu <= 1:
        raise DomainError(f"mu={mu} outside [0, 1]")
    return math.floor(mu * (1 << n))


def lex_formula(n: int, s: int) -> Formula:
    """
    Decision-list formula x1 o1 (x2 o2 (... (x_{n-1} o_{n-1} x_n))) for odd s.

    o_i is OR when bit i of s (MSB first, n bits) is 1 and AND when it is 0.
    """
    if not 1 <= n <= MAX_VARS:
        raise DomainError(f"n={n} outside 1..{MAX_VARS}")
    if s % 2 == 0 or not 0 < s < (1 << n):
        raise DomainError(f"decision-list form needs odd 0 < s < 2^n, got s={s}")
    node: Formula = Var(n)
    for i in range(n - 1, 0, -1):
        bit = (s >> (n - i)) & 1
        node = Or(Var(i), node) if bit else And(Var(i), node)
    return node


def prefix_weight_sum(s: int, n: int) -> int:
    """sum_{x < s} popcount(x), one term per bit position."""
    total = 0
    for b in range(n + 1):
        block = 1 << (b + 1)
        half = 1 << b
        total += (s // block) * half + max(0, s % block - half)
    return total


def hart_influence(n: int, s: int) -> Fraction:
    """
    Exact I[l_n<s>] = 2sn/N - (4/N) sum_{x<s} wt(x).

    A size-s initial segment has sn - 2W boundary edges with W the prefix
    weight sum, and every boundary edge is sensitive from both ends.
    """
    N = 1 << n
    if not 0 <= s <= N:
        raise DomainError(f"s={s} outside 0..{N}")
    return Fraction(2 * s * n - 4 * prefix_weight_sum(s, n), N)


def _hart_numerators(n: int, s: np.ndarray) -> np.ndarray:
    """Vectorised N * I[l_n<s>] for an array of segment sizes."""
    s = np.asarray(s, dtype=np.int64)
    weights = np.zeros_like(s)
    for b in range(n + 1):
        block = 1 << (b + 1)
        half = 1 << b
        weights += (s // block) * half + np.maximum(0, s % block - half)
    return 2 * s * n - 4 * weights


def influence_from_expansion(e: BinaryExpansion) -> Fraction:
    """
    I[l<mu>] = sum_i (k_i - 2i) 2^{1 - k_i} over the 1 digits at positions
    k_0 < k_1 < ..., summed in closed form over the repeating part.
    """
    total = Fraction(0)
    ones = 0
    for k, bit in enumerate(e.preperiod, start=1):
        if bit:
            total += Fraction(k - 2 * ones, 1 << (k - 1))
            ones += 1

    L0, L = len(e.preperiod), len(e.period)
    period_ones = [r for r, bit in enumerate(e.period, start=1) if bit]
    if not period_ones:
        return total

    x = Fraction(1, 1 << L)
    beta = L - 2 * len(period_ones)
    geometric = 1 / (1 - x)
    weighted = x / (1 - x) ** 2
    for j, r in enumerate(period_ones):
        alpha = L0 + r - 2 * ones - 2 * j
        w = Fraction(2, 1 << (L0 + r))
        total += w * (alpha * geometric + beta * weighted)
    return total


def parse_measure(text: str, exact: bool = False) -> Union[float, Fraction]:
    """
    Read a measure typed by a user.

    '2/3' and integers stay exact; anything with a decimal point or an
    exponent ('0.618', '1e-3') is a float. With exact=True floats are refused.

    Raises:
        DomainError: unreadable text, or a float when exact is requested
    """
    text = text.strip()
    is_float = '.' in text or 'e' in text.lower()
    if exact and is_float:
        raise DomainError(f"exact measure needs a fraction such as 2/3, got {text!r}")
    try:
        return float(text) if is_float else Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot read measure {text!r}")


def _step_constants(bit: int, inner_p: Fraction) -> Tuple[Fraction, float]:
    """Additive part of (I, H) when x1 is met (bit 0) or joined (bit 1) with l<inner_p>."""
    entropy = 2 * h(inner_p) - 0.5 * h_tilde(inner_p)
    influence = inner_p if bit == 0 else 1 - inner_p
    return influence, entropy


def lex_profile_exact(mu: Rational) -> LexProfile:
    """
    Exact profile of l<mu> for rational mu.

    The repeating part is solved as the fixed point of the composed bit steps
    X -> 2^{-L} X + C; the preperiod steps are then applied from the last digit
    back to the first. I is rational, H a float.
    """
    mu = Fraction(mu)
    e = BinaryExpansion.from_fraction(mu)
    L0, L = len(e.preperiod), len(e.period)

    # C = sum_j 2^{-(j-1)} c_j over the period digits
    influence = Fraction(0)
    entropy_terms = []
    for j in range(1, L + 1):
        inner = e.shifted(L0 + j).value
        di, dh = _step_constants(e.digit(L0 + j), inner)
        influence += di / (1 << (j - 1))
        entropy_terms.append(dh / (1 << (j - 1)))
    scale = 1 - Fraction(1, 1 << L)
    influence /= scale
    entropy = math.fsum(entropy_terms) / float(scale)

    for k in range(L0, 0, -1):
        di, dh = _step_constants(e.digit(k), e.shifted(k).value)
        influence = influence / 2 + di
        entropy = entropy / 2 + dh

    return LexProfile(mu=mu, I=influence, H=max(entropy, 0.0))


def _tail_sum(x: float, m: int) -> float:
    """sum_{k >= m} k x^k."""
    return x ** m * (m - (m - 1) * x) / (1 - x) ** 2


def truncation_error_bounds(bits: int) -> Tuple[float, float]:
    """(sum_{k>K} 2k 2^-k, sum_{k>K} 12k 2^{-k/2}) for K = bits."""
    m = bits + 1
    return 2 * _tail_sum(0.5, m), 12 * _tail_sum(2 ** -0.5, m)


def golden_bits(bits: int) -> int:
    """floor(Phi * 2^bits) for Phi = (sqrt 5 - 1)/2, exact via integer square root."""
    if bits < 0:
        raise DomainError("bits must be nonnegative")
    return (isqrt(5 << (2 * bits)) - (1 << bits)) // 2


def lex_profile_truncated(mu: Union[float, Rational], bits: int = FLOAT_MAX_BITS,
                          prefix: Optional[int] = None) -> LexProfile:
    """
    Profile of l<mu_K> with certified tail bounds towards l<mu>.

    Args:
        mu: target measure; a float allows at most 60 bits, a Fraction up to 160
        bits: truncation length K
        prefix: precomputed floor(mu * 2^K), e.g. golden_bits(K); allows up to 160 bits

    Returns:
        LexProfile with mu as given, float I and the two error bounds
    """
    exact = prefix is not None or isinstance(mu, (Fraction, int))
    cap = EXACT_MAX_BITS if exact else FLOAT_MAX_BITS
    if not MIN_BITS <= bits <= cap:
        raise DomainError(f"bits={bits} outside {MIN_BITS}..{cap}")
    if not 0 <= mu <= 1:
        raise DomainError(f"mu={mu} outside [0, 1]")

    if prefix is None:
        prefix = math.floor(Fraction(mu) * (1 << bits))
    if not 0 <= prefix <= (1 << bits):
        raise DomainError(f"prefix {prefix} does not fit {bits} bits")

    finite = lex_profile_exact(Fraction(prefix, 1 << bits))
    err_i, err_h = truncation_error_bounds(bits)
    return LexProfile(mu=mu, I=float(finite.I), H=finite.H,
                      error_bound_I=err_i, error_bound_H=err_h, bits=bits)


def golden_profile(bits: int = 100) -> LexProfile:
    """Truncated profile of l<Phi> from exact digits of Phi."""
    phi = (math.sqrt(5) - 1) / 2
    return lex_profile_truncated(phi, bits, prefix=golden_bits(bits))


def average_reads(n: int, s: int) -> Fraction:
    """
    Expected number of variables the decision list of l_n<s> reads.

    The list stops at the first x_i (i < n) that fixes the output, which is
    the first position where the input index and s differ; otherwise all n
    variables are read.
    """
    if not 1 <= n <= MAX_VARS:
        raise DomainError(f"n={n} outside 1..{MAX_VARS}")
    if s % 2 == 0 or not 0 < s < (1 << n):
        raise DomainError(f"average reads needs odd 0 < s < 2^n, got s={s}")

    diff = np.arange(1 << n, dtype=np.int64) ^ s
    length = np.zeros_like(diff)
    for b in range(n):
        length += (diff >> b) > 0
    reads = np.where(diff >= 2, n - length + 1, n)
    return Fraction(int(reads.sum()), 1 << n)


@dataclass(frozen=True)
class InfluenceScan:
    maximum: Fraction
    argmax: List[Fraction]
    attaining_four_thirds: List[Fraction]
    points: int


def influence_scan(grid_bits: int = 16, window: Tuple[Rational, Rational] = (0, 1),
                   max_denominator: int = 24) -> InfluenceScan:
    """
    Maximum of I[l<mu>] over the dyadic grid 2^-grid_bits and over every
    rational a/b (b <= max_denominator) in the closed window.

    Raises:
        CheckFailed: some point exceeds 4/3
    """
    lo, hi = Fraction(window[0]), Fraction(window[1])
    if not 0 <= lo <= hi <= 1:
        raise DomainError(f"window {window} not inside [0, 1]")
    if not 1 <= grid_bits <= 30:
        raise DomainError(f"grid_bits={grid_bits} outside 1..30")

    N = 1 << grid_bits
    first = math.ceil(lo * N)
    last = math.floor(hi * N)
    sizes = np.arange(first, last + 1, dtype=np.int64)
    numerators = _hart_numerators(grid_bits, sizes)

    candidates: Dict[Fraction, Fraction] = {}
    if sizes.size:
        top = int(numerators.max())
        for s in sizes[numerators == top].tolist():
            candidates[Fraction(s, N)] = Fraction(top, N)
        attaining = [Fraction(int(s), N) for s in sizes[3 * numerators == 4 * N].tolist()]
    else:
        attaining = []

    rationals = sorted({Fraction(a, b) for b in range(1, max_denominator + 1)
                        for a in range(0, b + 1) if lo <= Fraction(a, b) <= hi})
    for mu in rationals:
        value = influence_from_expansion(BinaryExpansion.from_fraction(mu))
        candidates[mu] = value
        if value == FOUR_THIRDS and mu not in attaining:
            attaining.append(mu)

    maximum = max(candidates.values())
    if maximum > FOUR_THIRDS:
        worst = [mu for mu, v in candidates.items() if v == maximum]
        raise CheckFailed("lex_influence_cap", f"I={maximum} > 4/3 at mu={worst[0]}")
    argmax = sorted(mu for mu, v in candidates.items() if v == maximum)
    return InfluenceScan(maximum=maximum, argmax=argmax,
                         attaining_four_thirds=sorted(attaining),
                         points=int(sizes.size) + len(rationals))


def dependence_probability(n: int, s: int, k: int) -> Fraction:
    """
    Probability over x_1..x_{k-1} that the restriction of l_n<s> still
    depends on x_k.
    """
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside 1..{n}")
    f = lex_truth_table(n, s)
    blocks = f.bits.reshape(1 << (k - 1), 2, 1 << (n - k))
    depends = np.any(blocks[:, 0, :] != blocks[:, 1, :], axis=1)
    return Fraction(int(depends.sum()), 1 << (k - 1))


def isoperimetric_slack(n: int, s: int) -> float:
    """I[l_n<s>] - 2 mu log2(1/mu) with mu = s/N; zero exactly at powers of two."""
    I = hart_influence(n, s)
    if s == 0:
        return float(I)
    mu = s / (1 << n)
    return float(I) + 2 * mu * math.log2(mu)


def harper_check(n: int = 4) -> pd.DataFrame:
    """
    Compare the least influence among all functions with s true inputs
    (s <= N/2) with I[l_n<s>].

    Returns:
        DataFrame with columns s, functions, min_influence, lex_influence, minimisers

    Raises:
        CheckFailed: some function beats the lexicographic one
    """
    N = 1 << n
    tables = all_truth_tables(n)
    ones, infl, _ = batch_profiles(tables, n)
    rows = []
    for s in range(N // 2 + 1):
        mask = ones == s
        best = int(infl[mask].min())
        lex = hart_influence(n, s)
        found = Fraction(best, N * N)
        if found < lex:
            raise CheckFailed("harper_minimality", f"n={n}, s={s}: found I={found} < {lex}")
        rows.append({
            's': s,
            'functions': int(mask.sum()),
            'min_influence': found,
            'lex_influence': lex,
            'minimisers': int(np.count_nonzero(infl[mask] == best)),
        })
    return pd.DataFrame(rows)
