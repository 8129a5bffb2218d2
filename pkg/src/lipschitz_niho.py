"""
Single-entry Lipschitz behaviour of influence and spectral entropy.

Changing one truth-table entry moves I by at most 2n/N and H by at most
12n/sqrt(N). The Delta_k profile of the flip expresses the entropy change
exactly, and the trace function Tr(alpha^(2 sqrt N - 1)) over GF(2^n) shows
the entropy bound is tight up to a factor of order n.
"""
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
import pandas as pd

from .bf_core import (MAX_VARS, BooleanFunction, constant, from_bits, or_n, and_n, flip_entry,
                      profile, wht_spectrum)
from .errors import CheckFailed, DomainError

NIHO_DEGREES = (4, 8, 12)


def influence_gap(f: BooleanFunction, index: int) -> Tuple[Fraction, Fraction]:
    """
    |I[f] - I[g]| for g = f with one entry flipped, and the bound 2n/N.

    Raises:
        CheckFailed: the gap exceeds the bound
    """
    g = flip_entry(f, index)
    gap = abs(profile(f).I - profile(g).I)
    bound = Fraction(2 * f.n, f.N)
    if gap > bound:
        raise CheckFailed("influence_lipschitz", f"n={f.n}, index={index}: {gap} > {bound}")
    return gap, bound


def entropy_gap(f: BooleanFunction, index: int) -> Tuple[float, float]:
    """|H[f] - H[g]| for a single flipped entry, and the bound 12n/sqrt(N)."""
    g = flip_entry(f, index)
    gap = abs(profile(f).H - profile(g).H)
    bound = 12 * f.n / math.sqrt(f.N)
    if gap > bound:
        raise CheckFailed("entropy_lipschitz", f"n={f.n}, index={index}: {gap} > {bound}")
    return gap, bound


def normalize_flip(f: BooleanFunction, index: int) -> BooleanFunction:
    """Translate inputs so that `index` becomes N-1, the all-false input."""
    if not 0 <= index < f.N:
        raise DomainError(f"index {index} outside 0..{f.N - 1}")
    shift = index ^ (f.N - 1)
    return from_bits(f.n, f.bits[np.arange(f.N) ^ shift])


@dataclass(frozen=True, eq=False)
class DeltaProfile:
    """
    Delta_k = sum of sgn(a(S)) over the S with |a(S)| = 2k - 1, k = 1..N/2,
    where a = A_f - 1 for the flip normalised to the all-false input.
    """
    n: int
    deltas: np.ndarray

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def odd_values(self) -> np.ndarray:
        """2k - 1 for k = 1..N/2."""
        return 2 * np.arange(1, self.deltas.size + 1, dtype=np.int64) - 1

    def identities(self) -> Dict[str, Tuple[int, int]]:
        """Each identity as (left side, right side), all exact integers."""
        d = self.deltas.astype(object)
        odd = self.odd_values.astype(object)
        absd = np.abs(d)
        N = self.N
        return {
            'signed_sum': (int(np.sum(d * odd)), 0),
            'count': (int(np.sum(absd)), N),
            'second_moment': (int(np.sum(absd * odd * odd)), N * (N - 1)),
            'first_moment_squared': (int(np.sum(absd * odd)) ** 2, N ** 3),
        }

    def check(self):
        """
        Raises:
            CheckFailed: an identity is violated
        """
        ids = self.identities()
        lhs, rhs = ids['signed_sum']
        if lhs != rhs:
            raise CheckFailed("delta_signed_sum", f"{lhs} != 0")
        for name in ('count', 'second_moment'):
            lhs, rhs = ids[name]
            if lhs > rhs:
                raise CheckFailed(f"delta_{name}", f"{lhs} > {rhs}")
        lhs, rhs = ids['first_moment_squared']
        if lhs >= rhs:
            raise CheckFailed("delta_first_moment", f"{lhs} >= {rhs}")


def delta_profile(f: BooleanFunction, index: int) -> DeltaProfile:
    """
    Delta_k profile of flipping entry `index` of f from false to true.

    Raises:
        DomainError: f is already true at `index`
    """
    if f.bits[index]:
        raise DomainError(f"f is true at index {index}; flip the roles of f and g")
    normalized = normalize_flip(f, index)
    a = wht_spectrum(normalized).coeffs - 1
    if np.any(a % 2 == 0):
        raise CheckFailed("delta_odd_coefficients", "some a(S) is even")

    half = f.N // 2
    k = (np.abs(a) + 1) // 2
    deltas = np.zeros(half, dtype=np.int64)
    np.add.at(deltas, k - 1, np.sign(a))
    return DeltaProfile(f.n, deltas)


def entropy_difference_from_deltas(delta: DeltaProfile) -> float:
    """
    H[g] - H[f] from Delta_k alone:
    (8/N^2) sum_{k>=2} Delta_k (k^2 log2(k/(k-1)) + (2k-1) log2(k-1)).
    """
    N2 = float(delta.N) ** 2
    terms = []
    for k, d in enumerate(delta.deltas.tolist(), start=1):
        if k < 2 or d == 0:
            continue
        terms.append(d * (k * k * math.log2(k / (k - 1)) + (2 * k - 1) * math.log2(k - 1)))
    return 8 * math.fsum(terms) / N2


def epsilon_corollary(f: BooleanFunction, indices: Iterable[int]) -> Tuple[float, float]:
    """
    Flip several entries at once; the entropy moves by less than
    12 eps n sqrt(N) with eps the fraction of flipped entries.
    """
    indices = sorted(set(indices))
    bits = f.bits.copy()
    bits[indices] ^= 1
    g = from_bits(f.n, bits)
    eps = len(indices) / f.N
    gap = abs(profile(f).H - profile(g).H)
    bound = 12 * eps * f.n * math.sqrt(f.N)
    if indices and gap >= bound:
        raise CheckFailed("entropy_epsilon", f"{gap} >= {bound}")
    return gap, bound


def or_tightness(n: int) -> Tuple[Fraction, float]:
    """
    I[OR_n] - I[true] (equal to 2n/N) and H[OR_n] - H[true] (below 8n/N).
    """
    N = 1 << n
    target = or_n(n)
    base = constant(n, True)
    gap_i = profile(target).I - profile(base).I
    gap_h = profile(target).H - profile(base).H
    if gap_i != Fraction(2 * n, N):
        raise CheckFailed("or_influence_tight", f"n={n}: {gap_i} != {Fraction(2 * n, N)}")
    if gap_h >= 8 * n / N:
        raise CheckFailed("or_entropy", f"n={n}: {gap_h} >= {8 * n / N}")
    return gap_i, gap_h


def and_entropy_slack(n: int) -> float:
    """
    8(n - 1 + 1/ln 4)/N - H[AND_n], which lies strictly between 0 and 12n/N^2.
    """
    N = 1 << n
    slack = 8 * (n - 1 + 1 / math.log(4)) / N - profile(and_n(n)).H
    if not 0 < slack < 12 * n / N ** 2:
        raise CheckFailed("and_entropy_estimate", f"n={n}: slack {slack}")
    return slack


def _check_suite_size(n: Optional[int]):
    if n is not None and not 1 <= n <= MAX_VARS:
        raise DomainError(f"n={n} outside 1..{MAX_VARS}")


def lipschitz_suite(trials: int = 500, max_n: int = 12, seed: int = 0,
                    n: Optional[int] = None) -> pd.DataFrame:
    """
    Random single flips on random truth tables with 1 <= n <= max_n, or on
    exactly n variables when n is given.
    """
    _check_suite_size(n)
    rng = np.random.default_rng(seed)
    fixed_n = n
    rows = []
    for trial in range(trials):
        n = fixed_n if fixed_n is not None else int(rng.integers(1, max_n + 1))
        f = from_bits(n, rng.integers(0, 2, 1 << n))
        index = int(rng.integers(0, 1 << n))
        gap_i, bound_i = influence_gap(f, index)
        gap_h, bound_h = entropy_gap(f, index)
        rows.append({'trial': trial, 'n': n, 'index': index,
                     'influence_gap': gap_i, 'influence_bound': bound_i,
                     'entropy_gap': gap_h, 'entropy_bound': bound_h})
    return pd.DataFrame(rows)


def delta_suite(instances: int = 200, max_n: int = 10, seed: int = 0,
                tol: float = 1e-9, n: Optional[int] = None) -> pd.DataFrame:
    """
    Random false-to-true flips: identities checked exactly, and the entropy
    difference from Delta_k compared with the direct one. A given n fixes the
    number of variables instead of drawing it from 1..max_n.
    """
    _check_suite_size(n)
    rng = np.random.default_rng(seed)
    fixed_n = n
    rows = []
    for trial in range(instances):
        n = fixed_n if fixed_n is not None else int(rng.integers(1, max_n + 1))
        bits = rng.integers(0, 2, 1 << n).astype(np.uint8)
        false_entries = np.flatnonzero(bits == 0)
        if false_entries.size == 0:
            bits[int(rng.integers(0, 1 << n))] = 0
            false_entries = np.flatnonzero(bits == 0)
        index = int(rng.choice(false_entries))
        f = from_bits(n, bits)

        delta = delta_profile(f, index)
        delta.check()
        predicted = entropy_difference_from_deltas(delta)
        direct = profile(flip_entry(f, index)).H - profile(f).H
        if abs(predicted - direct) > tol:
            raise CheckFailed("delta_entropy_identity",
                              f"n={n}, index={index}: {predicted} vs {direct}")
        rows.append({'trial': trial, 'n': n, 'index': index,
                     'predicted': predicted, 'direct': direct})
    return pd.DataFrame(rows)


# ---------------------------------------------------------------------------
# GF(2^n) and the trace witness

def _clmul_mod(a: int, b: int, modulus: int, degree: int) -> int:
    result = 0
    top = 1 << degree
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return result


def _poly_mod(a: int, b: int) -> int:
    """Remainder of a modulo b as GF(2) polynomials."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if _poly_mod(poly, divisor) == 0:
            return False
    return True


class GaloisField:
    """GF(2^n) in polynomial basis; elements are ints below 2^n."""

    def __init__(self, n: int, modulus: int = None):
        if not 1 <= n <= 16:
            raise DomainError(f"field degree {n} outside 1..16")
        if modulus is None:
            modulus = next(m for m in range((1 << n) + 1, 1 << (n + 1), 2) if is_irreducible(m))
        if modulus.bit_length() - 1 != n or not is_irreducible(modulus):
            raise DomainError(f"modulus {modulus:#x} is not an irreducible polynomial of degree {n}")
        self.n = n
        self.modulus = modulus
        self.order = 1 << n

    def mul(self, a: int, b: int) -> int:
        return _clmul_mod(a, b, self.modulus, self.n)

    def pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def trace(self, a: int) -> int:
        """Tr(a) = a + a^2 + a^4 + ... + a^(2^(n-1)), always 0 or 1."""
        total = 0
        x = a
        for _ in range(self.n):
            total ^= x
            x = self.mul(x, x)
        if total not in (0, 1):
            raise CheckFailed("trace_range", f"Tr({a}) = {total}")
        return total


def niho(n: int, field: GaloisField = None) -> BooleanFunction:
    """
    Truth table of Tr(alpha^(2 sqrt N - 1)) on GF(2^n), n divisible by 4.

    Element a sits at input index (N-1) XOR a, so a coordinate bit of 1 means
    the variable is true and alpha = 0 is the all-false input.
    """
    if n not in NIHO_DEGREES:
        raise DomainError(f"n={n} not in {NIHO_DEGREES}")
    field = field or GaloisField(n)
    N = 1 << n
    r = 2 * math.isqrt(N) - 1
    bits = np.zeros(N, dtype=np.uint8)
    for a in range(N):
        bits[(N - 1) ^ a] = field.trace(field.pow(a, r))
    return from_bits(n, bits)


def spectrum_multiset(f: BooleanFunction) -> Counter:
    """Counts of the integer coefficients A(S) = N f^(S)."""
    return Counter(int(v) for v in wht_spectrum(f).coeffs)


def expected_niho_multiset(n: int) -> Counter:
    """Four-valued spectrum: -s, 0, s, 2s with multiplicities (N-s)/3, (N-s)/2, s, (N-s)/6, s = sqrt N."""
    N = 1 << n
    s = math.isqrt(N)
    return Counter({-s: (N - s) // 3, 0: (N - s) // 2, s: s, 2 * s: (N - s) // 6})


@dataclass(frozen=True)
class NihoGap:
    n: int
    gap: float
    threshold: float
    bound: float

    @property
    def exceeds_threshold(self) -> bool:
        return self.gap > self.threshold


def niho_gap(n: int, strict: bool = None) -> NihoGap:
    """
    H[g] - H[f] for f = niho(n) and g = f with alpha = 0 switched to true.

    The gap must stay within 12n/sqrt(N). With `strict` (the default for
    n >= 8) it must also exceed 8/(3 sqrt N); at n = 4 no single flip of
    this function gets there, so it is only reported.
    """
    f = niho(n)
    g = flip_entry(f, f.N - 1)
    gap = profile(g).H - profile(f).H
    root = math.sqrt(f.N)
    result = NihoGap(n=n, gap=gap, threshold=8 / (3 * root), bound=12 * n / root)
    if abs(gap) > result.bound:
        raise CheckFailed("niho_lipschitz", f"n={n}: |{gap}| > {result.bound}")
    if strict is None:
        strict = n >= 8
    if strict and not result.exceeds_threshold:
        raise CheckFailed("niho_gap", f"n={n}: {gap} <= {result.threshold}")
    return result
