"""
Boolean function core - truth tables, exact Walsh-Hadamard spectra, profiles.

Conventions used throughout the package:
- true = -1 and false = +1 as real values.
- Input x <-> integer index i. Bit j of i, counted from the most significant
  end (j = 1..n), is 0 iff x_j is true. Index 0 is the all-true input and
  N-1 the all-false input; the lexicographic initial segment of size s is
  exactly {0, ..., s-1}.
- Subsets S are bitmasks with the same bit order (variable 1 is the MSB).
- A truth-table bit of 1 means the output is true.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from .errors import DomainError
from .profile_algebra import FunctionProfile

MAX_VARS = 24


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """Dense truth table on n variables; `bits[i]` is 1 iff f(x_i) is true."""
    n: int
    bits: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VARS:
            raise DomainError(f"n={self.n} outside 1..{MAX_VARS}")
        if self.bits.shape != (1 << self.n,):
            raise DomainError(f"truth table length {self.bits.size} != 2^{self.n}")
        self.bits.setflags(write=False)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def signs(self) -> np.ndarray:
        """Real values in {-1, +1} (true = -1)."""
        return 1 - 2 * self.bits.astype(np.int64)

    @property
    def probability(self) -> Fraction:
        return Fraction(int(self.bits.sum()), self.N)

    def to_int(self) -> int:
        """Truth table as an integer, index 0 as the most significant bit."""
        return int(''.join('1' if b else '0' for b in self.bits), 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Integer coefficients A(S) = N * f^(S), indexed by subset bitmask."""
    n: int
    coeffs: np.ndarray

    @property
    def N(self) -> int:
        return 1 << self.n


@dataclass(frozen=True, eq=False)
class SpectralDistribution:
    """p_f(S) = A(S)^2 / N^2 as exact fractions."""
    n: int
    probs: Tuple[Fraction, ...]


def from_bits(n: int, bits: Sequence[int]) -> BooleanFunction:
    """
    Build a BooleanFunction from a 0/1 sequence of length 2^n.

    Args:
        n: number of variables, 1..24
        bits: output bits in index order (1 = true)

    Returns:
        BooleanFunction
    """
    if not 1 <= n <= MAX_VARS:
        raise DomainError(f"n={n} outside 1..{MAX_VARS}")
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if arr.size != (1 << n):
        raise DomainError(f"expected {1 << n} bits for n={n}, got {arr.size}")
    if arr.max(initial=0) > 1:
        raise DomainError("truth table entries must be 0 or 1")
    return BooleanFunction(n, arr.copy())


def constant(n: int, value: bool) -> BooleanFunction:
    return from_bits(n, np.full(1 << n, 1 if value else 0, dtype=np.uint8))


def and_n(n: int) -> BooleanFunction:
    """AND_n: true only on the all-true input (index 0)."""
    bits = np.zeros(1 << n, dtype=np.uint8)
    bits[0] = 1
    return from_bits(n, bits)


def or_n(n: int) -> BooleanFunction:
    """OR_n: false only on the all-false input (index N-1)."""
    bits = np.ones(1 << n, dtype=np.uint8)
    bits[-1] = 0
    return from_bits(n, bits)


def dictator(n: int, i: int = 1) -> BooleanFunction:
    """x_i as a function on n variables."""
    if not 1 <= i <= n:
        raise DomainError(f"variable {i} outside 1..{n}")
    idx = np.arange(1 << n)
    return from_bits(n, ((idx >> (n - i)) & 1) == 0)


def parity(n: int) -> BooleanFunction:
    """chi_[n]: true iff an odd number of inputs are true."""
    zeros = n - popcounts(n)
    return from_bits(n, (zeros & 1).astype(np.uint8))


def popcounts(n: int) -> np.ndarray:
    """Popcount of every index 0..2^n - 1."""
    pc = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        pc = np.concatenate((pc, pc + 1))
    return pc


def _fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly along the last axis (int64)."""
    a = np.array(values, dtype=np.int64)
    lead = a.shape[:-1]
    size = a.shape[-1]
    step = 1
    while step < size:
        a = a.reshape(lead + (-1, 2, step))
        x = a[..., 0, :]
        y = a[..., 1, :]
        a = np.stack((x + y, x - y), axis=-2).reshape(lead + (size,))
        step *= 2
    return a


def wht_spectrum(f: BooleanFunction) -> Spectrum:
    """
    Exact spectrum A(S) = sum_x f(x) chi_S(x) = N * f^(S).

    chi_S(x) = prod_{j in S} x_j; with the index convention x_j = +1 exactly
    when the index bit is 1, so A(S) = (-1)^|S| * WHT(f)(S).
    """
    raw = _fwht(f.signs)
    sign = 1 - 2 * (popcounts(f.n) & 1)
    return Spectrum(f.n, raw * sign)


def spectral_distribution(spectrum: Spectrum) -> SpectralDistribution:
    N2 = spectrum.N * spectrum.N
    return SpectralDistribution(
        spectrum.n, tuple(Fraction(int(a) * int(a), N2) for a in spectrum.coeffs))


def _entropy_terms(absvals: np.ndarray, n: int) -> np.ndarray:
    """Elementwise -p log2 p with p = A^2 / N^2 for |A| values; zero where A = 0."""
    absvals = np.asarray(absvals, dtype=np.int64)
    N = 1 << n
    with np.errstate(divide='ignore', invalid='ignore'):
        p = (absvals * absvals) / float(N * N)
        logs = np.where(absvals > 0, 2 * n - 2 * np.log2(np.maximum(absvals, 1)), 0.0)
    return p * logs


def entropy_from_coefficients(coeffs: np.ndarray, N: int) -> float:
    """
    Spectral entropy -sum p log2 p with p = A^2 / N^2, 0 log 0 = 0.

    The terms come from the same kernel batch_profiles uses and are added with
    math.fsum, so single and batch entropies agree exactly.
    """
    n = N.bit_length() - 1
    return math.fsum(_entropy_terms(np.abs(np.asarray(coeffs, dtype=np.int64)), n).tolist())


def influence_from_coefficients(coeffs: np.ndarray, n: int) -> Fraction:
    """Exact I = sum_S |S| A(S)^2 / N^2."""
    weights = np.asarray(coeffs, dtype=np.int64) ** 2
    total = int(np.dot(weights, popcounts(n)))
    N = 1 << n
    return Fraction(total, N * N)


def profile(f: BooleanFunction) -> FunctionProfile:
    """
    (p, I, H) of a truth table: p and I exact, H float.

    Derived E, V, I+, H+ are available on the returned FunctionProfile.
    """
    spectrum = wht_spectrum(f)
    return FunctionProfile(
        p=f.probability,
        I=influence_from_coefficients(spectrum.coeffs, f.n),
        H=entropy_from_coefficients(spectrum.coeffs, f.N),
    )


def _edge_differences(bits: np.ndarray, n: int) -> int:
    """Number of hypercube edges whose endpoints have different outputs."""
    total = 0
    for shift in range(n):
        step = 1 << shift
        pairs = bits.reshape(-1, 2, step)
        total += int(np.count_nonzero(pairs[:, 0, :] != pairs[:, 1, :]))
    return total


def average_sensitivity(f: BooleanFunction) -> Fraction:
    """(1/N) sum_x S_f(x); every sensitive edge is counted from both ends."""
    return Fraction(2 * _edge_differences(f.bits, f.n), f.N)


def is_monotone(f: BooleanFunction) -> bool:
    """True when switching any input from false to true never turns the output off."""
    for shift in range(f.n):
        pairs = f.bits.reshape(-1, 2, 1 << shift)
        # [:, 0, :] has the variable true, [:, 1, :] false
        if np.any(pairs[:, 0, :] < pairs[:, 1, :]):
            return False
    return True


def dual(f: BooleanFunction) -> BooleanFunction:
    """f^dagger(x) = not f(not x); negating every input reverses the index order."""
    return from_bits(f.n, 1 - f.bits[::-1])


def conditional_probability(f: BooleanFunction, g: BooleanFunction) -> Fraction:
    """Exact Pr[f = true | g = true]."""
    if f.n != g.n:
        raise DomainError(f"arity mismatch: {f.n} vs {g.n}")
    given = int(g.bits.sum())
    if given == 0:
        raise DomainError("conditioning on a function that is never true")
    both = int(np.count_nonzero(f.bits & g.bits))
    return Fraction(both, given)


def flip_entry(f: BooleanFunction, index: int) -> BooleanFunction:
    if not 0 <= index < f.N:
        raise DomainError(f"index {index} outside 0..{f.N - 1}")
    bits = f.bits.copy()
    bits[index] ^= 1
    return from_bits(f.n, bits)


def extend_with_dummy(f: BooleanFunction, k: int) -> BooleanFunction:
    """Add k trailing variables the function ignores."""
    if k < 0 or f.n + k > MAX_VARS:
        raise DomainError(f"cannot extend n={f.n} by {k} (cap {MAX_VARS})")
    return from_bits(f.n + k, np.repeat(f.bits, 1 << k))


def batch_profiles(tables: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Profiles of many truth tables at once.

    Args:
        tables: array of shape (M, 2^n) with 0/1 entries
        n: number of variables

    Returns:
        (ones, influence_numerators, entropies): count of true entries,
        integer I * N^2, and float H for each row
    """
    tables = np.asarray(tables, dtype=np.int64)
    signs = 1 - 2 * tables
    raw = _fwht(signs)
    sq = raw * raw
    infl = sq @ popcounts(n)
    terms = _entropy_terms(np.abs(raw), n)
    entropies = np.array([math.fsum(row) for row in terms.tolist()])
    return tables.sum(axis=1), infl, entropies


def read_truth_table(text: str) -> BooleanFunction:
    """
    Parse the two-line text format: 'n=<int>' then a hex string.

    The first hex digit covers indices 0..3 with index 0 at its most
    significant bit. For n < 2 one digit is used and its low bits are zero.
    """
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if len(lines) != 2 or not lines[0].startswith('n='):
        raise DomainError("truth table text must be 'n=<int>' followed by a hex line")
    try:
        n = int(lines[0][2:])
    except ValueError:
        raise DomainError(f"bad header {lines[0]!r}") from None
    if not 1 <= n <= MAX_VARS:
        raise DomainError(f"n={n} outside 1..{MAX_VARS}")

    N = 1 << n
    digits = lines[1].lower()
    expected = max(N // 4, 1)
    if len(digits) != expected:
        raise DomainError(f"expected {expected} hex digits for n={n}, got {len(digits)}")
    try:
        nibbles = np.array([int(c, 16) for c in digits], dtype=np.uint8)
    except ValueError:
        raise DomainError("non-hex character in truth table") from None
    bits = ((nibbles[:, None] >> np.array([3, 2, 1, 0], dtype=np.uint8)) & 1).reshape(-1)
    if N < 4:
        if bits[N:].any():
            raise DomainError("padding bits must be zero")
        bits = bits[:N]
    return from_bits(n, bits)


def write_truth_table(f: BooleanFunction) -> str:
    bits = f.bits.astype(np.uint8)
    if f.N < 4:
        bits = np.concatenate((bits, np.zeros(4 - f.N, dtype=np.uint8)))
    nibbles = bits.reshape(-1, 4) @ np.array([8, 4, 2, 1])
    return f"n={f.n}\n" + ''.join(format(int(v), 'x') for v in nibbles) + "\n"


def all_truth_tables(n: int) -> np.ndarray:
    """
    Every truth table on n variables, as a (2^N, N) uint8 array.

    Row c holds the table whose to_int() is c, so enumeration order is the
    integer order of truth tables.
    """
    if not 1 <= n <= 4:
        raise DomainError(f"exhaustive enumeration is limited to n <= 4, got {n}")
    N = 1 << n
    codes = np.arange(1 << N, dtype=np.int64)
    shifts = np.arange(N - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts) & 1).astype(np.uint8)


def compose_tables(F: BooleanFunction, inner: Sequence[BooleanFunction]) -> BooleanFunction:
    """
    Truth table of F(g_1(y^1), ..., g_k(y^k)) on disjoint, concatenated inputs.

    The variables of g_1 come first (most significant), then those of g_2, and so on.
    """
    if len(inner) != F.n:
        raise DomainError(f"F has {F.n} inputs but {len(inner)} inner functions were given")
    total = sum(g.n for g in inner)
    if total > MAX_VARS:
        raise DomainError(f"composed function needs {total} > {MAX_VARS} variables")

    idx = np.arange(1 << total, dtype=np.int64)
    outer = np.zeros_like(idx)
    shift = total
    for i, g in enumerate(inner, start=1):
        shift -= g.n
        value = g.bits[(idx >> shift) & (g.N - 1)].astype(np.int64)
        # F reads its i-th input as true (index bit 0) when g_i is true
        outer |= (1 - value) << (F.n - i)
    return from_bits(total, F.bits[outer])
