"""
Biased Fourier analysis and the composition lemma.

Under the eta-biased product measure each input x_i in {-1, +1} has mean
eta_i. The orthonormal characters are chi~_S = prod (x_i - eta_i)/sqrt(1 - eta_i^2)
and p~(S) = f~(S)^2 is again a probability distribution.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Union

import numpy as np
import sympy

from .bf_core import BooleanFunction, popcounts, wht_spectrum
from .errors import CheckFailed, DomainError
from .profile_algebra import FunctionProfile, Number

BIASED_MAX_VARS = 16
NORMALIZATION_TOL = 1e-9
ROOT_EPS = Fraction(1, 10 ** 12)
MERGE_RADIUS = 1e-9

PHI = (math.sqrt(5) - 1) / 2
TAU_BIAS = 1 - 2 * PHI


@dataclass(frozen=True, eq=False)
class BiasedSpectrum:
    n: int
    eta: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        total = float(np.sum(self.coeffs ** 2))
        if abs(total - 1) > NORMALIZATION_TOL:
            raise CheckFailed("biased_normalization", f"sum of squares {total} != 1")

    @property
    def distribution(self) -> np.ndarray:
        return self.coeffs ** 2


@dataclass(frozen=True, eq=False)
class BiasedProfile:
    I_tilde: float
    H_tilde: float
    coord_influences: np.ndarray


def _bias_vector(eta: Union[float, Sequence[float]], n: int) -> np.ndarray:
    vec = np.full(n, float(eta)) if np.isscalar(eta) else np.asarray(eta, dtype=float)
    if vec.shape != (n,):
        raise DomainError(f"bias vector has shape {vec.shape}, expected ({n},)")
    if np.any(np.abs(vec) >= 1):
        raise DomainError(f"every |eta_i| must be < 1, got {vec.tolist()}")
    return vec


def _axis_matrix(eta: float) -> np.ndarray:
    """Rows: S excludes / includes the axis. Columns: index bit 0 (x = -1) / 1 (x = +1)."""
    root = math.sqrt(1 - eta * eta)
    weights = np.array([(1 - eta) / 2, (1 + eta) / 2])
    chars = np.array([[1.0, 1.0], [(-1 - eta) / root, (1 - eta) / root]])
    return chars * weights


def biased_spectrum(f: BooleanFunction, eta: Union[float, Sequence[float]]) -> BiasedSpectrum:
    """
    f~(S) = E_{x~eta}[f(x) chi~_S(x)], one 2x2 transform per axis.

    Args:
        f: truth table with n <= 16
        eta: a common bias or one bias per variable, each in (-1, 1)

    Returns:
        BiasedSpectrum indexed by subset bitmask (variable 1 is the MSB)
    """
    if f.n > BIASED_MAX_VARS:
        raise DomainError(f"biased spectra are limited to n <= {BIASED_MAX_VARS}")
    vec = _bias_vector(eta, f.n)

    values = f.signs.astype(float).reshape((2,) * f.n)
    for axis in range(f.n):
        values = np.tensordot(_axis_matrix(vec[axis]), values, axes=([1], [axis]))
        values = np.moveaxis(values, 0, axis)
    return BiasedSpectrum(f.n, vec, values.reshape(-1))


def biased_profile(f: BooleanFunction, eta: Union[float, Sequence[float]]) -> BiasedProfile:
    """Biased total influence, entropy and per-coordinate influences."""
    spectrum = biased_spectrum(f, eta)
    probs = spectrum.distribution
    sizes = popcounts(f.n)

    positive = probs[probs > 0]
    entropy = math.fsum(np.sort(-positive * np.log2(positive)).tolist())
    coords = np.array([probs[(np.arange(f.N) >> (f.n - i)) & 1 == 1].sum()
                       for i in range(1, f.n + 1)])
    return BiasedProfile(I_tilde=float(probs @ sizes), H_tilde=max(entropy, 0.0),
                         coord_influences=coords)


def biased_probability(F: BooleanFunction, probs: Sequence[Number]) -> Number:
    """
    Pr[F true] when input i is independently true with probability probs[i].

    Exact when every probability is a Fraction.
    """
    if len(probs) != F.n:
        raise DomainError(f"F has {F.n} inputs but {len(probs)} probabilities were given")
    values: List[Number] = [int(b) for b in F.bits]
    # fold away the last variable (least significant index bit) first
    for p in reversed(probs):
        values = [values[j] * p + values[j + 1] * (1 - p) for j in range(0, len(values), 2)]
    return values[0]


def ot_compose(F: BooleanFunction, gs: Sequence[FunctionProfile]) -> FunctionProfile:
    """
    Profile of F(g_1, ..., g_k) on disjoint inputs.

    I = sum_i I~_i[F] I+[g_i] and H = sum_i I~_i[F] H+[g_i] + H~[F], with F
    analysed under the bias (E[g_1], ..., E[g_k]).

    Raises:
        DomainError: arity mismatch or a constant g_i
    """
    if len(gs) != F.n:
        raise DomainError(f"F has {F.n} inputs but {len(gs)} profiles were given")
    for i, g in enumerate(gs, start=1):
        if g.V == 0:
            raise DomainError(f"inner function {i} is constant")

    eta = [float(g.E) for g in gs]
    bp = biased_profile(F, eta)
    influence = math.fsum(float(w) * float(g.I_plus) for w, g in zip(bp.coord_influences, gs))
    entropy = math.fsum([float(w) * g.H_plus for w, g in zip(bp.coord_influences, gs)]
                        + [bp.H_tilde])
    p = biased_probability(F, [g.p for g in gs])
    return FunctionProfile(p=p, I=influence, H=max(entropy, 0.0))


def compose_levels(F: BooleanFunction, base: FunctionProfile, levels: int) -> List[FunctionProfile]:
    """[F_0, ..., F_levels] with F_0 = base and F_{k+1} = F(F_k, ..., F_k)."""
    chain = [base]
    for _ in range(levels):
        chain.append(ot_compose(F, [chain[-1]] * F.n))
    return chain


def expectation_polynomial(g: BooleanFunction) -> List[Fraction]:
    """
    Coefficients c_0..c_n of E_g(rho) = sum_d c_d rho^d (E in the +-1 convention).

    c_d sums the Fourier coefficients of level d, exactly.
    """
    spectrum = wht_spectrum(g)
    sizes = popcounts(g.n)
    return [Fraction(int(spectrum.coeffs[sizes == d].sum()), g.N) for d in range(g.n + 1)]


@dataclass(frozen=True)
class FixedPoint:
    eta: float
    derivative: float
    attractive: bool

    @property
    def p(self) -> float:
        """Probability of true at this bias."""
        return (1 - self.eta) / 2


@dataclass(frozen=True)
class FixedPointScan:
    points: List[FixedPoint]
    degenerate: bool


def _derivative(coeffs: Sequence[Fraction], x: float) -> float:
    return sum(d * float(c) * x ** (d - 1) for d, c in enumerate(coeffs) if d)


def roots_of_bias_map(coeffs: Sequence[Fraction]) -> Optional[List[float]]:
    """
    Real roots of E(rho) - rho strictly inside (-1, 1), or None when E is the identity.

    Isolation is exact on the rational polynomial, so double roots are found too.
    """
    shifted = list(coeffs) + [Fraction(0)] * max(0, 2 - len(coeffs))
    shifted[1] -= 1
    x = sympy.Symbol('x')
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(shifted)],
                      x, domain='QQ')
    if poly.is_zero:
        return None
    if poly.degree() <= 0:
        return []

    eps = sympy.Rational(ROOT_EPS.numerator, ROOT_EPS.denominator)
    roots: List[float] = []
    for (a, b), _mult in poly.intervals(eps=eps, inf=-1, sup=1):
        r = float((a + b) / 2)
        if not -1 + MERGE_RADIUS < r < 1 - MERGE_RADIUS:
            continue
        if roots and abs(r - roots[-1]) < MERGE_RADIUS:
            continue
        roots.append(r)
    return sorted(roots)


def fixed_points_from_roots(coeffs: Sequence[Fraction], roots: Sequence[float]) -> List[FixedPoint]:
    """Tag each root with E_g' there; attractive iff |E_g'| < 1."""
    points = []
    for r in roots:
        slope = _derivative(coeffs, r)
        points.append(FixedPoint(eta=r, derivative=slope, attractive=abs(slope) < 1))
    return points


def bias_fixed_points(g: BooleanFunction) -> FixedPointScan:
    """
    Interior fixed points of E_g(rho) = rho, each tagged attractive iff |E_g'| < 1.

    The identity map (g a dictator) has every rho as a fixed point and is
    reported as degenerate with no points.
    """
    if g.n > BIASED_MAX_VARS:
        raise DomainError(f"fixed point scans are limited to n <= {BIASED_MAX_VARS}")
    coeffs = expectation_polynomial(g)
    roots = roots_of_bias_map(coeffs)
    if roots is None:
        return FixedPointScan(points=[], degenerate=True)

    return FixedPointScan(points=fixed_points_from_roots(coeffs, roots), degenerate=False)


def bias_residual(g: BooleanFunction, p: float) -> float:
    """|Pr[g true] - p| when every input is true with probability p; zero at a fixed point."""
    return abs(float(biased_probability(g, [p] * g.n)) - p)
