"""
Profile algebra - the (p, I, H) calculus of read-once composition.

A FunctionProfile stores only Pr[f = true], the total influence and the
spectral entropy. That triple is closed under conjunction and disjunction of
functions on disjoint variable sets, under duality and under the fixed point
kappa = (lambda AND kappa)^dagger, so no spectra are carried around here.

Probabilities and influences stay exact (Fraction) whenever the inputs are
exact; entropies are floats.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from .errors import DomainError

Number = Union[Fraction, float, int]

# Slack allowed when float arithmetic lands marginally outside [0, 1]
_UNIT_SLACK = 1e-12


def _unit(p: Number, name: str = "p") -> Number:
    if p < 0:
        if p < -_UNIT_SLACK:
            raise DomainError(f"{name}={p} outside [0, 1]")
        return 0.0
    if p > 1:
        if p > 1 + _UNIT_SLACK:
            raise DomainError(f"{name}={p} outside [0, 1]")
        return 1.0
    return p


def h(p: Number) -> float:
    """Binary entropy in bits, with h(0) = h(1) = 0."""
    p = _unit(p)
    if p == 0 or p == 1:
        return 0.0
    p = float(p)
    q = 1.0 - p
    return -(p * math.log2(p) + q * math.log2(q))


def h_tilde(p: Number) -> float:
    """h(4p(1-p)), the entropy of the event S = {} under the spectral distribution."""
    p = _unit(p)
    return h(4 * p * (1 - p))


def psi(p: Number, q: Number) -> float:
    """Cross term of the conjunction entropy: h~(pq) + 4pq(h(p) + h(q) - h(pq))."""
    p = _unit(p)
    q = _unit(q, "q")
    pq = p * q
    return h_tilde(pq) + 4 * float(pq) * (h(p) + h(q) - h(pq))


@dataclass(frozen=True)
class FunctionProfile:
    """
    (p, I, H) of a Boolean function.

    Attributes:
        p: Pr[f = true] under uniform inputs
        I: total influence
        H: spectral entropy in bits
    """
    p: Number
    I: Number
    H: float

    def __post_init__(self):
        _unit(self.p)
        if self.I < 0:
            raise DomainError(f"negative influence {self.I}")
        if self.H < -_UNIT_SLACK:
            raise DomainError(f"negative entropy {self.H}")

    @property
    def E(self) -> Number:
        return 1 - 2 * self.p

    @property
    def V(self) -> Number:
        return 4 * self.p * (1 - self.p)

    @property
    def I_plus(self) -> Optional[Number]:
        """I / V, undefined (None) for constant functions."""
        if self.V == 0:
            return None
        return self.I / self.V

    @property
    def H_plus(self) -> Optional[float]:
        """(H - h~(p)) / V, undefined (None) for constant functions."""
        if self.V == 0:
            return None
        return (self.H - h_tilde(self.p)) / float(self.V)

    @property
    def ratio(self) -> Optional[float]:
        """H / I, or None when I = 0."""
        if self.I == 0:
            return None
        return self.H / float(self.I)


IOTA = FunctionProfile(p=Fraction(1, 2), I=Fraction(1), H=0.0)
TRUE_PROFILE = FunctionProfile(p=Fraction(1), I=Fraction(0), H=0.0)
FALSE_PROFILE = FunctionProfile(p=Fraction(0), I=Fraction(0), H=0.0)


def dual_profile(a: FunctionProfile) -> FunctionProfile:
    """Profile of f^dagger: same spectral distribution, bias flipped."""
    return FunctionProfile(p=1 - a.p, I=a.I, H=a.H)


def meet(a: FunctionProfile, b: FunctionProfile) -> FunctionProfile:
    """
    Profile of the conjunction of two functions on disjoint variables.

    Args:
        a: profile of f1
        b: profile of f2

    Returns:
        Profile with p = p1 p2, I = p2 I1 + p1 I2 and
        H = p2 (H1 - h~(p1)) + p1 (H2 - h~(p2)) + psi(p1, p2)
    """
    p1, p2 = a.p, b.p
    influence = p2 * a.I + p1 * b.I
    entropy = (float(p2) * (a.H - h_tilde(p1))
               + float(p1) * (b.H - h_tilde(p2))
               + psi(p1, p2))
    return FunctionProfile(p=p1 * p2, I=influence, H=max(entropy, 0.0))


def join(a: FunctionProfile, b: FunctionProfile) -> FunctionProfile:
    """Profile of the disjunction of two functions on disjoint variables."""
    r1, r2 = 1 - a.p, 1 - b.p
    influence = r2 * a.I + r1 * b.I
    entropy = (float(r2) * (a.H - h_tilde(a.p))
               + float(r1) * (b.H - h_tilde(b.p))
               + psi(r1, r2))
    return FunctionProfile(p=1 - r1 * r2, I=influence, H=max(entropy, 0.0))


def with_iota(a: FunctionProfile, kind: str) -> FunctionProfile:
    """
    Conjoin ('meet') or disjoin ('join') a fresh variable.

    Both give H = H/2 - h~(p)/2 + 2h(p); the influence is I/2 + p for meet and
    I/2 + 1 - p for join. Evaluated through meet/join with IOTA so the two
    agree to the last bit.
    """
    if kind == 'meet':
        return meet(IOTA, a)
    if kind == 'join':
        return join(IOTA, a)
    raise DomainError(f"kind must be 'meet' or 'join', got {kind!r}")


def solve_kappa(lam: FunctionProfile) -> FunctionProfile:
    """
    Profile of kappa defined by kappa = (lambda AND kappa)^dagger.

    With p = Pr[lambda] the fixed point has q = Pr[kappa] = 1/(1+p),
    I[kappa] = q I[lambda] / (1-p) and
    H[kappa] = q/(1-p) (H[lambda] - h~(p) + 4p h(p)) + h~(q).

    Raises:
        DomainError: lambda constant (V = 0), including p = 1
    """
    p = lam.p
    if lam.V == 0:
        raise DomainError(f"kappa recursion needs a non-constant lambda (p={p})")

    q = 1 / (1 + p)
    scale = q / (1 - p)
    influence = scale * lam.I
    entropy = float(scale) * (lam.H - h_tilde(p) + 4 * float(p) * h(p)) + h_tilde(q)
    return FunctionProfile(p=q, I=influence, H=entropy)


def iterate_kappa(start: FunctionProfile, levels: int) -> List[FunctionProfile]:
    """Return [F_0, ..., F_levels] with F_{k+1} = solve_kappa(F_k)."""
    chain = [start]
    for _ in range(levels):
        chain.append(solve_kappa(chain[-1]))
    return chain


def self_composition(lam: FunctionProfile) -> FunctionProfile:
    """(lambda AND lambda')^dagger for two disjoint copies, i.e. NAND of two copies."""
    return dual_profile(meet(lam, lam))
