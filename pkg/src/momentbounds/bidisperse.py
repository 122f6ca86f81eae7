"""Two-point (bidisperse) distributions: the extremal family for the bounds.

A bidisperse distribution takes value ``a_plus`` with probability ``q`` and
``a_minus`` with probability ``1 - q``, where ``a_minus < mean < a_plus``.
Its standardized moments depend on ``q`` alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    BadEta,
    ConvergenceFailure,
    InvalidBidisperse,
    NoSolution,
    NonPositiveCov,
    NonPositiveMean,
    OrderOutOfRange,
    ZeroZ,
)
from .moments import MAX_ORDER, DiscreteDistribution

SCAN_POINTS = 2**10
MAX_BISECTIONS = 2000


@dataclass(frozen=True)
class BidisperseSpec:
    a_minus: float
    a_plus: float
    q: float  # probability of a_plus

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.a_minus, self.a_plus, self.q)):
            raise InvalidBidisperse("bidisperse parameters must be finite")
        if not 0.0 < self.q < 1.0:
            raise InvalidBidisperse(f"q must lie in (0, 1), got {self.q!r}")
        mu = self.mean
        if not self.a_minus < mu < self.a_plus:
            raise InvalidBidisperse(
                f"need a_minus < mean < a_plus, got {self.a_minus!r}, {mu!r}, {self.a_plus!r}"
            )

    @property
    def mean(self) -> float:
        return (1.0 - self.q) * self.a_minus + self.q * self.a_plus

    @property
    def std(self) -> float:
        return (self.a_plus - self.a_minus) * math.sqrt(self.q * (1.0 - self.q))

    @property
    def eta(self) -> float:
        """Size ratio a_plus / a_minus; only meaningful for a positive a_minus."""
        if self.a_minus <= 0:
            raise InvalidBidisperse("size ratio is undefined unless a_minus > 0")
        return self.a_plus / self.a_minus

    def delta_form(self) -> DeltaForm:
        mu = self.mean
        if mu <= 0:
            raise NonPositiveMean("relative gaps need a positive mean")
        return DeltaForm((mu - self.a_minus) / mu, (self.a_plus - mu) / mu)

    def to_distribution(self) -> DiscreteDistribution:
        return DiscreteDistribution((self.a_minus, self.a_plus), (1.0 - self.q, self.q))


@dataclass(frozen=True)
class DeltaForm:
    """Gaps below and above the mean, both in units of the mean."""

    delta_minus: float
    delta_plus: float

    @property
    def cov(self) -> float:
        return math.sqrt(self.delta_minus * self.delta_plus)

    @property
    def q(self) -> float:
        return self.delta_minus / (self.delta_minus + self.delta_plus)


def _check_q(q: float) -> None:
    if not 0.0 < q < 1.0:
        raise InvalidBidisperse(f"q must lie in (0, 1), got {q!r}")


def _check_order(n: int, lowest: int = 3) -> None:
    if not isinstance(n, int) or not lowest <= n <= MAX_ORDER:
        raise OrderOutOfRange(f"order must be an integer in {lowest}..{MAX_ORDER}, got {n!r}")


def make_bidisperse(mean: float, eta: float, q: float) -> BidisperseSpec:
    """Build the two-point distribution with the given mean, size ratio and q."""
    if mean == 0:
        raise NonPositiveMean("mean must be non-zero")
    if not eta > 1:
        raise BadEta(f"eta must exceed 1 (got {eta!r}); use (1/eta, 1-q) instead")
    _check_q(q)
    denom = 1.0 - q + eta * q
    # negative means yield a_plus < a_minus, which BidisperseSpec rejects
    return BidisperseSpec(mean / denom, eta * mean / denom, q)


def cov_skew_of(spec: BidisperseSpec) -> tuple[float, float]:
    """Coefficient of variation and skewness of a bidisperse distribution."""
    mu = spec.mean
    if mu <= 0:
        raise NonPositiveMean("coefficient of variation needs a positive mean")
    s = math.sqrt(spec.q - spec.q * spec.q)
    return (spec.a_plus - spec.a_minus) * s / mu, (1.0 - 2.0 * spec.q) / s


def invert_skew(mean: float, cov: float, skew: float) -> BidisperseSpec:
    """The unique bidisperse distribution with given mean, CoV and skewness."""
    if not mean > 0:
        raise NonPositiveMean("mean must be positive")
    if not cov > 0:
        raise NonPositiveCov("coefficient of variation must be positive")
    m3 = math.sqrt(4.0 + skew * skew)
    q = (m3 - skew) / (2.0 * m3)
    a_plus = mean * (1.0 + 0.5 * cov * (skew + m3))
    a_minus = mean * (1.0 + 0.5 * cov * (skew - m3))
    return BidisperseSpec(a_minus, a_plus, q)


def dn_of_q(n: int, q: float) -> float:
    """Standardized moment D_n of any bidisperse distribution with P(a_plus) = q."""
    _check_order(n)
    _check_q(q)
    p = 1.0 - q
    return (p ** (n - 1) + (-1) ** n * q ** (n - 1)) / (q * p) ** (n / 2 - 1)


def _dn_of_z(n, z):
    # works elementwise on numpy arrays as well as on floats
    total = 0.0
    for i in range(1, n):
        term = z ** (2 * i - n)
        total = total + term if (n - i + 1) % 2 == 0 else total - term
    return total


def dn_of_z(n: int, z: float) -> float:
    """D_n as the alternating power sum in z = cov / (1 - a/mean).

    ``a`` is either support point of the bidisperse distribution; the sum is
    invariant under z -> -1/z, which swaps the two choices.
    """
    _check_order(n)
    if z == 0:
        raise ZeroZ("z must be non-zero")
    return float(_dn_of_z(n, float(z)))


def z_of_q(q: float) -> float:
    """z measured from a_minus for a bidisperse distribution with P(a_plus) = q."""
    _check_q(q)
    return math.sqrt((1.0 - q) / q)


def endpoints_from_q(mean: float, cov: float, q: float) -> tuple[float, float]:
    """(a_minus, a_plus) of the bidisperse distribution with given mean, CoV and q."""
    if not mean > 0:
        raise NonPositiveMean("mean must be positive")
    if not cov > 0:
        raise NonPositiveCov("coefficient of variation must be positive")
    _check_q(q)
    ratio = math.sqrt(q / (1.0 - q))
    return mean * (1.0 - cov * ratio), mean * (1.0 + cov / ratio)


def _bisect(f, lo: float, hi: float, f_lo_sign: float) -> float:
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fm = f(mid)
        if fm == 0:
            return mid
        if math.copysign(1.0, fm) == f_lo_sign:
            lo = mid
        else:
            hi = mid
    raise ConvergenceFailure(f"bisection did not converge on [{lo!r}, {hi!r}]")


def _roots_in_q(n: int, target: float) -> list[float]:
    def f(q: float) -> float:
        return dn_of_q(n, q) - target

    # endpoints carry the limits of D_n as q -> 0+ and q -> 1-
    left = math.inf
    right = math.inf if n % 2 == 0 else -math.inf
    points = [(0.0, left)]
    points += [(i / SCAN_POINTS, f(i / SCAN_POINTS)) for i in range(1, SCAN_POINTS)]
    points.append((1.0, right))

    roots = []
    for (qa, fa), (qb, fb) in zip(points, points[1:]):
        if fa == 0 and 0 < qa < 1:
            roots.append(qa)
        elif fa != 0 and fb != 0 and (fa > 0) != (fb > 0):
            roots.append(_bisect(f, qa, qb, math.copysign(1.0, fa)))
    return roots


def construct_with_moment(
    n: int, mean: float, cov: float, target: float
) -> list[BidisperseSpec]:
    """Bidisperse distributions with given mean, CoV and D_n.

    Skewness (n = 3) has a closed form. Odd n has exactly one solution since
    D_n decreases monotonically in q. Even n is symmetric under q -> 1 - q with
    minimum 1 at q = 1/2, giving zero, one or two solutions ordered by q.
    """
    _check_order(n)
    if not mean > 0:
        raise NonPositiveMean("mean must be positive")
    if not cov > 0:
        raise NonPositiveCov("coefficient of variation must be positive")
    if not math.isfinite(target):
        raise NoSolution(f"target D_{n} must be finite")
    if n == 3:
        return [invert_skew(mean, cov, target)]
    if n % 2 == 0 and target < 1.0:
        raise NoSolution(f"even standardized moments are at least 1, got target {target!r}")
    roots = _roots_in_q(n, target)
    if not roots:
        raise NoSolution(f"no bidisperse distribution has D_{n} = {target!r}")
    specs = []
    for q in roots:
        a_minus, a_plus = endpoints_from_q(mean, cov, q)
        specs.append(BidisperseSpec(a_minus, a_plus, q))
    return specs


def _check_gap_args(n: int, cov: float, delta_minus: float) -> None:
    _check_order(n, lowest=2)
    if not cov > 0:
        raise NonPositiveCov("coefficient of variation must be positive")
    if not delta_minus > 0:
        raise InvalidBidisperse("relative gap below the mean must be positive")


def mn_delta(n: int, cov: float, delta_minus: float) -> float:
    """m_n / mean**n at fixed CoV as a function of the relative lower gap."""
    _check_gap_args(n, cov, delta_minus)
    d2 = cov * cov
    q = delta_minus**2 / (delta_minus**2 + d2)
    return q * (d2 / delta_minus) ** n + (1.0 - q) * (-delta_minus) ** n


def mn_delta_derivative(n: int, cov: float, delta_minus: float) -> float:
    """Analytic derivative of :func:`mn_delta` with respect to the lower gap.

    Negative for every odd n. For even n it changes sign from negative to
    positive at ``delta_minus == cov``.
    """
    _check_gap_args(n, cov, delta_minus)
    d2 = cov * cov
    g = delta_minus
    g2 = g * g
    denom = (g2 + d2) ** 2
    first = (-1) ** n * d2 * g ** (n - 1) * ((n - 2) * g2 + n * d2)
    second = d2**n * g ** (1 - n) * ((n - 2) * d2 + n * g2)
    return (first - second) / denom
