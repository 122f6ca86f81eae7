"""Limits on standardized moments for distributions with bounded support.

Every limit is expressed through *relative spreads*: the standard deviation
divided by the distance from the mean to a support bound. Working with
spreads keeps the formulas regular when the mean is zero or negative.

For a spread ``s`` toward the lower bound the skewness floor is
``s - 1/s``; the upper bound contributes the reflected ceiling. Higher
orders reuse the alternating power sum from :mod:`.bidisperse`, evaluated at
the spreads.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from .bidisperse import _dn_of_z
from .errors import (
    DegenerateDistribution,
    InfeasibleSpread,
    InvalidSupport,
    MeanOutsideSupport,
    OrderOutOfRange,
)
from .moments import MAX_ORDER

PROVEN = "proven"
CONJECTURED = "conjectured"
FEASIBILITY_SLACK = 1e-12

Side = Literal["lower", "upper"]


@dataclass(frozen=True)
class SupportBounds:
    x_min: float | None = None
    x_max: float | None = None

    def __post_init__(self) -> None:
        for name in ("x_min", "x_max"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise InvalidSupport(f"{name} must be finite when given")
        if self.x_min is not None and self.x_max is not None and not self.x_min < self.x_max:
            raise InvalidSupport(f"need x_min < x_max, got {self.x_min!r} >= {self.x_max!r}")

    @property
    def two_sided(self) -> bool:
        return self.x_min is not None and self.x_max is not None


@dataclass(frozen=True)
class BoundInput:
    mean: float
    std: float
    support: SupportBounds = field(default_factory=SupportBounds)

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean):
            raise MeanOutsideSupport("mean must be finite")
        if not (math.isfinite(self.std) and self.std > 0):
            raise DegenerateDistribution("bounds need a positive, finite standard deviation")
        lo, hi = self.support.x_min, self.support.x_max
        if lo is not None and not self.mean > lo:
            raise MeanOutsideSupport(f"mean {self.mean!r} is not above x_min {lo!r}")
        if hi is not None and not self.mean < hi:
            raise MeanOutsideSupport(f"mean {self.mean!r} is not below x_max {hi!r}")


@dataclass(frozen=True)
class DeltaParams:
    """Spread parameters behind a report.

    ``spread_lower``/``spread_upper`` are std / distance-to-bound. The CoV-unit
    quantities (``delta0``, ``delta1``, ``delta2``, ``delta_edge``) are
    |1 - x_bound/mean| and friends, only populated for a positive mean.
    """

    spread_lower: float | None = None
    spread_upper: float | None = None
    delta0: float | None = None
    delta1: float | None = None
    delta2: float | None = None
    delta_edge: float | None = None


@dataclass(frozen=True)
class MomentBoundReport:
    order: int
    lower: float
    upper: float
    status: str
    delta_params: DeltaParams

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= value <= self.upper + tol


def relative_spread(mean: float, std: float, bound: float, side: Side) -> float:
    """std divided by the distance from the mean to ``bound``."""
    if side == "lower":
        if not mean > bound:
            raise MeanOutsideSupport(f"mean {mean!r} is not above lower bound {bound!r}")
        return std / (mean - bound)
    if side == "upper":
        if not mean < bound:
            raise MeanOutsideSupport(f"mean {mean!r} is not below upper bound {bound!r}")
        return std / (bound - mean)
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


def pearson_floor(skew: float) -> float:
    """Smallest kurtosis compatible with a given skewness."""
    return skew * skew + 1.0


def cov_edge(mean: float, support: SupportBounds) -> float:
    """Largest CoV any distribution on a two-sided support can have at this mean."""
    if not support.two_sided:
        raise InvalidSupport("the feasibility edge needs both x_min and x_max")
    BoundInput(mean, 1.0, support)  # mean-inside-support check only
    if not mean > 0:
        raise MeanOutsideSupport("CoV needs a positive mean")
    return math.sqrt((mean - support.x_min) * (support.x_max - mean)) / mean


def _check_feasible(inp: BoundInput) -> None:
    sup = inp.support
    if not sup.two_sided:
        return
    room = (inp.mean - sup.x_min) * (sup.x_max - inp.mean)
    if inp.std**2 > room * (1.0 + FEASIBILITY_SLACK):
        raise InfeasibleSpread(
            f"std {inp.std!r} exceeds the maximum {math.sqrt(room)!r} allowed by "
            f"support [{sup.x_min!r}, {sup.x_max!r}] at mean {inp.mean!r}"
        )


def _spreads(inp: BoundInput) -> tuple[float | None, float | None]:
    sup = inp.support
    s_lo = None if sup.x_min is None else relative_spread(inp.mean, inp.std, sup.x_min, "lower")
    s_hi = None if sup.x_max is None else relative_spread(inp.mean, inp.std, sup.x_max, "upper")
    return s_lo, s_hi


def _delta_params(inp: BoundInput, s_lo: float | None, s_hi: float | None) -> DeltaParams:
    mu = inp.mean
    sup = inp.support
    if mu <= 0:
        return DeltaParams(s_lo, s_hi)
    d_min = None if sup.x_min is None else abs(1.0 - sup.x_min / mu)
    d_max = None if sup.x_max is None else abs(1.0 - sup.x_max / mu)
    if d_min is not None and d_max is not None:
        d1, d2 = min(d_min, d_max), max(d_min, d_max)
        return DeltaParams(s_lo, s_hi, None, d1, d2, math.sqrt(d1 * d2))
    d0 = d_min if d_min is not None else d_max
    return DeltaParams(s_lo, s_hi, d0)


# Elementwise limit formulas; inputs are spreads (floats or arrays).


def odd_lower(n: int, s_lo):
    return _dn_of_z(n, s_lo)


def odd_upper(n: int, s_hi):
    return -_dn_of_z(n, s_hi)


def even_lower(n: int, s_big):
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(s_big <= 1.0, 1.0, _dn_of_z(n, np.maximum(s_big, 1.0)))


def even_upper(n: int, s_small):
    return _dn_of_z(n, s_small)


def _limits(n: int, s_lo: float | None, s_hi: float | None) -> tuple[float, float]:
    if n % 2:
        lower = -math.inf if s_lo is None else float(odd_lower(n, s_lo))
        upper = math.inf if s_hi is None else float(odd_upper(n, s_hi))
        return lower, upper
    present = [s for s in (s_lo, s_hi) if s is not None]
    lower = float(even_lower(n, max(present))) if present else 1.0
    upper = float(even_upper(n, min(present))) if len(present) == 2 else math.inf
    return lower, upper


def _report(n: int, inp: BoundInput, status: str) -> MomentBoundReport:
    _check_feasible(inp)
    s_lo, s_hi = _spreads(inp)
    lower, upper = _limits(n, s_lo, s_hi)
    return MomentBoundReport(n, lower, upper, status, _delta_params(inp, s_lo, s_hi))


def d3_limits(inp: BoundInput) -> MomentBoundReport:
    """Proven skewness interval for the given mean, std and support."""
    return _report(3, inp, PROVEN)


def d4_limits(inp: BoundInput) -> MomentBoundReport:
    """Kurtosis interval.

    The floor follows from the skewness limits and Pearson's inequality and
    is proven. With both bounds present the ceiling comes from the
    bidisperse family and the report is marked conjectured.
    """
    status = CONJECTURED if inp.support.two_sided else PROVEN
    return _report(4, inp, status)


def dn_conjectured_limits(n: int, inp: BoundInput) -> MomentBoundReport:
    if not isinstance(n, int) or not 5 <= n <= MAX_ORDER:
        raise OrderOutOfRange(f"order must be an integer in 5..{MAX_ORDER}, got {n!r}")
    return _report(n, inp, CONJECTURED)


def moment_limits(n: int, inp: BoundInput) -> MomentBoundReport:
    """Dispatch to the limit function for order ``n``."""
    if n == 3:
        return d3_limits(inp)
    if n == 4:
        return d4_limits(inp)
    return dn_conjectured_limits(n, inp)


def two_sided_limits(n: int, s_lo: np.ndarray, s_hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (lower, upper) for two-sided supports given both spread arrays."""
    if n % 2:
        return odd_lower(n, s_lo), odd_upper(n, s_hi)
    return even_lower(n, np.maximum(s_lo, s_hi)), even_upper(n, np.minimum(s_lo, s_hi))


def status_for(n: int, support: SupportBounds) -> str:
    if n == 3 or (n == 4 and not support.two_sided):
        return PROVEN
    return CONJECTURED


def report_to_json(report: MomentBoundReport) -> dict:
    return {
        "order": report.order,
        "lower": report.lower,
        "upper": report.upper,
        "status": report.status,
        "delta_params": asdict(report.delta_params),
    }
