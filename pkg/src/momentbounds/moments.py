"""Exact moment arithmetic on finite discrete distributions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadWeights,
    DegenerateDistribution,
    EmptyMixture,
    InvalidDistribution,
    NonFiniteValues,
    OrderOutOfRange,
    ZeroScale,
)

MAX_ORDER = 16
SUM_TOLERANCE = 1e-9
DROP_BELOW = 1e-15
MERGE_TOLERANCE = 1e-12


def _same_point(a: float, b: float) -> bool:
    return abs(a - b) <= MERGE_TOLERANCE * max(1.0, abs(a))


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite set of support points with probabilities.

    Construction canonicalizes the input: points are sorted ascending,
    near-equal values are merged, negligible masses are dropped and the
    probabilities are renormalized to sum to one.
    """

    values: tuple[float, ...]
    probabilities: tuple[float, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        values = [float(v) for v in self.values]
        probs = [float(p) for p in self.probabilities]
        if len(values) != len(probs):
            raise InvalidDistribution(
                f"values and probabilities differ in length ({len(values)} != {len(probs)})"
            )
        if not values:
            raise InvalidDistribution("distribution needs at least one support point")
        if not all(math.isfinite(v) for v in values):
            raise NonFiniteValues("support values must be finite")
        if not all(math.isfinite(p) for p in probs):
            raise InvalidDistribution("probabilities must be finite")
        if any(p < 0 for p in probs):
            raise InvalidDistribution("probabilities must be non-negative")
        total = math.fsum(probs)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistribution(f"probabilities sum to {total!r}, not 1")

        pairs = sorted((v, p) for v, p in zip(values, probs) if p >= DROP_BELOW)
        if not pairs:
            raise InvalidDistribution("every probability is negligible")
        merged_v: list[float] = []
        merged_p: list[list[float]] = []
        for v, p in pairs:
            if merged_v and _same_point(merged_v[-1], v):
                merged_p[-1].append(p)
            else:
                merged_v.append(v)
                merged_p.append([p])
        summed = [math.fsum(ps) for ps in merged_p]
        norm = math.fsum(summed)
        object.__setattr__(self, "values", tuple(merged_v))
        object.__setattr__(self, "probabilities", tuple(p / norm for p in summed))

    @classmethod
    def point(cls, value: float) -> DiscreteDistribution:
        return cls((value,), (1.0,))

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return math.fsum(p * x for x, p in zip(self.values, self.probabilities))

    def to_json_dict(self) -> dict:
        out: dict = {"values": list(self.values), "probabilities": list(self.probabilities)}
        if self.label is not None:
            out["label"] = self.label
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> DiscreteDistribution:
        try:
            values = obj["values"]
            probs = obj["probabilities"]
        except (KeyError, TypeError) as exc:
            raise InvalidDistribution(
                'distribution JSON needs "values" and "probabilities" arrays'
            ) from exc
        if not isinstance(values, list) or not isinstance(probs, list):
            raise InvalidDistribution('"values" and "probabilities" must be arrays')
        label = obj.get("label")
        if label is not None and not isinstance(label, str):
            raise InvalidDistribution('"label" must be a string')
        try:
            return cls(tuple(values), tuple(probs), label)
        except InvalidDistribution:
            raise
        except (TypeError, ValueError) as exc:
            raise InvalidDistribution(f"bad distribution entry: {exc}") from exc


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    std: float
    cov: float | None
    central_moments: tuple[float, ...]  # m_1 .. m_max_order
    standardized: tuple[float, ...]  # D_3 .. D_max_order, empty when std == 0

    @property
    def max_order(self) -> int:
        return len(self.central_moments)

    def central(self, n: int) -> float:
        if not 1 <= n <= self.max_order:
            raise OrderOutOfRange(f"central moment order {n} not in 1..{self.max_order}")
        return self.central_moments[n - 1]

    def standardized_moment(self, n: int) -> float:
        if not 3 <= n <= self.max_order:
            raise OrderOutOfRange(f"standardized order {n} not in 3..{self.max_order}")
        if self.std == 0.0:
            raise DegenerateDistribution(
                f"D_{n} is undefined for a distribution with zero variance"
            )
        return self.standardized[n - 3]

    @property
    def skewness(self) -> float:
        return self.standardized_moment(3)

    @property
    def kurtosis(self) -> float:
        return self.standardized_moment(4)


def summarize(dist: DiscreteDistribution, max_order: int = 4) -> MomentSummary:
    """Central and standardized moments up to ``max_order``.

    Uses two passes (mean first, then centered power sums) with compensated
    summation. ``cov`` is None for a zero mean; ``standardized`` is empty when
    the variance is zero and requesting any D_n then raises.
    """
    if not isinstance(max_order, int) or not 2 <= max_order <= MAX_ORDER:
        raise OrderOutOfRange(f"max_order must be an integer in 2..{MAX_ORDER}, got {max_order!r}")
    mu = dist.mean
    centered = [x - mu for x in dist.values]
    probs = dist.probabilities
    central = tuple(
        math.fsum(p * c**n for c, p in zip(centered, probs)) for n in range(1, max_order + 1)
    )
    m2 = central[1]
    std = math.sqrt(m2)
    cov = std / mu if mu != 0.0 else None
    if std > 0.0:
        standardized = tuple(central[n - 1] / m2 ** (n / 2) for n in range(3, max_order + 1))
    else:
        standardized = ()
    return MomentSummary(mu, std, cov, central, standardized)


def mixture(
    components: Sequence[tuple[DiscreteDistribution, float]],
) -> DiscreteDistribution:
    """Pool weighted components into one distribution."""
    if not components:
        raise EmptyMixture("mixture needs at least one component")
    weights = [float(w) for _, w in components]
    if any(not math.isfinite(w) or w < 0 for w in weights):
        raise BadWeights("mixture weights must be finite and non-negative")
    total = math.fsum(weights)
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise BadWeights(f"mixture weights sum to {total!r}, not 1")
    values: list[float] = []
    probs: list[float] = []
    for (dist, _), w in zip(components, weights):
        if w == 0.0:
            continue
        values.extend(dist.values)
        probs.extend(w * p for p in dist.probabilities)
    return DiscreteDistribution(tuple(values), tuple(probs))


def affine_transform(dist: DiscreteDistribution, c: float, d: float) -> DiscreteDistribution:
    """Map every support point x to c*x + d."""
    if c == 0:
        raise ZeroScale("scale factor must be non-zero")
    return DiscreteDistribution(
        tuple(c * x + d for x in dist.values), dist.probabilities, dist.label
    )


def pearson_gap(summary: MomentSummary) -> float:
    """D_4 - (D_3**2 + 1); non-negative for every distribution with variance."""
    return summary.kurtosis - (summary.skewness**2 + 1.0)


def batch_moments(
    values: np.ndarray, probs: np.ndarray, orders: Iterable[int]
) -> tuple[np.ndarray, np.ndarray, dict[int, np.ndarray]]:
    """Row-wise mean, std and standardized moments for stacked distributions.

    ``values`` and ``probs`` have shape (N, k); each row is one distribution.
    Same two-pass scheme as :func:`summarize`, vectorized over rows.
    """
    mean = np.einsum("ij,ij->i", probs, values)
    centered = values - mean[:, None]
    sq = centered * centered
    m2 = np.einsum("ij,ij->i", probs, sq)
    std = np.sqrt(m2)
    out = {}
    with np.errstate(divide="ignore", invalid="ignore"):
        for n in orders:
            if not 3 <= n <= MAX_ORDER:
                raise OrderOutOfRange(f"order {n} not in 3..{MAX_ORDER}")
            mn = np.einsum("ij,ij->i", probs, centered**n)
            out[n] = mn / m2 ** (n / 2)
    return mean, std, out
