"""Split a discrete distribution into two-point pieces that share its mean.

The reduction repeatedly replaces the two largest support points by their
probability-weighted average (which keeps the mean), decomposes the smaller
distribution, then expands every piece that uses the merged point back into
a three-point piece and splits that in two.

Pieces with the same support and the same mean are identical up to weight,
so they are pooled as the recursion unwinds. This keeps the number of pieces
below (#points under the mean) * (#points over the mean).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .bidisperse import BidisperseSpec
from .errors import (
    MeanDegenerate,
    NotThreePoints,
    TooFewPoints,
    TooManyPoints,
)
from .moments import DiscreteDistribution, mixture

MAX_POINTS = 64


@dataclass(frozen=True)
class PointMass:
    """All mass on a single value; only emitted for source mass sitting at the mean."""

    value: float

    @property
    def mean(self) -> float:
        return self.value

    def to_distribution(self) -> DiscreteDistribution:
        return DiscreteDistribution.point(self.value)


Component = Union[BidisperseSpec, PointMass]


@dataclass(frozen=True)
class MixtureDecomposition:
    mean: float
    components: tuple[tuple[Component, float], ...]

    @property
    def weight_sum(self) -> float:
        return math.fsum(w for _, w in self.components)

    def to_json_dict(self) -> dict:
        items = []
        for comp, w in self.components:
            d = comp.to_distribution()
            items.append(
                {"values": list(d.values), "probabilities": list(d.probabilities), "weight": w}
            )
        return {"mean": self.mean, "components": items}


# Internal pieces: key is (lo, hi) for a pair or (v,) for a point mass.
_Pieces = dict[tuple[float, ...], float]


def _split3(a: list[float], p: list[float], mu: float) -> list[tuple[tuple[float, ...], float]]:
    a1, a2, a3 = a
    p1, p2, p3 = p
    if not a1 < mu < a3:
        raise MeanDegenerate(f"mean {mu!r} does not lie strictly inside ({a1!r}, {a3!r})")
    q_a = (mu - a1) / (a3 - a1)  # weight of a3 inside the (a1, a3) piece
    if a2 == mu:
        w_a = p1 / (1.0 - q_a)
        out = [((a1, a3), w_a), ((a2,), p2)]
    elif a2 < mu:
        q_b = (mu - a2) / (a3 - a2)
        out = [((a1, a3), p1 / (1.0 - q_a)), ((a2, a3), p2 / (1.0 - q_b))]
    else:
        # mirror image: a1 is the only point below the mean
        q_b = (mu - a1) / (a2 - a1)
        out = [((a1, a3), p3 / q_a), ((a1, a2), p2 / q_b)]
    total = math.fsum(w for _, w in out)
    return [(key, w / total) for key, w in out]


def _add(pieces: _Pieces, key: tuple[float, ...], w: float) -> None:
    if w > 0.0:
        pieces[key] = pieces.get(key, 0.0) + w


def _decompose(a: list[float], p: list[float], mu: float) -> _Pieces:
    k = len(a)
    pieces: _Pieces = {}
    if k == 2:
        _add(pieces, (a[0], a[1]), 1.0)
        return pieces
    if k == 3:
        for key, w in _split3(a, p, mu):
            _add(pieces, key, w)
        return pieces

    lo_val, hi_val = a[-2], a[-1]
    merged_p = p[-2] + p[-1]
    frac_lo = p[-2] / merged_p
    merged = frac_lo * lo_val + (p[-1] / merged_p) * hi_val
    reduced = _decompose(a[:-2] + [merged], p[:-2] + [merged_p], mu)

    for key, w in reduced.items():
        if key[-1] != merged:
            _add(pieces, key, w)
            continue
        if len(key) == 1:
            _add(pieces, (lo_val, hi_val), w)
            continue
        lo = key[0]
        q = (mu - lo) / (merged - lo)
        tri_p = [1.0 - q, q * frac_lo, q * (1.0 - frac_lo)]
        for sub_key, sub_w in _split3([lo, lo_val, hi_val], tri_p, mu):
            _add(pieces, sub_key, w * sub_w)
    return pieces


def merge_last_two(dist: DiscreteDistribution) -> DiscreteDistribution:
    """Replace the two largest points by one point at their conditional mean."""
    if dist.size < 3:
        raise TooFewPoints(f"need at least 3 support points, got {dist.size}")
    a, p = dist.values, dist.probabilities
    merged_p = p[-2] + p[-1]
    merged = (p[-2] * a[-2] + p[-1] * a[-1]) / merged_p
    return DiscreteDistribution(a[:-2] + (merged,), p[:-2] + (merged_p,), dist.label)


def _to_components(pieces: _Pieces, mu: float) -> tuple[tuple[Component, float], ...]:
    total = math.fsum(pieces.values())
    out: list[tuple[Component, float]] = []
    for key in sorted(pieces):
        w = pieces[key] / total
        if len(key) == 1:
            out.append((PointMass(key[0]), w))
        else:
            lo, hi = key
            out.append((BidisperseSpec(lo, hi, (mu - lo) / (hi - lo)), w))
    return tuple(out)


def split_three_point(dist: DiscreteDistribution) -> MixtureDecomposition:
    if dist.size != 3:
        raise NotThreePoints(f"need exactly 3 support points, got {dist.size}")
    mu = dist.mean
    pieces: _Pieces = {}
    for key, w in _split3(list(dist.values), list(dist.probabilities), mu):
        _add(pieces, key, w)
    return MixtureDecomposition(mu, _to_components(pieces, mu))


def decompose(dist: DiscreteDistribution) -> MixtureDecomposition:
    """Weighted two-point pieces, each with the mean of ``dist``.

    Support points that sit exactly at the mean come out as point masses.
    """
    if dist.size < 2:
        raise TooFewPoints("decomposition needs at least 2 distinct support points")
    if dist.size > MAX_POINTS:
        raise TooManyPoints(f"at most {MAX_POINTS} support points supported, got {dist.size}")
    mu = dist.mean
    pieces = _decompose(list(dist.values), list(dist.probabilities), mu)
    return MixtureDecomposition(mu, _to_components(pieces, mu))


def recompose(decomposition: MixtureDecomposition) -> DiscreteDistribution:
    """Pool the weighted pieces back into one distribution."""
    return mixture([(comp.to_distribution(), w) for comp, w in decomposition.components])
