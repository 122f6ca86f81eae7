"""Seeded Monte Carlo check of the moment bounds on a two-sided support.

Each CoV bin is filled independently. A bin draws random shapes with
:func:`sample_constrained`'s algorithm, then stretches or contracts each
shape about the mean to land on a CoV inside the bin. Stretching about the
mean keeps the mean and every standardized moment, and a shape is only
used if the required stretch keeps all points inside the support.

Randomness for (bin, k) comes from a splitmix64 chain seeded by the master
seed, so the output does not depend on how bins are scheduled.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .bounds import SupportBounds, cov_edge, status_for, two_sided_limits
from .errors import InvalidConfig, MomentBoundsError, SamplingExhausted
from .moments import DiscreteDistribution, batch_moments

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
BATCH = 4096
SAMPLE_ATTEMPTS = 10_000
VIOLATION_TOL = 1e-9
KEPT_COUNTEREXAMPLES = 20
THREADS_ENV = "MOMENT_BOUNDS_THREADS"

CSV_COLUMNS = (
    "delta_bin_lo",
    "delta_bin_hi",
    "order",
    "family",
    "n_samples",
    "n_discarded",
    "empirical_min",
    "empirical_max",
    "analytic_lower",
    "analytic_upper",
    "bound_status",
)


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *path: int) -> int:
    """Child seed for a position in the (bin, family) tree: s <- splitmix64(s ^ splitmix64(i))."""
    s = splitmix64(master & MASK64)
    for idx in path:
        s = splitmix64(s ^ splitmix64(idx))
    return s


def family_of(k: int) -> str:
    return "bidisperse" if k == 2 else "multipoint"


@dataclass(frozen=True)
class SweepConfig:
    support: SupportBounds
    mean: float
    orders: tuple[int, ...] = (3, 4, 5)
    bins: int = 50
    samples_per_bin: int = 2000
    k_values: tuple[int, ...] = (2, 3, 4)
    seed: int = 0
    # attempt budget per requested sample when filling a bin
    max_attempts_per_sample: int = 100_000

    def __post_init__(self) -> None:
        sup = self.support
        if not sup.two_sided:
            raise InvalidConfig("sweep needs both x_min and x_max")
        if not sup.x_min < self.mean < sup.x_max:
            raise InvalidConfig(f"mean {self.mean!r} must lie strictly inside the support")
        if not self.mean > 0:
            raise InvalidConfig("CoV binning needs a positive mean")
        if not self.orders or any(not 3 <= n <= 8 for n in self.orders):
            raise InvalidConfig(f"orders must be a non-empty subset of 3..8, got {self.orders}")
        if len(set(self.orders)) != len(self.orders):
            raise InvalidConfig("orders must not repeat")
        if self.bins < 4:
            raise InvalidConfig("need at least 4 bins")
        if self.samples_per_bin < 100:
            raise InvalidConfig("need at least 100 samples per bin")
        if 2 not in self.k_values or any(k < 2 for k in self.k_values):
            raise InvalidConfig("k_values must include 2 and contain only k >= 2")
        if len(set(self.k_values)) != len(self.k_values):
            raise InvalidConfig("k_values must not repeat")
        if not 0 <= self.seed <= MASK64:
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        if self.max_attempts_per_sample < 1:
            raise InvalidConfig("max_attempts_per_sample must be positive")

    @property
    def delta_edge(self) -> float:
        return cov_edge(self.mean, self.support)

    def bin_edges(self) -> np.ndarray:
        return np.linspace(0.0, self.delta_edge, self.bins + 1)

    def quotas(self) -> list[int]:
        base, extra = divmod(self.samples_per_bin, len(self.k_values))
        return [base + (1 if i < extra else 0) for i in range(len(self.k_values))]


@dataclass(frozen=True)
class Counterexample:
    order: int
    family: str
    delta: float
    value: float
    lower: float
    upper: float
    status: str
    distribution: DiscreteDistribution


@dataclass(frozen=True)
class SweepRecord:
    """Empirical extremes of one order for one family in one CoV bin.

    ``analytic_lower``/``analytic_upper`` are the loosest limits over the
    bin (evaluated at both edges); per-sample checks use each sample's own
    CoV and populate ``violations``.
    """

    delta_bin_lo: float
    delta_bin_hi: float
    order: int
    family: str
    n_samples: int
    n_discarded: int
    empirical_min: float
    empirical_max: float
    analytic_lower: float
    analytic_upper: float
    bound_status: str
    max_delta: float = math.nan
    value_at_max_delta: float = math.nan
    n_below: int = 0
    n_above: int = 0
    # smallest D4 - D3^2 - 1 over the same samples
    min_pearson_gap: float = math.nan
    violations: tuple[Counterexample, ...] = field(default=(), compare=False)

    @property
    def n_violations(self) -> int:
        return self.n_below + self.n_above


def sample_constrained(
    k: int,
    support: SupportBounds,
    mean: float,
    rng: np.random.Generator,
    max_attempts: int = SAMPLE_ATTEMPTS,
) -> DiscreteDistribution:
    """Random k-point distribution on the support with the given mean.

    Draws k-1 points uniformly on the support and flat-simplex
    probabilities, then solves the last point for the mean; redraws when
    that point falls outside the support.
    """
    if k < 2:
        raise InvalidConfig("k must be at least 2")
    if not support.two_sided:
        raise InvalidConfig("sampling needs both x_min and x_max")
    lo, hi = support.x_min, support.x_max
    if not lo < mean < hi:
        raise InvalidConfig(f"mean {mean!r} must lie strictly inside [{lo!r}, {hi!r}]")
    for _ in range(max_attempts):
        x = rng.uniform(lo, hi, k - 1)
        p = rng.dirichlet(np.ones(k))
        last = (mean - float(np.dot(p[:-1], x))) / p[-1]
        if lo <= last <= hi:
            return DiscreteDistribution(tuple(x) + (last,), tuple(p))
    raise SamplingExhausted(
        f"no valid {k}-point draw with mean {mean!r} on [{lo!r}, {hi!r}] "
        f"after {max_attempts} attempts"
    )


def _draw_shapes(k: int, n: int, lo: float, hi: float, mean: float, rng: np.random.Generator):
    x = rng.uniform(lo, hi, (n, k - 1))
    p = rng.dirichlet(np.ones(k), n)
    last = (mean - np.einsum("ij,ij->i", p[:, :-1], x)) / p[:, -1]
    values = np.concatenate([x, last[:, None]], axis=1)
    return values, p, (last >= lo) & (last <= hi)


def _fill_bin_family(
    config: SweepConfig, k: int, quota: int, lo_d: float, hi_d: float, top: bool, seed: int
) -> tuple[np.ndarray, np.ndarray, int]:
    """Accepted (values, probs) of shape (quota, k) plus the discard count."""
    rng = np.random.Generator(np.random.PCG64(seed))
    x_min, x_max = config.support.x_min, config.support.x_max
    mu = config.mean
    budget = quota * config.max_attempts_per_sample
    got_v: list[np.ndarray] = []
    got_p: list[np.ndarray] = []
    have = attempts = discarded = 0
    while have < quota:
        if attempts >= budget:
            raise SamplingExhausted(
                f"bin [{lo_d:.6g}, {hi_d:.6g}) k={k}: only {have}/{quota} samples "
                f"after {attempts} attempts"
            )
        with np.errstate(all="ignore"):
            values, probs, ok = _draw_shapes(k, BATCH, x_min, x_max, mu, rng)
        u = rng.uniform(size=BATCH)
        centered = values - mu
        raw_std = np.sqrt(np.einsum("ij,ij->i", probs, centered * centered))
        with np.errstate(divide="ignore", invalid="ignore"):
            room = np.where(
                centered > 0,
                (x_max - mu) / centered,
                np.where(centered < 0, (mu - x_min) / -centered, np.inf),
            )
            stretch_max = room.min(axis=1)
            reach = raw_std * stretch_max / mu
            ok &= (raw_std > 0) & (reach > lo_d)
            target = lo_d + u * (np.minimum(hi_d, reach) - lo_d)
            stretch = target * mu / raw_std
        stretched = np.clip(mu + stretch[:, None] * centered, x_min, x_max)
        mean_r, std_r, _ = batch_moments(stretched, probs, ())
        delta_r = std_r / mean_r
        in_bin = (delta_r >= lo_d) & ((delta_r <= hi_d) if top else (delta_r < hi_d))
        ok &= in_bin
        idx = np.flatnonzero(ok)
        need = quota - have
        if len(idx) >= need:
            used = idx[:need]
            examined = int(used[-1]) + 1
        else:
            used = idx
            examined = BATCH
        got_v.append(stretched[used])
        got_p.append(probs[used])
        have += len(used)
        attempts += examined
        discarded += examined - len(used)
    return np.concatenate(got_v), np.concatenate(got_p), discarded


def _envelope(n: int, config: SweepConfig, lo_d: float, hi_d: float) -> tuple[float, float]:
    mu = config.mean
    x_min, x_max = config.support.x_min, config.support.x_max
    lowers, uppers = [], []
    for d in (lo_d, hi_d):
        if d == 0.0:
            lowers.append(1.0 if n % 2 == 0 else -math.inf)
            uppers.append(math.inf)
            continue
        sigma = d * mu
        lower, upper = two_sided_limits(
            n, np.array([sigma / (mu - x_min)]), np.array([sigma / (x_max - mu)])
        )
        lowers.append(float(np.asarray(lower).ravel()[0]))
        uppers.append(float(np.asarray(upper).ravel()[0]))
    return min(lowers), max(uppers)


def _run_bin(config: SweepConfig, bin_index: int) -> list[SweepRecord]:
    edges = config.bin_edges()
    lo_d, hi_d = float(edges[bin_index]), float(edges[bin_index + 1])
    top = bin_index == config.bins - 1
    x_min, x_max = config.support.x_min, config.support.x_max

    by_family: dict[str, list] = {}
    for k_index, (k, quota) in enumerate(zip(config.k_values, config.quotas())):
        if quota == 0:
            continue
        seed = derive_seed(config.seed, bin_index, k_index)
        values, probs, discarded = _fill_bin_family(config, k, quota, lo_d, hi_d, top, seed)
        by_family.setdefault(family_of(k), []).append((values, probs, discarded))

    records = []
    for n in config.orders:
        status = status_for(n, config.support)
        env_lo, env_hi = _envelope(n, config, lo_d, hi_d)
        for family in ("bidisperse", "multipoint"):
            parts = by_family.get(family)
            if not parts:
                continue
            d_values, d_delta, n_samples, discarded = [], [], 0, 0
            bad: list[Counterexample] = []
            n_below = n_above = 0
            gap = math.inf
            for values, probs, disc in parts:
                mean_r, std_r, dn = batch_moments(values, probs, tuple(sorted({n, 3, 4})))
                vals = dn[n]
                gap = min(gap, float(np.min(dn[4] - dn[3] ** 2 - 1.0)))
                delta_r = std_r / mean_r
                lower, upper = two_sided_limits(n, std_r / (mean_r - x_min), std_r / (x_max - mean_r))
                lower = np.broadcast_to(lower, vals.shape)
                upper = np.broadcast_to(upper, vals.shape)
                tol_lo = VIOLATION_TOL * np.maximum(1.0, np.abs(lower))
                tol_hi = VIOLATION_TOL * np.maximum(1.0, np.abs(upper))
                below = vals < lower - tol_lo
                above = vals > upper + tol_hi
                n_below += int(below.sum())
                n_above += int(above.sum())
                viol = np.flatnonzero(below | above)
                for i in viol[: max(0, KEPT_COUNTEREXAMPLES - len(bad))]:
                    bad.append(
                        Counterexample(
                            n, family, float(delta_r[i]), float(vals[i]),
                            float(lower[i]), float(upper[i]), status,
                            DiscreteDistribution(tuple(values[i]), tuple(probs[i])),
                        )
                    )
                d_values.append(vals)
                d_delta.append(delta_r)
                n_samples += len(vals)
                discarded += disc
            vals = np.concatenate(d_values)
            deltas = np.concatenate(d_delta)
            i_top = int(np.argmax(deltas))
            if n_below or n_above:
                log.warning(
                    "%d %s samples violate D_%d limits in bin [%g, %g)",
                    n_below + n_above, family, n, lo_d, hi_d,
                )
            records.append(
                SweepRecord(
                    lo_d, hi_d, n, family, n_samples, discarded,
                    float(vals.min()), float(vals.max()), env_lo, env_hi, status,
                    float(deltas[i_top]), float(vals[i_top]), n_below, n_above, gap, tuple(bad),
                )
            )
    return records


def _workers_from_env() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise InvalidConfig(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise InvalidConfig(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def run_sweep(config: SweepConfig, workers: int | None = None) -> list[SweepRecord]:
    """Fill every CoV bin and compare its extremes with the analytic limits.

    Records are ordered by bin, then order, then family. ``workers`` defaults
    to the MOMENT_BOUNDS_THREADS environment variable (or 1); the result does
    not depend on it.
    """
    if workers is None:
        workers = _workers_from_env()
    bins = range(config.bins)
    if workers <= 1:
        per_bin = [_run_bin(config, b) for b in bins]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_bin = list(pool.map(_run_bin, [config] * config.bins, bins))
    return [rec for recs in per_bin for rec in recs]


def format_float(x: float) -> str:
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return format(x, ".17g")


def write_report(records: Sequence[SweepRecord], destination: str | os.PathLike) -> None:
    """Write records as CSV (one row per record)."""
    if not records:
        raise MomentBoundsError("no records to write")
    path = Path(destination)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in records:
                writer.writerow(
                    [
                        format_float(r.delta_bin_lo),
                        format_float(r.delta_bin_hi),
                        r.order,
                        r.family,
                        r.n_samples,
                        r.n_discarded,
                        format_float(r.empirical_min),
                        format_float(r.empirical_max),
                        format_float(r.analytic_lower),
                        format_float(r.analytic_upper),
                        r.bound_status,
                    ]
                )
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report to {path}: {exc.strerror}") from exc
