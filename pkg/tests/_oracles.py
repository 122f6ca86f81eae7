"""Independent reference computations used by the tests.

Nothing here calls into the package under test except to construct inputs.
Moments are evaluated exactly with rationals (every float is a dyadic
rational), so the only rounding is the final conversion to float.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from momentbounds import DiscreteDistribution


def exact_mean(values, probs) -> Fraction:
    ps = [Fraction(p) for p in probs]
    total = sum(ps)
    return sum(Fraction(x) * p for x, p in zip(values, ps)) / total


def exact_central(values, probs, n: int) -> Fraction:
    ps = [Fraction(p) for p in probs]
    total = sum(ps)
    mu = sum(Fraction(x) * p for x, p in zip(values, ps)) / total
    return sum((Fraction(x) - mu) ** n * p for x, p in zip(values, ps)) / total


def exact_standardized(values, probs, n: int) -> float:
    """m_n / m_2**(n/2), correct to about one ulp."""
    m2 = exact_central(values, probs, 2)
    mn = exact_central(values, probs, n)
    if n % 2 == 0:
        return float(mn / m2 ** (n // 2))
    # odd: square to stay rational, take one square root at the end
    ratio_sq = mn * mn / m2**n
    return math.copysign(math.sqrt(float(ratio_sq)), mn)


def dist_of(values, probs) -> tuple[list[float], list[float]]:
    return list(values), list(probs)


def brute_dn_two_point(a_minus: float, a_plus: float, q: float, n: int) -> float:
    return exact_standardized((a_minus, a_plus), (1 - q, q), n)


def random_distribution(
    rng: np.random.Generator, k: int, lo: float = -10.0, hi: float = 10.0
) -> DiscreteDistribution:
    values = rng.uniform(lo, hi, k)
    probs = rng.dirichlet(np.ones(k))
    return DiscreteDistribution(tuple(values), tuple(probs))


def close(a: float, b: float, rel: float) -> bool:
    """Relative closeness on the natural O(1) scale of standardized moments."""
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


@st.composite
def distributions(draw, min_size: int = 2, max_size: int = 8, lo: float = -10.0):
    """Well-separated support points (gap >= 0.05) with weights >= 0.01 before normalizing."""
    k = draw(st.integers(min_size, max_size))
    start = draw(st.floats(lo, 0.0))
    gaps = draw(st.lists(st.floats(0.05, 5.0), min_size=k - 1, max_size=k - 1))
    values = [start]
    for g in gaps:
        values.append(values[-1] + g)
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=k, max_size=k))
    total = math.fsum(weights)
    return DiscreteDistribution(tuple(values), tuple(w / total for w in weights))
