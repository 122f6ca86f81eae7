"""Skewness, kurtosis and higher standardized-moment limits for bounded distributions."""

from .bidisperse import (
    BidisperseSpec,
    DeltaForm,
    construct_with_moment,
    cov_skew_of,
    dn_of_q,
    dn_of_z,
    endpoints_from_q,
    invert_skew,
    make_bidisperse,
    mn_delta,
    mn_delta_derivative,
)
from .bounds import (
    BoundInput,
    MomentBoundReport,
    SupportBounds,
    d3_limits,
    d4_limits,
    dn_conjectured_limits,
    moment_limits,
    pearson_floor,
    relative_spread,
)
from .decompose import MixtureDecomposition, PointMass, decompose, merge_last_two, recompose, split_three_point
from .errors import MomentBoundsError
from .moments import DiscreteDistribution, MomentSummary, affine_transform, mixture, summarize
from .sweep import SweepConfig, SweepRecord, run_sweep, sample_constrained, write_report

__version__ = "0.1.0"
