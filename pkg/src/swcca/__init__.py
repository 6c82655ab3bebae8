"""Sparse weighted canonical correlation analysis."""

__version__ = "0.1.0"

from .baselines import BaselineFit, PmdConfig, fit_l0_scca, fit_pmd
from .core import (
    DataMatrix,
    GroupLasso,
    HardCardinality,
    Lasso,
    SolverConfig,
    SwccaFit,
    center_columns,
    correlation_level,
    standardize_columns,
    weighted_objective,
)
from .datagen import generate_synthetic_1, generate_synthetic_2, support_recovery
from .errors import (
    ConfigError,
    ConstantColumn,
    DataError,
    DegenerateVariance,
    DimensionMismatch,
    InfeasibleRadius,
    InvalidK,
    NonFiniteValue,
    SolverError,
    SwccaError,
    ZeroProjection,
)
from .multiview import MultiviewFit, MultiviewProblem, fit_multiview, multiview_objective
from .penalties import fit_group, fit_l1
from .projections import (
    group_shrink_project,
    hard_project,
    hard_threshold,
    soft_threshold_project,
    top_k_support,
)
from .solver import SwccaProblem, fit, update_u, update_v, update_w
