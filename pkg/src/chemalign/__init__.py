"""Dataset alignment toolkit for molecular embedding features.

Quantifies how well an upstream (pretraining) dataset's node-level
feature distribution matches a downstream target via a Fréchet distance
over means and covariances, measures feature expressivity via spectral
effective rank, subsamples skewed corpora with class balance, and ranks
upstream candidates under a fixed compute budget.
"""

from .errors import (
    ChemalignError,
    DegenerateSpectrumError,
    DimensionMismatchError,
    InsufficientDataError,
    NonFiniteDataError,
    NotPositiveSemidefiniteError,
    ShardFormatError,
)
from .frechet import CsiValue, csi, csi_matrix, sqrt_psd, write_csi_matrix_csv
from .sampling import (
    ClassIndex,
    build_class_index,
    coverage_report,
    sample_balanced,
    sample_uniform,
)
from .select import (
    AlignmentReport,
    BudgetSpec,
    budget_ratio,
    make_budget,
    plan_samples,
    rank_upstreams,
)
from .shardio import EmbeddingShard, GraphRecord, ShardManifest, read_shard, write_shard
from .spectral import ErankReport, bootstrap_erank, effective_rank, paired_erank_study, pool_graph
from .stats import (
    DatasetSummary,
    MomentAccumulator,
    accumulate,
    finalize,
    merge,
    read_summary,
    standardize,
    summarize_rows,
    summarize_shard,
    write_summary,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentReport",
    "BudgetSpec",
    "ChemalignError",
    "ClassIndex",
    "CsiValue",
    "DatasetSummary",
    "DegenerateSpectrumError",
    "DimensionMismatchError",
    "EmbeddingShard",
    "ErankReport",
    "GraphRecord",
    "InsufficientDataError",
    "MomentAccumulator",
    "NonFiniteDataError",
    "NotPositiveSemidefiniteError",
    "ShardFormatError",
    "ShardManifest",
    "accumulate",
    "bootstrap_erank",
    "budget_ratio",
    "build_class_index",
    "coverage_report",
    "csi",
    "csi_matrix",
    "effective_rank",
    "finalize",
    "make_budget",
    "merge",
    "paired_erank_study",
    "plan_samples",
    "pool_graph",
    "rank_upstreams",
    "read_shard",
    "read_summary",
    "sample_balanced",
    "sample_uniform",
    "sqrt_psd",
    "standardize",
    "summarize_rows",
    "summarize_shard",
    "write_csi_matrix_csv",
    "write_shard",
    "write_summary",
]
