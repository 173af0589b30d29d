"""Shared-vocabulary and code-quality metrics for source corpora."""

from vocalign._core import (
    VocalignError,
    adjusted_density,
    analyze,
    comm_report,
    compare_groups,
    correlate,
    jaccard,
    lint,
    mann_whitney,
    parse_iso8601,
    pearson,
    spearman,
    split_identifier,
    within_one_edit,
)

__all__ = [
    "VocalignError",
    "adjusted_density",
    "analyze",
    "comm_report",
    "compare_groups",
    "correlate",
    "jaccard",
    "lint",
    "mann_whitney",
    "parse_iso8601",
    "pearson",
    "spearman",
    "split_identifier",
    "within_one_edit",
]
