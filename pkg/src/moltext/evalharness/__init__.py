"""Evaluation harness: prediction files, metric aggregation, reports."""

from .evaluate import eval_captioning, eval_generation
from .external import ExternalScorerSpec, run_external_scorer
from .predictions import align_to_test_split, load_predictions, save_predictions
from .report import (
    CAP_COLUMNS,
    GEN_COLUMNS,
    MetricReport,
    MetricValue,
    parse_report,
    render_report,
)

__all__ = [
    "CAP_COLUMNS",
    "GEN_COLUMNS",
    "ExternalScorerSpec",
    "MetricReport",
    "MetricValue",
    "align_to_test_split",
    "eval_captioning",
    "eval_generation",
    "load_predictions",
    "parse_report",
    "render_report",
    "run_external_scorer",
    "save_predictions",
]
