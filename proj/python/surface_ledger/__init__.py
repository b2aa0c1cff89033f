"""Per-standard cost-benefit ledger for browser Web APIs."""

from ._core import (
    IoError,
    ValidationError,
    build_catalog,
    effective_blocked,
    eloc_table,
    evaluate_policy,
    exclusive_functions,
    parse_policy,
    preset,
    render_break_rate,
    run_pipeline,
    serialize_policy,
)

__all__ = [
    "IoError",
    "ValidationError",
    "build_catalog",
    "effective_blocked",
    "eloc_table",
    "evaluate_policy",
    "exclusive_functions",
    "parse_policy",
    "preset",
    "render_break_rate",
    "run_pipeline",
    "serialize_policy",
]
