"""Python access to the dynamical Boolean network simulator."""
from ._core import (
    IoError,
    block_pattern_holds,
    fixed_point_matrix_count,
    golden_checks,
    matrix_of,
    rule_table_csv,
    rule_vector_code,
    rule_vector_of,
    run_campaign,
    theta,
    trace,
)

__all__ = [
    "IoError",
    "block_pattern_holds",
    "fixed_point_matrix_count",
    "golden_checks",
    "matrix_of",
    "rule_table_csv",
    "rule_vector_code",
    "rule_vector_of",
    "run_campaign",
    "theta",
    "trace",
]
