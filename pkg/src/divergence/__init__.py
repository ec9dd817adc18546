"""
GroDiv - Divergence Package
Pointwise divergence, divergence tables, instance checks, the Morse probe
and growth-rate reports.
"""

from .pointwise import (
    DivQuery,
    DivResult,
    DivStatus,
    div_point,
    fixed_geodesic,
    gersten_pair,
)
from .tables import (
    CSV_COLUMNS,
    DivRow,
    DivTable,
    TableMode,
    gersten_div_table,
    is_small_witness,
    midpoint_div_table,
    midpoint_witnesses,
    small_div_table,
)
from .checks import (
    CheckResult,
    InequalityReport,
    RobustnessReport,
    check_instance_inequalities,
    div_inequality_suite,
    genset_robustness,
    random_queries,
    revalidate_table,
)
from .morse import MorseProbeResult, MorseSeries, morse_probe, morse_series
from .growth import GrowthReport, growth_report

__all__ = [
    "DivQuery",
    "DivResult",
    "DivStatus",
    "div_point",
    "fixed_geodesic",
    "gersten_pair",
    "CSV_COLUMNS",
    "DivRow",
    "DivTable",
    "TableMode",
    "gersten_div_table",
    "is_small_witness",
    "midpoint_div_table",
    "midpoint_witnesses",
    "small_div_table",
    "CheckResult",
    "InequalityReport",
    "RobustnessReport",
    "check_instance_inequalities",
    "div_inequality_suite",
    "genset_robustness",
    "random_queries",
    "revalidate_table",
    "MorseProbeResult",
    "MorseSeries",
    "morse_probe",
    "morse_series",
    "GrowthReport",
    "growth_report",
]
