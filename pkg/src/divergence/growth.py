"""
GroDiv - Growth-Rate Report
Fits value ~ K * n^p on the certified rows of a divergence table.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from loguru import logger

from .pointwise import DivStatus
from .tables import DivTable

LINEAR_EXPONENT_MAX = 1.25
MIN_POINTS = 3


@dataclass
class GrowthReport:
    classification: str
    exponent: Optional[float]
    coefficient: Optional[float]
    n_points: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classification": self.classification,
            "exponent": self.exponent,
            "coefficient": self.coefficient,
            "n_points": self.n_points,
        }


def growth_report(table: DivTable, min_n: int = 2) -> GrowthReport:
    """
    Classify a table as linear, superlinear, infinite-within-radius or
    inconclusive. Rows below min_n are ignored (BallEmpty at n = 1).
    """
    rows = [r for r in table.rows if r.n >= min_n]
    if rows and all(r.status is DivStatus.NO_PATH for r in rows):
        return GrowthReport("infinite-within-radius", None, None, 0)
    points = [(r.n, r.value) for r in rows if r.status is DivStatus.EXACT and r.value]
    if len(points) < MIN_POINTS:
        return GrowthReport("inconclusive", None, None, len(points))
    ns = np.array([p[0] for p in points], dtype=float)
    values = np.array([p[1] for p in points], dtype=float)
    slope, intercept = np.polyfit(np.log(ns), np.log(values), 1)
    classification = "linear" if slope <= LINEAR_EXPONENT_MAX else "superlinear"
    logger.info(f"Growth of {table.group} {table.mode.value} table: exponent {slope:.3f} ({classification})")
    return GrowthReport(classification, float(slope), float(np.exp(intercept)), len(points))
