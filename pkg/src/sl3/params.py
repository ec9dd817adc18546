"""
GroDiv - SL3 Parameters
Constants of the exterior-trajectory construction, validated with pydantic
and loaded from config/sl3_params.json.
"""

import math
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from loguru import logger
from pydantic import BaseModel, Field, field_validator

from ..config import CONFIG_DIR, load_json_config
from ..errors import ConfigurationError


class Sl3Params(BaseModel):
    """Tunable constants; defaults match config/sl3_params.json."""
    C_large: float = 0.5
    M_digit: int = Field(8, ge=1)
    kappa_min: float = Field(0.02, ge=0)
    proxy_floor: float = Field(8.0, ge=0)
    A: List[List[int]] = [[2, 1], [1, 1]]
    angle_floor_deg: float = Field(22.5, gt=0, lt=45)
    conjugate_samples: int = Field(720, ge=8)
    shift_factor: float = Field(4.0, gt=0)
    shift_retries: int = Field(6, ge=1)
    conjugate_retries: int = Field(4, ge=1)
    shear_search_limit: int = Field(4096, ge=0)
    length_bound_C: float = Field(200.0, gt=0)
    approx_c1: float = Field(8.0, ge=1)
    approx_c2: float = Field(16.0, ge=0)
    stable_range_strategy: Literal["search", "certified"] = "search"
    seed: int = 7

    @field_validator("C_large")
    @classmethod
    def _c_large_range(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError(f"C_large must lie in (0, 1], got {value}")
        return value

    @field_validator("A")
    @classmethod
    def _hyperbolic(cls, value: List[List[int]]) -> List[List[int]]:
        if len(value) != 2 or any(len(row) != 2 for row in value):
            raise ValueError("A must be a 2x2 integer matrix")
        (a, b), (c, d) = value
        if a * d - b * c != 1:
            raise ValueError(f"A must have determinant 1, got {a * d - b * c}")
        if abs(a + d) <= 2:
            raise ValueError(f"A must be hyperbolic (|trace| > 2), got trace {a + d}")
        return value

    @property
    def angle_floor(self) -> float:
        """Angle floor in radians."""
        return math.radians(self.angle_floor_deg)

    def overridden(self, **overrides: Any) -> "Sl3Params":
        return Sl3Params(**{**self.model_dump(), **overrides})


def load_sl3_params(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> Sl3Params:
    """Load parameters from JSON and apply overrides (unknown keys are rejected)."""
    path = Path(path) if path else CONFIG_DIR / "sl3_params.json"
    raw = load_json_config(path) if path.exists() else {}
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(Sl3Params.model_fields)
    if unknown:
        raise ConfigurationError(f"Unknown SL3 parameters: {sorted(unknown)}")
    try:
        params = Sl3Params(**{**raw, **overrides})
    except ValueError as e:
        raise ConfigurationError(f"Invalid SL3 parameters: {e}") from e
    logger.debug(f"SL3 parameters loaded from {path}")
    return params


@lru_cache(maxsize=1)
def default_params() -> Sl3Params:
    """Parameters from config/sl3_params.json, loaded once."""
    return load_sl3_params()
