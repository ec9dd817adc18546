"""
GroDiv - Configuration Layer
Loads the JSON defaults shipped under config/, user config files and
environment overrides, and validates them with pydantic models.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from loguru import logger
from pydantic import BaseModel, Field, field_validator

from .errors import ConfigurationError

CONFIG_DIR = Path(__file__).parent.parent / "config"
BUDGET_ENV_VAR = "GRODIV_BUDGET"


class SearchDefaults(BaseModel):
    """Budgets shared by every breadth-first exploration."""
    node_budget: int = Field(2_000_000, ge=1)
    search_radius_factor: float = Field(4.0, gt=0)


class DivergenceDefaults(BaseModel):
    """Default parameters of divergence queries and tables."""
    delta: float = 0.5
    gamma: float = Field(0.0, ge=0)
    lambda_: float = Field(2.0, ge=2)
    rho: float = Field(0.5, gt=0, lt=1)
    sample_cap: int = Field(5000, ge=1)
    corridor_D: int = Field(1, ge=0)
    step_radius: int = Field(1, ge=1)

    @field_validator("delta")
    @classmethod
    def _delta_open_interval(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError(f"delta must lie in (0, 1), got {value}")
        return value


class Defaults(BaseModel):
    search: SearchDefaults = SearchDefaults()
    divergence: DivergenceDefaults = DivergenceDefaults()
    output: Dict[str, Any] = {}


def load_json_config(config_path: Path) -> Dict[str, Any]:
    """Load a configuration document from a JSON file."""
    with open(config_path, 'r') as f:
        return json.load(f)


def load_user_config(config_path: Optional[Path]) -> Dict[str, Any]:
    """
    Load a flat key-value config file.

    The syntax is JSON-compatible; YAML is a superset of JSON, so
    yaml.safe_load accepts both.
    """
    if config_path is None:
        return {}
    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigurationError(f"Config file not found: {config_path}")
    with open(config_path, 'r') as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file must hold a key-value mapping: {config_path}")
    nested = [k for k, v in data.items() if isinstance(v, dict)]
    if nested:
        raise ConfigurationError(f"Config file must be flat, nested keys: {nested}")
    logger.debug(f"Loaded {len(data)} config keys from {config_path}")
    return data


def load_defaults(config_dir: Optional[Path] = None) -> Defaults:
    """Read config/defaults.json and apply the environment budget override."""
    config_dir = Path(config_dir) if config_dir else CONFIG_DIR
    path = config_dir / "defaults.json"
    raw = load_json_config(path) if path.exists() else {}
    try:
        defaults = Defaults(**raw)
    except ValueError as e:
        raise ConfigurationError(f"Invalid defaults in {path}: {e}") from e
    defaults.search.node_budget = budget_from_env(defaults.search.node_budget)
    return defaults


def budget_from_env(default: int) -> int:
    """Global node-budget override from GRODIV_BUDGET."""
    value = os.getenv(BUDGET_ENV_VAR)
    if value is None or value == "":
        return default
    try:
        budget = int(value)
    except ValueError as e:
        raise ConfigurationError(f"{BUDGET_ENV_VAR} must be an integer, got {value!r}") from e
    if budget < 1:
        raise ConfigurationError(f"{BUDGET_ENV_VAR} must be positive, got {budget}")
    return budget
