"""
GroDiv - CLI Run Context
Global option state, the RunConfig record embedded in every output and the
writers shared by all commands.
"""

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field

from .. import __version__
from ..config import Defaults, budget_from_env, load_defaults, load_user_config
from ..sl3 import Sl3Params, load_sl3_params

LOG_LEVEL_ENV_VAR = "GRODIV_LOG_LEVEL"
LOG_LEVELS = ["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"]


class RunConfig(BaseModel):
    """Everything needed to replay a run."""
    command: str
    group: Optional[str] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    node_budget: int
    search_radius_factor: float
    seed: Optional[int] = None
    jobs: int = 1
    outputs: List[str] = Field(default_factory=list)
    sl3_overrides: Dict[str, Any] = Field(default_factory=dict)


def configure_logging(level: str):
    """Single stderr sink; library modules never touch sinks."""
    logger.remove()
    logger.add(sys.stderr, level=level.upper())


@dataclass
class CliState:
    defaults: Defaults
    user_config: Dict[str, Any] = field(default_factory=dict)
    jobs_flag: Optional[int] = None
    quiet: bool = False

    @classmethod
    def load(cls, config_path: Optional[Path], jobs: Optional[int], quiet: bool) -> "CliState":
        return cls(load_defaults(), load_user_config(config_path), jobs, quiet)

    def value(self, key: str, flag: Any, default: Any) -> Any:
        """Flag, then config file, then shipped default."""
        if flag is not None:
            return flag
        return self.user_config.get(key, default)

    @property
    def show_progress(self) -> bool:
        return not self.quiet

    @property
    def jobs(self) -> int:
        return int(self.value("jobs", self.jobs_flag, 1))

    def node_budget(self, flag: Optional[int]) -> int:
        if flag is not None:
            return flag
        return budget_from_env(int(self.user_config.get("node_budget", self.defaults.search.node_budget)))

    def search_radius_factor(self, flag: Optional[float]) -> float:
        return float(self.value("search_radius_factor", flag, self.defaults.search.search_radius_factor))

    @property
    def sl3_overrides(self) -> Dict[str, Any]:
        return {k: v for k, v in self.user_config.items() if k in Sl3Params.model_fields}

    def sl3_params(self) -> Sl3Params:
        return load_sl3_params(overrides=self.sl3_overrides)

    def run_config(self, command: str, group: Optional[str] = None,
                   parameters: Optional[Dict[str, Any]] = None, node_budget: Optional[int] = None,
                   search_radius_factor: Optional[float] = None, seed: Optional[int] = None,
                   outputs: Sequence[Optional[Path]] = ()) -> RunConfig:
        return RunConfig(
            command=command,
            group=group,
            parameters={k: v for k, v in (parameters or {}).items() if v is not None},
            node_budget=node_budget if node_budget is not None else self.node_budget(None),
            search_radius_factor=(search_radius_factor if search_radius_factor is not None
                                  else self.search_radius_factor(None)),
            seed=seed,
            jobs=self.jobs,
            outputs=[str(p) for p in outputs if p is not None],
            sl3_overrides=self.sl3_overrides,
        )


def document(run: RunConfig, **body: Any) -> Dict[str, Any]:
    return {"version": __version__, "run_config": run.model_dump(), **body}


def write_document(doc: Dict[str, Any], out: Optional[Path]):
    """JSON to a file or stdout; big integers are already decimal strings."""
    text = json.dumps(doc, indent=2, sort_keys=True, default=str)
    if out is None:
        click.echo(text)
        return
    Path(out).write_text(text + "\n")
    logger.info(f"Wrote {out}")


def write_csv(df: pd.DataFrame, out: Optional[Path], run: RunConfig):
    """CSV to a file (with a .meta.json sidecar holding the run config) or stdout."""
    if out is None:
        click.echo(df.to_csv(index=False), nl=False)
        return
    out = Path(out)
    df.to_csv(out, index=False)
    write_document(document(run), out.with_suffix(".meta.json"))
    logger.info(f"Wrote {len(df)} rows to {out}")
