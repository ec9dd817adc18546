"""
GroDiv - SL3 Stress Suite
Connects seeded pairs of random SL3(Z) words and summarizes the verifier
reports. Pairs are independent jobs with per-pair seed streams, so the
result does not depend on the number of workers.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from ..errors import GroDivError
from ..groups import get_group
from .connect import exteriorly_connect
from .mat3 import Mat3
from .params import Sl3Params, default_params

HISTOGRAM_BINS = 10


def _pair_seeds(seed: int, count: int) -> List[tuple]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [tuple(int(x) for x in child.generate_state(2)) for child in children]


def _stress_case(task: tuple) -> Dict[str, Any]:
    index, seeds, word_len, params_dump = task
    params = Sl3Params(**params_dump)
    group = get_group("sl3z")
    alpha_word = group.random_word(word_len, seeds[0])
    beta_word = group.random_word(word_len, seeds[1])
    alpha = Mat3(group.eval_word(alpha_word).payload)
    beta = Mat3(group.eval_word(beta_word).payload)
    row = {"pair": index, "alpha": ",".join(group.generator_names()[i] for i in alpha_word),
           "beta": ",".join(group.generator_names()[i] for i in beta_word)}
    try:
        _, report = exteriorly_connect(alpha, beta, params)
    except GroDivError as e:
        row.update({"passed": False, "error": str(e)})
        return row
    row.update(report.to_dict())
    row["passed"] = report.passed
    return row


@dataclass
class StressReport:
    count: int
    word_len: int
    seed: int
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    @property
    def failures(self) -> List[Dict[str, Any]]:
        return [r for r in self.rows if not r["passed"]]

    @property
    def is_valid(self) -> bool:
        return not self.failures

    def _histogram(self, column: str) -> Dict[str, List[float]]:
        values = [r[column] for r in self.rows if r.get(column) is not None]
        if not values:
            return {"counts": [], "edges": []}
        counts, edges = np.histogram(values, bins=HISTOGRAM_BINS)
        return {"counts": counts.tolist(), "edges": [round(float(e), 6) for e in edges]}

    def summary(self) -> Dict[str, Any]:
        df = self.to_dataframe()
        outside = df[~df["proxy_floor_hit"].fillna(False).astype(bool)] if "proxy_floor_hit" in df else df
        return {
            "count": self.count,
            "word_len": self.word_len,
            "seed": self.seed,
            "passed": int(df["passed"].sum()),
            "failed": len(self.failures),
            "min_kappa_outside_floor": (float(outside["kappa_achieved"].min())
                                        if "kappa_achieved" in outside and len(outside) else None),
            "max_length_ratio": float(df["length_ratio"].max()) if "length_ratio" in df else None,
            "kappa_histogram": self._histogram("kappa_achieved"),
            "length_ratio_histogram": self._histogram("length_ratio"),
        }


def sl3_stress(count: int = 200, word_len: int = 40, seed: int = 7, params: Optional[Sl3Params] = None,
               jobs: int = 1, show_progress: bool = False) -> StressReport:
    """Connect `count` seeded pairs of random words of length word_len."""
    params = params or default_params()
    tasks = [(i, s, word_len, params.model_dump()) for i, s in enumerate(_pair_seeds(seed, count))]
    if jobs <= 1:
        rows = [_stress_case(t) for t in tqdm(tasks, desc="sl3-stress", disable=not show_progress)]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            rows = list(tqdm(executor.map(_stress_case, tasks), total=len(tasks), desc="sl3-stress",
                             disable=not show_progress))
    report = StressReport(count, word_len, seed, rows)
    if report.is_valid:
        logger.success(f"sl3 stress: all {count} pairs verified")
    else:
        logger.warning(f"sl3 stress: {len(report.failures)} of {count} pairs failed")
    return report
