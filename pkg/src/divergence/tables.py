"""
GroDiv - Divergence Tables
Midpoint, small and Gersten divergence tables over enumerated (or seeded
sampled) witness families, with CSV/JSON export.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from .. import __version__
from ..cayley import WordMetric
from ..errors import BudgetExhausted, UsageError
from ..groups import FinitelyGeneratedGroup, GroupElement, get_group
from .pointwise import DivQuery, DivResult, DivStatus, div_point, gersten_pair

CSV_COLUMNS = ["n", "witness_a", "witness_b", "value", "status", "exhaustive"]


class TableMode(Enum):
    MIDPOINT = "midpoint"
    SMALL = "small"
    GERSTEN = "gersten"


@dataclass
class DivRow:
    """Maximum over the witness family of one n."""
    n: int
    witness_a: Optional[str]
    witness_b: Optional[str]
    value: Optional[int]
    status: DivStatus
    exhaustive: bool
    witnesses: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "witness_a": self.witness_a,
            "witness_b": self.witness_b,
            "value": self.value,
            "status": self.status.value,
            "exhaustive": self.exhaustive,
            "witnesses": self.witnesses,
        }


@dataclass
class DivTable:
    group: str
    mode: TableMode
    rows: List[DivRow]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def row(self, n: int) -> Optional[DivRow]:
        return next((r for r in self.rows if r.n == n), None)

    def exact_rows(self) -> List[DivRow]:
        return [r for r in self.rows if r.status in (DivStatus.EXACT, DivStatus.BALL_EMPTY)]

    def to_dataframe(self) -> pd.DataFrame:
        df = pd.DataFrame([r.to_dict() for r in self.rows], columns=CSV_COLUMNS + ["witnesses"])
        df["value"] = df["value"].astype("Int64")
        return df[CSV_COLUMNS]

    def to_csv(self, path: Path):
        self.to_dataframe().to_csv(path, index=False)
        logger.info(f"Wrote {len(self.rows)} rows to {path}")

    def to_document(self, run_config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        return {
            "version": __version__,
            "run_config": run_config or {},
            "table": {
                "group": self.group,
                "mode": self.mode.value,
                "metadata": self.metadata,
                "rows": [r.to_dict() for r in self.rows],
            },
        }

    def to_json(self, path: Path, run_config: Optional[Dict[str, Any]] = None):
        with open(path, "w") as f:
            json.dump(self.to_document(run_config), f, indent=2, sort_keys=True)
        logger.info(f"Wrote table document to {path}")


# -- witness families -------------------------------------------------------

def _index_pairs(n_left: int, n_right: int, symmetric: bool, cap: int,
                 rng: np.random.Generator) -> Tuple[List[Tuple[int, int]], bool]:
    """All index pairs when there are at most `cap`, else a seeded sample."""
    if symmetric:
        total = n_left * (n_left + 1) // 2
        if total <= cap:
            return [(i, j) for i in range(n_left) for j in range(i, n_left)], True
    else:
        total = n_left * n_right
        if total <= cap:
            return [(i, j) for i in range(n_left) for j in range(n_right)], True
    flat = rng.choice(n_left * n_right, size=min(cap, n_left * n_right), replace=False)
    pairs, seen = [], set()
    for k in flat:
        i, j = divmod(int(k), n_right)
        if symmetric and i > j:
            i, j = j, i
        if (i, j) not in seen:
            seen.add((i, j))
            pairs.append((i, j))
    return pairs, False


def midpoint_witnesses(metric: WordMetric, n: int, cap: int,
                       rng: np.random.Generator) -> Tuple[List[Tuple[GroupElement, GroupElement]], bool]:
    """Pairs with |a| = floor(n/2), |b| = ceil(n/2), dist(a, b) = n."""
    left, right = metric.sphere(n // 2), metric.sphere(n - n // 2)
    pairs, exhaustive = _index_pairs(len(left), len(right), n % 2 == 0, cap, rng)
    witnesses = [(left[i], right[j]) for i, j in pairs
                 if metric.distance(left[i], right[j], max_radius=n) == n]
    return witnesses, exhaustive


def small_witnesses(metric: WordMetric, k: int, lam: float, window: int, cap: int,
                    rng: np.random.Generator) -> Tuple[List[Tuple[GroupElement, GroupElement]], bool]:
    """Pairs inside the window ball with dist(a, b) = k and lam * min(|a|, |b|) >= k."""
    ball = metric.identity_ball(window)
    candidates = [x for x in ball.order if lam * ball.dist[x] >= k]
    pairs, exhaustive = _index_pairs(len(candidates), len(candidates), True, cap, rng)
    witnesses = [(candidates[i], candidates[j]) for i, j in pairs
                 if i != j and metric.distance(candidates[i], candidates[j], max_radius=k) == k]
    return witnesses, exhaustive


def gersten_witnesses(metric: WordMetric, r: int, cap: int,
                      rng: np.random.Generator) -> Tuple[List[Tuple[GroupElement, GroupElement]], bool]:
    """Distinct pairs on the sphere of radius r."""
    sphere = metric.sphere(r)
    pairs, exhaustive = _index_pairs(len(sphere), len(sphere), True, cap, rng)
    return [(sphere[i], sphere[j]) for i, j in pairs if i != j], exhaustive


def is_small_witness(metric: WordMetric, a: GroupElement, b: GroupElement, c: GroupElement, lam: float) -> bool:
    d_ab = metric.distance(a, b)
    return lam * min(metric.distance(c, a), metric.distance(c, b)) >= d_ab


# -- query execution --------------------------------------------------------

_WORKER_METRICS: Dict[Tuple[str, int], WordMetric] = {}


def _worker_metric(spec: str, node_budget: int, ball_radius: int) -> WordMetric:
    key = (spec, node_budget)
    if key not in _WORKER_METRICS:
        _WORKER_METRICS[key] = WordMetric(get_group(spec), node_budget)
    metric = _WORKER_METRICS[key]
    if ball_radius > 0 and not metric.has_closed_form:
        metric.identity_ball(ball_radius)
    return metric


def _evaluate(task: Tuple) -> DivResult:
    spec, node_budget, ball_radius, kind, a, b, c, params = task
    metric = _worker_metric(spec, node_budget, ball_radius)
    group = metric.group
    if kind == "gersten":
        try:
            result = gersten_pair(group, c, a, b, params["rho"],
                                  search_radius_factor=params["search_radius_factor"],
                                  node_budget=node_budget, metric=metric)
        except BudgetExhausted as e:
            return DivResult(r=None, forbidden_radius=None, status=DivStatus.BUDGET_EXHAUSTED,
                             nodes_expanded=e.nodes_expanded)
    else:
        query = DivQuery(a=a, b=b, c=c, delta=params["delta"], gamma=params["gamma"],
                         search_radius_factor=params["search_radius_factor"],
                         node_budget=node_budget, step_radius=params["step_radius"])
        result = div_point(group, query, metric=metric)
    result.path = None
    return result


def run_tasks(tasks: Sequence[Tuple], jobs: int = 1) -> List[DivResult]:
    """Evaluate tasks in order; with jobs > 1 on a process pool (order preserved)."""
    if jobs <= 1 or len(tasks) < 2:
        return [_evaluate(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def _aggregate(n: int, group: FinitelyGeneratedGroup,
               pairs: Sequence[Tuple[GroupElement, GroupElement]],
               results: Sequence[DivResult], exhaustive: bool) -> Optional[DivRow]:
    if not pairs:
        return None
    literal = group.format_element
    no_path = [i for i, r in enumerate(results) if r.status is DivStatus.NO_PATH]
    if no_path:
        a, b = pairs[no_path[0]]
        return DivRow(n, literal(a), literal(b), None, DivStatus.NO_PATH, exhaustive, len(pairs))
    certified = [i for i, r in enumerate(results) if r.certified]
    budget_hit = any(r.status is DivStatus.BUDGET_EXHAUSTED for r in results)
    if not certified:
        a, b = pairs[0]
        return DivRow(n, literal(a), literal(b), None, DivStatus.BUDGET_EXHAUSTED, exhaustive, len(pairs))
    best = max(certified, key=lambda i: (results[i].value, -i))
    if budget_hit:
        status = DivStatus.BUDGET_EXHAUSTED
    elif all(results[i].status is DivStatus.BALL_EMPTY for i in certified):
        status = DivStatus.BALL_EMPTY
    else:
        status = DivStatus.EXACT
    a, b = pairs[best]
    return DivRow(n, literal(a), literal(b), results[best].value, status, exhaustive, len(pairs))


def _params(delta, gamma, search_radius_factor, step_radius, rho=None) -> Dict[str, Any]:
    return {"delta": delta, "gamma": gamma, "search_radius_factor": search_radius_factor,
            "step_radius": step_radius, "rho": rho}


def _row_streams(seed: int, n_max: int) -> List[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_max + 1)]


def _prepare(group: FinitelyGeneratedGroup, node_budget: int, ball_radius: int,
             show_progress: bool) -> WordMetric:
    key = (group.spec, node_budget)
    if key not in _WORKER_METRICS or _WORKER_METRICS[key].group is not group:
        _WORKER_METRICS[key] = WordMetric(group, node_budget)
    metric = _WORKER_METRICS[key]
    metric.show_progress = show_progress
    metric.identity_ball(ball_radius)
    return metric


def midpoint_div_table(group: FinitelyGeneratedGroup,
                       n_max: int,
                       delta: float = 0.5,
                       gamma: float = 0.0,
                       search_radius_factor: float = 4.0,
                       node_budget: int = 2_000_000,
                       sample_cap: int = 5000,
                       seed: int = 0,
                       jobs: int = 1,
                       step_radius: int = 1,
                       show_progress: bool = False) -> DivTable:
    """
    For each n <= n_max, the maximum of div(a, b, e) over pairs with e on a
    geodesic [a, b] at its midpoint.
    """
    if n_max < 1:
        raise UsageError(f"n_max must be >= 1, got {n_max}")
    _check_delta_gamma(delta, gamma)
    metadata = {"n_max": n_max, "delta": delta, "gamma": gamma, "sample_cap": sample_cap, "seed": seed,
                "search_radius_factor": search_radius_factor, "node_budget": node_budget,
                "step_radius": step_radius}
    logger.info(f"Midpoint divergence table for {group.spec}: n <= {n_max}, delta={delta}, gamma={gamma}")
    rows: List[DivRow] = []
    try:
        metric = _prepare(group, node_budget, (n_max + 1) // 2 if _has_closed_form(group) else n_max,
                          show_progress)
    except BudgetExhausted as e:
        logger.warning(f"Identity ball does not fit the budget: {e}")
        return DivTable(group.spec, TableMode.MIDPOINT, rows, {**metadata, "budget": e.stats()})
    streams = _row_streams(seed, n_max)
    params = _params(delta, gamma, search_radius_factor, step_radius)
    ball_radius = 0 if metric.has_closed_form else n_max
    for n in tqdm(range(1, n_max + 1), desc=f"midpoint {group.spec}", disable=not show_progress):
        pairs, exhaustive = midpoint_witnesses(metric, n, sample_cap, streams[n])
        tasks = [(group.spec, node_budget, ball_radius, "div", a, b, group.identity, params) for a, b in pairs]
        row = _aggregate(n, group, pairs, run_tasks(tasks, jobs), exhaustive)
        if row is None:
            logger.warning(f"No midpoint witnesses at n = {n} in {group.spec}")
            continue
        if not exhaustive:
            logger.warning(f"Row n = {n} sampled ({len(pairs)} witnesses)")
        rows.append(row)
    return DivTable(group.spec, TableMode.MIDPOINT, rows, metadata)


def small_div_table(group: FinitelyGeneratedGroup,
                    n_max: int,
                    lam: float = 2.0,
                    delta: float = 0.5,
                    gamma: float = 0.0,
                    search_radius_factor: float = 4.0,
                    node_budget: int = 2_000_000,
                    sample_cap: int = 5000,
                    seed: int = 0,
                    jobs: int = 1,
                    step_radius: int = 1,
                    window: Optional[int] = None,
                    show_progress: bool = False) -> DivTable:
    """
    Small divergence: for each n, the maximum of div(a, b, e) over pairs with
    dist(a, b) <= n and lam * dist(e, {a, b}) >= dist(a, b), a and b ranging
    over the identity ball of radius `window` (default n_max).
    """
    if lam < 2:
        raise UsageError(f"lambda must be >= 2, got {lam}")
    if n_max < 1:
        raise UsageError(f"n_max must be >= 1, got {n_max}")
    _check_delta_gamma(delta, gamma)
    window = window or n_max
    metadata = {"n_max": n_max, "lambda": lam, "delta": delta, "gamma": gamma, "window": window,
                "sample_cap": sample_cap, "seed": seed, "search_radius_factor": search_radius_factor,
                "node_budget": node_budget, "step_radius": step_radius}
    logger.info(f"Small divergence table for {group.spec}: n <= {n_max}, lambda={lam}, delta={delta}")
    rows: List[DivRow] = []
    try:
        metric = _prepare(group, node_budget, max(window, n_max), show_progress)
    except BudgetExhausted as e:
        logger.warning(f"Identity ball does not fit the budget: {e}")
        return DivTable(group.spec, TableMode.SMALL, rows, {**metadata, "budget": e.stats()})
    streams = _row_streams(seed, n_max)
    params = _params(delta, gamma, search_radius_factor, step_radius)
    ball_radius = 0 if metric.has_closed_form else max(window, n_max)
    running: Optional[DivRow] = None
    for k in tqdm(range(1, n_max + 1), desc=f"small {group.spec}", disable=not show_progress):
        pairs, exhaustive = small_witnesses(metric, k, lam, window, sample_cap, streams[k])
        tasks = [(group.spec, node_budget, ball_radius, "div", a, b, group.identity, params) for a, b in pairs]
        layer = _aggregate(k, group, pairs, run_tasks(tasks, jobs), exhaustive)
        running = _merge_running(running, layer, k)
        if running is not None:
            rows.append(running)
    return DivTable(group.spec, TableMode.SMALL, rows, metadata)


def _merge_running(running: Optional[DivRow], layer: Optional[DivRow], n: int) -> Optional[DivRow]:
    """Row n of a cumulative table from row n-1 and the layer dist(a, b) = n."""
    if layer is None:
        return None if running is None else DivRow(**{**running.__dict__, "n": n})
    if running is None:
        return layer
    witnesses = running.witnesses + layer.witnesses
    exhaustive = running.exhaustive and layer.exhaustive
    for candidate in (running, layer):
        if candidate.status is DivStatus.NO_PATH:
            return DivRow(n, candidate.witness_a, candidate.witness_b, None, DivStatus.NO_PATH,
                          exhaustive, witnesses)
    best = layer if _value_or(layer, -1) > _value_or(running, -1) else running
    statuses = {running.status, layer.status}
    if DivStatus.BUDGET_EXHAUSTED in statuses:
        status = DivStatus.BUDGET_EXHAUSTED
    elif statuses == {DivStatus.BALL_EMPTY}:
        status = DivStatus.BALL_EMPTY
    else:
        status = DivStatus.EXACT
    return DivRow(n, best.witness_a, best.witness_b, best.value, status, exhaustive, witnesses)


def gersten_div_table(group: FinitelyGeneratedGroup,
                      n_max: int,
                      rho: float = 0.5,
                      search_radius_factor: float = 4.0,
                      node_budget: int = 2_000_000,
                      sample_cap: int = 5000,
                      seed: int = 0,
                      jobs: int = 1,
                      show_progress: bool = False) -> DivTable:
    """For each radius r <= n_max, the maximum Gersten pair distance over sphere pairs."""
    if n_max < 1:
        raise UsageError(f"n_max must be >= 1, got {n_max}")
    if not 0 < rho < 1:
        raise UsageError(f"rho must lie in (0, 1), got {rho}")
    metadata = {"n_max": n_max, "rho": rho, "sample_cap": sample_cap, "seed": seed,
                "search_radius_factor": search_radius_factor, "node_budget": node_budget}
    logger.info(f"Gersten divergence table for {group.spec}: r <= {n_max}, rho={rho}")
    rows: List[DivRow] = []
    try:
        metric = _prepare(group, node_budget, 2 * n_max if not _has_closed_form(group) else n_max,
                          show_progress)
    except BudgetExhausted as e:
        logger.warning(f"Identity ball does not fit the budget: {e}")
        return DivTable(group.spec, TableMode.GERSTEN, rows, {**metadata, "budget": e.stats()})
    streams = _row_streams(seed, n_max)
    params = _params(None, None, search_radius_factor, 1, rho=rho)
    ball_radius = 0 if metric.has_closed_form else 2 * n_max
    for r in tqdm(range(1, n_max + 1), desc=f"gersten {group.spec}", disable=not show_progress):
        pairs, exhaustive = gersten_witnesses(metric, r, sample_cap, streams[r])
        tasks = [(group.spec, node_budget, ball_radius, "gersten", x, y, group.identity, params) for x, y in pairs]
        row = _aggregate(r, group, pairs, run_tasks(tasks, jobs), exhaustive)
        if row is not None:
            rows.append(row)
    return DivTable(group.spec, TableMode.GERSTEN, rows, metadata)


def _has_closed_form(group: FinitelyGeneratedGroup) -> bool:
    return group.word_length(group.identity) is not None


def _value_or(row: DivRow, default: int) -> int:
    return default if row.value is None else row.value


def _check_delta_gamma(delta: float, gamma: float):
    if not 0 < delta < 1:
        raise UsageError(f"delta must lie in (0, 1), got {delta}")
    if gamma < 0:
        raise UsageError(f"gamma must be >= 0, got {gamma}")
