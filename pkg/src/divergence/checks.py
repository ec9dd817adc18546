"""
GroDiv - Instance-Level Divergence Checks
Verifies the divergence inequalities on individual certified queries and
compares midpoint tables across two generating sets of Z^2.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..cayley import WordMetric
from ..errors import BudgetExhausted, UsageError
from ..groups import FinitelyGeneratedGroup, get_group
from .pointwise import DivQuery, DivResult, DivStatus, div_point, fixed_geodesic, gersten_pair
from .tables import DivTable, TableMode, midpoint_div_table

DEFAULT_CHECK_GROUPS = ("zd:2", "zd:3", "heis")


@dataclass
class CheckResult:
    """Result of one inequality check on one query."""
    check_name: str
    passed: bool
    message: str
    details: Optional[Dict[str, Any]] = None


@dataclass
class InequalityReport:
    """Outcome of a batch of instance checks."""
    total_queries: int
    certified_queries: int
    checks_run: int
    results: List[CheckResult] = field(default_factory=list)
    skipped: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def violations(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def summary(self) -> Dict[str, Any]:
        return {
            "total_queries": self.total_queries,
            "certified_queries": self.certified_queries,
            "checks_run": self.checks_run,
            "violations": len(self.violations),
            "skipped": len(self.skipped),
        }


class InstanceChecker:
    """
    Runs every instance inequality on a list of queries of one group.

    For each certified query (a, b, c; delta, gamma) it checks monotonicity in
    delta, antitonicity in gamma, value = dist(a, b) whenever the fixed geodesic
    avoids the forbidden ball, the projection inequality
    div(a, b, c; delta/3) <= div(a, b, c'; delta) + dist(a, b) with c' the
    point of [a, b] nearest to c, the Gersten/pointwise identity (when
    dist(c, a) = dist(c, b)), value >= dist(a, b), and symmetry in a, b.
    """

    def __init__(self, group: FinitelyGeneratedGroup, metric: Optional[WordMetric] = None,
                 delta_prime: Optional[float] = None, gamma_prime: Optional[float] = None):
        self.group = group
        self.metric = metric
        self.delta_prime = delta_prime
        self.gamma_prime = gamma_prime
        self.results: List[CheckResult] = []
        self.skipped: List[Dict[str, Any]] = []

    def _div(self, q: DivQuery) -> DivResult:
        if self.metric is None:
            self.metric = WordMetric(self.group, q.node_budget)
        return div_point(self.group, q, metric=self.metric)

    def _record(self, name: str, passed: bool, message: str, index: int, **details):
        self.results.append(CheckResult(name, passed, message, {"query": index, **details}))

    def _skip(self, index: int, reason: str):
        self.skipped.append({"query": index, "reason": reason})

    def check(self, index: int, q: DivQuery) -> bool:
        """Run all checks on one query; False when the query was skipped."""
        base = self._div(q)
        if not base.certified:
            self._skip(index, f"base query {base.status.value}")
            return False
        value = base.comparable_value()

        self._record("value_at_least_distance", value >= base.dist_ab,
                     f"value {base.value} vs dist(a,b) {base.dist_ab}", index)

        swapped = self._div(q.with_params(a=q.b, b=q.a))
        if swapped.status in (DivStatus.BUDGET_EXHAUSTED,):
            self._skip(index, "symmetry check budget")
        else:
            self._record("symmetry", swapped.comparable_value() == value,
                         f"div(a,b,c)={base.value} vs div(b,a,c)={swapped.value}", index)

        self._check_delta_monotone(index, q, base)
        self._check_geodesic_equality(index, q, base)
        self._check_gamma_antitone(index, q, base)
        self._check_projection(index, q)
        self._check_gersten_identity(index, q, base)
        return True

    def _check_geodesic_equality(self, index: int, q: DivQuery, base: DivResult):
        """A fixed geodesic outside the forbidden ball forces value = dist(a, b)."""
        if base.status is DivStatus.BALL_EMPTY:
            return
        forbidden = self.metric.open_ball(q.c, base.forbidden_radius)
        if any(forbidden(x) for x in fixed_geodesic(self.group, self.metric, q.a, q.b)):
            return
        self._record("geodesic_equality", base.value == base.dist_ab,
                     f"value {base.value} vs dist(a,b) {base.dist_ab} with the fixed geodesic outside the ball", index)

    def _check_delta_monotone(self, index: int, q: DivQuery, base: DivResult):
        delta_prime = self.delta_prime if self.delta_prime is not None else (1 + q.delta) / 2
        if delta_prime < q.delta:
            raise UsageError(f"delta' = {delta_prime} must be >= delta = {q.delta}")
        larger = self._div(q.with_params(delta=delta_prime, search_radius=base.search_radius))
        if larger.status is DivStatus.BUDGET_EXHAUSTED:
            self._skip(index, "delta monotonicity budget")
            return
        self._record("delta_monotone", base.comparable_value() <= larger.comparable_value(),
                     f"div(delta={q.delta})={base.value} vs div(delta'={delta_prime})={larger.value}", index)

    def _check_gamma_antitone(self, index: int, q: DivQuery, base: DivResult):
        gamma_prime = self.gamma_prime if self.gamma_prime is not None else q.gamma + 1
        if gamma_prime < q.gamma:
            raise UsageError(f"gamma' = {gamma_prime} must be >= gamma = {q.gamma}")
        smaller = self._div(q.with_params(gamma=gamma_prime, search_radius=base.search_radius))
        if smaller.status is DivStatus.BUDGET_EXHAUSTED:
            self._skip(index, "gamma antitonicity budget")
            return
        self._record("gamma_antitone", smaller.comparable_value() <= base.comparable_value(),
                     f"div(gamma={q.gamma})={base.value} vs div(gamma'={gamma_prime})={smaller.value}", index)

    def _check_projection(self, index: int, q: DivQuery):
        metric = self.metric
        path = fixed_geodesic(self.group, metric, q.a, q.b)
        c_prime = min(path, key=lambda x: metric.distance(q.c, x))
        if c_prime == q.a and c_prime == q.b:
            self._skip(index, "projection check needs a != b")
            return
        third = self._div(q.with_params(delta=q.delta / 3))
        projected = self._div(q.with_params(c=c_prime))
        if not (third.certified or third.status is DivStatus.NO_PATH) or not projected.certified:
            self._skip(index, "projection check uncertified")
            return
        dist_ab = projected.dist_ab
        self._record("projection", third.comparable_value() <= projected.comparable_value() + dist_ab,
                     f"div(c; delta/3)={third.value} vs div(c'; delta)={projected.value} + {dist_ab}",
                     index, c_on_geodesic=c_prime == q.c)

    def _check_gersten_identity(self, index: int, q: DivQuery, base: DivResult):
        if q.gamma != 0:
            return
        metric = self.metric
        if metric.distance(q.c, q.a) != metric.distance(q.c, q.b) or q.a == q.c:
            return
        gersten = gersten_pair(self.group, q.c, q.a, q.b, q.delta, node_budget=q.node_budget,
                               metric=metric, search_radius=base.search_radius)
        if gersten.status is DivStatus.BUDGET_EXHAUSTED:
            self._skip(index, "gersten identity budget")
            return
        self._record("gersten_identity", gersten.comparable_value() == base.comparable_value(),
                     f"gersten={gersten.value} vs div={base.value}", index)


def check_instance_inequalities(group: FinitelyGeneratedGroup,
                                sample: Sequence[DivQuery],
                                delta_prime: Optional[float] = None,
                                gamma_prime: Optional[float] = None,
                                ball_radius: Optional[int] = None,
                                show_progress: bool = False) -> InequalityReport:
    """
    Run the instance checks on every query; violations are expected to be empty.
    `ball_radius` pre-grows the identity ball used for distance lookups.
    """
    metric = None
    if sample and ball_radius:
        metric = WordMetric(group, sample[0].node_budget)
        if not metric.has_closed_form:
            metric.identity_ball(ball_radius)
    checker = InstanceChecker(group, metric=metric, delta_prime=delta_prime, gamma_prime=gamma_prime)
    certified = 0
    for index, q in enumerate(tqdm(sample, desc=f"checks {group.spec}", disable=not show_progress)):
        try:
            certified += checker.check(index, q)
        except BudgetExhausted as e:
            checker._skip(index, f"budget: {e}")
    report = InequalityReport(total_queries=len(sample), certified_queries=certified,
                              checks_run=len(checker.results), results=checker.results,
                              skipped=checker.skipped)
    if report.is_valid:
        logger.info(f"{group.spec}: {report.checks_run} checks on {certified} certified queries, no violations")
    else:
        logger.warning(f"{group.spec}: {len(report.violations)} violations in {report.checks_run} checks")
    return report


def random_queries(group: FinitelyGeneratedGroup,
                   count: int,
                   seed: int,
                   max_word_length: int = 4,
                   deltas: Sequence[float] = (0.3, 0.5, 0.7),
                   gammas: Sequence[float] = (0.0, 1.0),
                   node_budget: int = 2_000_000) -> List[DivQuery]:
    """
    Seeded random queries. Every other query puts b at the reflection of a
    through c (b = c a^-1 c), so dist(c, a) = dist(c, b) and the Gersten
    identity applies.
    """
    rng = np.random.default_rng(seed)
    queries: List[DivQuery] = []
    while len(queries) < count:
        c = group.eval_word(group.random_word(int(rng.integers(0, max_word_length + 1)), int(rng.integers(2**32))))
        a = group.multiply(c, group.eval_word(
            group.random_word(int(rng.integers(1, max_word_length + 1)), int(rng.integers(2**32)))))
        if len(queries) % 2:
            b = group.multiply(group.multiply(c, group.inverse(a)), c)
        else:
            b = group.multiply(c, group.eval_word(
                group.random_word(int(rng.integers(1, max_word_length + 1)), int(rng.integers(2**32)))))
        if a == c or b == c or a == b:
            continue
        queries.append(DivQuery(a=a, b=b, c=c,
                                delta=float(rng.choice(deltas)),
                                gamma=0.0 if len(queries) % 2 else float(rng.choice(gammas)),
                                node_budget=node_budget))
    return queries


def div_inequality_suite(samples: int, seed: int,
                         group_specs: Sequence[str] = DEFAULT_CHECK_GROUPS,
                         max_word_length: int = 4,
                         node_budget: int = 2_000_000,
                         show_progress: bool = False) -> Dict[str, InequalityReport]:
    """Split `samples` queries round-robin over the groups, one seed stream per group."""
    streams = np.random.SeedSequence(seed).spawn(len(group_specs))
    reports = {}
    for k, spec in enumerate(group_specs):
        group = get_group(spec)
        count = samples // len(group_specs) + (1 if k < samples % len(group_specs) else 0)
        group_seed = int(streams[k].generate_state(1)[0])
        queries = random_queries(group, count, group_seed, max_word_length, node_budget=node_budget)
        reports[spec] = check_instance_inequalities(group, queries, ball_radius=2 * max_word_length,
                                                    show_progress=show_progress)
    return reports


@dataclass
class RobustnessReport:
    """Midpoint tables of one group under two generating sets."""
    standard: DivTable
    extended: DivTable
    ratios: Dict[int, float]
    lower: float = 0.25
    upper: float = 4.0

    @property
    def is_valid(self) -> bool:
        return bool(self.ratios) and all(self.lower <= r <= self.upper for r in self.ratios.values())

    def summary(self) -> Dict[str, Any]:
        return {
            "standard": self.standard.group,
            "extended": self.extended.group,
            "ratios": {str(n): r for n, r in self.ratios.items()},
            "bounds": [self.lower, self.upper],
            "passed": self.is_valid,
        }


def genset_robustness(n_max: int,
                      standard_spec: str = "zd:2",
                      extended_spec: str = "zd:2+diag",
                      delta: float = 0.5,
                      gamma: float = 0.0,
                      **table_kwargs) -> RobustnessReport:
    """Per-n ratio extended/standard of the midpoint tables; rows must both be certified."""
    standard = midpoint_div_table(get_group(standard_spec), n_max, delta, gamma, **table_kwargs)
    extended = midpoint_div_table(get_group(extended_spec), n_max, delta, gamma, **table_kwargs)
    ratios: Dict[int, float] = {}
    for row in standard.exact_rows():
        other = extended.row(row.n)
        if other is None or other.status not in (DivStatus.EXACT, DivStatus.BALL_EMPTY):
            continue
        ratios[row.n] = other.value / row.value
    report = RobustnessReport(standard, extended, ratios)
    log = logger.info if report.is_valid else logger.warning
    log(f"Generating-set robustness {standard_spec} vs {extended_spec}: "
        f"ratios in [{min(ratios.values(), default=0):.3g}, {max(ratios.values(), default=0):.3g}]")
    return report


def revalidate_table(table: DivTable) -> InequalityReport:
    """
    Recompute every row's witness with a fresh div_point (or gersten_pair) and
    a fresh WordMetric. A row passes when both are NoPathWithinRadius or both
    are certified with the same value; budget-limited rows are skipped.
    """
    group = get_group(table.group)
    meta = table.metadata
    results: List[CheckResult] = []
    skipped: List[Dict[str, Any]] = []
    for row in table.rows:
        if row.status is DivStatus.BUDGET_EXHAUSTED or row.witness_a is None:
            skipped.append({"query": row.n, "reason": f"row {row.status.value}"})
            continue
        a, b = group.parse_element(row.witness_a), group.parse_element(row.witness_b)
        metric = WordMetric(group, meta["node_budget"])
        if table.mode is TableMode.GERSTEN:
            try:
                fresh = gersten_pair(group, group.identity, a, b, meta["rho"],
                                     search_radius_factor=meta["search_radius_factor"],
                                     node_budget=meta["node_budget"], metric=metric)
            except BudgetExhausted:
                skipped.append({"query": row.n, "reason": "revalidation budget"})
                continue
        else:
            query = DivQuery(a=a, b=b, c=group.identity, delta=meta["delta"], gamma=meta["gamma"],
                             search_radius_factor=meta["search_radius_factor"],
                             node_budget=meta["node_budget"], step_radius=meta.get("step_radius", 1))
            fresh = div_point(group, query, metric=metric)
        if fresh.status is DivStatus.BUDGET_EXHAUSTED:
            skipped.append({"query": row.n, "reason": "revalidation budget"})
            continue
        if row.status is DivStatus.NO_PATH:
            passed = fresh.status is DivStatus.NO_PATH
        else:
            passed = fresh.certified and fresh.value == row.value
        results.append(CheckResult("row_revalidation", passed,
                                   f"n={row.n}: table {row.status.value} {row.value} vs "
                                   f"recomputed {fresh.status.value} {fresh.value}",
                                   {"query": row.n, "witness_a": row.witness_a, "witness_b": row.witness_b}))
    report = InequalityReport(total_queries=len(table.rows), certified_queries=len(results),
                              checks_run=len(results), results=results, skipped=skipped)
    log = logger.info if report.is_valid else logger.error
    log(f"Revalidated {len(results)} rows of the {table.mode.value} table for {table.group}: "
        f"{len(report.violations)} mismatches")
    return report
