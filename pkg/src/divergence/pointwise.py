"""
GroDiv - Pointwise Divergence
div(a, b, c; delta, gamma): length of the shortest path from a to b that
avoids the open ball of radius delta*r - gamma around c, r = dist(c, {a, b}).
Also the Gersten pair distance measured outside a ball around a basepoint.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from loguru import logger

from ..cayley import PathStatus, WordMetric, constrained_shortest_path, geodesic
from ..errors import BudgetExhausted, InvalidTriple, UsageError
from ..groups import FinitelyGeneratedGroup, GroupElement


class DivStatus(Enum):
    EXACT = "Exact"
    NO_PATH = "NoPathWithinRadius"
    BUDGET_EXHAUSTED = "BudgetExhausted"
    BALL_EMPTY = "BallEmpty"


_FROM_PATH_STATUS = {
    PathStatus.FOUND: DivStatus.EXACT,
    PathStatus.NO_PATH: DivStatus.NO_PATH,
    PathStatus.BUDGET_EXHAUSTED: DivStatus.BUDGET_EXHAUSTED,
}


@dataclass
class DivQuery:
    """A divergence query; validated on construction."""
    a: GroupElement
    b: GroupElement
    c: GroupElement
    delta: float = 0.5
    gamma: float = 0.0
    search_radius_factor: float = 4.0
    node_budget: int = 2_000_000
    step_radius: int = 1
    search_radius: Optional[int] = None

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise UsageError(f"delta must lie in (0, 1), got {self.delta}")
        if self.gamma < 0:
            raise UsageError(f"gamma must be >= 0, got {self.gamma}")
        if self.search_radius_factor <= 0:
            raise UsageError(f"search_radius_factor must be positive, got {self.search_radius_factor}")
        if len({self.a.group, self.b.group, self.c.group}) != 1:
            raise UsageError("a, b and c must belong to the same group")
        if self.a == self.c and self.b == self.c:
            raise UsageError("a divergence query needs a != c or b != c")

    def with_params(self, **changes) -> "DivQuery":
        values = {**self.__dict__, **changes}
        return DivQuery(**values)


@dataclass
class DivResult:
    """
    Outcome of a divergence query.

    BallEmpty means the forbidden radius was <= 0 and value = dist(a, b).
    """
    r: Optional[int]
    forbidden_radius: Optional[float]
    status: DivStatus
    value: Optional[int] = None
    dist_ab: Optional[int] = None
    search_radius: Optional[int] = None
    nodes_expanded: int = 0
    path: Optional[List[GroupElement]] = field(default=None, repr=False)

    @property
    def certified(self) -> bool:
        return self.status in (DivStatus.EXACT, DivStatus.BALL_EMPTY)

    def comparable_value(self) -> float:
        """Value with NoPathWithinRadius read as +inf (same search radius)."""
        if self.status is DivStatus.NO_PATH:
            return math.inf
        if self.value is None:
            raise UsageError(f"Result with status {self.status.value} has no comparable value")
        return float(self.value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "forbidden_radius": self.forbidden_radius,
            "status": self.status.value,
            "value": self.value,
            "dist_ab": self.dist_ab,
            "search_radius": self.search_radius,
            "nodes_expanded": self.nodes_expanded,
        }


def _search_radius(factor: float, dist_ab: int, explicit: Optional[int]) -> int:
    if explicit is not None:
        return explicit
    return max(1, math.ceil(factor * dist_ab))


def _avoiding_path(group: FinitelyGeneratedGroup,
                   metric: WordMetric,
                   x: GroupElement,
                   y: GroupElement,
                   center: GroupElement,
                   r: int,
                   radius: float,
                   dist_xy: int,
                   search_radius: int,
                   node_budget: int,
                   step_radius: int) -> DivResult:
    if radius <= 0:
        return DivResult(r=r, forbidden_radius=radius, status=DivStatus.BALL_EMPTY,
                         value=dist_xy, dist_ab=dist_xy, search_radius=search_radius)
    forbidden = metric.open_ball(center, radius)
    if forbidden(x) or forbidden(y):
        raise InvalidTriple(f"Endpoint inside the forbidden ball of radius {radius} (r = {r})",
                            r=r, forbidden_radius=radius)
    found = constrained_shortest_path(group, x, y, forbidden, search_radius, node_budget,
                                      step_radius=step_radius)
    return DivResult(r=r, forbidden_radius=radius, status=_FROM_PATH_STATUS[found.status],
                     value=found.length, dist_ab=dist_xy, search_radius=search_radius,
                     nodes_expanded=found.nodes_expanded, path=found.path)


def div_point(group: FinitelyGeneratedGroup,
              q: DivQuery,
              metric: Optional[WordMetric] = None) -> DivResult:
    """
    Pointwise divergence of one query.

    Raises:
        InvalidTriple: a or b lies inside the forbidden ball.
    """
    metric = metric or WordMetric(group, q.node_budget)
    try:
        r = min(metric.distance(q.c, q.a), metric.distance(q.c, q.b))
        dist_ab = metric.distance(q.a, q.b)
    except BudgetExhausted as e:
        logger.warning(f"Budget exhausted computing distances for a divergence query in {group.spec}: {e}")
        return DivResult(r=None, forbidden_radius=None, status=DivStatus.BUDGET_EXHAUSTED,
                         nodes_expanded=e.nodes_expanded)

    radius = q.delta * r - q.gamma
    search_radius = _search_radius(q.search_radius_factor, dist_ab, q.search_radius)
    try:
        result = _avoiding_path(group, metric, q.a, q.b, q.c, r, radius, dist_ab,
                                search_radius, q.node_budget, q.step_radius)
    except BudgetExhausted as e:
        logger.warning(f"Budget exhausted growing the forbidden ball in {group.spec}: {e}")
        return DivResult(r=r, forbidden_radius=radius, status=DivStatus.BUDGET_EXHAUSTED,
                         dist_ab=dist_ab, search_radius=search_radius, nodes_expanded=e.nodes_expanded)
    logger.debug(f"div_point {group.spec}: r={r}, radius={radius:.3g}, "
                 f"status={result.status.value}, value={result.value}")
    return result


def gersten_pair(group: FinitelyGeneratedGroup,
                 x0: GroupElement,
                 x: GroupElement,
                 y: GroupElement,
                 rho: float,
                 search_radius_factor: float = 4.0,
                 node_budget: int = 2_000_000,
                 metric: Optional[WordMetric] = None,
                 search_radius: Optional[int] = None) -> DivResult:
    """
    Distance from x to y outside the open ball of radius rho*r around x0,
    where r = dist(x0, x) = dist(x0, y).
    """
    if rho <= 0:
        raise UsageError(f"rho must be positive, got {rho}")
    metric = metric or WordMetric(group, node_budget)
    rx, ry = metric.distance(x0, x), metric.distance(x0, y)
    if rx != ry:
        raise UsageError(f"Gersten pair needs equal radii, got dist(x0,x)={rx} and dist(x0,y)={ry}")
    if rx == 0:
        raise UsageError("Gersten pair needs x and y away from the basepoint")
    dist_xy = metric.distance(x, y)
    limit = _search_radius(search_radius_factor, dist_xy, search_radius)
    return _avoiding_path(group, metric, x, y, x0, rx, rho * rx, dist_xy,
                          limit, node_budget, step_radius=1)


def fixed_geodesic(group: FinitelyGeneratedGroup,
                   metric: WordMetric,
                   a: GroupElement,
                   b: GroupElement) -> List[GroupElement]:
    """
    The chosen geodesic [a, b]: the BFS geodesic of a^-1 b translated by a,
    so sub-geodesics are again chosen geodesics.
    """
    if group.is_tree:
        return group.tree_geodesic(a, b)
    delta = group.multiply(group.inverse(a), b)
    length = metric.distance(group.identity, delta)
    ball = metric.identity_ball(length)
    return [group.multiply(a, x) for x in geodesic(ball, delta)]
