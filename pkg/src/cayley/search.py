"""
GroDiv - Constrained Shortest Paths
BFS between two elements over the Cayley graph with a forbidden vertex
predicate, a word-ball search region around an origin and a node budget.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional

from loguru import logger

from ..errors import BudgetExhausted, UsageError
from ..groups import FinitelyGeneratedGroup, GroupElement
from .ball import CayleyBall, grow_ball

Forbidden = Callable[[GroupElement], bool]


class PathStatus(Enum):
    FOUND = "Found"
    NO_PATH = "NoPathWithinRadius"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass
class PathResult:
    """Outcome of a constrained shortest path search."""
    status: PathStatus
    path: Optional[List[GroupElement]] = None
    length: Optional[int] = None
    nodes_expanded: int = 0

    @property
    def found(self) -> bool:
        return self.status is PathStatus.FOUND


def never_forbidden(x: GroupElement) -> bool:
    return False


def step_set(group: FinitelyGeneratedGroup, step_radius: int, node_budget: int) -> List[GroupElement]:
    """Non-identity elements of word length <= step_radius, in BFS order."""
    if step_radius < 1:
        raise UsageError(f"step_radius must be >= 1, got {step_radius}")
    ball = grow_ball(group, group.identity, step_radius, node_budget)
    return ball.order[1:]


class SearchRegion:
    """
    The closed word ball of the given radius around `origin`, tested lazily.

    Membership is decided by the group's lower bound, then its closed-form
    length, and only then by a ball grown around the origin on first need.
    """

    def __init__(self, group: FinitelyGeneratedGroup, origin: GroupElement, radius: int, node_budget: int):
        self.group = group
        self.origin = origin
        self.radius = radius
        self.node_budget = node_budget
        self._origin_inv = group.inverse(origin)
        self._ball: Optional[CayleyBall] = None

    def contains(self, x: GroupElement, upper: Optional[int] = None) -> bool:
        """dist(origin, x) <= radius; `upper` is any known upper bound on that distance."""
        if upper is not None and upper <= self.radius:
            return True
        group = self.group
        if group.distance_lower_bound(self.origin, x) > self.radius:
            return False
        exact = group.word_length(group.multiply(self._origin_inv, x))
        if exact is not None:
            return exact <= self.radius
        if self._ball is None:
            logger.debug(f"Growing search region of radius {self.radius} in {group.spec}")
            self._ball = grow_ball(group, self.origin, self.radius, self.node_budget)
        return x in self._ball

    def __contains__(self, x: GroupElement) -> bool:
        return self.contains(x)


def constrained_shortest_path(group: FinitelyGeneratedGroup,
                              a: GroupElement,
                              b: GroupElement,
                              forbidden: Forbidden,
                              search_radius: int,
                              node_budget: int,
                              step_radius: int = 1,
                              origin: Optional[GroupElement] = None) -> PathResult:
    """
    Shortest path from a to b avoiding every element where `forbidden` holds.

    The search covers the non-forbidden elements within word distance
    search_radius of `origin` (default a); paths inside that region may be
    longer than search_radius. With step_radius = C each step may jump to any
    element at word distance <= C (a C-path); length counts steps.

    Raises:
        UsageError: an endpoint is forbidden, or a lies outside the region.
    """
    if forbidden(a) or forbidden(b):
        raise UsageError("Both endpoints of a constrained path must lie outside the forbidden set")
    if search_radius < 0:
        raise UsageError(f"search_radius must be non-negative, got {search_radius}")
    group.encode(a), group.encode(b)
    from_a = origin is None or origin == a
    region = SearchRegion(group, a if origin is None else origin, search_radius, node_budget)

    if step_radius == 1:
        steps = None
    else:
        steps = step_set(group, step_radius, node_budget)
    tree_pruning = group.is_tree and step_radius == 1

    def outside(x: GroupElement, depth: int) -> bool:
        # BFS depth bounds dist(a, x) when the region is centred at a
        if not region.contains(x, step_radius * depth if from_a else None):
            return True
        if tree_pruning:
            # every path to b in a tree visits the whole geodesic
            return any(forbidden(y) for y in group.tree_geodesic(x, b)[1:])
        return False

    try:
        if not region.contains(a, 0 if from_a else None):
            raise UsageError(f"Start {group.format_element(a)} lies outside the search region")
        if a == b:
            return PathResult(PathStatus.FOUND, path=[a], length=0, nodes_expanded=0)
        if not region.contains(b) or outside(a, 0):
            return PathResult(PathStatus.NO_PATH, nodes_expanded=0)

        parent: Dict[GroupElement, Optional[GroupElement]] = {a: None}
        frontier = deque([(a, 0)])
        expanded = 0
        while frontier:
            x, depth = frontier.popleft()
            expanded += 1
            if steps is None:
                neighbours = (group.right_neighbor(x, i) for i in range(group.num_generators))
            else:
                neighbours = (group.multiply(x, s) for s in steps)
            for y in neighbours:
                if y in parent:
                    continue
                parent[y] = x
                if y == b:
                    path = [b]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    logger.debug(f"Constrained path found in {group.spec}: length {depth + 1}, "
                                 f"{expanded} nodes expanded")
                    return PathResult(PathStatus.FOUND, path=path, length=depth + 1, nodes_expanded=expanded)
                if forbidden(y) or outside(y, depth + 1):
                    continue
                frontier.append((y, depth + 1))
                if len(parent) > node_budget:
                    logger.warning(f"Constrained search in {group.spec} hit node budget {node_budget} "
                                   f"at depth {depth}")
                    return PathResult(PathStatus.BUDGET_EXHAUSTED, nodes_expanded=expanded)
    except BudgetExhausted as e:
        logger.warning(f"Search region in {group.spec} does not fit the budget: {e}")
        return PathResult(PathStatus.BUDGET_EXHAUSTED, nodes_expanded=e.nodes_expanded)

    return PathResult(PathStatus.NO_PATH, nodes_expanded=expanded)
