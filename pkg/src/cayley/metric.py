"""
GroDiv - Word Metric Oracle
Distances and metric-ball predicates for one group, answered from closed
forms when the group has them, else from a shared identity ball (by
left-invariance), else by a fresh BFS.
"""

import math
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..groups import FinitelyGeneratedGroup, GroupElement
from .ball import CayleyBall, grow_ball, word_distance
from .search import Forbidden, never_forbidden

UNBOUNDED_RADIUS = 10 ** 9


class WordMetric:
    """
    Word metric of a group with a budget.

    The identity ball is grown lazily and only when a closed-form length is
    unavailable; it never shrinks.
    """

    def __init__(self, group: FinitelyGeneratedGroup, node_budget: int, show_progress: bool = False):
        self.group = group
        self.node_budget = node_budget
        self.show_progress = show_progress
        self._ball: Optional[CayleyBall] = None
        self._centered: Dict[Tuple[GroupElement, int], CayleyBall] = {}

    @property
    def has_closed_form(self) -> bool:
        return self.group.word_length(self.group.identity) is not None

    def identity_ball(self, radius: int) -> CayleyBall:
        """Identity ball of at least the given radius."""
        if self._ball is None or self._ball.radius < radius:
            logger.info(f"Growing identity ball of radius {radius} in {self.group.spec}")
            self._ball = grow_ball(self.group, self.group.identity, radius,
                                   self.node_budget, show_progress=self.show_progress)
        return self._ball

    def sphere(self, r: int) -> List[GroupElement]:
        return self.identity_ball(r).sphere(r)

    def length(self, g: GroupElement, max_radius: int = UNBOUNDED_RADIUS) -> Optional[int]:
        return self.distance(self.group.identity, g, max_radius)

    def distance(self, g: GroupElement, h: GroupElement, max_radius: int = UNBOUNDED_RADIUS) -> Optional[int]:
        """dist(g, h), or None when it exceeds max_radius."""
        group = self.group
        delta = group.multiply(group.inverse(g), h)
        exact = group.word_length(delta)
        if exact is not None:
            return exact if exact <= max_radius else None
        if self._ball is not None:
            d = self._ball.distance(delta)
            if d is not None:
                return d if d <= max_radius else None
            if self._ball.radius >= max_radius:
                return None
        return word_distance(group, group.identity, delta, max_radius, self.node_budget)

    def closed_ball(self, c: GroupElement, k: int) -> Forbidden:
        """Predicate x -> dist(c, x) <= k."""
        group = self.group
        if k < 0:
            return never_forbidden
        c_inv = group.inverse(c)
        if self.has_closed_form:
            return lambda x: group.word_length(group.multiply(c_inv, x)) <= k
        if self._ball is not None and self._ball.radius >= k:
            ball = self._ball

            def inside(x: GroupElement) -> bool:
                d = ball.distance(group.multiply(c_inv, x))
                return d is not None and d <= k
            return inside
        key = (c, k)
        if key not in self._centered:
            self._centered[key] = grow_ball(group, c, k, self.node_budget)
        around_c = self._centered[key]
        return lambda x: x in around_c

    def open_ball(self, c: GroupElement, radius: float) -> Forbidden:
        """Predicate x -> dist(c, x) < radius, for a real radius."""
        if radius <= 0:
            return never_forbidden
        k = math.ceil(radius - 1e-9) - 1
        return self.closed_ball(c, k)
