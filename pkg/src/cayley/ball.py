"""
GroDiv - Cayley Balls
Breadth-first growth of word-metric balls with parent pointers for
geodesic retrieval.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from loguru import logger
from tqdm import tqdm

from ..errors import BudgetExhausted, UsageError
from ..groups import FinitelyGeneratedGroup, GroupElement


@dataclass
class CayleyBall:
    """
    BFS ball around `center`.

    `order` lists the stored elements in BFS order, so sphere r is the slice
    order[sum(sphere_sizes[:r]) : sum(sphere_sizes[:r + 1])].
    """
    group: FinitelyGeneratedGroup
    center: GroupElement
    radius: int
    dist: Dict[GroupElement, int]
    parent: Dict[GroupElement, Tuple[GroupElement, int]]
    sphere_sizes: List[int]
    order: List[GroupElement] = field(repr=False, default_factory=list)

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.dist

    def __len__(self) -> int:
        return len(self.dist)

    def sphere(self, r: int) -> List[GroupElement]:
        if not 0 <= r < len(self.sphere_sizes):
            return []
        start = sum(self.sphere_sizes[:r])
        return self.order[start:start + self.sphere_sizes[r]]

    def distance(self, x: GroupElement) -> Optional[int]:
        return self.dist.get(x)

    def distance_between(self, g: GroupElement, h: GroupElement) -> Optional[int]:
        """dist(g, h) by left-invariance, or None when it exceeds the radius."""
        group = self.group
        return self.dist.get(group.multiply(self.center, group.multiply(group.inverse(g), h)))

    def summary(self) -> Dict[str, object]:
        return {
            "group": self.group.spec,
            "center": self.group.format_element(self.center),
            "radius": self.radius,
            "size": len(self.dist),
            "sphere_sizes": list(self.sphere_sizes),
        }


def grow_ball(group: FinitelyGeneratedGroup,
              center: GroupElement,
              radius: int,
              node_budget: int,
              show_progress: bool = False) -> CayleyBall:
    """
    Exact BFS ball of the given radius.

    Neighbours are expanded in generator-index order, so the parent map (and
    every geodesic read from it) is deterministic.

    Raises:
        BudgetExhausted: when more than node_budget elements would be stored.
    """
    if radius < 0:
        raise UsageError(f"Ball radius must be non-negative, got {radius}")
    group.encode(center)

    dist = {center: 0}
    parent: Dict[GroupElement, Tuple[GroupElement, int]] = {}
    order = [center]
    sphere_sizes = [1]
    frontier = [center]
    n_gens = group.num_generators

    layers = tqdm(range(1, radius + 1), desc=f"ball {group.spec}", disable=not show_progress, leave=False)
    for r in layers:
        next_frontier = []
        for x in frontier:
            for i in range(n_gens):
                y = group.right_neighbor(x, i)
                if y in dist:
                    continue
                dist[y] = r
                parent[y] = (x, i)
                next_frontier.append(y)
                if len(dist) > node_budget:
                    raise BudgetExhausted(
                        f"Ball of radius {radius} in {group.spec} exceeds node budget {node_budget}",
                        nodes_expanded=len(dist),
                        radius_reached=r - 1,
                        sphere_sizes=sphere_sizes,
                    )
        if not next_frontier:
            break
        sphere_sizes.append(len(next_frontier))
        order.extend(next_frontier)
        frontier = next_frontier

    logger.debug(f"Grew ball in {group.spec}: radius {radius}, {len(dist)} elements, spheres {sphere_sizes}")
    return CayleyBall(group=group, center=center, radius=radius, dist=dist,
                      parent=parent, sphere_sizes=sphere_sizes, order=order)


def geodesic(ball: CayleyBall, x: GroupElement) -> List[GroupElement]:
    """Geodesic from the center to x along BFS parent pointers."""
    if x not in ball.dist:
        raise UsageError(f"{ball.group.format_element(x)} is outside the ball of radius {ball.radius}")
    path = [x]
    while path[-1] != ball.center:
        path.append(ball.parent[path[-1]][0])
    path.reverse()
    return path


def geodesic_word(ball: CayleyBall, x: GroupElement) -> List[int]:
    """Generator indices along the geodesic from the center to x."""
    if x not in ball.dist:
        raise UsageError(f"{ball.group.format_element(x)} is outside the ball of radius {ball.radius}")
    word = []
    while x != ball.center:
        x, index = ball.parent[x]
        word.append(index)
    word.reverse()
    return word


def distances_to(group: FinitelyGeneratedGroup,
                 source: GroupElement,
                 targets: Iterable[GroupElement],
                 max_radius: int,
                 node_budget: int) -> Dict[GroupElement, Optional[int]]:
    """
    Word distances from source to each target by one BFS that stops as soon as
    every target is reached. Targets farther than max_radius map to None.
    """
    remaining = set(targets)
    found: Dict[GroupElement, Optional[int]] = {t: None for t in remaining}
    if source in remaining:
        found[source] = 0
        remaining.discard(source)
    seen = {source}
    frontier = deque([(source, 0)])
    while frontier and remaining:
        x, d = frontier.popleft()
        if d >= max_radius:
            continue
        for i in range(group.num_generators):
            y = group.right_neighbor(x, i)
            if y in seen:
                continue
            seen.add(y)
            if y in remaining:
                found[y] = d + 1
                remaining.discard(y)
            frontier.append((y, d + 1))
            if len(seen) > node_budget:
                raise BudgetExhausted(
                    f"Distance search in {group.spec} exceeds node budget {node_budget}",
                    nodes_expanded=len(seen),
                    radius_reached=d,
                )
    return found


def word_distance(group: FinitelyGeneratedGroup,
                  g: GroupElement,
                  h: GroupElement,
                  max_radius: int,
                  node_budget: int) -> Optional[int]:
    return distances_to(group, g, [h], max_radius, node_budget)[h]
