"""
GroDiv - Cayley Package
Word-metric balls, geodesics and constrained shortest paths.
"""

from .ball import (
    CayleyBall,
    distances_to,
    geodesic,
    geodesic_word,
    grow_ball,
    word_distance,
)
from .metric import WordMetric
from .search import (
    Forbidden,
    PathResult,
    PathStatus,
    SearchRegion,
    constrained_shortest_path,
    never_forbidden,
    step_set,
)

__all__ = [
    "CayleyBall",
    "distances_to",
    "geodesic",
    "geodesic_word",
    "grow_ball",
    "word_distance",
    "Forbidden",
    "PathResult",
    "PathStatus",
    "constrained_shortest_path",
    "SearchRegion",
    "never_forbidden",
    "step_set",
    "WordMetric",
]
