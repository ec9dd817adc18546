"""
GroDiv - Error Hierarchy
Exceptions shared by every layer. The CLI maps them to stable exit codes.
"""

from typing import Any, Dict, Optional


class GroDivError(Exception):
    """Base class for all GroDiv errors."""

    exit_code: int = 1


class UsageError(GroDivError, ValueError):
    """Invalid input: bad literal, mixed groups, violated precondition."""

    exit_code = 2


class UnsupportedOperation(UsageError):
    """Operation not available for the instantiated group."""


class InvalidTriple(UsageError):
    """Divergence query with an endpoint inside the forbidden ball."""

    def __init__(self, message: str, r: int, forbidden_radius: float):
        super().__init__(message)
        self.r = r
        self.forbidden_radius = forbidden_radius


class ConfigurationError(GroDivError, ValueError):
    """Invalid parameters or failed startup assertion."""

    exit_code = 2


class BudgetExhausted(GroDivError, RuntimeError):
    """Node cap hit during a breadth-first exploration."""

    exit_code = 3

    def __init__(self,
                 message: str,
                 nodes_expanded: int,
                 radius_reached: int,
                 sphere_sizes: Optional[list] = None):
        super().__init__(message)
        self.nodes_expanded = nodes_expanded
        self.radius_reached = radius_reached
        self.sphere_sizes = list(sphere_sizes or [])

    def stats(self) -> Dict[str, Any]:
        return {
            "nodes_expanded": self.nodes_expanded,
            "radius_reached": self.radius_reached,
            "sphere_sizes": self.sphere_sizes,
        }


class ConstructionError(GroDivError, RuntimeError):
    """An SL3 construction step could not be verified after retries."""

    exit_code = 1

    def __init__(self, message: str, step: str, matrix: Any = None,
                 metrics: Optional[Dict[str, Any]] = None):
        super().__init__(f"[{step}] {message}")
        self.step = step
        self.matrix = matrix
        self.metrics = dict(metrics or {})
