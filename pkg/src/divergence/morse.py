"""
GroDiv - Morse Detour Probe
Shortest path from g^(-3n) to g^(3n) avoiding the closed D-neighbourhood of
the middle powers {g^i : -n <= i <= n}. Superlinear detours (or
disconnection) are consistent with g being Morse; the probe reports data,
never a theorem.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from ..cayley import PathResult, PathStatus, constrained_shortest_path, grow_ball
from ..errors import BudgetExhausted, UsageError
from ..groups import FinitelyGeneratedGroup, GroupElement, Word

SUPERLINEAR_EXPONENT = 1.25


@dataclass
class MorseProbeResult:
    n: int
    corridor_D: int
    path: PathResult = field(repr=False)
    baseline: int = 0
    search_radius: int = 0

    @property
    def disconnected(self) -> bool:
        return self.path.status is PathStatus.NO_PATH

    @property
    def detour_length(self) -> Optional[int]:
        return self.path.length

    @property
    def ratio(self) -> Optional[float]:
        """Detour length over 6n |g|, the length of the power path."""
        if self.path.length is None:
            return None
        return self.path.length / self.baseline

    def summary(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "corridor_D": self.corridor_D,
            "status": self.path.status.value,
            "detour_length": self.detour_length,
            "baseline": self.baseline,
            "ratio": self.ratio,
            "search_radius": self.search_radius,
            "nodes_expanded": self.path.nodes_expanded,
        }


def _power(group: FinitelyGeneratedGroup, g: GroupElement, k: int) -> GroupElement:
    base = g if k >= 0 else group.inverse(g)
    result = group.identity
    for _ in range(abs(k)):
        result = group.multiply(result, base)
    return result


def morse_probe(group: FinitelyGeneratedGroup,
                g_word: Word,
                n: int,
                corridor_D: int = 1,
                search_radius_factor: float = 4.0,
                node_budget: int = 2_000_000) -> MorseProbeResult:
    """
    Detour around the middle third of the power sequence of g = eval(g_word).

    g must have infinite order; that is not checked.
    """
    if not g_word:
        raise UsageError("morse_probe needs a non-empty word")
    if n < 1 or corridor_D < 0:
        raise UsageError(f"morse_probe needs n >= 1 and D >= 0, got n={n}, D={corridor_D}")
    g = group.eval_word(g_word)
    powers = {i: _power(group, g, i) for i in range(-3 * n, 3 * n + 1)}
    neighbourhood = grow_ball(group, group.identity, corridor_D, node_budget).order
    corridor = {group.multiply(powers[i], s) for i in range(-n, n + 1) for s in neighbourhood}
    if len(corridor) > node_budget:
        raise BudgetExhausted(f"Corridor of {len(corridor)} elements exceeds node budget {node_budget}",
                              nodes_expanded=len(corridor), radius_reached=corridor_D)

    a, b = powers[-3 * n], powers[3 * n]
    if a in corridor or b in corridor:
        raise UsageError(f"Endpoints g^(+-{3 * n}) lie in the D = {corridor_D} corridor; "
                         "g has too small a translation length for this probe")
    baseline = 6 * n * len(g_word)
    search_radius = max(1, math.ceil(search_radius_factor * baseline))
    result = constrained_shortest_path(group, a, b, corridor.__contains__, search_radius, node_budget)
    logger.debug(f"Morse probe {group.spec} n={n} D={corridor_D}: {result.status.value}, length {result.length}")
    return MorseProbeResult(n=n, corridor_D=corridor_D, path=result, baseline=baseline,
                            search_radius=search_radius)


@dataclass
class MorseSeries:
    probes: List[MorseProbeResult]
    verdict: str
    exponent: Optional[float] = None

    def summary(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "exponent": self.exponent,
            "probes": [p.summary() for p in self.probes],
        }


def morse_series(group: FinitelyGeneratedGroup,
                 g_word: Word,
                 ns: Sequence[int],
                 corridor_D: int = 1,
                 search_radius_factor: float = 4.0,
                 node_budget: int = 2_000_000) -> MorseSeries:
    """
    Probe several n and classify: disconnection at any n, or a detour growth
    exponent above 1.25, is Morse-consistent; otherwise non-Morse-consistent.
    """
    probes = [morse_probe(group, g_word, n, corridor_D, search_radius_factor, node_budget) for n in ns]
    if any(p.path.status is PathStatus.BUDGET_EXHAUSTED for p in probes):
        return MorseSeries(probes, "inconclusive")
    if any(p.disconnected for p in probes):
        return MorseSeries(probes, "Morse-consistent")
    found = [p for p in probes if p.detour_length]
    if len(found) < 2 or len({p.n for p in found}) < 2:
        return MorseSeries(probes, "inconclusive")
    slope, _ = np.polyfit(np.log([p.n for p in found]), np.log([p.detour_length for p in found]), 1)
    verdict = "Morse-consistent" if slope > SUPERLINEAR_EXPONENT else "non-Morse-consistent"
    logger.info(f"Morse series {group.spec}: exponent {slope:.3f} -> {verdict}")
    return MorseSeries(probes, verdict, exponent=float(slope))
