"""
GroDiv - Trajectories and their Verifier
A trajectory is a start matrix and a word over the GenSet. The verifier
recomputes every checkpoint with its own multiplication routine and reports
length and exteriority; nothing in a report is taken from the constructor.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..errors import UsageError
from ..groups import Word
from ..groups.matrices import det
from .generators import GenSet, get_genset
from .mat3 import Mat3
from .params import Sl3Params, default_params


@dataclass
class StepRecord:
    """One construction step: letters used and the proxy after it."""
    step: str
    letters: int
    proxy: float
    min_proxy: float
    conjugate: Optional[int] = None
    comparable: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "step": self.step,
            "letters": self.letters,
            "proxy": round(self.proxy, 6),
            "min_proxy": round(self.min_proxy, 6),
            "conjugate": self.conjugate,
            "comparable": self.comparable,
        }


@dataclass
class Trajectory:
    start: Mat3
    word: Word
    genset: GenSet = field(repr=False)
    steps: List[StepRecord] = field(default_factory=list)
    _end: Optional[Mat3] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.word)

    def end(self) -> Mat3:
        if self._end is None:
            self._end = self.genset.eval(self.word, self.start)
        return self._end

    def then(self, other: "Trajectory") -> "Trajectory":
        """This trajectory followed by one starting where it ends."""
        if other.start != self.end():
            raise UsageError(f"Cannot concatenate: {other.start!r} is not the end point {self.end()!r}")
        return Trajectory(self.start, self.word + other.word, self.genset,
                          self.steps + other.steps, other._end)

    def reversed(self) -> "Trajectory":
        """The same path walked from the end point back to the start."""
        steps = [StepRecord(f"reverse {s.step}", s.letters, s.proxy, s.min_proxy, s.conjugate, s.comparable)
                 for s in reversed(self.steps)]
        return Trajectory(self.end(), self.genset.invert(self.word), self.genset, steps, self.start)

    def to_document(self, report: Optional["TrajectoryReport"] = None) -> Dict[str, Any]:
        doc = {
            "start": self.start.to_json(),
            "generators": self.genset.names,
            "word": list(self.word),
            "steps": [s.to_dict() for s in self.steps],
        }
        if report is not None:
            doc["report"] = report.to_dict()
        return doc


def trajectory_from_document(doc: Dict[str, Any], params: Optional[Sl3Params] = None) -> Trajectory:
    """Rebuild a trajectory from its JSON document; generator names must match."""
    genset = get_genset(params or default_params())
    if doc.get("generators") != genset.names:
        raise UsageError("Trajectory document was written with a different generating set")
    return Trajectory(Mat3.from_json(doc["start"]), [int(i) for i in doc["word"]], genset)


@dataclass
class TrajectoryReport:
    steps_valid: bool
    endpoint_match: bool
    length: int
    min_proxy: float
    kappa_achieved: float
    length_ratio: float
    proxy_floor_hit: bool
    kappa_ok: bool
    within_length_bound: bool
    start_proxy: float
    end_proxy: float
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.steps_valid and self.endpoint_match and self.kappa_ok and self.within_length_bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            "steps_valid": self.steps_valid,
            "endpoint_match": self.endpoint_match,
            "length": self.length,
            "min_proxy": round(self.min_proxy, 6),
            "kappa_achieved": round(self.kappa_achieved, 6),
            "length_ratio": round(self.length_ratio, 6),
            "proxy_floor_hit": self.proxy_floor_hit,
            "kappa_ok": self.kappa_ok,
            "within_length_bound": self.within_length_bound,
            "start_proxy": round(self.start_proxy, 6),
            "end_proxy": round(self.end_proxy, 6),
            "error": self.error,
        }


def _mul3(a, b):
    (a0, a1, a2), (a3, a4, a5), (a6, a7, a8) = a
    (b0, b1, b2), (b3, b4, b5), (b6, b7, b8) = b
    return (
        (a0 * b0 + a1 * b3 + a2 * b6, a0 * b1 + a1 * b4 + a2 * b7, a0 * b2 + a1 * b5 + a2 * b8),
        (a3 * b0 + a4 * b3 + a5 * b6, a3 * b1 + a4 * b4 + a5 * b7, a3 * b2 + a4 * b5 + a5 * b8),
        (a6 * b0 + a7 * b3 + a8 * b6, a6 * b1 + a7 * b4 + a8 * b7, a6 * b2 + a7 * b5 + a8 * b8),
    )


def _proxy(rows) -> float:
    return math.log2(1 + max(abs(x) for row in rows for x in row))


def verify_trajectory(t: Trajectory, expected_end: Mat3,
                      params: Optional[Sl3Params] = None) -> TrajectoryReport:
    """Recompute every checkpoint by exact multiplication and fill the report."""
    params = params or default_params()
    generators = [g.payload for g in t.genset.group.generators]
    start_proxy, end_proxy = _proxy(t.start.rows), _proxy(expected_end.rows)
    error = None
    steps_valid = all(det(g) == 1 for g in generators)
    rows = t.start.rows
    low = start_proxy
    for position, index in enumerate(t.word):
        if not (isinstance(index, int) and 0 <= index < len(generators)):
            steps_valid = False
            error = f"invalid letter {index!r} at position {position}"
            break
        rows = _mul3(rows, generators[index])
        low = min(low, _proxy(rows))
    if steps_valid and det(rows) != 1:
        steps_valid = False
        error = "end point lost determinant one"

    endpoint_match = steps_valid and rows == expected_end.rows
    floor_hit = min(start_proxy, end_proxy) < params.proxy_floor
    kappa = low / min(start_proxy, end_proxy)
    length = len(t.word)
    return TrajectoryReport(
        steps_valid=steps_valid,
        endpoint_match=endpoint_match,
        length=length,
        min_proxy=low,
        kappa_achieved=kappa,
        length_ratio=length / max(1.0, start_proxy + end_proxy),
        proxy_floor_hit=floor_hit,
        kappa_ok=floor_hit or kappa >= params.kappa_min,
        within_length_bound=length <= params.length_bound_C * (start_proxy + end_proxy + 1),
        start_proxy=start_proxy,
        end_proxy=end_proxy,
        error=error,
    )
