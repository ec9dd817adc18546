"""
GroDiv - SL3 Generating Set
Elementary matrices, signed permutations, block-embedded conjugates of the
hyperbolic matrix A and the lower-right SL2 generators, plus the conjugate
family that keeps row vectors away from every eigenline.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from loguru import logger

from ..cayley import CayleyBall, geodesic_word, grow_ball
from ..errors import ConfigurationError, UsageError
from ..groups import MatrixGroup, Word, sl2z_generators, sl3z_generators
from ..groups.matrices import IntMatrix
from .mat3 import Mat2, Mat3, mat2_inverse, mat2_mul
from .params import Sl3Params

COVERAGE_MARGIN_DEG = 0.5
POWER_WINDOW = 12


def _line_angle(x: float, y: float) -> float:
    return math.atan2(y, x) % math.pi


def _line_distance(s: float, t: float) -> float:
    d = abs(s - t) % math.pi
    return min(d, math.pi - d)


def row_angle(row: Tuple[int, int]) -> float:
    """Direction of an integer row vector of any size, as a line angle in [0, pi)."""
    x, y = row
    if x == 0 and y == 0:
        raise UsageError("Row (0, 0) has no direction")
    shift = max(0, max(abs(x), abs(y)).bit_length() - 60)
    # floor shifts keep the sign and lose only low-order bits
    return _line_angle(float(x >> shift), float(y >> shift))


@dataclass
class Conjugate:
    """B = g^-1 A g together with the left eigenlines of B."""
    conjugator: str
    matrix: Mat2
    eigenlines: Tuple[float, float]

    def clearance(self, angle: float) -> float:
        return min(_line_distance(angle, line) for line in self.eigenlines)


def _left_eigenlines(a: Mat2) -> Tuple[float, float]:
    values, vectors = np.linalg.eig(np.array(a, dtype=float).T)
    order = np.argsort(-np.abs(values))
    return tuple(_line_angle(vectors[0, i], vectors[1, i]) for i in order)


def _conjugator_pool() -> List[Tuple[str, Mat2]]:
    """All words of length <= 2 over S, T, T^-1."""
    letters = {"S": ((0, -1), (1, 0)), "T": ((1, 1), (0, 1)), "t": ((1, -1), (0, 1))}
    pool = [("I", ((1, 0), (0, 1)))]
    pool += [(name, m) for name, m in letters.items()]
    for n1, m1 in letters.items():
        for n2, m2 in letters.items():
            if {n1, n2} != {"T", "t"}:
                pool.append((n1 + n2, mat2_mul(m1, m2)))
    return pool


@dataclass
class ConjugateFamily:
    members: List[Conjugate]
    angle_floor: float
    c0: float = 0.0

    def rank_angle(self, angle: float) -> List[int]:
        """Indices of members whose eigenlines both clear the direction by the angle floor, best first."""
        scored = [(m.clearance(angle), i) for i, m in enumerate(self.members)]
        ranked = [i for score, i in sorted(scored, key=lambda s: (-s[0], s[1])) if score >= self.angle_floor]
        if not ranked:
            raise ConfigurationError(f"No conjugate clears row direction {math.degrees(angle):.2f} deg; "
                                     "conjugate family does not cover all directions")
        return ranked

    def rank(self, row: Tuple[int, int]) -> List[int]:
        return self.rank_angle(row_angle(row))

    def select(self, row: Tuple[int, int]) -> int:
        return self.rank(row)[0]


def build_conjugate_family(params: Sl3Params) -> ConjugateFamily:
    """Greedy cover of the sampled directions, starting from A itself."""
    a = tuple(tuple(r) for r in params.A)
    required = params.angle_floor + math.radians(COVERAGE_MARGIN_DEG)
    samples = np.arange(params.conjugate_samples) * math.pi / params.conjugate_samples

    candidates = []
    seen = set()
    for name, g in _conjugator_pool():
        b = mat2_mul(mat2_inverse(g), mat2_mul(a, g))
        if b in seen:
            continue
        seen.add(b)
        candidates.append(Conjugate(name, b, _left_eigenlines(b)))

    def covers(c: Conjugate) -> np.ndarray:
        return np.array([c.clearance(s) >= required for s in samples])

    chosen = [candidates[0]]
    covered = covers(candidates[0])
    rest = candidates[1:]
    while not covered.all() and rest:
        gains = [int((covers(c) & ~covered).sum()) for c in rest]
        best = int(np.argmax(gains))
        if gains[best] == 0:
            break
        chosen.append(rest.pop(best))
        covered |= covers(chosen[-1])
    if not covered.all():
        raise ConfigurationError(f"Conjugate family for A={params.A} leaves {int((~covered).sum())} of "
                                 f"{len(samples)} directions uncovered at angle floor {params.angle_floor_deg} deg")

    family = ConjugateFamily(chosen, params.angle_floor)
    family.c0 = _non_contraction_constant(family, samples)
    logger.info(f"Conjugate family: {[c.conjugator for c in chosen]}, c0 = {family.c0:.4f}")
    return family


def _non_contraction_constant(family: ConjugateFamily, samples: np.ndarray) -> float:
    """min over sampled rows and powers |k| <= 12 of |row B^k| / |row| for the selected B."""
    c0 = math.inf
    for s in samples:
        row = np.array([math.cos(s), math.sin(s)])
        b = np.array(family.members[family.rank_angle(float(s))[0]].matrix, dtype=float)
        for k in range(-POWER_WINDOW, POWER_WINDOW + 1):
            c0 = min(c0, float(np.linalg.norm(row @ np.linalg.matrix_power(b, k))))
    return c0


@dataclass
class GenSet:
    """
    Ordered named generators: E_ij(+-1), signed permutations P_ij(+-1),
    UA<i>+- / LA<i>+- (conjugate i in the upper-left / lower-right block)
    and LS+-, LT+- (S and T in the lower-right block).
    """
    family: ConjugateFamily
    group: MatrixGroup
    frames: CayleyBall = field(repr=False)

    @property
    def names(self) -> List[str]:
        return self.group.generator_names()

    def index(self, name: str) -> int:
        return self.group.index_of(name)

    def matrix(self, index: int) -> IntMatrix:
        return self.group.generators[index].payload

    def letters(self, name: str, count: int = 1) -> Word:
        return [self.index(name)] * count

    def signed(self, stem: str, t: int) -> Word:
        """|t| copies of stem+ (t > 0) or stem- (t < 0)."""
        return self.letters(f"{stem}{'+' if t > 0 else '-'}", abs(t)) if t else []

    def eval(self, word: Sequence[int], start: Mat3 = None) -> Mat3:
        g = self.group.eval_word(word)
        m = Mat3(g.payload, check=False)
        return start @ m if start is not None else m

    def invert(self, word: Sequence[int]) -> Word:
        return self.group.invert_word(word)

    def frame_word(self, target: IntMatrix) -> Word:
        """Shortest word over the signed permutations evaluating to target."""
        element = self.frames.group.element(target)
        word = geodesic_word(self.frames, element)
        return [self.index(self.frames.group.generators[i].name) for i in word]


def _genset_generators(family: ConjugateFamily) -> List[Tuple[str, IntMatrix]]:
    gens = list(sl3z_generators())
    for i, c in enumerate(family.members):
        inv = mat2_inverse(c.matrix)
        gens += [(f"UA{i}+", Mat3.upper(c.matrix).rows), (f"UA{i}-", Mat3.upper(inv).rows)]
    for i, c in enumerate(family.members):
        inv = mat2_inverse(c.matrix)
        gens += [(f"LA{i}+", Mat3.lower(c.matrix).rows), (f"LA{i}-", Mat3.lower(inv).rows)]
    for name, m in sl2z_generators():
        gens.append((f"L{name}", Mat3.lower(m).rows))
    return gens


_GENSETS: Dict[Tuple, GenSet] = {}


def get_genset(params: Sl3Params) -> GenSet:
    """GenSet for the given A and angle floor, built once per process."""
    key = (tuple(map(tuple, params.A)), params.angle_floor_deg, params.conjugate_samples)
    if key not in _GENSETS:
        family = build_conjugate_family(params)
        group = MatrixGroup("sl3z-genset", 3, _genset_generators(family))
        perms = [(name, m) for name, m in sl3z_generators() if name.startswith("P")]
        frame_group = MatrixGroup("sl3z-frames", 3, perms)
        frames = grow_ball(frame_group, frame_group.identity, radius=6, node_budget=1000)
        if len(frames) != 24:
            raise ConfigurationError(f"Signed permutations generate {len(frames)} elements, expected 24")
        _GENSETS[key] = GenSet(family=family, group=group, frames=frames)
        logger.debug(f"GenSet built: {group.num_generators} generators")
    return _GENSETS[key]


def select_conjugate(row: Tuple[int, int], params: Sl3Params) -> int:
    """Index of the conjugate whose eigenlines best clear the row direction."""
    return get_genset(params).family.select(row)
