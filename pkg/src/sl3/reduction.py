"""
GroDiv - Reduction to the M Subgroup
Builds an exterior trajectory from any SL3(Z) matrix to an M-element
[[1,0,0],[u1,1,0],[u2,0,1]] by right multiplication, in ten steps:

  1  expose a large entry in the first column (signed column swap)
  2  stable range: make the last two first-row entries coprime
  3  shear the middle entry until it is large
  4  rotate it into the first column
  5  Bezout: set the middle entry to 1
  6  clear the last entry
  7  shear so the first column stays large through step 8
  8  set the corner entry to 1 with an M-word
  9  clear the middle entry
 10  undo the lower-right SL2 block with a continued fraction over S, T

Every multi-letter segment is walked and accepted only when it stays
exterior; otherwise the next conjugate is tried.
"""

import math
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from ..errors import ConstructionError, UsageError
from ..groups import Word
from ..groups.matrices import IntMatrix, mat_mul
from .arithmetic import centered_rep, is_large, stable_range_z, xgcd
from .generators import GenSet, get_genset
from .mat3 import Mat2, Mat3, mat2_inverse, mat2_mul
from .params import Sl3Params, default_params
from .radix import short_word_L, short_word_M
from .trajectory import StepRecord, Trajectory

# Q = lower-right S; Q L(x, y) Q^-1 = E12(-x) E32(-y)
Q = Mat3.lower(((0, -1), (1, 0)))
P12 = Mat3(((0, 1, 0), (-1, 0, 0), (0, 0, 1)))
P13 = Mat3(((0, 0, 1), (0, 1, 0), (-1, 0, 0)))
FLIP12 = Mat3(((-1, 0, 0), (0, -1, 0), (0, 0, 1)))

S2: Mat2 = ((0, -1), (1, 0))
T2: Mat2 = ((1, 1), (0, 1))


def _proxy(rows: IntMatrix) -> float:
    return math.log2(1 + max(abs(x) for row in rows for x in row))


def approx(x: float, y: float, params: Sl3Params) -> bool:
    """x and y are polynomially comparable: each is at most c1 times the other plus c2."""
    return x <= params.approx_c1 * y + params.approx_c2 and y <= params.approx_c1 * x + params.approx_c2


def _centered_range(limit: int) -> Iterator[int]:
    yield 0
    for k in range(1, limit + 1):
        yield k
        yield -k


class TrajectoryBuilder:
    """Accumulates letters from a start matrix, checking each segment as it goes."""

    def __init__(self, start: Mat3, params: Sl3Params, genset: Optional[GenSet] = None):
        self.start = start
        self.current = start
        self.params = params
        self.genset = genset or get_genset(params)
        self.word: Word = []
        self.steps: List[StepRecord] = []

    def walk(self, word: Sequence[int]) -> Tuple[Mat3, float]:
        rows = self.current.rows
        low = _proxy(rows)
        for index in word:
            rows = mat_mul(rows, self.genset.matrix(index))
            low = min(low, _proxy(rows))
        return Mat3(rows, check=False), low

    def exterior(self, start_proxy: float, low: float) -> bool:
        return start_proxy < self.params.proxy_floor or low >= self.params.kappa_min * start_proxy

    def commit(self, step: str, word: Word, end: Mat3, low: float, conjugate: Optional[int] = None):
        before = self.current.proxy()
        self.word += word
        self.current = end
        after = end.proxy()
        comparable = approx(before, after, self.params)
        if not comparable:
            logger.warning(f"{step}: proxy jumped from {before:.1f} to {after:.1f}")
        self.steps.append(StepRecord(step, len(word), after, low, conjugate, comparable))

    def letters(self, step: str, word: Word):
        """Letters committed without retry (signed permutations keep the proxy)."""
        if word:
            end, low = self.walk(word)
            self.commit(step, word, end, low)

    def extend(self, step: str, trajectory: Trajectory):
        """Append a trajectory built from the current matrix, as one step."""
        if trajectory.start != self.current:
            raise UsageError(f"{step}: trajectory starts at {trajectory.start!r}, not at {self.current!r}")
        if trajectory.word:
            end, low = self.walk(trajectory.word)
            conjugate = trajectory.steps[-1].conjugate if trajectory.steps else None
            self.commit(step, trajectory.word, end, low, conjugate)

    def segment(self, step: str, candidates: List[int], make: Callable[[int], Word]):
        """Commit the first candidate conjugate whose word stays exterior."""
        start_proxy = self.current.proxy()
        best = None
        for conjugate in candidates[:self.params.conjugate_retries]:
            word = make(conjugate)
            end, low = self.walk(word)
            if self.exterior(start_proxy, low):
                self.commit(step, word, end, low, conjugate)
                return
            logger.debug(f"{step}: conjugate {conjugate} dips to proxy {low:.2f} from {start_proxy:.2f}")
            if best is None or low > best[1]:
                best = (conjugate, low)
        logger.error(f"{step}: no conjugate keeps the segment exterior")
        raise ConstructionError(f"Segment not exterior after {len(candidates[:self.params.conjugate_retries])} "
                                f"conjugates", step=step, matrix=self.current.literal(),
                                metrics={"start_proxy": start_proxy, "best_conjugate": best[0],
                                         "best_min_proxy": best[1]})

    def l_segment(self, step: str, m: int, n: int, twisted: bool = False):
        """
        Right multiply by L(m, n), or by Q L(m, n) Q^-1 = E12(-m) E32(-n) when
        twisted. The conjugate is ranked on the row holding the largest
        first-column entry, restricted to the columns the block acts on.
        """
        if (m, n) == (0, 0):
            return
        enter = self.genset.frame_word(Q.rows) if twisted else []
        leave = self.genset.frame_word(Q.inverse().rows) if twisted else []
        frame = self.current @ Q if twisted else self.current
        j = max(range(3), key=lambda i: (abs(frame[i, 0]), -i))
        candidates = self.genset.family.rank((frame[j, 0], frame[j, 1]))
        self.segment(step, candidates, lambda c: enter + short_word_L(m, n, c, self.params) + leave)

    def m_segment(self, step: str, p: int, q: int):
        """Right multiply by M(p, q); the conjugate is ranked on the largest row of columns 2-3."""
        if (p, q) == (0, 0):
            return
        j = max(range(3), key=lambda i: (max(abs(self.current[i, 1]), abs(self.current[i, 2])), -i))
        candidates = self.genset.family.rank((self.current[j, 1], self.current[j, 2]))
        self.segment(step, candidates, lambda c: short_word_M(p, q, c, self.params))

    def trajectory(self) -> Trajectory:
        return Trajectory(self.start, list(self.word), self.genset, list(self.steps), self.current)


def first_column_large(gamma: Mat3, params: Sl3Params) -> bool:
    return any(is_large(gamma[i, 0], gamma, params) for i in range(3))


def gammaL_word(gamma: Mat3, m: int, n: int, params: Optional[Sl3Params] = None) -> Trajectory:
    """Exterior trajectory from gamma to gamma L(m, n); gamma needs a large first-column entry."""
    params = params or default_params()
    if not first_column_large(gamma, params):
        raise UsageError(f"gammaL_word needs a large first-column entry in {gamma.literal()}")
    builder = TrajectoryBuilder(gamma, params)
    builder.l_segment("L", m, n)
    return builder.trajectory()


# -- steps --------------------------------------------------------------------

def _step1_expose(b: TrajectoryBuilder):
    g = b.current
    column = max(range(3), key=lambda j: (max(abs(g[i, j]) for i in range(3)), -j))
    if column == 1:
        b.letters("step1", b.genset.frame_word(P12.rows))
    elif column == 2:
        b.letters("step1", b.genset.frame_word(P13.rows))


def _step2_stable_range(b: TrajectoryBuilder) -> bool:
    """Returns False when the first row already became (1, 0, 0)."""
    a, bb, c = b.current.rows[0]
    m, k = stable_range_z(a, bb, c, b.params.stable_range_strategy)
    b.l_segment("step2", k, 0)
    b.l_segment("step2", -m, 0, twisted=True)
    a, bb, c = b.current.rows[0]
    if c == 0:
        # only when a = c = 0, so the middle entry is +-1
        b.letters("step2", b.genset.frame_word(P12.inverse().rows))
        if b.current[0, 0] == -1:
            b.letters("step2", b.genset.frame_word(FLIP12.rows))
        return False
    return True


def _shear_is_large(rows: IntMatrix, k: int, params: Sl3Params) -> bool:
    """Row-one middle entry of rows E32(k) is large in rows E32(k)."""
    col2 = [r[1] + k * r[2] for r in rows]
    biggest = max(max(abs(x) for x in col2), max(abs(r[j]) for r in rows for j in (0, 2)))
    return math.log2(1 + abs(col2[0])) >= params.C_large * math.log2(1 + biggest)


def _smallest_large_shear(rows: IntMatrix, params: Sl3Params) -> int:
    for k in _centered_range(64):
        if _shear_is_large(rows, k, params):
            return k
    best = None
    for sign in (1, -1):
        hi = 128
        while not _shear_is_large(rows, sign * hi, params):
            hi *= 2
            if hi.bit_length() > 4 * max(1, _proxy(rows)) + 64:
                break
        else:
            lo = hi // 2
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if _shear_is_large(rows, sign * mid, params):
                    hi = mid
                else:
                    lo = mid
            if best is None or hi < abs(best):
                best = sign * hi
    if best is None:
        raise ConstructionError("No shear makes the middle entry large", step="step3",
                                matrix=Mat3(rows, check=False).literal())
    return best


def _step3_make_large(b: TrajectoryBuilder):
    k = _smallest_large_shear(b.current.rows, b.params)
    b.l_segment("step3", 0, -k, twisted=True)


def _step5_bezout(b: TrajectoryBuilder):
    bp, mid, c = b.current.rows[0]
    g, u1, _ = xgcd(bp, c)
    if g != 1:
        raise ConstructionError(f"gcd({bp}, {c}) = {g} after the stable range step", step="step5",
                                matrix=b.current.literal())
    target = 1 - mid
    u = centered_rep(u1 * target, c)
    v, rem = divmod(target - bp * u, c)
    if rem:
        raise ConstructionError("Bezout quotient is not exact", step="step5", matrix=b.current.literal())
    b.l_segment("step5", -u, -v, twisted=True)


def _step7_shear(b: TrajectoryBuilder) -> int:
    """Shear x such that the first column stays large after this step and step 8."""
    rows = b.current.rows
    corner = 1 - rows[0][0]

    def after(x: int) -> Tuple[Mat3, Mat3]:
        g7 = Mat3(tuple((r[0], r[1] + x * r[2], r[2]) for r in rows), check=False)
        g8 = Mat3(tuple((r[0] + corner * r[1], r[1], r[2]) for r in g7.rows), check=False)
        return g7, g8

    def plain(x: int) -> bool:
        g7, g8 = after(x)
        return first_column_large(g7, b.params) and first_column_large(g8, b.params)

    def preferred(x: int) -> bool:
        g7, _ = after(x)
        return plain(x) and any(is_large(g7[i, j], g7, b.params) for i in range(3) for j in (1, 2))

    limit = b.params.shear_search_limit
    for test in (preferred, plain):
        for x in _centered_range(limit):
            if test(x):
                return x
    logger.warning(f"step7: no shear within {limit} keeps the first column large; using x = 0")
    return 0


def _step10_block(b: TrajectoryBuilder):
    """Right multiply by the inverse of the lower-right block, as S/T letters and L-words."""
    block = b.current.lower_block()
    x = mat2_inverse(block)
    ops: List[Tuple[str, int]] = []
    while x[1][0] != 0:
        c, d = x[1]
        n = (centered_rep(d, c) - d) // c
        if n:
            x = mat2_mul(x, ((1, n), (0, 1)))
            ops.append(("T", n))
        x = mat2_mul(x, S2)
        ops.append(("S", 1))
    if x[0][0] == 1:
        ops.append(("T", -x[0][1]))
    else:
        ops += [("T", x[0][1]), ("S", 1), ("S", 1)]
    # the block inverse is the product of the inverted ops in reverse order
    for kind, n in reversed(ops):
        if kind == "S":
            b.letters("step10", b.genset.letters("LS-"))
        elif abs(n) > b.params.M_digit and first_column_large(b.current, b.params):
            b.extend("step10", gammaL_word(b.current, 0, -n, b.params))
        elif abs(n) > b.params.M_digit:
            b.l_segment("step10", 0, -n)
        elif n:
            b.letters("step10", b.genset.signed("LT", -n))


def connect_to_M(gamma: Mat3, params: Optional[Sl3Params] = None) -> Tuple[Trajectory, Tuple[int, int]]:
    """Exterior trajectory from gamma to an M-element, and that element's vector."""
    params = params or default_params()
    b = TrajectoryBuilder(gamma, params)
    if gamma.rows[0] != (1, 0, 0):
        _step1_expose(b)
        if _step2_stable_range(b):
            _step3_make_large(b)
            b.letters("step4", b.genset.frame_word(P12.inverse().rows))
            _step5_bezout(b)
            b.l_segment("step6", 0, -b.current[0, 2])
            x = _step7_shear(b)
            b.l_segment("step7", 0, -x, twisted=True)
            b.m_segment("step8", 1 - b.current[0, 0], 0)
            b.letters("step9", b.genset.letters("E12-"))
    if b.current.rows[0] != (1, 0, 0):
        raise ConstructionError(f"First row is {b.current.rows[0]} after step 9", step="step9",
                                matrix=b.current.literal())
    _step10_block(b)
    if not b.current.is_M():
        raise ConstructionError("End point is not an M-element", step="step10", matrix=b.current.literal())
    u = b.current.m_vector()
    logger.debug(f"connect_to_M: {len(b.word)} letters, proxy {gamma.proxy():.1f} -> {b.current.proxy():.1f}")
    return b.trajectory(), u
