"""
GroDiv - Two-Sided Radix Expansion
Writes a lattice vector v in the semidirect product of <B> and Z^2 as a
Horner script over {apply B, apply B^-1, add a small digit}, which
translates into logarithmic-length words for the L and M subgroups.

Digit choice uses fixed-point eigen-projections computed with math.isqrt;
every script is re-evaluated with exact integers before it is returned.
"""

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..errors import ConstructionError, UsageError
from ..groups import Word
from .generators import GenSet, get_genset
from .mat3 import Mat2, mat2_apply, mat2_inverse, mat2_mul
from .params import Sl3Params, default_params

Vec = Tuple[int, int]
Symbol = Tuple[str, object]  # ("add", (t1, t2)) or ("pow", +1 / -1)

SYMBOL_CAP_FACTOR = 64
# recorded constants of the word-length bound len <= C1 log2(2 + |v|) + C2
LENGTH_C1 = 32.0
LENGTH_C2 = 32.0

IDENTITY2: Mat2 = ((1, 0), (0, 1))


def _norm(v: Vec) -> int:
    return max(abs(v[0]), abs(v[1]))


def _sub(v: Vec, w: Vec) -> Vec:
    return v[0] - w[0], v[1] - w[1]


def _round_div(n: int, d: int) -> int:
    """Nearest integer to n / d for d > 0, halves rounded up."""
    return (2 * n + d) // (2 * d)


class EigenProjector:
    """Rounded projection onto the unstable eigenline of B along the stable one."""

    def __init__(self, b: Mat2):
        self.b = b
        self.trace = b[0][0] + b[1][1]
        self.disc = self.trace * self.trace - 4
        if self.disc <= 0:
            raise UsageError(f"Matrix {b} is not hyperbolic (trace {self.trace})")
        self.sign = 1 if self.trace > 0 else -1

    def unstable(self, x: Vec) -> Vec:
        # P_u x = sign * (2Bx - tr x) / (2 sqrt(D)) + x / 2
        bits = max(_norm(x).bit_length(), 1) + 64
        root = math.isqrt(self.disc << (2 * bits))
        bx = mat2_apply(self.b, x)
        y = (2 * bx[0] - self.trace * x[0], 2 * bx[1] - self.trace * x[1])
        scale = 1 << bits
        return tuple(_round_div(self.sign * yi * scale + xi * root, 2 * root) for xi, yi in zip(x, y))

    def stable(self, x: Vec) -> Vec:
        return _sub(x, self.unstable(x))


@dataclass
class RadixScript:
    target: Vec
    matrix: Mat2
    symbols: List[Symbol] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.symbols)

    def digits(self) -> List[Vec]:
        return [s[1] for s in self.symbols if s[0] == "add"]


def evaluate_script(symbols: List[Symbol], b: Mat2) -> Tuple[Mat2, Vec]:
    """Horner evaluation in the affine group: (M1, w1)(M2, w2) = (M1 M2, w1 + M1 w2)."""
    b_inv = mat2_inverse(b)
    m, w = IDENTITY2, (0, 0)
    for kind, arg in symbols:
        if kind == "add":
            mt = mat2_apply(m, arg)
            w = (w[0] + mt[0], w[1] + mt[1])
        else:
            m = mat2_mul(m, b if arg > 0 else b_inv)
    return m, w


def _chunks(t: Vec, bound: int) -> List[Symbol]:
    out = []
    while t != (0, 0):
        piece = (max(-bound, min(bound, t[0])), max(-bound, min(bound, t[1])))
        out.append(("add", piece))
        t = _sub(t, piece)
    return out


def _expansion(v: Vec, step, power: int, m_digit: int, cap: int) -> List[Symbol]:
    """
    Horner expansion v = t0 + B^power (t1 + B^power (...)), where step maps
    the current remainder to the next one.
    """
    symbols: List[Symbol] = []
    depth = 0
    while _norm(v) > m_digit and len(symbols) < cap:
        nxt, digit = step(v)
        if _norm(nxt) >= _norm(v):
            break
        symbols += _chunks(digit, m_digit)
        symbols.append(("pow", power))
        depth += 1
        v = nxt
    symbols += _chunks(v, m_digit)
    symbols += [("pow", -power)] * depth
    return symbols


def two_sided_radix(v: Vec, b: Mat2, m_digit: int) -> RadixScript:
    """
    Script whose Horner evaluation is exactly (I, v): a positive-power
    expansion of the unstable part followed by a negative-power expansion of
    the rest.
    """
    v = (int(v[0]), int(v[1]))
    script = RadixScript(target=v, matrix=b)
    if v == (0, 0):
        return script
    projector = EigenProjector(b)
    b_inv = mat2_inverse(b)
    cap = int(SYMBOL_CAP_FACTOR * math.log2(2 + _norm(v)))

    def positive_step(p: Vec) -> Tuple[Vec, Vec]:
        nxt = projector.unstable(mat2_apply(b_inv, p))
        return nxt, _sub(p, mat2_apply(b, nxt))

    def negative_step(q: Vec) -> Tuple[Vec, Vec]:
        nxt = projector.stable(mat2_apply(b, q))
        return nxt, _sub(q, mat2_apply(b_inv, nxt))

    p0 = projector.unstable(v)
    q0 = _sub(v, p0)
    if _norm(v) <= m_digit:
        script.symbols = _chunks(v, m_digit)
    else:
        script.symbols = (_expansion(p0, positive_step, 1, m_digit, cap)
                          + _expansion(q0, negative_step, -1, m_digit, cap))

    if len(script) > cap:
        raise ConstructionError(f"Radix expansion of {v} used {len(script)} symbols, cap {cap}; "
                                f"M_digit={m_digit} is mis-tuned for B={b}", step="radix",
                                metrics={"symbols": len(script), "cap": cap})
    m, w = evaluate_script(script.symbols, b)
    if m != IDENTITY2 or w != v:
        raise ConstructionError(f"Radix script for {v} evaluates to {w} (block {m})", step="radix")
    return script


def _block_letters(frame: str, conj_index: int) -> Tuple[str, str, str]:
    if frame == "L":
        return "E13", "E23", f"UA{conj_index}"
    if frame == "M":
        return "E21", "E31", f"LA{conj_index}"
    raise UsageError(f"Unknown frame {frame!r}; use 'L' or 'M'")


def script_word(script: RadixScript, genset: GenSet, frame: str, conj_index: int) -> Word:
    """Translate digits into elementary letters and powers into block letters."""
    first, second, block = _block_letters(frame, conj_index)
    word: Word = []
    for kind, arg in script.symbols:
        if kind == "add":
            word += genset.signed(first, arg[0]) + genset.signed(second, arg[1])
        else:
            word += genset.letters(f"{block}{'+' if arg > 0 else '-'}")
    return word


def literal_word(v: Vec, genset: GenSet, frame: str) -> Word:
    first, second, _ = _block_letters(frame, 0)
    return genset.signed(first, v[0]) + genset.signed(second, v[1])


def short_word(v: Vec, frame: str, conj_index: Optional[int] = None,
               params: Optional[Sl3Params] = None) -> Word:
    """Shorter of the literal word and the radix word for L(v) or M(v)."""
    params = params or default_params()
    genset = get_genset(params)
    conj_index = 0 if conj_index is None else conj_index
    if not 0 <= conj_index < len(genset.family.members):
        raise UsageError(f"Conjugate index {conj_index} out of range "
                         f"(family has {len(genset.family.members)} members)")
    if _norm(v) <= params.M_digit:
        return literal_word(v, genset, frame)
    script = two_sided_radix(v, genset.family.members[conj_index].matrix, params.M_digit)
    word = script_word(script, genset, frame, conj_index)
    # literal length is |v1| + |v2|
    return word if len(word) < abs(v[0]) + abs(v[1]) else literal_word(v, genset, frame)


def short_word_L(m: int, n: int, conj_index: Optional[int] = None,
                 params: Optional[Sl3Params] = None) -> Word:
    """Word for [[1,0,m],[0,1,n],[0,0,1]] over E13, E23 and one upper-left conjugate."""
    return short_word((m, n), "L", conj_index, params)


def short_word_M(p: int, q: int, conj_index: Optional[int] = None,
                 params: Optional[Sl3Params] = None) -> Word:
    """Word for [[1,0,0],[p,1,0],[q,0,1]] over E21, E31 and one lower-right conjugate."""
    return short_word((p, q), "M", conj_index, params)


def length_bound(v: Vec) -> float:
    return LENGTH_C1 * math.log2(2 + _norm(v)) + LENGTH_C2


def _max_entry(m: Mat2) -> int:
    return max(abs(x) for row in m for x in row)


def lattice_bfs_lengths(b: Mat2, max_norm: int, radius: Optional[int] = None) -> Dict[Vec, int]:
    """
    Exact word lengths of L(v), |v| <= max_norm, in the subgroup generated by
    E13, E23 and the upper-left block B. BFS runs over pairs (k, w) standing
    for the affine map (B^k, w), up to `radius` steps (default 2 * max_norm,
    the length of the longest literal word).

    A state at depth d with r = radius - d steps left is dropped only when no
    continuation can end at some (0, v): it needs |k| <= r, and the at most
    r - |k| translations left each add a vector of norm at most
    max |B^j| over |j| <= (r + |k|) / 2.
    """
    radius = 2 * max_norm if radius is None else radius
    b_inv = mat2_inverse(b)
    powers = {0: IDENTITY2}
    for k in range(1, radius + 1):
        powers[k] = mat2_mul(powers[k - 1], b)
        powers[-k] = mat2_mul(powers[-k + 1], b_inv)
    reach = [0] * (radius + 1)
    for j in range(radius + 1):
        reach[j] = max(reach[j - 1] if j else 0, _max_entry(powers[j]), _max_entry(powers[-j]))

    def hopeless(k: int, w: Vec, depth: int) -> bool:
        left = radius - depth
        if abs(k) > left:
            return True
        return _norm(w) > max_norm + (left - abs(k)) * reach[(left + abs(k)) // 2]

    units = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    start = (0, (0, 0))
    dist = {start: 0}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        d = dist[state]
        if d == radius:
            continue
        k, w = state
        moves = []
        for e in units:
            be = mat2_apply(powers[k], e)
            moves.append((k, (w[0] + be[0], w[1] + be[1])))
        moves += [(k + 1, w), (k - 1, w)]
        for nk, nw in moves:
            if (nk, nw) in dist or hopeless(nk, nw, d + 1):
                continue
            dist[(nk, nw)] = d + 1
            queue.append((nk, nw))
    lengths = {w: d for (k, w), d in dist.items() if k == 0 and _norm(w) <= max_norm}
    logger.debug(f"Lattice BFS: {len(dist)} states, {len(lengths)} translations within radius {radius}")
    return lengths
