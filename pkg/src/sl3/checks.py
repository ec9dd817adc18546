"""
GroDiv - SL3 Invariant Batteries
Conjugation identities, the stable range contract, exact evaluation and the
length bounds of short words, checked on seeded or exhaustive samples.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..divergence.checks import CheckResult
from .arithmetic import stable_range_z
from .generators import get_genset
from .mat3 import Mat3, mat2_apply
from .params import Sl3Params, default_params
from .radix import lattice_bfs_lengths, length_bound, short_word_L, short_word_M
from .reduction import Q

ORACLE_FACTOR = 6


@dataclass
class SuiteReport:
    """Outcome of one invariant battery; only failures are kept."""
    suite: str
    checks_run: int = 0
    failures: List[CheckResult] = field(default_factory=list)
    notes: Dict[str, Any] = field(default_factory=dict)

    def record(self, name: str, passed: bool, message: str, details: Optional[Dict[str, Any]] = None):
        self.checks_run += 1
        if not passed:
            self.failures.append(CheckResult(name, False, message, details))

    @property
    def is_valid(self) -> bool:
        return not self.failures

    def summary(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "checks_run": self.checks_run,
            "violations": len(self.failures),
            "notes": self.notes,
            "failures": [{"check": f.check_name, "message": f.message} for f in self.failures[:20]],
        }


def _random_vectors(count: int, bits: int, seed: int) -> List[tuple]:
    """Signed integers of up to `bits` bits, assembled from 32-bit limbs."""
    rng = np.random.default_rng(seed)
    limbs = max(1, math.ceil(bits / 32))
    out = []
    for _ in range(count):
        pair = []
        for _ in range(2):
            value = 0
            for limb in rng.integers(0, 2 ** 32, size=limbs, dtype=np.uint64):
                value = (value << 32) | int(limb)
            value >>= limbs * 32 - bits
            pair.append(-value if rng.integers(0, 2) else value)
        out.append(tuple(pair))
    return out


def sl3_algebra_check(samples: int = 10_000, seed: int = 0, params: Optional[Sl3Params] = None,
                      show_progress: bool = False) -> SuiteReport:
    """Block conjugation of L and M by every family member, and the Q twist."""
    params = params or default_params()
    family = get_genset(params).family
    report = SuiteReport("sl3-algebra")
    q_inv = Q.inverse()
    for v in tqdm(_random_vectors(samples, 64, seed), desc="sl3-algebra", disable=not show_progress):
        for i, member in enumerate(family.members):
            up, low = Mat3.upper(member.matrix), Mat3.lower(member.matrix)
            bv = mat2_apply(member.matrix, v)
            report.record(f"upper-conjugate-{i}", up @ Mat3.L(*v) @ up.inverse() == Mat3.L(*bv),
                          f"U(B{i}) L{v} U(B{i})^-1 != L{bv}")
            report.record(f"lower-conjugate-{i}", low @ Mat3.M(*v) @ low.inverse() == Mat3.M(*bv),
                          f"D(B{i}) M{v} D(B{i})^-1 != M{bv}")
        report.record("q-twist", Q @ Mat3.L(*v) @ q_inv == Mat3.E(1, 2, -v[0]) @ Mat3.E(3, 2, -v[1]),
                      f"Q L{v} Q^-1 != E12({-v[0]}) E32({-v[1]})")
    logger.info(f"sl3-algebra: {report.checks_run} identities, {len(report.failures)} failures")
    return report


def stable_range_check(bound: int = 30, strategy: str = "search", show_progress: bool = False) -> SuiteReport:
    """Exhaustive over |a|, |b|, |c| <= bound with gcd(a, b, c) = 1."""
    report = SuiteReport("stable-range")
    values = range(-bound, bound + 1)
    for a in tqdm(values, desc="stable-range", disable=not show_progress):
        for b in values:
            for c in values:
                if math.gcd(math.gcd(a, b), c) != 1:
                    continue
                m, k = stable_range_z(a, b, c, strategy)
                ok = math.gcd(b + m * a, c + k * a) == 1 and k == (1 if c == 0 else 0)
                report.record("stable-range", ok, f"({a}, {b}, {c}) -> ({m}, {k})")
    return report


def short_word_check(box: int = 20, samples: int = 200, bits: int = 128, seed: int = 0,
                     params: Optional[Sl3Params] = None, show_progress: bool = False) -> SuiteReport:
    """Exact evaluation on the box |m|, |n| <= box and the length bound on random large vectors."""
    params = params or default_params()
    genset = get_genset(params)
    report = SuiteReport("short-words")
    worst = 0.0
    boxed = [(m, n) for m in range(-box, box + 1) for n in range(-box, box + 1)]
    vectors = boxed + _random_vectors(samples, bits, seed)
    for v in tqdm(vectors, desc="short-words", disable=not show_progress):
        for frame, build, target in (("L", short_word_L, Mat3.L), ("M", short_word_M, Mat3.M)):
            word = build(*v, params=params)
            report.record(f"{frame}-exact", genset.eval(word) == target(*v), f"{frame}{v} evaluates wrongly")
            report.record(f"{frame}-length", len(word) <= length_bound(v),
                          f"{frame}{v}: length {len(word)} > bound {length_bound(v):.1f}")
            worst = max(worst, len(word) / math.log2(2 + max(abs(v[0]), abs(v[1]))))
    report.notes["max_length_per_log2"] = round(worst, 3)
    return report


def radix_oracle_check(max_norm: int = 8, params: Optional[Sl3Params] = None) -> SuiteReport:
    """
    Short words within a factor 6 of exact BFS geodesics in the lattice
    subgroup; a target the BFS misses counts as a failure.
    """
    params = params or default_params()
    genset = get_genset(params)
    lengths = lattice_bfs_lengths(genset.family.members[0].matrix, max_norm)
    report = SuiteReport("radix-oracle")
    for m in range(-max_norm, max_norm + 1):
        for n in range(-max_norm, max_norm + 1):
            if (m, n) == (0, 0):
                continue
            if (m, n) not in lengths:
                report.record("oracle-reached", False, f"({m}, {n}) not reached by the lattice BFS")
                continue
            for frame, build in (("L", short_word_L), ("M", short_word_M)):
                word = build(m, n, 0, params)
                report.record(f"{frame}-oracle", len(word) <= ORACLE_FACTOR * lengths[(m, n)],
                              f"{frame}({m}, {n}): length {len(word)} vs BFS {lengths[(m, n)]}")
    report.notes["bfs_targets"] = len(lengths)
    return report
