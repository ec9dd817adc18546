"""
GroDiv - Integer Arithmetic for the Reduction
Largeness test, effective stable range, centered remainders and Bezout
coefficients.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

from loguru import logger
from sympy import factorint

from ..errors import UsageError
from .mat3 import Mat3
from .params import Sl3Params

CERTIFIED_LIMIT = 2 ** 64


def is_large(entry: int, gamma: Mat3, params: Sl3Params) -> bool:
    """log2(1 + |entry|) >= C_large * proxy(gamma)."""
    return math.log2(1 + abs(entry)) >= params.C_large * gamma.proxy()


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def centered_rep(a: int, c: int) -> int:
    """a' = a (mod c) with |a'| <= ceil(|c| / 2)."""
    if c == 0:
        raise UsageError("centered_rep needs a non-zero modulus")
    c = abs(c)
    r = a % c
    return r - c if r > c // 2 else r


def _centered_range() -> Iterator[int]:
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


@dataclass
class StableRange:
    m: int
    k: int
    primes: Dict[int, int]
    bound: int


def _check_primitive(a: int, b: int, c: int):
    if math.gcd(math.gcd(a, b), c) != 1:
        raise UsageError(f"stable_range_z needs gcd(a, b, c) = 1, got gcd({a}, {b}, {c}) = "
                         f"{math.gcd(math.gcd(a, b), c)}")


def stable_range_z(a: int, b: int, c: int, strategy: str = "search") -> Tuple[int, int]:
    """
    (m, k) with gcd(b + m a, c + k a) = 1.

    k = 0 unless c = 0, and |m| is the smallest that works (ties go to the
    positive value).
    """
    if strategy == "certified":
        result = certified_stable_range(a, b, c)
        return result.m, result.k
    if strategy != "search":
        raise UsageError(f"Unknown stable range strategy {strategy!r}")
    _check_primitive(a, b, c)
    if c == 0:
        # gcd(b + m a, a) = gcd(a, b) = 1 for every m
        return 0, 1
    for m in _centered_range():
        if math.gcd(b + m * a, c) == 1:
            return m, 0
    raise AssertionError("unreachable")


def certified_stable_range(a: int, b: int, c: int) -> StableRange:
    """
    Stable range through the factorization of c: each prime p | c not dividing
    a rules out one residue class of m, primes dividing a rule out nothing,
    so some |m| <= 4^omega works by inclusion-exclusion.
    """
    _check_primitive(a, b, c)
    if c == 0:
        return StableRange(0, 1, {}, 0)
    if abs(c) >= CERTIFIED_LIMIT:
        raise UsageError(f"Certified stable range needs |c| < 2^64, got {abs(c).bit_length()} bits")
    primes = {int(p): int(e) for p, e in factorint(abs(c)).items()}
    excluded = {p: (-b * pow(a, -1, p)) % p for p in primes if a % p}
    bound = 4 ** len(excluded)
    for m in _centered_range():
        if all(m % p != r for p, r in excluded.items()):
            break
    if abs(m) > bound:
        raise AssertionError(f"stable range multiplier {m} exceeds 4^omega = {bound}")
    logger.debug(f"Certified stable range for ({a}, {b}, {c}): m={m}, primes {sorted(primes)}")
    return StableRange(m, 0, primes, bound)
