"""
GroDiv - Concrete Groups
Free abelian, free, Heisenberg, SL2(Z), SL3(Z) and direct products,
registered with the GroupFactory under their spec keywords.
"""

import math
import string
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from ..errors import UsageError
from .group_interface import (
    FinitelyGeneratedGroup,
    GroupElement,
    GroupFactory,
    split_top_level,
)
from .matrices import (
    IntMatrix,
    det,
    elementary,
    format_matrix,
    mat_from_rows,
    mat_identity,
    mat_mul,
    max_abs_entry,
    max_column_l1,
    parse_matrix,
    sl_inverse,
)


class FreeAbelianGroup(FinitelyGeneratedGroup):
    """Z^d with basis generators, optionally extended by the diagonals +-(e_i +- e_j)."""

    literal_prefixes = ("v",)

    def __init__(self, spec: str, d: int, diagonals: bool = False):
        if d < 1:
            raise UsageError(f"zd needs d >= 1, got {d}")
        self.d = d
        self.diagonals = diagonals
        gens = []
        for i in range(d):
            unit = tuple(1 if k == i else 0 for k in range(d))
            gens.append((f"e{i + 1}+", unit))
            gens.append((f"e{i + 1}-", tuple(-x for x in unit)))
        if diagonals:
            for i in range(d):
                for j in range(i + 1, d):
                    plus = tuple(1 if k in (i, j) else 0 for k in range(d))
                    minus = tuple(1 if k == i else (-1 if k == j else 0) for k in range(d))
                    gens.append((f"p{i + 1}{j + 1}+", plus))
                    gens.append((f"p{i + 1}{j + 1}-", tuple(-x for x in plus)))
                    gens.append((f"m{i + 1}{j + 1}+", minus))
                    gens.append((f"m{i + 1}{j + 1}-", tuple(-x for x in minus)))
        super().__init__(spec, gens)

    @classmethod
    def from_argument(cls, spec: str, argument: Optional[str]):
        if not argument:
            raise UsageError(f"zd needs a dimension, e.g. zd:2 (got {spec})")
        dim, _, variant = argument.partition("+")
        if variant not in ("", "diag"):
            raise UsageError(f"Unknown zd variant {variant!r} in {spec}; only 'diag' is supported")
        try:
            d = int(dim)
        except ValueError:
            raise UsageError(f"zd dimension must be an integer, got {dim!r}")
        return cls(spec, d, diagonals=variant == "diag")

    def _identity_payload(self):
        return (0,) * self.d

    def _mul(self, p, q):
        return tuple(x + y for x, y in zip(p, q))

    def _inv(self, p):
        return tuple(-x for x in p)

    def _distance_lower_bound(self, p):
        l1 = sum(abs(x) for x in p)
        if not self.diagonals:
            return l1
        # every generator moves l1 by at most 2 and linf by at most 1
        return max((l1 + 1) // 2, max(abs(x) for x in p))

    def _exact_length(self, p):
        # the king-move metric is max(|x|, |y|), which the bound above equals
        if not self.diagonals or self.d == 2:
            return self._distance_lower_bound(p)
        return None

    def _format_payload(self, p):
        return "v:" + ",".join(str(x) for x in p)

    def _parse_payload(self, prefix, body):
        values = tuple(int(x) for x in body.split(","))
        if len(values) != self.d:
            raise UsageError(f"{self.spec} vectors need {self.d} entries, got {len(values)}")
        return values


class FreeGroup(FinitelyGeneratedGroup):
    """Free group of rank k; payloads are freely reduced words of signed 1-based letters."""

    literal_prefixes = ("w",)

    def __init__(self, spec: str, k: int):
        if not 1 <= k <= 26:
            raise UsageError(f"free needs 1 <= k <= 26, got {k}")
        self.k = k
        gens = []
        for i in range(1, k + 1):
            gens.append((string.ascii_lowercase[i - 1], (i,)))
            gens.append((string.ascii_uppercase[i - 1], (-i,)))
        super().__init__(spec, gens)

    @classmethod
    def from_argument(cls, spec: str, argument: Optional[str]):
        try:
            return cls(spec, int(argument or ""))
        except ValueError:
            raise UsageError(f"free needs an integer rank, e.g. free:2 (got {spec})")

    @property
    def is_tree(self) -> bool:
        return True

    def _identity_payload(self):
        return ()

    def _mul(self, p, q):
        i = 0
        n = min(len(p), len(q))
        while i < n and p[len(p) - 1 - i] == -q[i]:
            i += 1
        return p[:len(p) - i] + q[i:]

    def _inv(self, p):
        return tuple(-x for x in reversed(p))

    def _distance_lower_bound(self, p):
        return len(p)

    def _exact_length(self, p):
        return len(p)

    def tree_geodesic(self, g: GroupElement, h: GroupElement) -> List[GroupElement]:
        """The unique geodesic from g to h, vertices included."""
        word = self._mul(self._inv(self._own(g)), self._own(h))
        path, current = [g], g.payload
        for letter in word:
            current = self._mul(current, (letter,))
            path.append(GroupElement(self.spec, current))
        return path

    def _format_payload(self, p):
        return "w:" + "".join(
            string.ascii_lowercase[x - 1] if x > 0 else string.ascii_uppercase[-x - 1] for x in p
        )

    def _parse_payload(self, prefix, body):
        payload: Tuple[int, ...] = ()
        for ch in body.strip():
            if ch.lower() not in string.ascii_lowercase[:self.k]:
                raise UsageError(f"Letter {ch!r} is not a generator of {self.spec}")
            letter = string.ascii_lowercase.index(ch.lower()) + 1
            payload = self._mul(payload, (letter if ch.islower() else -letter,))
        return payload


class HeisenbergGroup(FinitelyGeneratedGroup):
    """
    Integer Heisenberg group. (a, b, c) stands for [[1, a, c], [0, 1, b], [0, 0, 1]],
    so (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
    """

    literal_prefixes = ("h",)

    def __init__(self, spec: str = "heis"):
        super().__init__(spec, [
            ("X+", (1, 0, 0)), ("X-", (-1, 0, 0)),
            ("Y+", (0, 1, 0)), ("Y-", (0, -1, 0)),
        ])

    @classmethod
    def from_argument(cls, spec: str, argument: Optional[str]):
        if argument:
            raise UsageError(f"heis takes no argument (got {spec})")
        return cls(spec)

    def _identity_payload(self):
        return (0, 0, 0)

    def _mul(self, p, q):
        return (p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1])

    def _inv(self, p):
        return (-p[0], -p[1], -p[2] + p[0] * p[1])

    def _distance_lower_bound(self, p):
        return abs(p[0]) + abs(p[1])

    def _matrix_max_entry(self, p):
        return max(1, abs(p[0]), abs(p[1]), abs(p[2]))

    def to_matrix(self, g: GroupElement) -> IntMatrix:
        a, b, c = self._own(g)
        return ((1, a, c), (0, 1, b), (0, 0, 1))

    def _format_payload(self, p):
        return "h:" + ",".join(str(x) for x in p)

    def _parse_payload(self, prefix, body):
        values = tuple(int(x) for x in body.split(","))
        if len(values) != 3:
            raise UsageError(f"Heisenberg literals need 3 entries, got {len(values)}")
        return values


class MatrixGroup(FinitelyGeneratedGroup):
    """SL_n(Z) (n = 2, 3) with an explicit named generator table."""

    literal_prefixes = ("m",)

    def __init__(self, spec: str, n: int, generators: Sequence[Tuple[str, IntMatrix]]):
        self.n = n
        for name, m in generators:
            if det(m) != 1:
                raise UsageError(f"Generator {name} of {spec} has determinant {det(m)}, expected 1")
        growth = max(max_column_l1(m) for _, m in generators)
        self._log_growth = math.log2(growth) if growth > 1 else 0.0
        super().__init__(spec, generators)

    @classmethod
    def from_argument(cls, spec: str, argument: Optional[str]):
        if argument:
            raise UsageError(f"{spec} takes no argument")
        return sl2z_group(spec) if spec.startswith("sl2z") else sl3z_group(spec)

    def _identity_payload(self):
        return mat_identity(self.n)

    def _mul(self, p, q):
        return mat_mul(p, q)

    def _inv(self, p):
        return sl_inverse(p)

    def _distance_lower_bound(self, p):
        # one letter multiplies the max entry by at most the column growth factor
        if self._log_growth == 0.0:
            return 0
        return max(0, math.ceil(math.log2(max_abs_entry(p)) / self._log_growth - 1e-9))

    def _matrix_max_entry(self, p):
        return max_abs_entry(p)

    def matrix(self, g: GroupElement) -> IntMatrix:
        return self._own(g)

    def _format_payload(self, p):
        return format_matrix(p)

    def _parse_payload(self, prefix, body):
        m = parse_matrix(body, self.n)
        if det(m) != 1:
            raise UsageError(f"Matrix literal has determinant {det(m)}, expected 1")
        return m


def sl2z_generators() -> List[Tuple[str, IntMatrix]]:
    return [
        ("S+", ((0, -1), (1, 0))), ("S-", ((0, 1), (-1, 0))),
        ("T+", ((1, 1), (0, 1))), ("T-", ((1, -1), (0, 1))),
    ]


def signed_permutation(i: int, j: int) -> IntMatrix:
    """P_ij: e_i -> -e_j, e_j -> e_i on columns; P_ij^-1 is its transpose."""
    rows = [list(r) for r in mat_identity(3)]
    rows[i - 1][i - 1] = 0
    rows[j - 1][j - 1] = 0
    rows[i - 1][j - 1] = 1
    rows[j - 1][i - 1] = -1
    return mat_from_rows(rows)


def sl3z_generators() -> List[Tuple[str, IntMatrix]]:
    """Elementary matrices E_ij(+-1) followed by the six signed permutations."""
    gens = []
    for i in range(1, 4):
        for j in range(1, 4):
            if i != j:
                gens.append((f"E{i}{j}+", elementary(3, i, j, 1)))
                gens.append((f"E{i}{j}-", elementary(3, i, j, -1)))
    for i, j in ((1, 2), (1, 3), (2, 3)):
        p = signed_permutation(i, j)
        gens.append((f"P{i}{j}+", p))
        gens.append((f"P{i}{j}-", sl_inverse(p)))
    return gens


def sl2z_group(spec: str = "sl2z") -> MatrixGroup:
    return MatrixGroup(spec, 2, sl2z_generators())


def sl3z_group(spec: str = "sl3z") -> MatrixGroup:
    return MatrixGroup(spec, 3, sl3z_generators())


class DirectProduct(FinitelyGeneratedGroup):
    """Direct product; generators are the factor generators, named 'i.name'."""

    literal_prefixes = ("p",)

    def __init__(self, spec: str, factors: Sequence[FinitelyGeneratedGroup]):
        if len(factors) < 2:
            raise UsageError(f"prod needs at least 2 factors, got {len(factors)}")
        self.factors = list(factors)
        identity = tuple(f._identity_payload() for f in self.factors)
        gens = []
        for i, factor in enumerate(self.factors):
            for g in factor.generators:
                payload = identity[:i] + (g.payload,) + identity[i + 1:]
                gens.append((f"{i}.{g.name}", payload))
        super().__init__(spec, gens)

    @classmethod
    def from_argument(cls, spec: str, argument: Optional[str]):
        return cls(spec, [GroupFactory.create(part) for part in split_top_level(argument or "")])

    @property
    def is_tree(self) -> bool:
        return False

    def _identity_payload(self):
        return tuple(f._identity_payload() for f in self.factors)

    def _mul(self, p, q):
        return tuple(f._mul(x, y) for f, x, y in zip(self.factors, p, q))

    def _inv(self, p):
        return tuple(f._inv(x) for f, x in zip(self.factors, p))

    def _distance_lower_bound(self, p):
        return sum(f._distance_lower_bound(x) for f, x in zip(self.factors, p))

    def _exact_length(self, p):
        lengths = [f._exact_length(x) for f, x in zip(self.factors, p)]
        return None if None in lengths else sum(lengths)

    def _format_payload(self, p):
        return "p:" + "|".join(f._format_payload(x) for f, x in zip(self.factors, p))

    def _parse_payload(self, prefix, body):
        parts = body.split("|")
        if len(parts) != len(self.factors):
            raise UsageError(f"{self.spec} literals need {len(self.factors)} '|'-separated parts")
        return tuple(f.parse_element(part).payload for f, part in zip(self.factors, parts))


def factor_element(group: DirectProduct, g: GroupElement, index: int) -> GroupElement:
    """Project a product element onto one factor."""
    factor = group.factors[index]
    return factor.element(group._own(g)[index])


GroupFactory.register("zd", FreeAbelianGroup)
GroupFactory.register("free", FreeGroup)
GroupFactory.register("heis", HeisenbergGroup)
GroupFactory.register("sl2z", MatrixGroup)
GroupFactory.register("sl3z", MatrixGroup)
GroupFactory.register("prod", DirectProduct)

logger.debug(f"Registered group kinds: {GroupFactory.available_kinds()}")
