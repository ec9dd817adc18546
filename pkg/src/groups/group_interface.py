"""
GroDiv - Group Interface
Abstract interface for finitely generated groups. Every algorithm in the
system (Cayley balls, divergence, trajectories) goes through this interface,
so concrete groups can be swapped freely.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Type

import numpy as np

from ..errors import UnsupportedOperation, UsageError

Word = List[int]


@dataclass(frozen=True)
class GroupElement:
    """
    Canonical, hashable group element.

    `payload` is the group-specific canonical form (integer vector, reduced
    word, Heisenberg triple, matrix rows, tuple of factor payloads); two
    elements of the same group are equal exactly when their payloads are.
    """
    group: str
    payload: Tuple[Any, ...]

    def encode(self) -> bytes:
        """Stable byte encoding, independent of how the element was built."""
        return f"{self.group}|{self.payload!r}".encode("ascii")


@dataclass(frozen=True)
class Generator:
    """Named generator with the index of its inverse in the same table."""
    name: str
    payload: Tuple[Any, ...]
    inverse_index: int


class FinitelyGeneratedGroup(ABC):
    """
    Abstract finitely generated group with a symmetric named generator set.

    Subclasses implement the group law on payloads; the public methods wrap
    payloads into GroupElement and enforce that operands belong to this group.
    """

    literal_prefixes: Tuple[str, ...] = ()

    def __init__(self, spec: str, generators: Sequence[Tuple[str, Tuple[Any, ...]]]):
        self.spec = spec
        self._generators = self._index_generators(generators)
        self._identity = GroupElement(spec, self._identity_payload())
        self._by_name = {g.name: i for i, g in enumerate(self._generators)}

    # -- payload level ------------------------------------------------------

    @abstractmethod
    def _identity_payload(self) -> Tuple[Any, ...]:
        """Canonical payload of the identity."""

    @abstractmethod
    def _mul(self, p: Tuple[Any, ...], q: Tuple[Any, ...]) -> Tuple[Any, ...]:
        """Canonical payload of the product."""

    @abstractmethod
    def _inv(self, p: Tuple[Any, ...]) -> Tuple[Any, ...]:
        """Canonical payload of the inverse."""

    @abstractmethod
    def _format_payload(self, p: Tuple[Any, ...]) -> str:
        """Element literal, e.g. 'v:3,-4'."""

    @abstractmethod
    def _parse_payload(self, prefix: str, body: str) -> Tuple[Any, ...]:
        """Payload from a literal body; prefix is in literal_prefixes."""

    def _distance_lower_bound(self, p: Tuple[Any, ...]) -> int:
        """Admissible lower bound on the word length of p."""
        return 0

    def _exact_length(self, p: Tuple[Any, ...]) -> Optional[int]:
        """Word length of p in closed form, when the group has one."""
        return None

    def _matrix_max_entry(self, p: Tuple[Any, ...]) -> int:
        raise UnsupportedOperation(f"dist_proxy is only defined for matrix groups, not {self.spec}")

    # -- generator table ----------------------------------------------------

    def _index_generators(self, generators):
        payloads = [payload for _, payload in generators]
        indexed = []
        for name, payload in generators:
            inverse = self._inv(payload)
            candidates = [i for i, p in enumerate(payloads) if p == inverse]
            if not candidates:
                raise UsageError(f"Generator set of {self.spec} is not symmetric: {name} has no inverse")
            # a repeated matrix pairs with the inverse that shares its name stem
            same_stem = [i for i in candidates if generators[i][0][:-1] == name[:-1]]
            indexed.append(Generator(name=name, payload=payload, inverse_index=(same_stem or candidates)[0]))
        return indexed

    @property
    def generators(self) -> List[Generator]:
        return list(self._generators)

    @property
    def num_generators(self) -> int:
        return len(self._generators)

    def generator(self, index: int) -> GroupElement:
        self._check_index(index)
        return GroupElement(self.spec, self._generators[index].payload)

    def generator_names(self) -> List[str]:
        return [g.name for g in self._generators]

    def inverse_index(self, index: int) -> int:
        self._check_index(index)
        return self._generators[index].inverse_index

    def index_of(self, name: str) -> int:
        if name not in self._by_name:
            raise UsageError(f"Unknown generator {name!r} for {self.spec}. Available: {self.generator_names()}")
        return self._by_name[name]

    def _check_index(self, index: int):
        if not isinstance(index, (int, np.integer)) or not 0 <= index < len(self._generators):
            raise UsageError(f"Invalid generator index {index} for {self.spec} "
                             f"({len(self._generators)} generators)")

    # -- element level ------------------------------------------------------

    @property
    def identity(self) -> GroupElement:
        return self._identity

    @property
    def is_tree(self) -> bool:
        """Whether the Cayley graph is a tree (unique geodesics)."""
        return False

    def element(self, payload: Tuple[Any, ...]) -> GroupElement:
        return GroupElement(self.spec, payload)

    def _own(self, g: GroupElement) -> Tuple[Any, ...]:
        if not isinstance(g, GroupElement) or g.group != self.spec:
            owner = g.group if isinstance(g, GroupElement) else type(g).__name__
            raise UsageError(f"Element of {owner} used with group {self.spec}")
        return g.payload

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return GroupElement(self.spec, self._mul(self._own(g), self._own(h)))

    def inverse(self, g: GroupElement) -> GroupElement:
        return GroupElement(self.spec, self._inv(self._own(g)))

    def right_neighbor(self, g: GroupElement, index: int) -> GroupElement:
        """g times generator `index`, the Cayley graph edge used by BFS."""
        return GroupElement(self.spec, self._mul(g.payload, self._generators[index].payload))

    def eval_word(self, word: Sequence[int]) -> GroupElement:
        """Left-to-right product of generators; the empty word is the identity."""
        payload = self._identity_payload()
        for index in word:
            self._check_index(index)
            payload = self._mul(payload, self._generators[index].payload)
        return GroupElement(self.spec, payload)

    def invert_word(self, word: Sequence[int]) -> Word:
        return [self.inverse_index(i) for i in reversed(word)]

    def random_word(self, length: int, seed: int) -> Word:
        """Uniform independent generator picks from numpy's PCG64 stream."""
        if length < 0:
            raise UsageError(f"Word length must be non-negative, got {length}")
        rng = np.random.default_rng(seed)
        return [int(i) for i in rng.integers(0, len(self._generators), size=length)]

    def encode(self, g: GroupElement) -> bytes:
        self._own(g)
        return g.encode()

    def word_length(self, g: GroupElement) -> Optional[int]:
        """Exact |g| when known in closed form, else None (use a BFS)."""
        return self._exact_length(self._own(g))

    def distance_lower_bound(self, g: GroupElement, h: GroupElement) -> int:
        """Admissible lower bound on dist(g, h) = |g^-1 h|."""
        return self._distance_lower_bound(self._mul(self._inv(self._own(g)), self._own(h)))

    def dist_proxy(self, g: GroupElement) -> float:
        """log2(1 + max absolute entry of the matrix form)."""
        return math.log2(1 + self._matrix_max_entry(self._own(g)))

    def tree_geodesic(self, g: GroupElement, h: GroupElement) -> List[GroupElement]:
        raise UnsupportedOperation(f"{self.spec} does not have a tree Cayley graph")

    # -- text I/O -----------------------------------------------------------

    def parse_element(self, text: str) -> GroupElement:
        """Parse an element literal ('g:' generator words work for every group)."""
        text = text.strip()
        prefix, sep, body = text.partition(":")
        if not sep:
            raise UsageError(f"Element literal must look like 'prefix:body', got {text!r}")
        if prefix == "g":
            names = [n.strip() for n in body.split(",") if n.strip()]
            return self.eval_word([self.index_of(n) for n in names])
        if prefix not in self.literal_prefixes:
            raise UsageError(f"Literal prefix {prefix!r} not valid for {self.spec}; "
                             f"use one of {list(self.literal_prefixes) + ['g']}")
        try:
            return GroupElement(self.spec, self._parse_payload(prefix, body))
        except UsageError:
            raise
        except ValueError as e:
            raise UsageError(f"Cannot parse {text!r} as an element of {self.spec}: {e}") from e

    def format_element(self, g: GroupElement) -> str:
        return self._format_payload(self._own(g))

    def parse_word(self, text: str) -> Word:
        """Comma separated generator names, optionally with the 'g:' prefix."""
        body = text.split(":", 1)[1] if text.startswith("g:") else text
        return [self.index_of(n.strip()) for n in body.split(",") if n.strip()]

    def describe(self) -> Dict[str, Any]:
        return {
            "spec": self.spec,
            "generators": self.generator_names(),
            "is_tree": self.is_tree,
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r})"


class GroupFactory:
    """Factory for creating groups from GroupSpec strings."""

    _kinds: Dict[str, Type] = {}
    _cache: Dict[str, FinitelyGeneratedGroup] = {}

    @classmethod
    def register(cls, kind: str, group_class: Type):
        """Register a group class under a spec keyword."""
        cls._kinds[kind] = group_class

    @classmethod
    def available_kinds(cls) -> List[str]:
        return list(cls._kinds.keys())

    @classmethod
    def create(cls, spec: str) -> FinitelyGeneratedGroup:
        """
        Create (or fetch the cached) group for a spec string.

        Accepted forms: 'zd:2', 'zd:2+diag', 'free:2', 'heis', 'sl2z', 'sl3z',
        'prod(zd:1,free:2)'.
        """
        spec = spec.replace(" ", "")
        if spec in cls._cache:
            return cls._cache[spec]
        kind, argument = _split_spec(spec)
        if kind not in cls._kinds:
            raise UsageError(f"Unknown group spec: {spec}. Available: {cls.available_kinds()}")
        group = cls._kinds[kind].from_argument(spec, argument)
        cls._cache[spec] = group
        return group


def _split_spec(spec: str) -> Tuple[str, Optional[str]]:
    if spec.startswith("prod(") and spec.endswith(")"):
        return "prod", spec[len("prod("):-1]
    kind, sep, argument = spec.partition(":")
    return kind, (argument if sep else None)


def split_top_level(text: str, sep: str = ",") -> List[str]:
    """Split on separators that are not nested inside parentheses."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p for p in parts if p]


def get_group(spec: str) -> FinitelyGeneratedGroup:
    """Shorthand for GroupFactory.create."""
    return GroupFactory.create(spec)
