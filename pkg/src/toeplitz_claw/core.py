"""Toeplitz parameters and the materialized graph model.

Vertices are labelled ``1..n`` everywhere.  A Toeplitz graph never stores an
adjacency matrix: ``i ~ j`` is answered by testing ``|i - j|`` against the
offset set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    EmptyOffsets,
    GraphTooLarge,
    InvalidParams,
    NonIncreasingOffsets,
    OffsetOutOfRange,
    VertexOutOfRange,
)

MAX_ORDER = 10_000


@dataclass(frozen=True, order=True)
class ToeplitzParams:
    """Order ``n`` and the strictly increasing offsets ``t_1 < ... < t_k``.

    The constructor does not validate; use :func:`validate_params` for
    user input.  Unvalidated instances are used for component targets such as
    ``T_1<>`` whose offsets were truncated away.
    """

    n: int
    offsets: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.offsets)

    def __str__(self) -> str:
        return f"T_{self.n}<{','.join(map(str, self.offsets))}>"

    def as_dict(self) -> dict:
        return {"n": self.n, "offsets": list(self.offsets)}

    @classmethod
    def truncated(cls, n: int, offsets: Iterable[int]) -> "ToeplitzParams":
        """Params of the Toeplitz graph on ``n`` vertices, dropping offsets >= n."""
        return cls(n, tuple(t for t in offsets if t < n))


def validate_params(n: int, offsets: Iterable[int]) -> ToeplitzParams:
    offsets = tuple(int(t) for t in offsets)
    if not offsets:
        raise EmptyOffsets("at least one offset is required")
    if n < 2:
        raise OffsetOutOfRange(f"n must be at least 2, got {n}")
    for a, b in zip(offsets, offsets[1:]):
        if b <= a:
            raise NonIncreasingOffsets(
                f"offsets must be strictly increasing: {a} is followed by {b}"
            )
    if offsets[0] < 1:
        raise OffsetOutOfRange(f"t_1 must be at least 1, got {offsets[0]}")
    if offsets[-1] >= n:
        raise OffsetOutOfRange(f"t_k must be less than n: t_k={offsets[-1]}, n={n}")
    return ToeplitzParams(int(n), offsets)


class Graph:
    """Simple undirected graph on ``1..order`` with explicit adjacency sets."""

    __slots__ = ("order", "_adj")

    def __init__(self, order: int, edges: Iterable[tuple[int, int]] = ()):
        if order < 0:
            raise ValueError("order must be non-negative")
        adj: list[set[int]] = [set() for _ in range(order + 1)]
        for u, v in edges:
            if not (1 <= u <= order and 1 <= v <= order):
                raise VertexOutOfRange(f"edge ({u}, {v}) outside 1..{order}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.order = order
        self._adj = tuple(frozenset(s) for s in adj)

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.order:
            raise VertexOutOfRange(f"vertex {v} outside 1..{self.order}")

    def adjacent(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return v in self._adj[u]

    def neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._adj[v]

    def vertices(self) -> range:
        return range(1, self.order + 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(i, j)`` with ``i < j``, in ascending order."""
        for u in self.vertices():
            for v in sorted(self.neighbors(u)):
                if v > u:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(len(self.neighbors(v)) for v in self.vertices()) // 2

    def masks(self) -> tuple[int, ...]:
        """Neighbourhood bitsets; bit ``v - 1`` stands for vertex ``v``."""
        out = []
        for v in self.vertices():
            m = 0
            for u in self.neighbors(v):
                m |= 1 << (u - 1)
            out.append(m)
        return tuple(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.order == other.order and list(self.edges()) == list(other.edges())

    def __hash__(self) -> int:
        return hash((self.order, tuple(self.edges())))

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.edge_count()})"


class ToeplitzGraph(Graph):
    """Graph whose adjacency is ``|i - j|`` in the offset set."""

    __slots__ = ("params", "_offsets")

    def __init__(self, params: ToeplitzParams):
        self.order = params.n
        self.params = params
        self._offsets = frozenset(params.offsets)

    def adjacent(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return abs(u - v) in self._offsets

    def neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        n = self.order
        out = set()
        for t in self.params.offsets:
            if v - t >= 1:
                out.add(v - t)
            if v + t <= n:
                out.add(v + t)
        return frozenset(out)

    def edges(self) -> Iterator[tuple[int, int]]:
        offsets = self.params.offsets
        for u in self.vertices():
            for t in offsets:
                if u + t <= self.order:
                    yield (u, u + t)

    def edge_count(self) -> int:
        return sum(max(0, self.order - t) for t in self.params.offsets)

    def __repr__(self) -> str:
        return f"ToeplitzGraph({self.params})"


def build_graph(params: ToeplitzParams, max_order: int = MAX_ORDER) -> ToeplitzGraph:
    """Materialize ``T_n<t_1..t_k>``.

    Accepts truncated component targets (empty offsets, ``n == 1``) as long as
    the offsets are increasing, positive and below ``n``.
    """
    if params.n < 1:
        raise InvalidParams(f"order must be positive, got {params.n}")
    if params.n > max_order:
        raise GraphTooLarge(f"n={params.n} exceeds construction bound {max_order}")
    offs = params.offsets
    if any(b <= a for a, b in zip(offs, offs[1:])):
        raise NonIncreasingOffsets(f"offsets not strictly increasing: {offs}")
    if offs and (offs[0] < 1 or offs[-1] >= params.n):
        raise OffsetOutOfRange(f"offsets must lie in 1..{params.n - 1}: {offs}")
    return ToeplitzGraph(params)


def neighbors(g: Graph, v: int) -> frozenset[int]:
    return g.neighbors(v)


def reflect(params: ToeplitzParams, s: Iterable[int]) -> frozenset[int]:
    """Image of ``s`` under the automorphism ``x -> n + 1 - x``."""
    n = params.n
    out = set()
    for x in s:
        if not 1 <= x <= n:
            raise VertexOutOfRange(f"vertex {x} outside 1..{n}")
        out.add(n + 1 - x)
    return frozenset(out)


@dataclass(frozen=True, order=True)
class Claw:
    """Induced ``K_{1,3}`` written ``(center; b, c, d)`` with sorted leaves."""

    center: int
    leaves: tuple[int, int, int]

    def __post_init__(self):
        if len(self.leaves) != 3 or len(set(self.leaves)) != 3:
            raise ValueError(f"a claw needs three distinct leaves, got {self.leaves}")
        if self.center in self.leaves:
            raise ValueError("center cannot be a leaf")
        object.__setattr__(self, "leaves", tuple(sorted(self.leaves)))

    def is_valid_in(self, g: Graph) -> bool:
        a = self.center
        b, c, d = self.leaves
        return (
            all(g.adjacent(a, x) for x in self.leaves)
            and not g.adjacent(b, c)
            and not g.adjacent(b, d)
            and not g.adjacent(c, d)
        )

    def reflected(self, n: int) -> "Claw":
        return Claw(n + 1 - self.center, tuple(n + 1 - x for x in self.leaves))

    def satisfies_star(self) -> bool:
        """At least two leaves lie above the center."""
        return sum(x > self.center for x in self.leaves) >= 2

    def __str__(self) -> str:
        b, c, d = self.leaves
        return f"({self.center};{b},{c},{d})"

    def as_list(self) -> list[int]:
        return [self.center, *self.leaves]
