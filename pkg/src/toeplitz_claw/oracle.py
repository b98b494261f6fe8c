"""Brute-force detectors over arbitrary small graphs.

Everything here works on neighbourhood bitsets taken from :meth:`Graph.masks`
and never looks at Toeplitz offsets, so these routines are an independent
check on the closed-form classifiers in :mod:`toeplitz_claw.theorems`.
Bit ``v - 1`` of a mask stands for vertex ``v``.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterator, Mapping, Optional, Sequence

from .core import Claw, Graph, ToeplitzGraph
from .errors import GraphTooLarge, MapNotBijective, TooManyCliques

DEFAULT_ORACLE_BOUND = 512
KRAUSZ_BOUND = 64
CLIQUE_BOUND = 20
ORACLE_ENV = "TOEPLITZ_ORACLE_MAX_N"


def oracle_bound() -> int:
    """Order limit for the oracles; ``TOEPLITZ_ORACLE_MAX_N`` overrides it."""
    raw = os.environ.get(ORACLE_ENV)
    if raw:
        return int(raw)
    return DEFAULT_ORACLE_BOUND


def _require(g: Graph, bound: Optional[int]) -> None:
    limit = oracle_bound() if bound is None else bound
    if g.order > limit:
        raise GraphTooLarge(f"graph of order {g.order} exceeds oracle bound {limit}")


def _bits(m: int) -> Iterator[int]:
    """Vertex labels present in mask ``m``, ascending."""
    while m:
        low = m & -m
        yield low.bit_length()
        m ^= low


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


# -- claws -------------------------------------------------------------------


def enumerate_claws(
    g: Graph,
    limit: Optional[int] = None,
    star: bool = False,
    bound: Optional[int] = None,
) -> list[Claw]:
    """Claws of ``g`` in lexicographic order of ``(center, leaves)``.

    With ``star=True`` only claws with at least two leaves above the center
    are searched.  That is only sound where ``x -> n + 1 - x`` is an
    automorphism, so it is refused for graphs not built from offsets; the
    full set is the reduced set plus its reflection.
    """
    _require(g, bound)
    if star and not isinstance(g, ToeplitzGraph):
        raise ValueError("the reflection reduction needs a Toeplitz-built graph")
    masks = g.masks()
    found: list[Claw] = []
    for a in g.vertices():
        na = masks[a - 1]
        for b in _bits(na):
            # vertices above b are the bits from position b upward
            rest_b = na & ~masks[b - 1] & -(1 << b)
            if star:
                rest_b &= -(1 << a)
            for c in _bits(rest_b):
                rest_c = rest_b & ~masks[c - 1] & -(1 << c)
                for d in _bits(rest_c):
                    found.append(Claw(a, (b, c, d)))
                    if limit is not None and len(found) >= limit:
                        return found
    return found


def is_claw_free(g: Graph, bound: Optional[int] = None) -> bool:
    return not enumerate_claws(g, limit=1, bound=bound)


# -- cliques -----------------------------------------------------------------


def maximal_cliques(g: Graph, bound: Optional[int] = None) -> list[tuple[int, ...]]:
    """All maximal cliques (Bron-Kerbosch with pivoting), sorted."""
    _require(g, bound)
    masks = g.masks()
    out: list[tuple[int, ...]] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(tuple(_bits(r)))
            return
        pivot = max(_bits(p | x), key=lambda u: (p & masks[u - 1]).bit_count())
        for v in _bits(p & ~masks[pivot - 1]):
            bit = 1 << (v - 1)
            nv = masks[v - 1]
            expand(r | bit, p & nv, x & nv)
            p &= ~bit
            x |= bit

    if g.order:
        expand(0, (1 << g.order) - 1, 0)
    out.sort()
    return out


def clique_number(g: Graph, bound: Optional[int] = None) -> int:
    """Exact size of a largest clique, by branch and bound."""
    _require(g, bound)
    masks = g.masks()
    best = 0

    def grow(size: int, p: int) -> None:
        nonlocal best
        if not p:
            best = max(best, size)
            return
        if size + p.bit_count() <= best:
            return
        for v in _bits(p):
            if size + p.bit_count() <= best:
                return
            bit = 1 << (v - 1)
            grow(size + 1, p & masks[v - 1])
            p &= ~bit

    if g.order:
        grow(0, (1 << g.order) - 1)
    return best


# -- chordality and holes ----------------------------------------------------


@dataclass(frozen=True)
class Hole:
    """Chordless cycle of length at least 4, listed in cyclic order."""

    cycle: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.cycle)

    def is_valid_in(self, g: Graph) -> bool:
        c = self.cycle
        m = len(c)
        if m < 4 or len(set(c)) != m:
            return False
        for i in range(m):
            for j in range(i + 1, m):
                consecutive = j == i + 1 or (i == 0 and j == m - 1)
                if g.adjacent(c[i], c[j]) != consecutive:
                    return False
        return True


@dataclass(frozen=True)
class ChordalityCertificate:
    chordal: bool
    ordering: Optional[tuple[int, ...]] = None  # perfect elimination ordering
    hole: Optional[Hole] = None

    def __bool__(self) -> bool:
        return self.chordal


def _mcs_order(g: Graph, masks: Sequence[int]) -> list[int]:
    """Maximum cardinality search visit order; ties go to the smallest label."""
    weight = [0] * (g.order + 1)
    unnumbered = set(g.vertices())
    order = []
    while unnumbered:
        v = min(unnumbered, key=lambda u: (-weight[u], u))
        unnumbered.remove(v)
        order.append(v)
        for u in _bits(masks[v - 1]):
            if u in unnumbered:
                weight[u] += 1
    return order


def _shortest_path(masks: Sequence[int], allowed: int, src: int, dst: int) -> Optional[list[int]]:
    prev = {src: 0}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            path = [x]
            while prev[path[-1]]:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in _bits(masks[x - 1] & allowed):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _hole_through(masks: Sequence[int], full: int, v: int, x: int, y: int) -> Optional[Hole]:
    # path x..y avoiding v and every other neighbour of v
    allowed = full & ~masks[v - 1] & ~(1 << (v - 1)) | (1 << (x - 1)) | (1 << (y - 1))
    path = _shortest_path(masks, allowed, x, y)
    if path is None:
        return None
    return Hole((v, *path))


def _any_hole(g: Graph, masks: Sequence[int], hint=None) -> Optional[Hole]:
    full = (1 << g.order) - 1
    if hint is not None:
        hole = _hole_through(masks, full, *hint)
        if hole is not None:
            return hole
    for v in g.vertices():
        nv = list(_bits(masks[v - 1]))
        for i, x in enumerate(nv):
            for y in nv[i + 1 :]:
                if masks[x - 1] >> (y - 1) & 1:
                    continue
                hole = _hole_through(masks, full, v, x, y)
                if hole is not None:
                    return hole
    return None


def is_chordal(g: Graph, bound: Optional[int] = None) -> ChordalityCertificate:
    """Chordality via maximum cardinality search.

    The reverse MCS order is checked as a perfect elimination ordering.  On
    failure a hole is located by a shortest-path search through a vertex and
    two of its non-adjacent neighbours, then re-verified.
    """
    _require(g, bound)
    masks = g.masks()
    peo = _mcs_order(g, masks)[::-1]
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in _bits(masks[v - 1]) if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        for w in later:
            if w != parent and not masks[parent - 1] >> (w - 1) & 1:
                hole = _any_hole(g, masks, hint=(v, parent, w))
                if hole is None or not hole.is_valid_in(g):
                    raise AssertionError(f"no valid hole found in non-chordal graph {g!r}")
                return ChordalityCertificate(False, hole=hole)
    return ChordalityCertificate(True, ordering=tuple(peo))


def find_hole(g: Graph, length: int, bound: Optional[int] = None) -> Optional[Hole]:
    """An induced cycle of exactly ``length`` vertices, or ``None``.

    Exhaustive: grows induced paths from the smallest cycle vertex.
    """
    _require(g, bound)
    if length < 4:
        raise ValueError("holes have length at least 4")
    if length > g.order:
        return None
    masks = g.masks()

    def extend(path: list[int], blocked: int, s: int) -> Optional[tuple[int, ...]]:
        last = path[-1]
        # blocked: path vertices plus neighbours of all interior-but-last vertices
        cands = masks[last - 1] & ~blocked & -(1 << s)
        closing = len(path) == length - 1
        for y in _bits(cands):
            touches_s = masks[s - 1] >> (y - 1) & 1
            if closing:
                if touches_s and path[1] < y:
                    return (*path, y)
                continue
            if touches_s:
                continue
            path.append(y)
            hit = extend(path, blocked | (1 << (y - 1)) | masks[last - 1], s)
            if hit:
                return hit
            path.pop()
        return None

    for s in g.vertices():
        sbit = 1 << (s - 1)
        for x in _bits(masks[s - 1] & -(1 << s)):
            hit = extend([s, x], sbit | (1 << (x - 1)), s)
            if hit:
                hole = Hole(hit)
                if not hole.is_valid_in(g):
                    raise AssertionError(f"invalid hole {hit}")
                return hole
    return None


# -- interval graphs ---------------------------------------------------------


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Vertex sets of the components, each sorted, ordered by least vertex."""
    masks = g.masks()
    seen = 0
    out = []
    for v in g.vertices():
        if seen >> (v - 1) & 1:
            continue
        comp = 1 << (v - 1)
        frontier = comp
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= masks[u - 1]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(tuple(_bits(comp)))
    return out


def _has_clique_path(cliques: list[int]) -> bool:
    """Order cliques so each vertex's cliques are consecutive (one component)."""
    m = len(cliques)
    if m <= 2:
        return True
    full = (1 << m) - 1
    dead: set[tuple[int, int]] = set()

    def search(placed: int, covered: int, last: int) -> bool:
        if placed == full:
            return True
        if (placed, last) in dead:
            return False
        closed = covered & ~cliques[last]
        for j in range(m):
            if placed >> j & 1:
                continue
            cj = cliques[j]
            if cj & cliques[last] and not cj & closed:
                if search(placed | 1 << j, covered | cj, j):
                    return True
        dead.add((placed, last))
        return False

    return any(search(1 << i, cliques[i], i) for i in range(m))


def is_interval(g: Graph, max_cliques: int = CLIQUE_BOUND, bound: Optional[int] = None) -> bool:
    """Interval recognition by searching for a consecutive clique ordering.

    Non-chordal graphs are rejected before any clique is enumerated, since
    every interval graph is chordal.  Components are ordered independently.
    """
    _require(g, bound)
    if not is_chordal(g, bound=bound):
        return False
    cliques = maximal_cliques(g, bound=bound)
    if len(cliques) > max_cliques:
        raise TooManyCliques(f"{len(cliques)} maximal cliques exceed bound {max_cliques}")
    for comp in connected_components(g):
        cm = _mask(comp)
        members = [_mask(c) for c in cliques if _mask(c) & cm]
        if not _has_clique_path(members):
            return False
    return True


# -- line graphs -------------------------------------------------------------


@dataclass(frozen=True)
class LineGraphCertificate:
    """Outcome of the Krausz search.

    On success ``partition`` is an edge partition into cliques with every
    vertex in at most two parts; ``root`` is a graph whose line graph is the
    input, and ``edge_map`` sends each input vertex to its root edge.
    """

    is_line: bool
    partition: tuple[tuple[int, ...], ...] = ()
    root: Optional[Graph] = None
    edge_map: Mapping[int, tuple[int, int]] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.is_line


def _verify_partition(g: Graph, cliques: Sequence[Sequence[int]]) -> bool:
    seen: set[tuple[int, int]] = set()
    load = [0] * (g.order + 1)
    for c in cliques:
        for v in c:
            load[v] += 1
        for i, u in enumerate(c):
            for v in c[i + 1 :]:
                e = (min(u, v), max(u, v))
                if not g.adjacent(u, v) or e in seen:
                    return False
                seen.add(e)
    return max(load, default=0) <= 2 and seen == set(g.edges())


def _krausz_partition(g: Graph) -> Optional[list[tuple[int, ...]]]:
    masks = g.masks()
    n = g.order
    unc = list(masks)
    used = [0] * (n + 1)
    chosen: list[tuple[int, ...]] = []

    def is_clique(m: int) -> bool:
        return all((m & ~(1 << (v - 1))) & ~unc[v - 1] == 0 for v in _bits(m))

    def subcliques(cands: int) -> list[int]:
        # every subset of cands that is a clique of uncovered edges
        out = [0]
        for v in _bits(cands):
            out += [s | 1 << (v - 1) for s in out if s & ~unc[v - 1] == 0]
        return out

    def options(u: int, v: int) -> list[int]:
        base = (1 << (u - 1)) | (1 << (v - 1))
        for w in (u, v):
            if used[w] == 1:
                forced = unc[w - 1] | (1 << (w - 1))
                return [forced] if forced & base == base and is_clique(forced) else []
        common = unc[u - 1] & unc[v - 1]
        subs = [base | s for s in subcliques(common)]
        subs.sort(key=lambda m: (-m.bit_count(), tuple(_bits(m))))
        return subs

    def feasible(c: int) -> bool:
        for w in _bits(c):
            if used[w] >= 2:
                return False
            if used[w] == 1 and unc[w - 1] & ~c:
                return False
        return True

    def apply(c: int, sign: int) -> None:
        for w in _bits(c):
            used[w] += sign
            if sign > 0:
                unc[w - 1] &= ~c
            else:
                unc[w - 1] |= c & ~(1 << (w - 1))

    def rest_ok(c: int) -> bool:
        for w in _bits(c):
            left = unc[w - 1]
            if not left:
                continue
            if used[w] >= 2 or not is_clique(left | 1 << (w - 1)):
                return False
        return True

    def solve() -> bool:
        u = next((v for v in range(1, n + 1) if unc[v - 1]), None)
        if u is None:
            return True
        v = (unc[u - 1] & -unc[u - 1]).bit_length()
        for c in options(u, v):
            if not feasible(c):
                continue
            apply(c, +1)
            chosen.append(tuple(_bits(c)))
            if rest_ok(c) and solve():
                return True
            chosen.pop()
            apply(c, -1)
        return False

    return chosen if solve() else None


def _root_from_partition(g: Graph, cliques: Sequence[tuple[int, ...]]):
    ends: dict[int, list[int]] = {v: [] for v in g.vertices()}
    for idx, c in enumerate(cliques, start=1):
        for v in c:
            ends[v].append(idx)
    size = len(cliques)
    edge_map = {}
    for v in g.vertices():
        pair = ends[v]
        while len(pair) < 2:
            size += 1
            pair.append(size)
        a, b = sorted(pair)
        edge_map[v] = (a, b)
    return Graph(size, edge_map.values()), edge_map


def line_graph_of(h: Graph) -> tuple[Graph, list[tuple[int, int]]]:
    """``L(h)`` with vertex ``i`` standing for ``edges[i - 1]`` of ``h``."""
    edges = list(h.edges())
    by_vertex: dict[int, list[int]] = {v: [] for v in h.vertices()}
    for i, (a, b) in enumerate(edges, start=1):
        by_vertex[a].append(i)
        by_vertex[b].append(i)
    adj = set()
    for incident in by_vertex.values():
        for i, x in enumerate(incident):
            for y in incident[i + 1 :]:
                adj.add((x, y))
    return Graph(len(edges), adj), edges


def root_round_trip(g: Graph, root: Graph, edge_map: Mapping[int, tuple[int, int]]) -> bool:
    """True if ``L(root)`` is isomorphic to ``g`` via ``edge_map``."""
    lg, edges = line_graph_of(root)
    index = {e: i for i, e in enumerate(edges, start=1)}
    try:
        mapping = {v: index[tuple(sorted(e))] for v, e in edge_map.items()}
        return verify_bijection_isomorphism(g, lg, mapping)
    except (KeyError, MapNotBijective):
        return False


def is_line_graph(g: Graph, bound: int = KRAUSZ_BOUND) -> LineGraphCertificate:
    """Line-graph recognition by backtracking search for a Krausz partition.

    The least uncovered edge is always covered next.  Larger candidate
    cliques are tried before smaller ones, and a vertex already in one clique
    forces its second clique to be all of its remaining neighbours.
    """
    if g.order > bound:
        raise GraphTooLarge(f"graph of order {g.order} exceeds Krausz bound {bound}")
    cliques = _krausz_partition(g)
    if cliques is None:
        return LineGraphCertificate(False)
    if not _verify_partition(g, cliques):
        raise AssertionError(f"Krausz search returned an invalid partition {cliques}")
    root, edge_map = _root_from_partition(g, cliques)
    if not root_round_trip(g, root, edge_map):
        raise AssertionError("reconstructed root does not reproduce the graph")
    return LineGraphCertificate(True, tuple(cliques), root, edge_map)


# -- isomorphism helpers -----------------------------------------------------


def verify_bijection_isomorphism(g1: Graph, g2: Graph, mapping: Mapping[int, int]) -> bool:
    """Check that ``mapping`` is an isomorphism ``g1 -> g2``.

    Raises :class:`MapNotBijective` unless ``mapping`` is a bijection
    between the two vertex sets.
    """
    if g1.order != g2.order:
        raise MapNotBijective(f"orders differ: {g1.order} vs {g2.order}")
    if set(mapping) != set(g1.vertices()):
        raise MapNotBijective("mapping is not defined on exactly the vertices of g1")
    image = set(mapping.values())
    if len(image) != g1.order or image != set(g2.vertices()):
        raise MapNotBijective("mapping is not onto the vertices of g2")
    if g1.edge_count() != g2.edge_count():
        return False
    mapped = {frozenset((mapping[u], mapping[v])) for u, v in g1.edges()}
    return mapped == {frozenset(e) for e in g2.edges()}


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph relabelled ``1..len(vertices)`` in the given order."""
    index = {v: i for i, v in enumerate(vertices, start=1)}
    edges = [(index[u], index[v]) for u in vertices for v in g.neighbors(u) if v in index and u < v]
    return Graph(len(vertices), edges), index


def complete_kind(m: int) -> str:
    return f"K{m}" if m <= 3 else f"Complete({m})"


_DIAMOND = Graph(4, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
_GEM = Graph(5, [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)])


def _isomorphic_small(a: Graph, b: Graph) -> bool:
    if a.order != b.order or a.edge_count() != b.edge_count():
        return False
    target = {frozenset(e) for e in b.edges()}
    edges = list(a.edges())
    for perm in permutations(range(1, b.order + 1)):
        if all(frozenset((perm[u - 1], perm[v - 1])) in target for u, v in edges):
            return True
    return False


def shape_kind(g: Graph) -> str:
    """Name a connected graph as K2, K3, Diamond, Gem, Complete(m) or Other."""
    m = g.order
    if g.edge_count() == m * (m - 1) // 2:
        return complete_kind(m)
    if m <= 6:
        if _isomorphic_small(g, _DIAMOND):
            return "Diamond"
        if _isomorphic_small(g, _GEM):
            return "Gem"
    return f"Other({m},{g.edge_count()})"


def component_kinds(g: Graph) -> list[tuple[str, int]]:
    """Multiset of component shapes as sorted ``(kind, count)`` pairs."""
    counts: dict[str, int] = {}
    for comp in connected_components(g):
        sub, _ = induced_subgraph(g, comp)
        kind = shape_kind(sub)
        counts[kind] = counts.get(kind, 0) + 1
    return sorted(counts.items())
