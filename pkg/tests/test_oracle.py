from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toeplitz_claw import oracle
from toeplitz_claw.core import Claw, Graph, build_graph, validate_params
from toeplitz_claw.errors import GraphTooLarge, MapNotBijective, TooManyCliques


def T(n, *offsets):
    return build_graph(validate_params(n, offsets))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges())
    return h


@st.composite
def small_graphs(draw, max_order=8):
    n = draw(st.integers(1, max_order))
    pairs = list(combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, chosen)


def brute_claws(g):
    out = []
    for a in g.vertices():
        for b, c, d in combinations(sorted(g.neighbors(a)), 3):
            if not (g.adjacent(b, c) or g.adjacent(b, d) or g.adjacent(c, d)):
                out.append(Claw(a, (b, c, d)))
    return out


# -- claws -------------------------------------------------------------------


def test_fibonacci_claws():
    assert Claw(3, (1, 5, 11)) in oracle.enumerate_claws(T(14, 1, 2, 3, 5, 8, 13))
    assert oracle.enumerate_claws(T(9, 1, 2, 3, 5, 8)) == []


def test_derived_claws():
    # found by listing centers and their nonadjacent leaf triples by hand
    assert Claw(3, (1, 5, 8)) in oracle.enumerate_claws(T(8, 2, 5))
    assert Claw(4, (1, 5, 9)) in oracle.enumerate_claws(T(9, 1, 2, 3, 5))


def test_claw_limit_and_order():
    g = T(20, 1, 3, 5)
    claws = oracle.enumerate_claws(g)
    assert claws == sorted(claws)
    assert oracle.enumerate_claws(g, limit=3) == claws[:3]


def test_star_needs_toeplitz_graph():
    with pytest.raises(ValueError):
        oracle.enumerate_claws(Graph(4, [(1, 2), (1, 3), (1, 4)]), star=True)


def test_claw_bound(monkeypatch):
    monkeypatch.setenv(oracle.ORACLE_ENV, "10")
    with pytest.raises(GraphTooLarge):
        oracle.enumerate_claws(T(11, 1))
    with pytest.raises(GraphTooLarge):
        oracle.enumerate_claws(T(600, 1), bound=512)


@settings(max_examples=200, deadline=None)
@given(small_graphs())
def test_claws_match_brute_force(g):
    claws = oracle.enumerate_claws(g)
    assert claws == sorted(brute_claws(g))
    assert all(c.is_valid_in(g) for c in claws)


def test_star_reduction_closed_under_reflection():
    for n in range(2, 16):
        for k in range(1, min(n, 5)):
            for offs in combinations(range(1, min(n, 10)), k):
                g = T(n, *offs)
                full = set(oracle.enumerate_claws(g))
                reduced = oracle.enumerate_claws(g, star=True)
                assert all(c.satisfies_star() for c in reduced)
                assert set(reduced) | {c.reflected(n) for c in reduced} == full


# -- cliques -----------------------------------------------------------------


@pytest.mark.parametrize("g, omega", [(T(30, 5, 10, 15), 4), (T(3, 1, 2), 3), (T(5, 2, 3), 2), (Graph(3), 1)])
def test_clique_number(g, omega):
    assert oracle.clique_number(g) == omega


@settings(max_examples=150, deadline=None)
@given(small_graphs(10))
def test_cliques_match_networkx(g):
    expected = sorted(tuple(sorted(c)) for c in nx.find_cliques(to_nx(g))) if g.order else []
    assert oracle.maximal_cliques(g) == expected
    assert oracle.clique_number(g) == max((len(c) for c in expected), default=0)


# -- chordality and holes ----------------------------------------------------


def test_chordal_examples():
    cert = oracle.is_chordal(T(6, 1, 2, 3))
    assert cert and cert.ordering is not None
    c5 = oracle.is_chordal(T(5, 2, 3))
    assert not c5 and len(c5.hole) == 5 and c5.hole.is_valid_in(T(5, 2, 3))
    assert oracle.is_chordal(T(2, 1))


def test_find_hole_examples():
    g = T(10, 4, 6)
    hole = oracle.find_hole(g, 5)
    assert hole is not None and hole.is_valid_in(g)
    assert oracle.find_hole(T(6, 1, 2, 3), 4) is None
    c7 = oracle.find_hole(T(7, 2, 5), 7)
    assert c7 is not None and set(c7.cycle) == set(range(1, 8))
    with pytest.raises(ValueError):
        oracle.find_hole(g, 3)


def test_hole_validation():
    g = T(10, 4, 6)
    assert oracle.Hole((1, 5, 9, 3, 7)).is_valid_in(g)
    assert not oracle.Hole((1, 5, 9, 3)).is_valid_in(g)


@settings(max_examples=200, deadline=None)
@given(small_graphs(9))
def test_chordal_matches_networkx_and_hole_search(g):
    cert = oracle.is_chordal(g)
    assert cert.chordal == nx.is_chordal(to_nx(g))
    holes = [oracle.find_hole(g, length) for length in range(4, g.order + 1)]
    assert cert.chordal == all(h is None for h in holes)
    for length, h in zip(range(4, g.order + 1), holes):
        assert h is None or (len(h) == length and h.is_valid_in(g))
    if not cert.chordal:
        assert cert.hole.is_valid_in(g)


# -- interval ----------------------------------------------------------------


def asteroidal_triple_free(g):
    """Brute force: no three independent vertices pairwise joined avoiding the third's closed neighbourhood."""
    h = to_nx(g)

    def linked(a, b, avoid):
        blocked = set(h[avoid]) | {avoid}
        sub = h.subgraph(v for v in h if v not in blocked)
        return a in sub and b in sub and nx.has_path(sub, a, b)

    for a, b, c in combinations(g.vertices(), 3):
        if g.adjacent(a, b) or g.adjacent(a, c) or g.adjacent(b, c):
            continue
        if linked(a, b, c) and linked(a, c, b) and linked(b, c, a):
            return False
    return True


def test_interval_examples():
    assert oracle.is_interval(T(6, 1, 2, 3))
    assert not oracle.is_interval(T(5, 2, 3))
    assert oracle.is_interval(Graph(4, [(1, 2), (2, 3), (3, 4)]))
    # claw-subdivision: chordal but not interval
    tripod = Graph(7, [(1, 2), (2, 3), (1, 4), (4, 5), (1, 6), (6, 7)])
    assert oracle.is_chordal(tripod) and not oracle.is_interval(tripod)


def test_too_many_cliques():
    with pytest.raises(TooManyCliques):
        oracle.is_interval(T(30, 1), max_cliques=20)


@settings(max_examples=200, deadline=None)
@given(small_graphs(8))
def test_interval_is_chordal_and_at_free(g):
    iv = oracle.is_interval(g, max_cliques=64)
    assert iv == (nx.is_chordal(to_nx(g)) and asteroidal_triple_free(g))
    if iv:
        assert oracle.is_chordal(g)


# -- line graphs -------------------------------------------------------------


def test_claw_is_not_line_graph():
    assert not oracle.is_line_graph(Graph(4, [(1, 2), (1, 3), (1, 4)]))


def _isomorphic(a, b):
    return nx.is_isomorphic(to_nx(a), to_nx(b))


def test_paw_and_bull_roots():
    paw = Graph(4, [(1, 4), (1, 2), (1, 3), (2, 3)])
    bull = Graph(5, [(1, 4), (1, 2), (1, 3), (2, 3), (3, 5)])
    c4 = oracle.is_line_graph(T(4, 1, 2))
    c5 = oracle.is_line_graph(T(5, 1, 2))
    assert c4 and _isomorphic(c4.root, paw)
    assert c5 and _isomorphic(c5.root, bull)


def test_krausz_bound():
    with pytest.raises(GraphTooLarge):
        oracle.is_line_graph(T(65, 1))


def nx_is_line_graph(g):
    # networkx handles one nontrivial connected graph at a time
    h = to_nx(g)
    for comp in nx.connected_components(h):
        if len(comp) == 1:
            continue
        try:
            nx.inverse_line_graph(nx.convert_node_labels_to_integers(h.subgraph(comp)))
        except nx.NetworkXError:
            return False
    return True


@settings(max_examples=300, deadline=None)
@given(small_graphs(8))
def test_line_graph_matches_networkx(g):
    cert = oracle.is_line_graph(g)
    assert cert.is_line == nx_is_line_graph(g)
    if cert:
        assert oracle.root_round_trip(g, cert.root, cert.edge_map)
        assert oracle._verify_partition(g, cert.partition)


@settings(max_examples=100, deadline=None)
@given(small_graphs(7))
def test_line_graph_of_any_root_is_recognized(h):
    lg, _ = oracle.line_graph_of(h)
    if lg.order <= oracle.KRAUSZ_BOUND:
        cert = oracle.is_line_graph(lg)
        assert cert and oracle.root_round_trip(lg, cert.root, cert.edge_map)


# -- bijections and shapes ---------------------------------------------------


def test_bijection_component_of_figure():
    g = T(30, 5, 10, 15)
    comp = (1, 6, 11, 16, 21, 26)
    sub, index = oracle.induced_subgraph(g, comp)
    mapping = {index[1 + 5 * s]: s + 1 for s in range(6)}
    assert oracle.verify_bijection_isomorphism(sub, T(6, 1, 2, 3), mapping)


def test_bijection_identity_and_failures():
    g = T(9, 1, 2, 3, 5, 8)
    assert oracle.verify_bijection_isomorphism(g, g, {v: v for v in g.vertices()})
    k3, p3 = T(3, 1, 2), T(3, 1)
    for perm in [(1, 2, 3), (2, 3, 1), (3, 1, 2)]:
        assert not oracle.verify_bijection_isomorphism(k3, p3, dict(zip((1, 2, 3), perm)))
    with pytest.raises(MapNotBijective):
        oracle.verify_bijection_isomorphism(k3, p3, {1: 1, 2: 1, 3: 3})
    with pytest.raises(MapNotBijective):
        oracle.verify_bijection_isomorphism(k3, T(4, 1), {1: 1, 2: 2, 3: 3})


def test_shape_kinds():
    assert oracle.shape_kind(T(2, 1)) == "K2"
    assert oracle.shape_kind(T(3, 1, 2)) == "K3"
    assert oracle.shape_kind(T(4, 1, 2)) == "Diamond"
    assert oracle.shape_kind(T(5, 1, 2)) == "Gem"
    assert oracle.shape_kind(T(6, 1, 2, 3, 4, 5)) == "Complete(6)"
    assert oracle.shape_kind(T(5, 1)) == "Other(5,4)"
    assert oracle.component_kinds(T(10, 3, 6)) == [("Diamond", 1), ("K3", 2)]


def test_components():
    assert oracle.connected_components(T(7, 3)) == [(1, 4, 7), (2, 5), (3, 6)]
