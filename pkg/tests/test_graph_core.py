import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_regular_edges
from vizing_lab.coloring import PartialColoring, properness_audit
from vizing_lab.graph import (
    UNREACHABLE,
    GraphError,
    bfs_distances,
    build_graph,
    component_labels,
    component_of,
    cycle5,
    disjoint_union,
    distance,
    format_edge_list,
    greedy_proper_edge_coloring,
    line_graph,
    parse_edge_list,
    path4,
    power_graph,
    random_edge_list,
    random_graph,
    saturation,
    star3,
)
from vizing_lab.rng import SplitMix64


def edge_set(g):
    return {frozenset(g.edge_labels(e)) for e in range(g.m)}


def test_splitmix_reference_stream():
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def test_empty_graph():
    g = build_graph([])
    assert g.n == 0 and g.m == 0 and g.max_degree == 0


def test_path4_shape():
    g = path4()
    assert g.max_degree == 2 and g.m == 3
    assert [g.edge_labels(e) for e in range(3)] == [("a", "b"), ("b", "c"), ("c", "d")]


@pytest.mark.parametrize(
    "edges, needle",
    [
        ([("a", "b"), ("b", "a")], "duplicate"),
        ([("a", "a")], "loop"),
        ([("a", "b", "c")], "pair"),
    ],
)
def test_build_errors_name_entry(edges, needle):
    with pytest.raises(GraphError, match=needle):
        build_graph(edges)


def test_dangling_vertex():
    with pytest.raises(GraphError, match="unknown vertex 'z'"):
        build_graph([("a", "z")], vertices=["a", "b"])


def test_rand_deterministic_and_bounded():
    a = random_edge_list(100, 5, 0)
    assert a == random_edge_list(100, 5, 0)
    g = random_graph(100, 5, 0)
    assert g.max_degree <= 5
    assert a != random_edge_list(100, 5, 1)


def test_line_graph_fixtures():
    lp = line_graph(path4())
    assert lp.adjacency == ((1,), (0, 2), (1,))
    ls = line_graph(star3())
    assert ls.adjacency == ((1, 2), (0, 2), (0, 1))
    lc = line_graph(cycle5())
    assert all(len(a) == 2 for a in lc.adjacency)
    assert len(component_labels(lc.to_graph())) == 5 and set(component_labels(lc.to_graph())) == {0}


def test_power_graph_fixtures():
    p = path4()
    assert edge_set(power_graph(p, 1)) == edge_set(p)
    assert edge_set(power_graph(p, 3)) == {frozenset(("a", "d"))}
    c = cycle5()
    sq = power_graph(c, 2)
    # brute force: distance 2 in C5 means index difference 2 mod 5
    assert edge_set(sq) == {frozenset((i, (i + 2) % 5)) for i in range(5)}
    with pytest.raises(ValueError):
        power_graph(p, 0)


def test_greedy_fixtures():
    s = star3()
    cols = greedy_proper_edge_coloring(s, 5)
    assert len(set(cols)) == 3
    c5 = greedy_proper_edge_coloring(cycle5(), 3)
    assert len(set(c5)) == 3
    with pytest.raises(ValueError, match="below"):
        greedy_proper_edge_coloring(s, 4)


def test_greedy_rand_1000_8_1():
    g = random_graph(1000, 8, 1)
    cols = greedy_proper_edge_coloring(g, 15)
    c = PartialColoring(g, cols, palette=15)
    assert properness_audit(c) == []
    assert max(cols) <= 15


def test_distance_fixtures():
    p = path4()
    a, d = p.vid("a"), p.vid("d")
    assert distance(p, a, d) == 3
    assert distance(p, a, a) == 0
    u = disjoint_union(cycle5(), p)
    assert distance(u, u.vid((0, 0)), u.vid((1, "a"))) == UNREACHABLE


def test_components():
    p = path4()
    assert component_of(p, p.vid("a")) == frozenset(range(4))
    g = build_graph([("a", "b")], vertices=["a", "b", "z"])
    assert component_of(g, g.vid("z")) == {g.vid("z")}
    u = disjoint_union(cycle5(), p)
    comp = component_of(u, u.vid((1, "a")))
    assert comp == {u.vid((1, lab)) for lab in "abcd"}
    assert saturation(u, [u.vid((1, "a")), u.vid((0, 2))]) == frozenset(range(u.n))


def test_edge_list_round_trip():
    g = build_graph([("a", "b"), ("b", "c")], vertices=["a", "b", "c", "iso"])
    text = format_edge_list(g)
    assert text == "a b\nb c\niso\n"
    h = parse_edge_list(text)
    assert h.labels == g.labels and h.edges == g.edges


def test_edge_list_errors_have_line_numbers():
    with pytest.raises(GraphError, match=":3: duplicate edge"):
        parse_edge_list("a b\n# c\nb a\n")
    with pytest.raises(GraphError, match=":1: expected"):
        parse_edge_list("a b c\n")
    with pytest.raises(GraphError, match=":2: loop"):
        parse_edge_list("a b\nc c\n")


graphs = st.builds(random_graph, st.integers(1, 60), st.integers(1, 6), st.integers(0, 2**32))


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_line_graph_degree_and_symmetry(g):
    lg = line_graph(g)
    assert lg.max_degree <= max(2 * g.max_degree - 2, 0)
    for e, nb in enumerate(lg.adjacency):
        assert e not in nb
        for f in nb:
            assert e in lg.adjacency[f]
            assert len(set(g.edges[e]) & set(g.edges[f])) == 1


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_greedy_always_proper(g):
    palette = max(2 * g.max_degree - 1, 1)
    cols = greedy_proper_edge_coloring(g, palette)
    assert properness_audit(PartialColoring(g, cols, palette=palette)) == []


@settings(max_examples=25, deadline=None)
@given(graphs, st.integers(1, 4))
def test_power_graph_matches_all_pairs(g, k):
    pg = power_graph(g, k)
    assert pg.max_degree <= g.max_degree**k
    want = {frozenset((x, y)) for x in g.vertices() for y, d in bfs_distances(g, x).items() if d == k}
    assert {frozenset(e) for e in pg.edges} == want


@settings(max_examples=25, deadline=None)
@given(graphs, st.data())
def test_distance_is_metric(g, data):
    pts = data.draw(st.lists(st.integers(0, g.n - 1), min_size=3, max_size=3))
    x, y, z = pts
    assert distance(g, x, y) == distance(g, y, x)
    assert distance(g, x, x) == 0
    assert distance(g, x, z) <= distance(g, x, y) + distance(g, y, z)


def test_regular_helper_is_simple():
    for seed in range(3):
        edges = random_regular_edges(50, 4, seed)
        g = build_graph(edges, vertices=range(50))
        assert all(g.degree(v) == 4 for v in g.vertices())
        assert len(set(edges)) == len(edges)


def test_greedy_bound_small_graphs_exhaustive():
    # every labelled graph on 5 vertices
    pairs = list(itertools.combinations(range(5), 2))
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        g = build_graph(edges, vertices=range(5))
        cols = greedy_proper_edge_coloring(g, max(2 * g.max_degree - 1, 1))
        assert max(cols, default=0) <= max(2 * g.max_degree - 1, 0)
