from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from temporal_jr.errors import CapacityError, InputError
from temporal_jr.graphs import (
    Graph,
    format_graph,
    graph_oracle,
    has_clique,
    has_independent_set,
    load_graph,
    max_biclique_edges,
    parse_graph,
)

TRIANGLE = Graph(3, frozenset({(0, 1), (1, 2), (0, 2)}))


@st.composite
def graphs(draw, max_order=7, bipartite=False):
    if bipartite:
        a, b = draw(st.integers(1, 3)), draw(st.integers(1, 3))
        pairs = [(u, v) for u in range(a) for v in range(a, a + b)]
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        return Graph.with_part_sizes((a, b), chosen)
    order = draw(st.integers(0, max_order))
    pairs = list(combinations(range(order), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(order, frozenset(chosen))


def test_oracle_examples():
    assert graph_oracle(TRIANGLE, "clique", 3)
    assert not graph_oracle(TRIANGLE, "independent-set", 2)
    k32 = Graph.with_part_sizes((3, 2), [(u, v) for u in range(3) for v in (3, 4)])
    assert graph_oracle(k32, "biclique", 6)
    assert not graph_oracle(k32, "biclique", 7)
    with pytest.raises(InputError):
        graph_oracle(TRIANGLE, "matching", 1)


def test_oracle_size_cap():
    with pytest.raises(CapacityError):
        has_clique(Graph(17, frozenset()), 2)


def test_multicolored_oracle_needs_parts():
    with pytest.raises(InputError):
        graph_oracle(TRIANGLE, "multicolored-clique", 3)
    rainbow = Graph.with_part_sizes((1, 1, 1), [(0, 1), (1, 2), (0, 2)])
    assert graph_oracle(rainbow, "multicolored-clique", 3)


def test_graph_validation():
    with pytest.raises(InputError, match="self-loop"):
        Graph(2, frozenset({(1, 1)}))
    with pytest.raises(InputError, match="outside"):
        Graph(2, frozenset({(0, 2)}))
    with pytest.raises(InputError, match="inside part"):
        Graph.with_part_sizes((2, 1), [(0, 1)])
    assert Graph(2, frozenset({(1, 0)})).edges == frozenset({(0, 1)})


def test_parse_and_format():
    text = "# triangle\n3 3\n1 2\n2 3\n1 3\n"
    g = parse_graph(text)
    assert g == TRIANGLE
    assert parse_graph(format_graph(g)) == g
    bip = parse_graph("3 2 2,1\n1 3\n2 3\n")
    assert bip.parts == ((0, 1), (2,))


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty"),
        ("3\n", "line 1"),
        ("x 1\n1 2\n", "non-integer header"),
        ("3 2\n1 2\n", "declares 2 edges, found 1"),
        ("3 1\n1 2 3\n", "line 2: expected"),
        ("3 1\n1 a\n", "line 2: non-integer"),
        ("3 1\n1 4\n", "line 2: vertex outside 1..3"),
        ("3 1 1,1\n1 2\n", "sum to 2"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(InputError, match=message):
        parse_graph(text)


def test_load_graph(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text(format_graph(TRIANGLE))
    assert load_graph(path) == TRIANGLE


@given(graphs())
def test_round_trip(g):
    assert parse_graph(format_graph(g)) == g


@given(graphs(bipartite=True))
def test_bipartite_round_trip(g):
    assert parse_graph(format_graph(g)) == g


@given(graphs())
def test_clique_and_independent_set_are_complementary(g):
    complement = Graph(
        g.order, frozenset(p for p in combinations(range(g.order), 2) if p not in g.edges)
    )
    for k in range(g.order + 2):
        assert has_clique(g, k) == has_independent_set(complement, k)
    assert has_clique(g, 1) == (g.order >= 1)
    assert has_clique(g, 2) == bool(g.edges)


@given(graphs(bipartite=True))
def test_biclique_bounds(g):
    best = max_biclique_edges(g)
    left, right = g.parts
    assert best <= len(left) * len(right)
    assert (best >= 1) == bool(g.edges)
    assert best >= max((len(g.neighbors(v)) for v in left), default=0)
