import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markovcesaro.codings import build_free_group, build_free_semigroup
from markovcesaro.counting import (
    PathCapExceeded,
    count_matrix,
    count_table,
    count_table_csv,
    enumerate_arc_paths,
    enumerate_paths,
    verify_cut_convolution,
)
from markovcesaro.graph import parse_graph

from oracles import arc_counts, brute_path_count, random_graph


def test_count_matrix_multiplicities():
    g = parse_graph("alphabet a b\nvertex u\nvertex v\nedge u v a\nedge u v b\nedge v u a\n")
    m = count_matrix(g)
    assert m.dim == 2
    assert m.entries.tolist() == [[0, 2], [1, 0]]
    assert m.row_sums() == [2, 1]


def test_free_semigroup_spheres():
    for k in (1, 2, 3):
        t = count_table(build_free_semigroup(k), 60)
        assert list(t.spheres) == [k**n for n in range(61)]


def test_free_group_spheres_are_big_ints():
    t = count_table(build_free_group(2), 200)
    assert t.spheres[0] == 1
    assert all(t.spheres[n] == 4 * 3 ** (n - 1) for n in range(1, 201))
    assert t.spheres[200] > 2**64
    assert isinstance(t.spheres[200], int)


def test_count_table_pair_matches_walk(rng):
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(1, 5)))
        t = count_table(g, 7)
        for u, v in itertools.product(range(g.n_vertices), repeat=2):
            assert t.pair(u, v) == [brute_path_count(g, u, v, n) for n in range(8)]


def test_count_table_without_start():
    g = parse_graph("alphabet a\nvertex u\nedge u u a\n")
    t = count_table(g, 3)
    assert t.spheres is None
    assert t.pair(0, 0) == [1, 1, 1, 1]


def test_count_table_rejects_negative():
    with pytest.raises(ValueError):
        count_table(build_free_group(1), -1)


def test_enumeration_is_lexicographic_in_arc_index():
    g = build_free_group(1)
    paths = enumerate_arc_paths(g, 0, None, 3)
    assert paths == sorted(paths)
    words = enumerate_paths(g, "start", None, 3)
    assert words == [("a", "a", "a"), ("A", "A", "A")]


def test_enumeration_length_zero():
    g = build_free_group(2)
    assert enumerate_paths(g, 0, None, 0) == [()]
    assert enumerate_paths(g, 0, 1, 0) == []


def test_enumeration_cap():
    with pytest.raises(PathCapExceeded):
        enumerate_paths(build_free_semigroup(2), 0, None, 12, cap=1000)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(0, 6))
def test_enumeration_cardinality_matches_table(seed, n_vertices, n):
    g = random_graph(np.random.default_rng(seed), n_vertices)
    t = count_table(g, n)
    for u in range(n_vertices):
        for v in range(n_vertices):
            assert len(enumerate_paths(g, u, v, n)) == t.per_pair[n, u, v]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(0, 5), st.integers(0, 5))
def test_semigroup_property(seed, n_vertices, m, n):
    t = count_table(random_graph(np.random.default_rng(seed), n_vertices), m + n).per_pair
    assert np.array_equal(t[m + n], t[m].dot(t[n]))


def test_chain_counts(chain_loops_graph):
    assert count_table(chain_loops_graph, 10).pair(0, 1) == list(range(11))


def test_loop_pair_counts(loop_pair_graph):
    assert count_table(loop_pair_graph, 40).pair(0, 1) == [3**n - 2**n for n in range(41)]


def test_cut_convolution_loop_pair(loop_pair_graph):
    assert verify_cut_convolution(loop_pair_graph, (["u"], ["v"]), "u", "v", 30)
    assert verify_cut_convolution(loop_pair_graph, (["u"], ["v"]), None, None, 30)


def test_cut_convolution_rejects_back_arc():
    g = parse_graph("alphabet a\nvertex u\nvertex v\nedge u v a\nedge v u a\n")
    with pytest.raises(ValueError, match="back"):
        verify_cut_convolution(g, ([0], [1]), 0, 1, 5)


def test_cut_convolution_rejects_bad_partition(loop_pair_graph):
    with pytest.raises(ValueError):
        verify_cut_convolution(loop_pair_graph, (["u"], []), "u", "v", 5)
    with pytest.raises(ValueError):
        verify_cut_convolution(loop_pair_graph, (["u"], ["v"]), "v", "v", 5)


def test_cut_convolution_on_every_cut_of_a_chain():
    g = parse_graph("alphabet a\nvertex u\nvertex w\nvertex v\nedge u w a\nedge w v a\nedge u u a\n")
    assert verify_cut_convolution(g, (["u", "w"], ["v"]), "u", "v", 8)
    assert verify_cut_convolution(g, (["u"], ["w", "v"]), "u", "v", 8)


def test_count_table_csv():
    t = count_table(build_free_group(1), 3)
    text = count_table_csv(t, [(0, 1), (1, 1)])
    assert text == "n,sphere,start->a,a->a\n0,1,0,1\n1,2,1,1\n2,2,1,1\n3,2,1,1\n"


def test_count_matrix_matches_oracle(rng):
    for _ in range(20):
        g = random_graph(rng, 5)
        assert count_matrix(g).entries.tolist() == arc_counts(g)
