import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfattack.graph import (
    DimensionError,
    Flip,
    FlipStateError,
    Graph,
    GraphError,
    ParseError,
    apply_flip,
    degree_profile,
    largest_connected_component,
    load_edge_list,
    load_features,
    load_labels,
    normalized_adjacency,
)
from gfattack.synthetic import erdos_renyi

from .conftest import complete, path


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoaders:
    def test_edge_list(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        assert g.n == 3
        assert g.edges == {(0, 1), (1, 2)}

    def test_duplicates_collapse(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 0\n0 1\n"))
        assert g.edges == {(0, 1)}

    def test_blank_lines_ignored(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "\n0 1\n\n"))
        assert g.n == 2

    def test_self_loop_rejected(self, tmp_path):
        with pytest.raises(ParseError, match=r":1: self-loop"):
            load_edge_list(write(tmp_path, "e.txt", "2 2\n"))

    @pytest.mark.parametrize("line", ["0 x", "0 1 2", "-1 2", "7"])
    def test_malformed_line_reports_line_number(self, tmp_path, line):
        with pytest.raises(ParseError, match=r":2:"):
            load_edge_list(write(tmp_path, "e.txt", f"0 1\n{line}\n"))

    def test_features(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        g = load_features(write(tmp_path, "x.csv", "1,2\n3,4\n5,6\n"), g)
        assert g.X.shape == (3, 2)
        assert g.X[2, 1] == 6.0

    def test_features_row_mismatch(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        with pytest.raises(DimensionError):
            load_features(write(tmp_path, "x.csv", "1,2\n3,4\n"), g)

    def test_features_empty_file(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        with pytest.raises(DimensionError):
            load_features(write(tmp_path, "x.csv", ""), g)

    def test_features_non_numeric(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        with pytest.raises(ParseError):
            load_features(write(tmp_path, "x.csv", "1,2\n3,a\n5,6\n"), g)

    def test_features_ragged(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        with pytest.raises(DimensionError):
            load_features(write(tmp_path, "x.csv", "1,2\n3\n5,6\n"), g)

    def test_labels(self, tmp_path):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        g = load_labels(write(tmp_path, "y.txt", "0\n1\n0\n"), g)
        assert g.labels.tolist() == [0, 1, 0]
        assert g.num_classes == 2

    @pytest.mark.parametrize("text", ["0\n1\n", "0\n-1\n0\n"])
    def test_labels_invalid(self, tmp_path, text):
        g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n"))
        with pytest.raises(GraphError):
            load_labels(write(tmp_path, "y.txt", text), g)


class TestComponents:
    def test_keeps_largest(self):
        X = np.arange(5.0)[:, None]
        g = Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)], X=X, labels=[0, 0, 1, 1, 0])
        lcc = largest_connected_component(g)
        assert lcc.n == 3
        assert lcc.edges == {(0, 1), (1, 2)}
        assert lcc.X[:, 0].tolist() == [2.0, 3.0, 4.0]
        assert lcc.labels.tolist() == [1, 1, 0]
        assert lcc.origin.tolist() == [2, 3, 4]

    def test_connected_graph_unchanged(self, k3):
        assert largest_connected_component(k3).same_as(k3)

    def test_empty_graph(self):
        with pytest.raises(GraphError):
            largest_connected_component(Graph(0, frozenset()))

    def test_idempotent(self):
        g = erdos_renyi(60, 0.03, seed=3)
        once = largest_connected_component(g)
        twice = largest_connected_component(once)
        assert twice.same_as(once)
        assert twice.origin.tolist() == once.origin.tolist()


class TestDegrees:
    def test_triangle(self, k3):
        prof = degree_profile(k3)
        assert prof.degrees.tolist() == [2, 2, 2]
        assert (prof.volume, prof.d_min) == (6, 2)

    def test_path(self, p3):
        prof = degree_profile(p3)
        assert prof.degrees.tolist() == [1, 2, 1]
        assert (prof.volume, prof.d_min) == (4, 1)

    def test_single_edge(self, k2):
        prof = degree_profile(k2)
        assert prof.degrees.tolist() == [1, 1]
        assert prof.volume == 2


class TestNormalizedAdjacency:
    def test_k2(self, k2):
        np.testing.assert_array_equal(normalized_adjacency(k2), [[0, 1], [1, 0]])

    def test_p3(self, p3):
        A = normalized_adjacency(p3)
        s = 1 / np.sqrt(2)
        np.testing.assert_allclose(A, [[0, s, 0], [s, 0, s], [0, s, 0]])

    def test_isolated_vertex(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(GraphError, match="vertex 2"):
            normalized_adjacency(g)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0.05, 0.6))
    def test_spectrum_in_unit_interval(self, seed, p):
        g = largest_connected_component(erdos_renyi(25, p, seed))
        if g.n < 2:
            return
        vals = np.linalg.eigvalsh(normalized_adjacency(g))
        assert vals.min() >= -1 - 1e-8
        assert vals.max() <= 1 + 1e-8


class TestFlips:
    def test_delete(self, k3):
        g = apply_flip(k3, Flip(1, 2, -1))
        assert g.edges == {(0, 1), (0, 2)}
        assert degree_profile(g).degrees.tolist() == [2, 1, 1]
        assert k3.edges == {(0, 1), (0, 2), (1, 2)}

    def test_insert(self, p3):
        assert apply_flip(p3, Flip(0, 2, 1)).edges == complete(3).edges

    def test_insert_existing(self, k3):
        with pytest.raises(FlipStateError):
            apply_flip(k3, Flip(0, 1, 1))

    def test_delete_absent(self, p3):
        with pytest.raises(FlipStateError):
            apply_flip(p3, Flip(0, 2, -1))

    def test_bad_flips(self):
        with pytest.raises(GraphError):
            Flip(1, 1, 1)
        with pytest.raises(GraphError):
            Flip(0, 1, 0)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000), st.data())
    def test_round_trip_and_volume(self, seed, data):
        g = erdos_renyi(12, 0.3, seed).with_features(np.arange(24.0).reshape(12, 2))
        u = data.draw(st.integers(0, 11))
        v = data.draw(st.integers(0, 11).filter(lambda x: x != u))
        f = Flip(u, v, -1 if g.has_edge(u, v) else 1)
        h = apply_flip(g, f)
        assert degree_profile(h).volume == degree_profile(g).volume + 2 * f.sign
        assert apply_flip(h, f.reverse()).same_as(g)

    def test_graph_is_read_only(self, k3):
        with pytest.raises(ValueError):
            k3.X[0, 0] = 5.0


def test_path_helper_matches_loader(tmp_path):
    g = load_edge_list(write(tmp_path, "e.txt", "0 1\n1 2\n2 3\n"))
    assert g.edges == path(4).edges
