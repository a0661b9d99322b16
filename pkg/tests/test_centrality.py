import random

import numpy as np
import pytest

from centrafactor.centrality import (
    METRICS,
    DisconnectedGraphError,
    GraphTooSmallError,
    PowerIterationError,
    betweenness_centrality,
    centrality_dataset,
    closeness_centrality,
    degree_centrality,
    eigenvector_centrality,
)
from centrafactor.graph import parse_edge_list
from centrafactor.linalg import jacobi_eigen
from centrafactor.centrality import adjacency_matrix
from oracles import (
    bfs_dist,
    brute_force_betweenness,
    complete_graph,
    cycle_graph,
    path_graph,
    permuted_graph,
    random_connected_graph,
    star_graph,
)


class TestDegree:
    def test_path(self):
        assert degree_centrality(path_graph(3)).tolist() == [1, 2, 1]

    def test_complete(self):
        assert degree_centrality(complete_graph(4)).tolist() == [3, 3, 3, 3]

    def test_star(self):
        assert degree_centrality(star_graph(3)).tolist() == [3, 1, 1, 1]


class TestEigenvector:
    def test_complete_graph_equal_entries(self):
        evc = eigenvector_centrality(complete_graph(4))
        assert np.allclose(evc, 0.5, atol=1e-9)

    def test_path_matches_closed_form(self):
        evc = eigenvector_centrality(path_graph(3), tol=1e-12)
        assert np.allclose(evc, [0.5, np.sqrt(0.5), 0.5], atol=1e-9)

    def test_cycle_is_uniform(self):
        evc = eigenvector_centrality(cycle_graph(5))
        assert np.allclose(evc, 1 / np.sqrt(5), atol=1e-9)

    def test_unit_norm_and_nonnegative(self):
        g = random_connected_graph(random.Random(0), 12, 0.3)
        evc = eigenvector_centrality(g)
        assert abs(np.linalg.norm(evc) - 1.0) <= 1e-9
        assert (evc >= 0).all()

    def test_matches_jacobi_principal_eigenvector(self):
        rng = random.Random(1)
        for _ in range(10):
            g = random_connected_graph(rng, rng.randint(5, 16), 0.4)
            evc = eigenvector_centrality(g, tol=1e-12, max_iter=20000)
            principal = jacobi_eigen(adjacency_matrix(g)).eigenvectors[:, 0]
            assert np.max(np.abs(evc - principal)) <= 1e-8

    def test_nonconvergence_carries_residual(self):
        g = path_graph(6)
        with pytest.raises(PowerIterationError) as exc_info:
            eigenvector_centrality(g, tol=1e-10, max_iter=2)
        assert exc_info.value.residual > 0
        assert exc_info.value.iterations == 2

    def test_empty_graph_rejected(self):
        from centrafactor.graph import Graph

        with pytest.raises(ValueError):
            eigenvector_centrality(Graph((), ()))


class TestBetweenness:
    def test_path(self):
        assert betweenness_centrality(path_graph(3)).tolist() == [0.0, 1.0, 0.0]

    def test_star(self):
        assert betweenness_centrality(star_graph(3)).tolist() == [3.0, 0.0, 0.0, 0.0]

    def test_cycle_c4(self):
        assert betweenness_centrality(cycle_graph(4)).tolist() == [0.5] * 4

    def test_matches_brute_force_on_random_graphs(self):
        rng = random.Random(2)
        for _ in range(40):
            g = random_connected_graph(rng, rng.randint(3, 7), 0.5)
            fast = betweenness_centrality(g)
            slow = brute_force_betweenness(g)
            assert np.max(np.abs(fast - slow)) <= 1e-9

    def test_disconnected_pairs_contribute_nothing(self):
        g, _ = parse_edge_list("a b\nb c\nx y\n")
        assert betweenness_centrality(g).tolist() == [0.0, 1.0, 0.0, 0.0, 0.0]

    def test_total_equals_distance_sum_identity(self):
        rng = random.Random(3)
        for _ in range(20):
            g = random_connected_graph(rng, rng.randint(4, 10), 0.4)
            total = betweenness_centrality(g).sum()
            expected = sum(
                bfs_dist(g, s)[t] - 1
                for s in range(g.node_count)
                for t in range(s + 1, g.node_count)
            )
            assert abs(total - expected) <= 1e-9


class TestCloseness:
    def test_path(self):
        clc = closeness_centrality(path_graph(3))
        assert np.allclose(clc, [2 / 3, 1.0, 2 / 3], atol=1e-12)

    def test_complete(self):
        assert closeness_centrality(complete_graph(4)).tolist() == [1.0] * 4

    def test_star(self):
        clc = closeness_centrality(star_graph(3))
        assert np.allclose(clc, [1.0, 3 / 5, 3 / 5, 3 / 5], atol=1e-12)

    def test_disconnected_instructs_lcc(self):
        g, _ = parse_edge_list("a b\nx y\n")
        with pytest.raises(DisconnectedGraphError, match="largest connected component"):
            closeness_centrality(g)


class TestDataset:
    def test_vertex_transitive_columns_constant(self):
        values = centrality_dataset(cycle_graph(6)).values
        assert np.max(values.std(axis=0)) <= 1e-12

    def test_path_p5_degree_column(self):
        ds = centrality_dataset(path_graph(5))
        assert ds.column("deg").tolist() == [1, 2, 2, 2, 1]

    def test_columns_cross_checked_against_oracles(self):
        rng = random.Random(4)
        for _ in range(10):
            g = random_connected_graph(rng, rng.randint(5, 7), 0.5)
            ds = centrality_dataset(g)
            assert np.max(np.abs(ds.column("bwc") - brute_force_betweenness(g))) <= 1e-9
            principal = jacobi_eigen(adjacency_matrix(g)).eigenvectors[:, 0]
            assert np.max(np.abs(ds.column("evc") - principal)) <= 1e-8

    def test_too_small_rejected(self):
        with pytest.raises(GraphTooSmallError):
            centrality_dataset(path_graph(4))

    def test_disconnected_rejected(self):
        g, _ = parse_edge_list("a b\nb c\nc a\nx y\ny z\n")
        with pytest.raises(DisconnectedGraphError):
            centrality_dataset(g)

    def test_csv_serialization(self):
        ds = centrality_dataset(path_graph(5))
        text = ds.to_csv(path_graph(5).labels)
        lines = text.splitlines()
        assert lines[0] == "node," + ",".join(METRICS)
        assert len(lines) == 6
        assert lines[1].startswith("n000,1,")

    def test_bwc_column_sum_invariant(self):
        g = star_graph(5)
        ds = centrality_dataset(g)
        expected = sum(
            bfs_dist(g, s)[t] - 1
            for s in range(g.node_count)
            for t in range(s + 1, g.node_count)
        )
        assert abs(ds.column("bwc").sum() - expected) <= 1e-9


def test_relabeling_equivariance():
    rng = random.Random(5)
    for _ in range(10):
        g = random_connected_graph(rng, rng.randint(5, 9), 0.45)
        perm = list(range(g.node_count))
        rng.shuffle(perm)
        h = permuted_graph(g, perm)
        for metric in (degree_centrality, betweenness_centrality, closeness_centrality):
            original = metric(g)
            relabeled = metric(h)
            assert np.max(np.abs(relabeled[perm] - original)) <= 1e-9
        evc_g = eigenvector_centrality(g, tol=1e-12, max_iter=20000)
        evc_h = eigenvector_centrality(h, tol=1e-12, max_iter=20000)
        assert np.max(np.abs(evc_h[perm] - evc_g)) <= 1e-9
