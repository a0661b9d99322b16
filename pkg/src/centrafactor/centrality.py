"""The four major node-centrality metrics and the per-network dataset.

Column order is fixed everywhere as (deg, evc, bwc, clc): degree count,
unit-norm principal-eigenvector entry, raw shortest-path betweenness, and
(n-1)-scaled closeness. The exact per-column scaling is immaterial
downstream because the analysis pipeline standardizes columns before
correlating, and Pearson correlation is invariant under positive affine
rescaling.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Graph

METRICS = ("deg", "evc", "bwc", "clc")


class DisconnectedGraphError(ValueError):
    """The metric needs finite distances; extract the largest connected
    component first."""


class GraphTooSmallError(ValueError):
    """The graph has too few nodes for the requested computation."""


class PowerIterationError(RuntimeError):
    """Power iteration did not converge within the iteration budget."""

    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"power iteration residual {residual:.3e} after {iterations} iterations"
        )


@dataclass(frozen=True, eq=False)
class CentralityDataset:
    """n x 4 matrix of centrality values, columns in METRICS order,
    rows aligned with graph node ids."""

    values: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.values[:, METRICS.index(name)]

    def summary(self) -> dict[str, dict[str, float]]:
        """Per-metric min/mean/max, for report embedding."""
        out = {}
        for j, name in enumerate(METRICS):
            col = self.values[:, j]
            out[name] = {
                "min": float(col.min()),
                "mean": float(col.mean()),
                "max": float(col.max()),
            }
        return out

    def to_csv(self, labels: tuple[str, ...]) -> str:
        """CSV with header ``node,deg,evc,bwc,clc`` at full precision."""
        lines = ["node," + ",".join(METRICS)]
        for label, row in zip(labels, self.values):
            lines.append(label + "," + ",".join(f"{x:.17g}" for x in row))
        return "\n".join(lines) + "\n"


def degree_centrality(g: Graph) -> np.ndarray:
    """Neighbor count per node."""
    return np.array([len(nbrs) for nbrs in g.adjacency], dtype=float)


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Dense 0/1 adjacency matrix of the graph."""
    n = g.node_count
    a = np.zeros((n, n))
    for i, nbrs in enumerate(g.adjacency):
        for j in nbrs:
            a[i, j] = 1.0
    return a


def eigenvector_centrality(
    g: Graph, tol: float = 1e-10, max_iter: int = 1000
) -> np.ndarray:
    """Principal eigenvector of the adjacency matrix, unit Euclidean norm.

    Power iteration from the all-ones vector, which has positive overlap
    with the Perron vector of a connected graph. Iterating with A + I
    instead of A keeps the dominant eigenvalue strictly largest in
    magnitude even on bipartite graphs (where A alone has a matching
    negative eigenvalue and the plain iteration oscillates); the
    eigenvectors are unchanged by the shift. Stops when successive
    normalized iterates differ by less than ``tol`` in max-norm.

    Raises:
        ValueError: on an empty graph.
        PowerIterationError: if ``max_iter`` iterations do not converge;
            carries the final residual.
    """
    n = g.node_count
    if n == 0:
        raise ValueError("graph has no nodes")
    a = adjacency_matrix(g)
    x = np.ones(n) / np.sqrt(n)
    residual = np.inf
    for _ in range(max_iter):
        y = a @ x + x
        y /= np.linalg.norm(y)
        residual = float(np.max(np.abs(y - x)))
        x = y
        if residual < tol:
            return x
    raise PowerIterationError(residual, max_iter)


def betweenness_centrality(g: Graph) -> np.ndarray:
    """Raw betweenness: per node v, the sum over unordered pairs s != t
    (both != v) of the fraction of shortest s-t paths through v.

    Single-source BFS plus a reverse dependency-accumulation pass per
    source. Sources are processed in fixed id order with sequential
    accumulation, so results are bitwise reproducible.
    """
    n = g.node_count
    adjacency = g.adjacency
    bc = [0.0] * n
    for s in range(n):
        dist = [-1] * n
        sigma = [0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1
        order: list[int] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            next_dist = dist[v] + 1
            sigma_v = sigma[v]
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = next_dist
                    queue.append(w)
                if dist[w] == next_dist:
                    sigma[w] += sigma_v
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    # each unordered pair was accumulated from both endpoints
    return np.array(bc) / 2.0


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; -1 marks unreachable nodes."""
    dist = [-1] * g.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def closeness_centrality(g: Graph) -> np.ndarray:
    """Closeness (n-1) / sum of hop distances to all other nodes.

    Raises:
        GraphTooSmallError: for fewer than 2 nodes.
        DisconnectedGraphError: if any node pair is unreachable; extract
            the largest connected component first.
    """
    n = g.node_count
    if n < 2:
        raise GraphTooSmallError("closeness needs at least 2 nodes")
    values = np.empty(n)
    for v in range(n):
        dist = bfs_distances(g, v)
        if any(d < 0 for d in dist):
            raise DisconnectedGraphError(
                "graph is disconnected; extract the largest connected component first"
            )
        values[v] = (n - 1) / sum(dist)
    return values


def centrality_dataset(
    g: Graph, evc_tol: float = 1e-10, evc_max_iter: int = 1000
) -> CentralityDataset:
    """All four metrics for every node, columns in METRICS order.

    Raises:
        GraphTooSmallError: below 5 nodes (a 4-column correlation matrix
            over fewer rows is rank-deficient in uninteresting ways).
        DisconnectedGraphError: on a disconnected graph.
    """
    if g.node_count < 5:
        raise GraphTooSmallError("centrality dataset needs at least 5 nodes")
    if not g.is_connected():
        raise DisconnectedGraphError(
            "graph is disconnected; extract the largest connected component first"
        )
    columns = (
        degree_centrality(g),
        eigenvector_centrality(g, tol=evc_tol, max_iter=evc_max_iter),
        betweenness_centrality(g),
        closeness_centrality(g),
    )
    return CentralityDataset(np.column_stack(columns))
