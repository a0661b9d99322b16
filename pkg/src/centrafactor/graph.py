"""Simple undirected graphs: edge-list parsing, serialization, components.

Node labels are free-form strings. Internal ids are assigned in
lexicographic label order, which makes every downstream computation
deterministic regardless of the line order of the input file.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class EdgeListError(ValueError):
    """Malformed or empty edge-list input."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class GraphInvariantError(ValueError):
    """A Graph value violates one of its structural invariants."""


@dataclass(frozen=True)
class ParseDiagnostics:
    """Counts of input anomalies repaired while parsing an edge list."""

    self_loops_dropped: int = 0
    duplicates_collapsed: int = 0


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    ``adjacency[i]`` is a sorted tuple of neighbor ids and edges are stored
    in both directions. Instances never mutate after construction, so they
    are safe to share across concurrent corpus workers.
    """

    labels: tuple[str, ...]
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each undirected edge once, as (i, j) with i < j."""
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    yield i, j

    def is_connected(self) -> bool:
        if self.node_count == 0:
            return False
        return len(_component_from(self, 0)) == self.node_count

    @classmethod
    def from_edge_labels(cls, edges: Iterable[tuple[str, str]]) -> "Graph":
        """Build a graph from (label, label) pairs.

        Pair orientation is ignored, duplicates collapse, and self-loop
        pairs are rejected. Ids follow sorted label order.
        """
        pairs = set()
        for a, b in edges:
            if a == b:
                raise GraphInvariantError(f"self-loop on {a!r}")
            pairs.add((a, b) if a < b else (b, a))
        labels = sorted({lab for pair in pairs for lab in pair})
        index = {lab: i for i, lab in enumerate(labels)}
        nbrs: list[set[int]] = [set() for _ in labels]
        for a, b in pairs:
            nbrs[index[a]].add(index[b])
            nbrs[index[b]].add(index[a])
        return cls(tuple(labels), tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def from_index_edges(
        cls, labels: Sequence[str], edges: Iterable[tuple[int, int]]
    ) -> "Graph":
        """Build a graph over a fixed label list from id pairs.

        ``labels`` must already be in the order that defines the ids
        (isolated nodes are kept, unlike :meth:`from_edge_labels`).
        """
        n = len(labels)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for i, j in edges:
            if i == j:
                raise GraphInvariantError(f"self-loop on node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphInvariantError(f"edge ({i}, {j}) out of range")
            nbrs[i].add(j)
            nbrs[j].add(i)
        return cls(tuple(labels), tuple(tuple(sorted(s)) for s in nbrs))


def parse_edge_list(text: str) -> tuple[Graph, ParseDiagnostics]:
    """Parse edge-list text into a Graph plus repair diagnostics.

    Each non-comment line holds two node labels separated by whitespace or
    a comma. Lines whose first non-blank character is ``#`` are comments;
    blank lines are skipped. Edge orientation is ignored, duplicate edges
    collapse, and self-loop lines are dropped (a node appearing only on
    self-loop lines is not retained).

    Raises:
        EdgeListError: on a line with other than two tokens (with its line
            number) or when no edges remain.
    """
    edges: set[tuple[str, str]] = set()
    self_loops = 0
    duplicates = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) != 2:
            raise EdgeListError(
                f"expected two node labels, got {len(tokens)} token(s): {raw!r}",
                line_number=lineno,
            )
        a, b = tokens
        if a == b:
            self_loops += 1
            continue
        pair = (a, b) if a < b else (b, a)
        if pair in edges:
            duplicates += 1
        else:
            edges.add(pair)
    if not edges:
        raise EdgeListError("no edges found in input")
    graph = Graph.from_edge_labels(edges)
    return graph, ParseDiagnostics(self_loops, duplicates)


def serialize_edge_list(g: Graph) -> str:
    """Render the canonical edge-list form of a graph.

    One sorted label pair per line, lines sorted, preceded by a comment
    header with node and edge counts. Isolated nodes have no edge to carry
    them, so they do not survive a serialize/parse round trip.
    """
    pairs = sorted(
        tuple(sorted((g.labels[i], g.labels[j]))) for i, j in g.edges()
    )
    lines = [f"# nodes={g.node_count} edges={g.edge_count}"]
    lines.extend(f"{a} {b}" for a, b in pairs)
    return "\n".join(lines) + "\n"


def _component_from(g: Graph, start: int) -> list[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in g.adjacency[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return sorted(seen)


def connected_components(g: Graph) -> list[list[int]]:
    """All connected components, each a sorted id list, in id order."""
    visited: set[int] = set()
    components = []
    for v in range(g.node_count):
        if v in visited:
            continue
        comp = _component_from(g, v)
        visited.update(comp)
        components.append(comp)
    return components


def largest_connected_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component, ids reindexed.

    Ties on size go to the component whose smallest label sorts first.
    Labels are preserved; ids are reassigned in label order.
    """
    if g.node_count == 0:
        raise ValueError("graph has no nodes")
    components = connected_components(g)
    best = min(
        components, key=lambda comp: (-len(comp), min(g.labels[i] for i in comp))
    )
    members = sorted(best, key=lambda i: g.labels[i])
    remap = {old: new for new, old in enumerate(members)}
    keep = set(members)
    labels = tuple(g.labels[i] for i in members)
    adjacency = tuple(
        tuple(sorted(remap[w] for w in g.adjacency[old] if w in keep))
        for old in members
    )
    return Graph(labels, adjacency)


def validate_graph(g: Graph) -> None:
    """Check the structural invariants of a Graph, raising on violation.

    Verified: label/adjacency length agreement, unique labels, neighbor
    ids in range, no self-loops, strictly sorted neighbor tuples (which
    also rules out duplicates), and symmetry of the adjacency relation.
    """
    n = g.node_count
    if len(g.adjacency) != n:
        raise GraphInvariantError("labels and adjacency lengths differ")
    if len(set(g.labels)) != n:
        raise GraphInvariantError("duplicate node labels")
    neighbor_sets = []
    for i, nbrs in enumerate(g.adjacency):
        for j in nbrs:
            if not (0 <= j < n):
                raise GraphInvariantError(f"node {i}: neighbor {j} out of range")
            if j == i:
                raise GraphInvariantError(f"node {i}: self-loop")
        if any(a >= b for a, b in zip(nbrs, nbrs[1:])):
            raise GraphInvariantError(f"node {i}: adjacency not strictly sorted")
        neighbor_sets.append(set(nbrs))
    for i, nbrs in enumerate(neighbor_sets):
        for j in nbrs:
            if i not in neighbor_sets[j]:
                raise GraphInvariantError(f"edge ({i}, {j}) not symmetric")
