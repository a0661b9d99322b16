"""Seeded synthetic-network generators.

Three classic models: uniform random edges (``random``: n, p), growth with
preferential attachment (``scale-free``: n, m), and ring rewiring
(``small-world``: n, k, beta). All randomness comes from a Mersenne
Twister seeded per graph, and only ``Random.random()`` is consumed (the
one primitive Python guarantees stable across versions), so a
(model, parameters, seed) triple names exactly one graph on any platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph

MODELS = ("random", "scale-free", "small-world")


class GeneratorError(ValueError):
    """Invalid generator model or parameters."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters identifying one synthetic graph.

    Which fields apply depends on ``model``: p for ``random``, m for
    ``scale-free``, k and beta for ``small-world``.
    """

    model: str
    n: int
    p: float | None = None
    m: int | None = None
    k: int | None = None
    beta: float | None = None
    seed: int = 0

    def validate(self) -> None:
        if self.model not in MODELS:
            raise GeneratorError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.n < 1:
            raise GeneratorError("n must be >= 1")
        if not (0 <= self.seed < 2**64):
            raise GeneratorError("seed must be a 64-bit unsigned integer")
        if self.model == "random":
            if self.p is None or not (0.0 <= self.p <= 1.0):
                raise GeneratorError("random model needs edge probability p in [0, 1]")
        elif self.model == "scale-free":
            if self.m is None or self.m < 1:
                raise GeneratorError("scale-free model needs edges-per-new-node m >= 1")
            if self.n <= self.m:
                raise GeneratorError("scale-free model needs n > m")
        else:
            if self.k is None or self.k % 2 != 0 or not (0 <= self.k < self.n):
                raise GeneratorError("small-world model needs even ring degree k < n")
            if self.beta is None or not (0.0 <= self.beta <= 1.0):
                raise GeneratorError("small-world model needs rewire probability beta in [0, 1]")

    @property
    def token(self) -> str:
        """Canonical ``gen:<model>:<params>:<seed>`` form of this spec."""
        if self.model == "random":
            params = f"n={self.n},p={self.p!r}"
        elif self.model == "scale-free":
            params = f"n={self.n},m={self.m}"
        else:
            params = f"n={self.n},k={self.k},beta={self.beta!r}"
        return f"gen:{self.model}:{params}:{self.seed}"


def parse_generator_token(token: str, default_seed: int = 0) -> GeneratorSpec:
    """Parse a ``gen:<model>:<k=v,...>[:<seed>]`` source token.

    A missing seed field falls back to ``default_seed``.
    """
    parts = token.split(":")
    if len(parts) not in (3, 4) or parts[0] != "gen":
        raise GeneratorError(f"malformed generator token {token!r}")
    model = parts[1]
    params: dict[str, str] = {}
    for item in parts[2].split(","):
        if "=" not in item:
            raise GeneratorError(f"malformed parameter {item!r} in {token!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    try:
        seed = int(parts[3]) if len(parts) == 4 else default_seed
        spec = GeneratorSpec(
            model=model,
            n=int(params.pop("n")),
            p=float(params.pop("p")) if "p" in params else None,
            m=int(params.pop("m")) if "m" in params else None,
            k=int(params.pop("k")) if "k" in params else None,
            beta=float(params.pop("beta")) if "beta" in params else None,
            seed=seed,
        )
    except (KeyError, ValueError) as exc:
        raise GeneratorError(f"bad generator token {token!r}: {exc}") from exc
    if params:
        raise GeneratorError(f"unknown parameters {sorted(params)} in {token!r}")
    spec.validate()
    return spec


def generate(spec: GeneratorSpec) -> Graph:
    """Generate the graph identified by ``spec`` (pure in its arguments)."""
    spec.validate()
    rng = random.Random(spec.seed)
    if spec.model == "random":
        edges = _uniform_random_edges(spec.n, spec.p, rng)
    elif spec.model == "scale-free":
        edges = _preferential_attachment_edges(spec.n, spec.m, rng)
    else:
        edges = _ring_rewire_edges(spec.n, spec.k, spec.beta, rng)
    return Graph.from_index_edges(_node_labels(spec.n), edges)


def _node_labels(n: int) -> list[str]:
    # zero-padded so lexicographic label order equals numeric id order
    width = len(str(n - 1)) if n > 1 else 1
    return [f"v{i:0{width}d}" for i in range(n)]


def _randbelow(rng: random.Random, k: int) -> int:
    # int(random()*k) can only reach k through rounding; clamp to be safe
    return min(int(rng.random() * k), k - 1)


def _uniform_random_edges(n: int, p: float, rng: random.Random) -> list[tuple[int, int]]:
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j))
    return edges


def _preferential_attachment_edges(n: int, m: int, rng: random.Random) -> list[tuple[int, int]]:
    # Growth model: each new node attaches to m distinct existing nodes,
    # chosen uniformly from a list holding one entry per edge endpoint, so
    # the attachment probability is proportional to current degree.
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    targets = list(range(m))
    for v in range(m, n):
        for t in targets:
            edges.append((t, v))
        repeated.extend(targets)
        repeated.extend([v] * m)
        chosen: list[int] = []
        while len(chosen) < m:
            cand = repeated[_randbelow(rng, len(repeated))]
            if cand not in chosen:
                chosen.append(cand)
        targets = chosen
    return edges


def _ring_rewire_edges(n: int, k: int, beta: float, rng: random.Random) -> list[tuple[int, int]]:
    # Ring lattice with k/2 neighbors per side, then each lattice edge is
    # rewired with probability beta to a uniformly chosen new endpoint that
    # creates neither a self-loop nor a parallel edge.
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for dist in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + dist) % n
            nbrs[i].add(j)
            nbrs[j].add(i)
    for dist in range(1, k // 2 + 1):
        for i in range(n):
            j = (i + dist) % n
            if rng.random() >= beta:
                continue
            if len(nbrs[i]) >= n - 1:
                continue  # node saturated, nothing to rewire to
            w = _randbelow(rng, n)
            while w == i or w in nbrs[i]:
                w = _randbelow(rng, n)
            nbrs[i].discard(j)
            nbrs[j].discard(i)
            nbrs[i].add(w)
            nbrs[w].add(i)
    edges = []
    for i in range(n):
        for j in nbrs[i]:
            if i < j:
                edges.append((i, j))
    return edges
