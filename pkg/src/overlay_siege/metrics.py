"""Robustness measures evaluated on the surviving graph.

Every size-normalised measure takes a ``basis`` switch: ``"survivors"``
(default) divides by the alive node count, ``"original"`` by the full id
space, i.e. the pre-attack network size.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from . import _kernels
from .centrality import betweenness
from .graph import Graph, component_of

Basis = Literal["survivors", "original"]


@dataclass(frozen=True)
class MetricsVector:
    connected: bool
    cost: float
    e_glob: float
    e_loc: float
    giant: int
    n_alive: int
    betweenness_max: float

    def to_dict(self) -> dict:
        return asdict(self)


def _size(g: Graph, basis: Basis) -> int:
    if basis == "survivors":
        return g.n_alive
    if basis == "original":
        return g.n
    raise ValueError(f"unknown basis {basis!r}")


def cost(g: Graph, basis: Basis = "survivors") -> float:
    """Edge density 2k / (N (N - 1)); 0 when fewer than two nodes."""
    n = _size(g, basis)
    if n <= 1:
        return 0.0
    return 2.0 * g.edge_count / (n * (n - 1))


def global_efficiency(g: Graph, basis: Basis = "survivors") -> float:
    """Mean inverse shortest-path length over ordered pairs, unreachable pairs count 0."""
    n = _size(g, basis)
    if n <= 1 or g.n_alive <= 1:
        return 0.0
    indptr, indices = g.to_csr()
    sources = np.asarray(g.alive_nodes(), dtype=np.int64)
    return _kernels.inverse_distance_sum(indptr, indices, sources, g.n) / (n * (n - 1))


def local_efficiency(g: Graph, basis: Basis = "survivors") -> float:
    """Mean efficiency of the subgraphs induced on each node's neighbours.

    A node with fewer than two neighbours contributes 0.
    """
    n = _size(g, basis)
    if n == 0 or g.n_alive == 0:
        return 0.0
    indptr, indices = g.to_csr()
    nodes = np.asarray(g.alive_nodes(), dtype=np.int64)
    return float(_kernels.local_efficiencies(indptr, indices, nodes, g.n).sum()) / n


def giant_component_size(g: Graph) -> int:
    best = 0
    seen: set[int] = set()
    for v in g.alive_nodes():
        if v not in seen:
            comp = component_of(g, v)
            seen |= comp
            best = max(best, len(comp))
            if best * 2 > g.n_alive:
                break
    return best


def is_connected(g: Graph) -> bool:
    """True when the alive nodes form one component (vacuously for <= 1 node)."""
    alive = g.alive_nodes()
    if len(alive) <= 1:
        return True
    return len(component_of(g, alive[0])) == len(alive)


def measure(g: Graph, basis: Basis = "survivors", with_betweenness: bool = True) -> MetricsVector:
    giant = giant_component_size(g)
    bmax = float(betweenness(g).max()) if with_betweenness and g.n_alive else 0.0
    return MetricsVector(
        connected=g.n_alive <= 1 or giant == g.n_alive,
        cost=cost(g, basis),
        e_glob=global_efficiency(g, basis),
        e_loc=local_efficiency(g, basis),
        giant=giant,
        n_alive=g.n_alive,
        betweenness_max=bmax,
    )
