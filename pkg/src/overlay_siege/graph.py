"""Undirected simple graph over dense integer ids, plus path primitives.

Nodes are never renumbered: removal marks a node dead and strips its edges,
so attack logs and reports can keep referring to the original ids.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

from . import _kernels

UNREACHABLE = -1


class GraphError(ValueError):
    """Raised on operations that would break the graph invariants."""


class SelfLoopError(GraphError):
    pass


class DeadNodeError(GraphError):
    pass


class Graph:
    """Adjacency-set graph with alive/dead node flags."""

    __slots__ = ("_adj", "_alive", "_n_alive", "edge_count", "_watchers")

    def __init__(self, n: int) -> None:
        if n < 0:
            raise GraphError(f"node count must be non-negative, got {n}")
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._alive = [True] * n
        self._n_alive = n
        self.edge_count = 0
        self._watchers: list = []

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def __len__(self) -> int:
        return len(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={len(self)}, alive={self._n_alive}, edges={self.edge_count})"

    @property
    def n(self) -> int:
        """Total id space, dead nodes included."""
        return len(self._adj)

    @property
    def n_alive(self) -> int:
        return self._n_alive

    def is_alive(self, v: int) -> bool:
        return self._alive[v]

    def alive_nodes(self) -> list[int]:
        return [v for v, a in enumerate(self._alive) if a]

    def alive_mask(self) -> np.ndarray:
        return np.array(self._alive, dtype=bool)

    def neighbors(self, v: int) -> set[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> np.ndarray:
        """Degree per id; dead nodes get -1 so they never win an argmax."""
        deg = np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=len(self._adj))
        deg[~self.alive_mask()] = -1
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self._adj) for v in sorted(nbrs) if u < v]

    def _require_alive(self, v: int) -> None:
        if not 0 <= v < len(self._adj):
            raise GraphError(f"node {v} out of range [0, {len(self._adj)})")
        if not self._alive[v]:
            raise DeadNodeError(f"node {v} is dead")

    def add_edge(self, u: int, v: int) -> bool:
        """Insert edge {u, v}; returns False if it was already present."""
        if u == v:
            raise SelfLoopError(f"self-loop on node {u}")
        self._require_alive(u)
        self._require_alive(v)
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        self.edge_count += 1
        for w in self._watchers:
            w.edge_added(u, v)
        return True

    def remove_node(self, v: int) -> list[int]:
        """Kill ``v`` and its incident edges, returning its former neighbours (sorted)."""
        self._require_alive(v)
        for w in self._watchers:
            w.node_removing(v)
        former = sorted(self._adj[v])
        for u in former:
            self._adj[u].discard(v)
        self._adj[v] = set()
        self._alive[v] = False
        self._n_alive -= 1
        self.edge_count -= len(former)
        return former

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g._adj = [set(a) for a in self._adj]
        g._alive = list(self._alive)
        g._n_alive = self._n_alive
        g.edge_count = self.edge_count
        g._watchers = []
        return g

    def watch(self, watcher) -> None:
        """Register an object notified via ``node_removing(v)`` (before the
        removal) and ``edge_added(u, v)`` (after a new edge)."""
        self._watchers.append(watcher)

    def unwatch(self, watcher) -> None:
        self._watchers.remove(watcher)

    def to_csr(self) -> tuple[np.ndarray, np.ndarray]:
        lengths = np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=len(self._adj))
        indptr = np.zeros(len(self._adj) + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        indices = np.fromiter(
            (w for a in self._adj for w in a), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    def check(self) -> None:
        """Assert every structural invariant; used by tests and debug runs."""
        total = 0
        for u, nbrs in enumerate(self._adj):
            if not self._alive[u]:
                assert not nbrs, f"dead node {u} has neighbours"
            assert u not in nbrs, f"self-loop at {u}"
            for w in nbrs:
                assert self._alive[w], f"edge {u}-{w} touches dead node"
                assert u in self._adj[w], f"asymmetric edge {u}-{w}"
            total += len(nbrs)
        assert total == 2 * self.edge_count, "edge_count out of sync"
        assert self._n_alive == sum(self._alive)


def bfs_distances(g: Graph, s: int) -> np.ndarray:
    """Hop distance from ``s`` to every id; UNREACHABLE for dead or cut-off nodes."""
    g._require_alive(s)
    indptr, indices = g.to_csr()
    return _kernels.bfs(indptr, indices, s, g.n)


def component_of(g: Graph, s: int) -> set[int]:
    seen = {s}
    queue = deque([s])
    adj = g._adj
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def connected_components(g: Graph) -> list[set[int]]:
    """Alive components, largest first (ties by smallest member id)."""
    seen: set[int] = set()
    comps = []
    for v in g.alive_nodes():
        if v not in seen:
            comp = component_of(g, v)
            seen |= comp
            comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def second_neighbors(g: Graph, v: int) -> set[int]:
    """Alive nodes at hop distance exactly two from ``v``."""
    g._require_alive(v)
    first = g._adj[v]
    out: set[int] = set()
    for u in first:
        out |= g._adj[u]
    out -= first
    out.discard(v)
    return out
