"""Betweenness centrality: a static Brandes pass and two trackers that keep
scores current while an attack mutates the graph."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from . import _kernels
from .graph import Graph, component_of

# relative slack used when comparing float scores for argmax ties
TIE_TOLERANCE = 1e-9

# above this many ids the all-pairs state of DynamicBetweenness gets too large
DYNAMIC_MAX_NODES = 3000


def _brandes_on(g: Graph, sources: Iterable[int]) -> np.ndarray:
    indptr, indices = g.to_csr()
    src = np.asarray(sorted(sources), dtype=np.int64)
    return _kernels.brandes(indptr, indices, src, g.n) / 2.0


def betweenness(g: Graph) -> np.ndarray:
    """Unnormalised betweenness per id over unordered pairs, endpoints excluded.

    Dead nodes score 0.
    """
    return _brandes_on(g, g.alive_nodes())


class ComponentBetweenness:
    """Recomputes only the components touched since the last query.

    A removal dirties the removed node's former neighbours (every fragment of
    the old component contains one); an added edge dirties both endpoints.
    Components with no dirty member are unchanged.
    """

    def __init__(self, g: Graph) -> None:
        self.g = g
        self._scores = np.zeros(g.n)
        self._dirty: set[int] = set(g.alive_nodes())
        g.watch(self)

    def node_removing(self, v: int) -> None:
        self._dirty.update(self.g.neighbors(v))

    def edge_added(self, u: int, v: int) -> None:
        self._dirty.update((u, v))

    def detach(self) -> None:
        self.g.unwatch(self)

    def scores(self) -> np.ndarray:
        if self._dirty:
            g = self.g
            affected: set[int] = set()
            for v in self._dirty:
                if g.is_alive(v) and v not in affected:
                    affected |= component_of(g, v)
            self._dirty.clear()
            if affected:
                fresh = _brandes_on(g, affected)
                idx = np.fromiter(affected, dtype=np.int64, count=len(affected))
                self._scores[idx] = fresh[idx]
            self._scores[~g.alive_mask()] = 0.0
        return self._scores


class DynamicBetweenness:
    """Exact betweenness maintained incrementally under node removal and edge
    insertion.

    Holds all-pairs hop distances and geodesic counts (O(n^2) memory). Each
    mutation revisits only the source/target pairs whose geodesics pass
    through it, so a removal step costs a small fraction of a Brandes pass.
    """

    # spare slots per adjacency row for edges added during the attack
    SLACK = 4

    def __init__(self, g: Graph) -> None:
        if g.n >= 2**15:
            raise ValueError("hop distances are stored as int16")
        self.g = g
        self._pack()
        indptr, indices = g.to_csr()
        sources = np.asarray(g.alive_nodes(), dtype=np.int64)
        self._dist, self._sigma = _kernels.all_pairs(indptr, indices, sources, g.n)
        self._cb = _kernels.brandes(indptr, indices, sources, g.n) / 2.0
        g.watch(self)

    def _pack(self) -> None:
        adj = [sorted(self.g.neighbors(v)) for v in range(self.g.n)]
        cap = np.array([len(a) + self.SLACK for a in adj], dtype=np.int64)
        self._start = np.zeros(self.g.n, dtype=np.int64)
        np.cumsum(cap[:-1], out=self._start[1:])
        self._end = self._start + cap
        self._stop = self._start + np.array([len(a) for a in adj], dtype=np.int64)
        self._indices = np.zeros(int(cap.sum()), dtype=np.int64)
        for v, a in enumerate(adj):
            self._indices[self._start[v]:self._stop[v]] = a

    def node_removing(self, v: int) -> None:
        # Rows keep stale entries for removed nodes. They are harmless: a dead
        # node sits at distance -1 from every source, so no scan matches it.
        _kernels.remove_update(
            self._start, self._stop, self._indices, self._dist, self._sigma, self._cb, v, self.g.n
        )

    def edge_added(self, u: int, v: int) -> None:
        if self._stop[u] < self._end[u] and self._stop[v] < self._end[v]:
            self._indices[self._stop[u]] = v
            self._indices[self._stop[v]] = u
            self._stop[u] += 1
            self._stop[v] += 1
        else:
            self._pack()
        _kernels.insert_update(
            self._start, self._stop, self._indices, self._dist, self._sigma, self._cb, u, v, self.g.n
        )

    def detach(self) -> None:
        self.g.unwatch(self)

    def scores(self) -> np.ndarray:
        return self._cb


def tracker(g: Graph) -> DynamicBetweenness | ComponentBetweenness:
    """Pick the cheapest exact tracker the graph size allows."""
    if g.n <= DYNAMIC_MAX_NODES:
        return DynamicBetweenness(g)
    return ComponentBetweenness(g)


def argmax_lowest(scores: np.ndarray, candidates: Iterable[int] | None = None) -> int | None:
    """Index of the maximum score, ties (within float noise) to the lowest id.

    With ``candidates`` the search is restricted to those ids; returns None
    when that set is empty.
    """
    if candidates is None:
        idx = np.arange(len(scores))
    else:
        idx = np.fromiter(candidates, dtype=np.int64)
        if idx.size == 0:
            return None
    vals = scores[idx]
    best = vals.max()
    slack = TIE_TOLERANCE * abs(float(best))
    return int(idx[vals >= best - slack].min())
