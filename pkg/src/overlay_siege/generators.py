"""Topology generators for the six evaluated overlays.

The structured overlays (CAN, Chord, Hypergrid, PRU) are reduced to their
static neighbour graphs; routing state is not modelled. Every generator is a
pure function of its spec and the supplied numpy Generator.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .graph import Graph
from .metrics import is_connected

log = logging.getLogger(__name__)

KINDS = ("can", "chord", "hypergrid", "pru", "er", "pg")

# fraction of the degree target the realised mean may drift before we warn
DEGREE_TOLERANCE = 0.15
MAX_REROLLS = 5


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class TopologySpec:
    kind: str
    n: int
    mean_degree: float = 18.0
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown topology {self.kind!r}; expected one of {KINDS}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 0 < self.mean_degree < self.n - 1:
            raise ValueError(f"mean degree {self.mean_degree} outside (0, n - 1)")

    def param(self, name: str, default: Any) -> Any:
        return self.params.get(name, default)

    def describe(self) -> str:
        extra = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind} n={self.n} mean_degree={self.mean_degree} seed={self.seed} {extra}".strip()


def realized_mean_degree(g: Graph) -> float:
    if g.n_alive == 0:
        raise ValueError("no alive nodes")
    return 2.0 * g.edge_count / g.n_alive


def _links_per_join(spec: TopologySpec) -> int:
    return max(1, round(spec.mean_degree / 2))


def erdos_renyi(spec: TopologySpec, rng: np.random.Generator) -> Graph:
    n = spec.n
    p = spec.mean_degree / (n - 1)
    g = Graph(n)
    # row-by-row keeps memory linear in n
    for u in range(n - 1):
        hits = np.flatnonzero(rng.random(n - u - 1) < p) + u + 1
        for v in hits.tolist():
            g.add_edge(u, v)
    return g


def chord(spec: TopologySpec, rng: np.random.Generator) -> Graph:
    """Ring successor plus finger successors of id + 2^j.

    With ``fingers`` below the full ``id_bits - 1`` only the longest-range
    fingers are kept; the default sizes the table to the degree target.
    """
    n = spec.n
    bits = int(spec.param("id_bits", math.ceil(math.log2(n))))
    if 2**bits < n:
        raise ValueError(f"id_bits={bits} cannot hold {n} nodes")
    fingers = int(spec.param("fingers", min(bits - 1, max(1, _links_per_join(spec) - 1))))
    if not 0 <= fingers <= bits - 1:
        raise ValueError(f"chord fingers must be in [0, {bits - 1}], got {fingers}")
    space = 2**bits
    ids = np.sort(rng.choice(space, size=n, replace=False))
    g = Graph(n)
    for i in range(n):
        succ = (i + 1) % n
        if succ != i:
            g.add_edge(i, succ)
        for j in range(bits - fingers, bits):
            target = (int(ids[i]) + 2**j) % space
            k = int(np.searchsorted(ids, target)) % n
            if k != i:
                g.add_edge(i, k)
    return g


def can(spec: TopologySpec, rng: np.random.Generator) -> Graph:
    """Zones of a d-torus; each joining node halves an existing zone, cycling
    the split dimension per zone.

    The zone is drawn with weight volume**split_bias: 0 picks zones uniformly,
    1 is a uniform random point. Zone edges are dyadic fractions, so
    coordinates are exact in float64.
    """
    n = spec.n
    dims = int(spec.param("dimensions", max(1, round(spec.mean_degree / 2))))
    bias = float(spec.param("split_bias", 0.2))
    if dims < 1 or bias < 0:
        raise ValueError(f"unsatisfiable can params dimensions={dims} split_bias={bias}")
    lo = np.zeros((n, dims))
    hi = np.ones((n, dims))
    splits = np.zeros(n, dtype=np.int64)
    for new in range(1, n):
        # volume is 2**-splits, so the weight needs no float products
        w = np.exp2(-bias * splits[:new])
        old = int(rng.choice(new, p=w / w.sum()))
        k = int(splits[old] % dims)
        mid = (lo[old, k] + hi[old, k]) / 2
        lo[new] = lo[old]
        hi[new] = hi[old]
        hi[old, k] = mid
        lo[new, k] = mid
        splits[old] += 1
        splits[new] = splits[old]
    g = Graph(n)
    for a in range(n - 1):
        b = np.arange(a + 1, n)
        overlap = (lo[b] < hi[a]) & (lo[a] < hi[b])
        touch = (hi[a] == lo[b]) | (hi[b] == lo[a]) | (
            ((hi[a] == 1.0) & (lo[b] == 0.0)) | ((hi[b] == 1.0) & (lo[a] == 0.0))
        )
        # abut in exactly one dimension, overlap in all others
        abut = touch & ~overlap
        adjacent = (abut.sum(axis=1) == 1) & ((overlap | abut).all(axis=1))
        for v in b[adjacent].tolist():
            g.add_edge(a, v)
    return g


def hypergrid(spec: TopologySpec, rng: np.random.Generator) -> Graph:
    """Degree-capped growth, then random edges among under-cap nodes."""
    n = spec.n
    cap = int(spec.param("max_degree", math.ceil(spec.mean_degree * 1.15)))
    if cap < 2:
        raise ValueError(f"hypergrid max_degree must be >= 2, got {cap}")
    g = Graph(n)
    # arrivals attach to the earliest node in BFS order with spare degree;
    # the tree is built level by level so BFS order equals arrival order
    anchor = 0
    for v in range(1, n):
        while g.degree(anchor) >= cap:
            anchor += 1
        g.add_edge(anchor, v)
    budget = round(n * spec.mean_degree / 2)
    open_nodes = [v for v in range(n) if g.degree(v) < cap]
    misses = 0
    while g.edge_count < budget and len(open_nodes) >= 2:
        i, j = rng.choice(len(open_nodes), size=2, replace=False)
        u, v = open_nodes[i], open_nodes[j]
        if g.add_edge(u, v):
            misses = 0
            if g.degree(u) >= cap or g.degree(v) >= cap:
                open_nodes = [w for w in open_nodes if g.degree(w) < cap]
            continue
        misses += 1
        if misses > 50:
            legal = [
                (x, y)
                for a, x in enumerate(open_nodes)
                for y in open_nodes[a + 1:]
                if not g.has_edge(x, y)
            ]
            if not legal:
                break
            x, y = legal[int(rng.integers(len(legal)))]
            g.add_edge(x, y)
            open_nodes = [w for w in open_nodes if g.degree(w) < cap]
            misses = 0
    return g


def pru(spec: TopologySpec, rng: np.random.Generator) -> Graph:
    """Host-cache join protocol.

    Each arrival links to ``links_per_join`` distinct cache members. A member
    leaves the cache once it has accepted ``quota`` links and the arriving
    node takes a free slot, so cache members accumulate degree while the rest
    keep only their join links.
    """
    n = spec.n
    links = int(spec.param("links_per_join", _links_per_join(spec)))
    size = int(spec.param("cache_size", 2 * links))
    quota = int(spec.param("quota", 3 * links))
    if links < 1 or size < links or quota < 1:
        raise ValueError(f"unsatisfiable pru params links={links} cache={size} quota={quota}")
    g = Graph(n)
    cache: list[int] = []
    served: dict[int, int] = {}
    for v in range(n):
        k = min(links, len(cache))
        if k:
            picks = rng.choice(len(cache), size=k, replace=False)
            for i in sorted(picks.tolist()):
                host = cache[i]
                g.add_edge(v, host)
                served[host] += 1
            cache = [h for h in cache if served[h] < quota]
        if len(cache) < size:
            cache.append(v)
            served[v] = 0
    return g


def pg(spec: TopologySpec, rng: np.random.Generator) -> Graph:
    """Growth with attachment weight (1 - g) * k^p / sum + g / t."""
    n = spec.n
    m = int(spec.param("links_per_join", _links_per_join(spec)))
    p = float(spec.param("p", 1.0))
    gmix = float(spec.param("g", 0.0))
    if not 0.0 <= gmix <= 1.0:
        raise ValueError(f"pg mixing g must be in [0, 1], got {gmix}")
    g = Graph(n)
    core = min(n, m + 1)
    for u in range(core):
        for v in range(u + 1, core):
            g.add_edge(u, v)
    deg = np.zeros(n)
    deg[:core] = core - 1
    for t in range(core, n):
        k = min(m, t)
        w = deg[:t] ** p
        w = (1.0 - gmix) * w / w.sum() + gmix / t
        targets = rng.choice(t, size=k, replace=False, p=w / w.sum())
        for u in targets.tolist():
            g.add_edge(t, u)
            deg[u] += 1
        deg[t] = k
    return g


_BUILDERS = {
    "er": erdos_renyi,
    "chord": chord,
    "can": can,
    "hypergrid": hypergrid,
    "pru": pru,
    "pg": pg,
}


def generate(spec: TopologySpec, rng: np.random.Generator | None = None) -> Graph:
    """Build the topology, re-rolling disconnected outputs up to MAX_REROLLS times."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    build = _BUILDERS[spec.kind]
    for _ in range(1 + MAX_REROLLS):
        g = build(spec, rng)
        if is_connected(g):
            break
    else:
        raise GenerationError(f"{spec.describe()}: disconnected after {MAX_REROLLS} re-rolls")
    k = realized_mean_degree(g)
    if abs(k - spec.mean_degree) > DEGREE_TOLERANCE * spec.mean_degree:
        log.warning("%s: realised mean degree %.2f vs target %.2f", spec.kind, k, spec.mean_degree)
    return g


def write_edge_list(g: Graph, path: str | Path, spec: TopologySpec | None = None) -> None:
    lines = []
    if spec is not None:
        lines.append(f"# {spec.describe()}")
    lines.append(f"# nodes={g.n} edges={g.edge_count}")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path, n: int | None = None) -> Graph:
    edges = []
    declared = None
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("nodes="):
                    declared = int(tok[6:])
            continue
        if line:
            u, v = line.split()
            edges.append((int(u), int(v)))
    size = n or declared or (1 + max((max(e) for e in edges), default=-1))
    return Graph.from_edges(size, edges)
