"""Slow reference implementations, sharing no code with the package.

Graphs are plain ``(n, edges)`` pairs over nodes ``0..n-1``. Distances come
from Floyd-Warshall, components from union-find, and betweenness from
explicitly enumerating every shortest path.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

INF = float("inf")


def floyd(n: int, edges) -> list[list[float]]:
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in edges:
        d[u][v] = d[v][u] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def cost(n: int, edges) -> float:
    if n <= 1:
        return 0.0
    return 2 * len(edges) / (n * (n - 1))


def global_efficiency(n: int, edges) -> float:
    if n <= 1:
        return 0.0
    d = floyd(n, edges)
    total = sum(1 / d[i][j] for i in range(n) for j in range(n) if i != j and d[i][j] < INF)
    return total / (n * (n - 1))


def local_efficiency(n: int, edges) -> float:
    if n == 0:
        return 0.0
    nbrs = {v: set() for v in range(n)}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    total = 0.0
    for i in range(n):
        sub = sorted(nbrs[i])
        k = len(sub)
        if k < 2:
            continue
        index = {v: j for j, v in enumerate(sub)}
        sub_edges = [(index[u], index[v]) for u, v in edges if u in index and v in index]
        total += global_efficiency(k, sub_edges)
    return total / n


def giant(n: int, edges) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    sizes: dict[int, int] = {}
    for v in range(n):
        r = find(v)
        sizes[r] = sizes.get(r, 0) + 1
    return max(sizes.values(), default=0)


def _adjacency(n: int, edges) -> dict[int, list[int]]:
    adj = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def shortest_paths(n: int, edges, s: int, t: int, d=None, adj=None) -> list[list[int]]:
    """Every shortest s-t path, by depth-first extension along distance layers."""
    d = d or floyd(n, edges)
    adj = adj or _adjacency(n, edges)
    if d[s][t] == INF:
        return []
    out = []

    def extend(path):
        x = path[-1]
        if x == t:
            out.append(list(path))
            return
        for y in adj[x]:
            if d[s][y] == d[s][x] + 1 and d[y][t] == d[x][t] - 1:
                path.append(y)
                extend(path)
                path.pop()

    extend([s])
    return out


def betweenness(n: int, edges, exact: bool = False) -> list:
    """Unordered pairs, endpoints excluded; ``exact`` returns Fractions."""
    d = floyd(n, edges)
    adj = _adjacency(n, edges)
    zero = Fraction(0) if exact else 0.0
    cb = [zero] * n
    for s, t in combinations(range(n), 2):
        paths = shortest_paths(n, edges, s, t, d, adj)
        for path in paths:
            for w in path[1:-1]:
                cb[w] += Fraction(1, len(paths)) if exact else 1 / len(paths)
    return cb


def compact(g) -> tuple[int, list[tuple[int, int]], list[int]]:
    """Relabel a package Graph's alive nodes to 0..k-1 for the oracles."""
    alive = g.alive_nodes()
    index = {v: i for i, v in enumerate(alive)}
    edges = [(index[u], index[v]) for u, v in g.edges()]
    return len(alive), edges, alive
