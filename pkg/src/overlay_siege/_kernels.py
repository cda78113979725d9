"""Compiled inner loops over CSR adjacency (indptr/indices, dead rows empty)."""

import numpy as np
from numba import njit


@njit(cache=True)
def brandes(indptr, indices, sources, n):
    """Ordered-pair betweenness accumulated from ``sources`` only.

    Callers pass every node of a union of components, so the result is exact
    for those nodes. Halve to get the unordered-pair convention.
    """
    cb = np.zeros(n)
    dist = np.full(n, -1, np.int64)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    order = np.empty(n, np.int64)
    for s in sources:
        head = 0
        tail = 1
        order[0] = s
        dist[s] = 0
        sigma[s] = 1.0
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for idx in range(indptr[v], indptr[v + 1]):
                w = indices[idx]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
        for i in range(tail - 1, -1, -1):
            w = order[i]
            dw = dist[w]
            coeff = (1.0 + delta[w]) / sigma[w]
            for idx in range(indptr[w], indptr[w + 1]):
                v = indices[idx]
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                cb[w] += delta[w]
        for i in range(tail):
            w = order[i]
            dist[w] = -1
            sigma[w] = 0.0
            delta[w] = 0.0
    return cb


@njit(cache=True)
def bfs(indptr, indices, s, n):
    dist = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    order[0] = s
    dist[s] = 0
    head = 0
    tail = 1
    while head < tail:
        v = order[head]
        head += 1
        for idx in range(indptr[v], indptr[v + 1]):
            w = indices[idx]
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                order[tail] = w
                tail += 1
    return dist


@njit(cache=True)
def inverse_distance_sum(indptr, indices, sources, n):
    """Sum of 1/d(s, t) over sources s and reachable t != s."""
    dist = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    total = 0.0
    for s in sources:
        order[0] = s
        dist[s] = 0
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for idx in range(indptr[v], indptr[v + 1]):
                w = indices[idx]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                    total += 1.0 / dist[w]
        for i in range(tail):
            dist[order[i]] = -1
    return total


@njit(cache=True)
def local_efficiencies(indptr, indices, nodes, n):
    """Efficiency of each node's neighbour-induced subgraph (0 when degree < 2)."""
    out = np.zeros(len(nodes))
    local = np.full(n, -1, np.int64)
    dist = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    for pos in range(len(nodes)):
        i = nodes[pos]
        start = indptr[i]
        k = indptr[i + 1] - start
        if k < 2:
            continue
        for j in range(k):
            local[indices[start + j]] = j
        total = 0.0
        for j in range(k):
            s = indices[start + j]
            order[0] = s
            dist[s] = 0
            head = 0
            tail = 1
            while head < tail:
                v = order[head]
                head += 1
                for idx in range(indptr[v], indptr[v + 1]):
                    w = indices[idx]
                    if local[w] >= 0 and dist[w] < 0:
                        dist[w] = dist[v] + 1
                        order[tail] = w
                        tail += 1
                        total += 1.0 / dist[w]
            for t in range(tail):
                dist[order[t]] = -1
        for j in range(k):
            local[indices[start + j]] = -1
        out[pos] = total / (k * (k - 1))
    return out


# ---- dynamic betweenness ---------------------------------------------------
# Rows are start[v]:stop[v] slices of ``indices`` so edges can be appended
# in place. State: dist[s, t] hop count (-1 unreachable), sigma[s, t] geodesic count,
# cb[w] betweenness over unordered pairs. A mutation only changes the pairs
# whose geodesics touch it. For each source, the old dependency on those
# targets is subtracted and the new one added in one backward sweep over the
# ancestor closure in the source's shortest-path DAG. Each unordered pair is
# credited once, from the endpoint nearer the mutation (ties to the lower id):
# that source owns many targets whose closures overlap.


@njit(cache=True)
def all_pairs(indptr, indices, sources, n):
    dist = np.full((n, n), -1, np.int16)
    sigma = np.zeros((n, n))
    order = np.empty(n, np.int64)
    for s in sources:
        d = dist[s]
        sg = sigma[s]
        order[0] = s
        d[s] = 0
        sg[s] = 1.0
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for idx in range(indptr[v], indptr[v + 1]):
                w = indices[idx]
                if d[w] < 0:
                    d[w] = d[v] + 1
                    order[tail] = w
                    tail += 1
                if d[w] == d[v] + 1:
                    sg[w] += sg[v]
    return dist, sigma


@njit(cache=True)
def _workspace(n):
    return (
        np.zeros(n, np.int8),   # 0 in_old
        np.zeros(n, np.int8),   # 1 in_new
        np.zeros(n, np.int8),   # 2 mark_old
        np.zeros(n, np.int8),   # 3 mark_new
        np.zeros(n, np.int8),   # 4 seen
        np.zeros(n, np.int8),   # 5 done_new
        np.zeros(n),            # 6 delta_old
        np.zeros(n),            # 7 delta_new
        np.empty(n, np.int64),  # 8 stack
        np.full(n + 1, -1, np.int64),  # 9 head_old
        np.full(n + 1, -1, np.int64),  # 10 head_new
        np.empty(n, np.int64),  # 11 nxt_old
        np.empty(n, np.int64),  # 12 nxt_new
    )


@njit(cache=True)
def _delta_pass(start, stop, indices, s, dold, sold, dnew, snew,
                told, nold, tnew, nnew, skip_a, skip_b, ws, cb):
    """cb += dependency of s on ``tnew`` in the new DAG minus that on ``told``
    in the old DAG. The old graph lacks edge {skip_a, skip_b} if given."""
    (in_old, in_new, mark_old, mark_new, seen, done_new, delta_old, delta_new,
     stack, head_old, head_new, nxt_old, nxt_new) = ws
    count = 0
    top = 0
    for i in range(nold):
        t = told[i]
        in_old[t] = 1
        mark_old[t] = 1
        lv = dold[t]
        nxt_old[t] = head_old[lv]
        head_old[lv] = t
        top = max(top, lv)
        if seen[t] == 0:
            seen[t] = 1
            stack[count] = t
            count += 1
    for i in range(nnew):
        t = tnew[i]
        in_new[t] = 1
        mark_new[t] = 1
        lv = dnew[t]
        nxt_new[t] = head_new[lv]
        head_new[lv] = t
        top = max(top, lv)
        if seen[t] == 0:
            seen[t] = 1
            stack[count] = t
            count += 1
    for level in range(top, 0, -1):
        below = level - 1
        x = head_old[level]
        head_old[level] = -1
        while x >= 0:
            both = mark_new[x] == 1 and dnew[x] == level
            co = (in_old[x] + delta_old[x]) / sold[x]
            cn = 0.0
            if both:
                cn = (in_new[x] + delta_new[x]) / snew[x]
                done_new[x] = 1
            for idx in range(start[x], stop[x]):
                u = indices[idx]
                if dold[u] == below and not (
                    (x == skip_a and u == skip_b) or (x == skip_b and u == skip_a)
                ):
                    delta_old[u] += sold[u] * co
                    if mark_old[u] == 0:
                        mark_old[u] = 1
                        nxt_old[u] = head_old[below]
                        head_old[below] = u
                        if seen[u] == 0:
                            seen[u] = 1
                            stack[count] = u
                            count += 1
                if both and dnew[u] == below:
                    delta_new[u] += snew[u] * cn
                    if mark_new[u] == 0:
                        mark_new[u] = 1
                        nxt_new[u] = head_new[below]
                        head_new[below] = u
                        if seen[u] == 0:
                            seen[u] = 1
                            stack[count] = u
                            count += 1
            x = nxt_old[x]
        x = head_new[level]
        head_new[level] = -1
        while x >= 0:
            if done_new[x] == 0:
                cn = (in_new[x] + delta_new[x]) / snew[x]
                for idx in range(start[x], stop[x]):
                    u = indices[idx]
                    if dnew[u] == below:
                        delta_new[u] += snew[u] * cn
                        if mark_new[u] == 0:
                            mark_new[u] = 1
                            nxt_new[u] = head_new[below]
                            head_new[below] = u
                            if seen[u] == 0:
                                seen[u] = 1
                                stack[count] = u
                                count += 1
            x = nxt_new[x]
    head_old[0] = -1
    head_new[0] = -1
    for i in range(count):
        x = stack[i]
        if x != s:
            cb[x] += delta_new[x] - delta_old[x]
        in_old[x] = 0
        in_new[x] = 0
        mark_old[x] = 0
        mark_new[x] = 0
        seen[x] = 0
        done_new[x] = 0
        delta_old[x] = 0.0
        delta_new[x] = 0.0


@njit(cache=True)
def remove_update(start, stop, indices, dist, sigma, cb, v, n):
    """Apply removal of ``v``; the adjacency still contains v and its edges."""
    ws = _workspace(n)
    dold = np.empty(n, np.int16)
    sold = np.empty(n)
    targets = np.empty(n, np.int64)
    told = np.empty(n, np.int64)
    tnew = np.empty(n, np.int64)
    pending = np.empty(n, np.int64)
    tent = np.empty(n, np.int64)
    state = np.zeros(n, np.int8)  # 1 pending, 2 finalised
    dv = dist[v].copy()
    big = n + 1
    for s in range(n):
        if s == v:
            continue
        d = dist[s]
        dsv = d[v]
        if dsv < 0:
            continue
        sg = sigma[s]
        nt = 0
        nold = 0
        for t in range(n):
            if t != s and dv[t] >= 0 and d[t] >= 0 and dsv + dv[t] == d[t]:
                targets[nt] = t
                nt += 1
                if dv[t] > dsv or (dv[t] == dsv and t > s):
                    told[nold] = t
                    nold += 1
        dold[:] = d
        sold[:] = sg
        # repair distances and counts of affected targets
        npend = 0
        for i in range(nt):
            t = targets[i]
            if t != v:
                pending[npend] = t
                npend += 1
                state[t] = 1
                d[t] = -2
        d[v] = -1
        sg[v] = 0.0
        for i in range(npend):
            t = pending[i]
            best = big
            for idx in range(start[t], stop[t]):
                u = indices[idx]
                if d[u] >= 0 and d[u] + 1 < best:
                    best = d[u] + 1
            tent[t] = best
        left = npend
        while left > 0:
            level = big
            for i in range(npend):
                t = pending[i]
                if state[t] == 1 and tent[t] < level:
                    level = tent[t]
            if level == big:
                break
            for i in range(npend):
                t = pending[i]
                if state[t] == 1 and tent[t] == level:
                    state[t] = 2
                    d[t] = level
                    left -= 1
            for i in range(npend):
                t = pending[i]
                if state[t] == 2 and d[t] == level:
                    for idx in range(start[t], stop[t]):
                        u = indices[idx]
                        if state[u] == 1 and level + 1 < tent[u]:
                            tent[u] = level + 1
        nreach = 0
        for i in range(npend):
            t = pending[i]
            if state[t] == 1:
                d[t] = -1
                sg[t] = 0.0
            else:
                targets[nreach] = t
                nreach += 1
            state[t] = 0
        keys = np.empty(nreach, np.int64)
        for i in range(nreach):
            keys[i] = d[targets[i]]
        ordered = targets[:nreach][np.argsort(keys, kind="mergesort")]
        nnew = 0
        for i in range(nreach):
            t = ordered[i]
            total = 0.0
            for idx in range(start[t], stop[t]):
                u = indices[idx]
                if d[u] == d[t] - 1:
                    total += sg[u]
            sg[t] = total
            if dv[t] > dsv or (dv[t] == dsv and t > s):
                tnew[nnew] = t
                nnew += 1
        _delta_pass(start, stop, indices, s, dold, sold, d, sg,
                    told, nold, tnew, nnew, -1, -1, ws, cb)
    # pairs with v as an endpoint disappear entirely
    nold = 0
    for t in range(n):
        if t != v and dv[t] >= 0:
            told[nold] = t
            nold += 1
    _delta_pass(start, stop, indices, v, dist[v], sigma[v], dist[v], sigma[v],
                told, nold, tnew, 0, -1, -1, ws, cb)
    dist[v, :] = -1
    sigma[v, :] = 0.0
    cb[v] = 0.0


@njit(cache=True)
def insert_update(start, stop, indices, dist, sigma, cb, a, b, n):
    """Apply insertion of edge {a, b}; the adjacency already contains it."""
    ws = _workspace(n)
    dold = np.empty(n, np.int16)
    sold = np.empty(n)
    targets = np.empty(n, np.int64)
    told = np.empty(n, np.int64)
    tnew = np.empty(n, np.int64)
    da_row = dist[a].copy()
    db_row = dist[b].copy()
    sa_row = sigma[a].copy()
    sb_row = sigma[b].copy()
    # distance to the nearer endpoint of the new edge
    key = np.empty(n, np.int64)
    for t in range(n):
        ka = da_row[t] if da_row[t] >= 0 else n + 1
        kb = db_row[t] if db_row[t] >= 0 else n + 1
        key[t] = min(ka, kb)
    for s in range(n):
        da = da_row[s]
        db = db_row[s]
        if (da < 0 and db < 0) or da == db:
            continue
        if db < 0 or (da >= 0 and da < db):
            dx = da
            sx = sa_row[s]
            dy_row = db_row
            sy_row = sb_row
        else:
            dx = db
            sx = sb_row[s]
            dy_row = da_row
            sy_row = sa_row
        d = dist[s]
        sg = sigma[s]
        ks = key[s]
        nt = 0
        nold = 0
        nnew = 0
        for t in range(n):
            if dy_row[t] >= 0:
                c = dx + 1 + dy_row[t]
                if d[t] < 0 or c <= d[t]:
                    targets[nt] = t
                    nt += 1
                    if key[t] > ks or (key[t] == ks and t > s):
                        tnew[nnew] = t
                        nnew += 1
                        if d[t] >= 0:
                            told[nold] = t
                            nold += 1
        if nt == 0:
            continue
        dold[:] = d
        sold[:] = sg
        for i in range(nt):
            t = targets[i]
            c = dx + 1 + dy_row[t]
            extra = sx * sy_row[t]
            if d[t] < 0 or c < d[t]:
                d[t] = c
                sg[t] = extra
            else:
                sg[t] += extra
        _delta_pass(start, stop, indices, s, dold, sold, d, sg,
                    told, nold, tnew, nnew, a, b, ws, cb)
