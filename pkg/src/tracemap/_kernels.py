"""Compiled inner loops over CSR arrays.

All randomness is drawn by the callers with numpy generators and passed in as
uniform arrays, so kernels are pure and deterministic.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def bfs(indptr, indices, root):
    """Distances (-1 if unreachable), shortest-path counts and BFS order."""
    n = indptr.size - 1
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    dist[root] = 0
    sigma[root] = 1.0
    order[0] = root
    head = 0
    tail = 1
    while head < tail:
        v = order[head]
        head += 1
        dv = dist[v] + 1
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = dv
                order[tail] = w
                tail += 1
            if dist[w] == dv:
                sigma[w] += sigma[v]
    return dist, sigma, order[:tail]


@njit(cache=True)
def brandes(indptr, indices, slot_edge, m):
    """Ordered-pair vertex and edge betweenness, summed over every source."""
    n = indptr.size - 1
    vb = np.zeros(n, dtype=np.float64)
    eb = np.zeros(m, dtype=np.float64)
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    delta = np.zeros(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv
                    order[tail] = w
                    tail += 1
                if dist[w] == dv:
                    sigma[w] += sigma[v]
        for idx in range(tail - 1, -1, -1):
            w = order[idx]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w] - 1
            for p in range(indptr[w], indptr[w + 1]):
                v = indices[p]
                if dist[v] == dw:
                    c = sigma[v] * coeff
                    eb[slot_edge[p]] += c
                    delta[v] += c
            if w != s:
                vb[w] += delta[w]
        for idx in range(tail):
            w = order[idx]
            dist[w] = -1
            sigma[w] = 0.0
            delta[w] = 0.0
    return vb, eb


@njit(cache=True)
def random_parents(indptr, indices, dist, uniforms):
    """Pick, for every reached non-root vertex, one neighbor one hop closer.

    The choice for vertex ``v`` is ``floor(uniforms[v] * c)`` among its ``c``
    candidates in CSR order, i.e. uniform over candidates.
    """
    n = indptr.size - 1
    parent = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        dv = dist[v]
        if dv <= 0:
            continue
        c = 0
        for p in range(indptr[v], indptr[v + 1]):
            if dist[indices[p]] == dv - 1:
                c += 1
        pick = int(uniforms[v] * c)
        if pick >= c:
            pick = c - 1
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if dist[u] == dv - 1:
                if pick == 0:
                    parent[v] = u
                    break
                pick -= 1
    return parent


@njit(cache=True)
def follow_parents(parent, dist, starts):
    """Concatenate the routes ``start -> ... -> root`` along ``parent``."""
    total = 0
    for s in starts:
        total += dist[s] + 1
    flat = np.empty(total, dtype=np.int64)
    offsets = np.empty(starts.size + 1, dtype=np.int64)
    offsets[0] = 0
    pos = 0
    for a in range(starts.size):
        v = starts[a]
        flat[pos] = v
        pos += 1
        while dist[v] > 0:
            v = parent[v]
            flat[pos] = v
            pos += 1
        offsets[a + 1] = pos
    return flat, offsets


@njit(cache=True)
def sigma_walks(indptr, indices, dist, sigma, starts, uniforms, reverse):
    """Uniform random shortest paths from each start back to the BFS root.

    At vertex ``w`` the predecessor ``u`` is chosen with probability
    ``sigma[u] / sigma[w]``; ``uniforms`` supplies one draw per step, consumed
    in walk order. With ``reverse`` each path is stored root first.
    """
    total = 0
    for s in starts:
        total += dist[s] + 1
    flat = np.empty(total, dtype=np.int64)
    offsets = np.empty(starts.size + 1, dtype=np.int64)
    offsets[0] = 0
    pos = 0
    k = 0
    for a in range(starts.size):
        w = starts[a]
        length = dist[w] + 1
        step = 1
        if reverse:
            pos += length - 1
            step = -1
        flat[pos] = w
        pos += step
        while dist[w] > 0:
            x = uniforms[k] * sigma[w]
            k += 1
            dw = dist[w] - 1
            nxt = -1
            acc = 0.0
            for p in range(indptr[w], indptr[w + 1]):
                u = indices[p]
                if dist[u] == dw:
                    nxt = u
                    acc += sigma[u]
                    if x < acc:
                        break
            w = nxt
            flat[pos] = w
            pos += step
        if reverse:
            pos += length + 1
        offsets[a + 1] = pos
    return flat, offsets


@njit(cache=True)
def _slot(indptr, indices, a, b):
    lo = indptr[a]
    hi = indptr[a + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        if indices[mid] < b:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def accumulate_paths(indptr, indices, slot_edge, flat, offsets, r_n, r_e):
    """Add vertex/edge traversals of each path; return encoded transit keys.

    A transit ``k -> i -> j`` is encoded as ``(i * n + k) * n + j``.
    """
    n = indptr.size - 1
    npaths = offsets.size - 1
    nkeys = 0
    for a in range(npaths):
        length = offsets[a + 1] - offsets[a]
        if length > 2:
            nkeys += length - 2
    keys = np.empty(nkeys, dtype=np.int64)
    q = 0
    for a in range(npaths):
        lo = offsets[a]
        hi = offsets[a + 1]
        for t in range(lo, hi):
            v = flat[t]
            r_n[v] += 1
            if t + 1 < hi:
                w = flat[t + 1]
                r_e[slot_edge[_slot(indptr, indices, v, w)]] += 1
            if lo < t < hi - 1:
                keys[q] = (v * n + flat[t - 1]) * n + flat[t + 1]
                q += 1
    return keys


@njit(cache=True)
def _grow(a, need):
    if need <= a.size:
        return a
    b = np.empty(max(need, 2 * a.size), dtype=a.dtype)
    b[: a.size] = a
    return b


@njit(cache=True)
def dag_union(indptr, indices, slot_edge, dist_s, sigma_s, dist_t, sigma_t, target,
              stamp, mark, level, nxt, r_n, r_e, keys, weights, nkeys):
    """Accumulate the union of all shortest paths from source to ``target``.

    ``dist_s``/``sigma_s`` come from a BFS at the source, ``dist_t``/``sigma_t``
    from a BFS at the target. Each vertex and edge of the union is counted
    once. Every interior vertex ``i`` spreads one unit of transit weight over
    its ``(k, j)`` edge pairs in proportion to the number of shortest paths
    using ``k -> i -> j``. ``mark``/``stamp`` implement a reset-free visited
    set; ``level``/``nxt`` are scratch buffers of length n. Returns the grown
    key/weight buffers, the new key count and the number of union edges.
    """
    n = indptr.size - 1
    level[0] = target
    nlevel = 1
    mark[target] = stamp
    nedges = 0
    while nlevel > 0:
        nnext = 0
        for a in range(nlevel):
            w = level[a]
            r_n[w] += 1
            dw = dist_s[w]
            if dw == 0:
                continue
            is_interior = w != target
            norm = 1.0
            if is_interior:
                npred = 0
                nsucc = 0
                for p in range(indptr[w], indptr[w + 1]):
                    u = indices[p]
                    if dist_s[u] == dw - 1:
                        npred += 1
                    elif dist_s[u] == dw + 1 and dist_t[u] == dist_t[w] - 1:
                        nsucc += 1
                need = nkeys + npred * nsucc
                keys = _grow(keys, need)
                weights = _grow(weights, need)
                norm = sigma_s[w] * sigma_t[w]
            for p in range(indptr[w], indptr[w + 1]):
                u = indices[p]
                if dist_s[u] != dw - 1:
                    continue
                r_e[slot_edge[p]] += 1
                nedges += 1
                if mark[u] != stamp:
                    mark[u] = stamp
                    nxt[nnext] = u
                    nnext += 1
                if is_interior:
                    for p2 in range(indptr[w], indptr[w + 1]):
                        j = indices[p2]
                        if dist_s[j] == dw + 1 and dist_t[j] == dist_t[w] - 1:
                            keys[nkeys] = (w * n + u) * n + j
                            weights[nkeys] = sigma_s[u] * sigma_t[j] / norm
                            nkeys += 1
        for a in range(nnext):
            level[a] = nxt[a]
        nlevel = nnext
    return keys, weights, nkeys, nedges
