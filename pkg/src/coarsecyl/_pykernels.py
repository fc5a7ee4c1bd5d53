"""Pure-Python versions of the compiled kernels (same signatures)."""
from collections import deque

import numpy as np


def bfs(indptr, indices, sources, removed=-1, maxdist=-1):
    ptr = indptr.tolist()
    nbr = indices.tolist()
    n = len(ptr) - 1
    dist = [-1] * n
    queue = deque()
    for s in sources:
        s = int(s)
        if s == removed or dist[s] == 0:
            continue
        dist[s] = 0
        queue.append(s)
    while queue:
        u = queue.popleft()
        du = dist[u]
        if 0 <= maxdist <= du:
            continue
        for k in range(ptr[u], ptr[u + 1]):
            w = nbr[k]
            if w == removed or dist[w] >= 0:
                continue
            dist[w] = du + 1
            queue.append(w)
    return np.array(dist, dtype=np.int32)


def apsp(indptr, indices):
    n = len(indptr) - 1
    out = np.empty((n, n), dtype=np.int32)
    for s in range(n):
        out[s] = bfs(indptr, indices, [s])
    return out


def near_counts(indptr, indices, member, key, radius):
    ptr = indptr.tolist()
    nbr = indices.tolist()
    mem = [bool(m) for m in member]
    keys = key.tolist()
    n = len(ptr) - 1
    above = np.zeros(n, dtype=np.int64)
    below = np.zeros(n, dtype=np.int64)
    for x in range(n):
        if not mem[x]:
            continue
        kx = keys[x]
        seen = {x: 0}
        queue = deque([x])
        na = nb = 0
        while queue:
            u = queue.popleft()
            if mem[u]:
                if keys[u] > kx:
                    na += 1
                elif keys[u] < kx:
                    nb += 1
            du = seen[u]
            if du >= radius:
                continue
            for k in range(ptr[u], ptr[u + 1]):
                w = nbr[k]
                if w not in seen:
                    seen[w] = du + 1
                    queue.append(w)
        above[x] = na
        below[x] = nb
    return above, below
