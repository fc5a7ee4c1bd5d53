# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled breadth-first kernels over CSR adjacency arrays."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t i32


def bfs(i32[:] indptr, i32[:] indices, sources, int removed=-1, int maxdist=-1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_arr = np.full(n, -1, dtype=np.int32)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef i32[:] dist = dist_arr
    cdef i32[:] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, k
    cdef int u, w, du
    for s in sources:
        u = s
        if u == removed or dist[u] == 0:
            continue
        dist[u] = 0
        queue[tail] = u
        tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if maxdist >= 0 and du >= maxdist:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if w == removed or dist[w] >= 0:
                continue
            dist[w] = du + 1
            queue[tail] = w
            tail += 1
    return dist_arr


def apsp(i32[:] indptr, i32[:] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.full((n, n), -1, dtype=np.int32)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef i32[:, :] out = out_arr
    cdef i32[:] queue = queue_arr
    cdef Py_ssize_t head, tail, k, s
    cdef int u, w, du
    for s in range(n):
        head = 0
        tail = 1
        queue[0] = <int>s
        out[s, s] = 0
        while head < tail:
            u = queue[head]
            head += 1
            du = out[s, u]
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if out[s, w] >= 0:
                    continue
                out[s, w] = du + 1
                queue[tail] = w
                tail += 1
    return out_arr


def near_counts(i32[:] indptr, i32[:] indices, cnp.uint8_t[:] member,
                i32[:] key, int radius):
    """For each member x, count members v with d(x,v) <= radius split by
    key[v] > key[x] (above) and key[v] < key[x] (below)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    above_arr = np.zeros(n, dtype=np.int64)
    below_arr = np.zeros(n, dtype=np.int64)
    stamp_arr = np.full(n, -1, dtype=np.int64)
    dist_arr = np.zeros(n, dtype=np.int32)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int64_t[:] above = above_arr
    cdef cnp.int64_t[:] below = below_arr
    cdef cnp.int64_t[:] stamp = stamp_arr
    cdef i32[:] dist = dist_arr
    cdef i32[:] queue = queue_arr
    cdef Py_ssize_t x, head, tail, k
    cdef int u, w, kx
    cdef cnp.int64_t na, nb
    for x in range(n):
        if not member[x]:
            continue
        kx = key[x]
        na = 0
        nb = 0
        head = 0
        tail = 1
        queue[0] = <int>x
        stamp[x] = x
        dist[x] = 0
        while head < tail:
            u = queue[head]
            head += 1
            if member[u]:
                if key[u] > kx:
                    na += 1
                elif key[u] < kx:
                    nb += 1
            if dist[u] >= radius:
                continue
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if stamp[w] == x:
                    continue
                stamp[w] = x
                dist[w] = dist[u] + 1
                queue[tail] = w
                tail += 1
        above[x] = na
        below[x] = nb
    return above_arr, below_arr
