"""Finite graph models and their metric primitives.

A :class:`FineGraph` is a connected simple graph with a set of vertices
flagged *parabolic* (stand-ins for vertices of infinite valence) and an
optional group action given by vertex permutations, one per generator label.
Vertex ids may be ints or strings; all iteration orders are sorted so that
every result is deterministic.
"""
import json
from fractions import Fraction

import numpy as np

from . import kernels


class GraphError(ValueError):
    """A graph violates one of the model invariants."""


class DisconnectedError(GraphError):
    pass


class BudgetExceeded(RuntimeError):
    """A combinatorial search ran out of its explicit budget."""


def vkey(v):
    # ints sort before strings; mixed ids stay totally ordered
    return (1, v) if isinstance(v, str) else (0, v)


def sort_ids(ids):
    return sorted(ids, key=vkey)


def edge_key(u, v):
    return (u, v) if vkey(u) <= vkey(v) else (v, u)


class FineGraph:
    """Immutable graph model.

    Parameters
    ----------
    vertices : iterable of hashable ids
    edges : iterable of 2-element sequences
    parabolic : iterable of ids, optional
    action : dict, optional
        Maps a generator label to a dict ``{v: image}``.
    check : bool
        Validate invariants (connectivity, no adjacent parabolic vertices,
        action preserves edges and flags).
    """

    def __init__(self, vertices, edges, parabolic=(), action=None, check=True):
        verts = sort_ids(set(vertices))
        self.vertices = tuple(verts)
        self.index = {v: i for i, v in enumerate(verts)}
        n = len(verts)
        adj = [set() for _ in range(n)]
        es = set()
        for e in edges:
            u, v = e
            if u not in self.index or v not in self.index:
                raise GraphError(f"edge {e!r} uses an unknown vertex")
            if u == v:
                raise GraphError(f"loop at {u!r}")
            iu, iv = self.index[u], self.index[v]
            adj[iu].add(iv)
            adj[iv].add(iu)
            es.add(edge_key(u, v))
        self.edges = tuple(sorted(es, key=lambda p: (vkey(p[0]), vkey(p[1]))))
        self.parabolic = frozenset(parabolic)
        if not self.parabolic <= set(verts):
            raise GraphError("parabolic vertex not in graph")
        self._adj = [tuple(sorted(a)) for a in adj]
        indptr = np.zeros(n + 1, dtype=np.int32)
        for i, a in enumerate(self._adj):
            indptr[i + 1] = indptr[i] + len(a)
        self.indptr = indptr
        self.indices = np.array([w for a in self._adj for w in a], dtype=np.int32)
        self.action = {}
        for gen, perm in (action or {}).items():
            self.action[gen] = dict(perm)
        self._cache = {}
        # memoise BFS rows only where the quadratic memory is affordable
        self.cache_rows = n <= 4000
        if check:
            self.validate()

    # -- structure ---------------------------------------------------------
    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    def __repr__(self):
        return (f"FineGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
                f"parabolic={len(self.parabolic)})")

    def neighbors(self, v):
        return tuple(self.vertices[j] for j in self._adj[self.index[v]])

    def degree(self, v):
        return len(self._adj[self.index[v]])

    def has_edge(self, u, v):
        return self.index[v] in self._adj[self.index[u]]

    def is_parabolic(self, v):
        return v in self.parabolic

    def validate(self):
        n = len(self.vertices)
        if n == 0:
            raise GraphError("empty graph")
        if np.any(kernels.bfs(self.indptr, self.indices, [0]) < 0):
            raise DisconnectedError("graph is not connected")
        for u, v in self.edges:
            if u in self.parabolic and v in self.parabolic:
                raise GraphError(f"adjacent parabolic vertices {u!r}, {v!r}")
        for gen, perm in self.action.items():
            if set(perm) != set(self.vertices) or set(perm.values()) != set(self.vertices):
                raise GraphError(f"action of {gen!r} is not a permutation")
            for u, v in self.edges:
                if not self.has_edge(perm[u], perm[v]):
                    raise GraphError(f"action of {gen!r} breaks edge {u!r}-{v!r}")
            for v in self.vertices:
                if (v in self.parabolic) != (perm[v] in self.parabolic):
                    raise GraphError(f"action of {gen!r} moves a parabolic flag")

    def act(self, gen, v):
        return self.action[gen][v]

    # -- metric ------------------------------------------------------------
    def dist_row(self, u):
        """Distances from ``u`` as an int32 array indexed like ``vertices``."""
        key = ("row", u)
        row = self._cache.get(key)
        if row is None:
            row = kernels.bfs(self.indptr, self.indices, [self.index[u]])
            row.setflags(write=False)
            if self.cache_rows:
                self._cache[key] = row
        return row

    def dist_matrix(self):
        m = self._cache.get("apsp")
        if m is None:
            m = kernels.apsp(self.indptr, self.indices)
            m.setflags(write=False)
            self._cache["apsp"] = m
        return m

    def avoid_row(self, src, removed, maxdist=-1):
        """Distances from ``src`` in the graph with ``removed`` deleted,
        optionally truncated at ``maxdist`` (-1 marks unreached)."""
        key = ("avoid", src, removed, maxdist)
        row = self._cache.get(key)
        if row is None:
            row = kernels.bfs(self.indptr, self.indices, [self.index[src]],
                              self.index[removed], maxdist)
            row.setflags(write=False)
            if self.cache_rows:
                self._cache[key] = row
        return row

    def distance(self, u, v):
        if u not in self.index or v not in self.index:
            raise GraphError("vertex not in graph")
        d = int(self.dist_row(u)[self.index[v]])
        if d < 0:
            raise DisconnectedError(f"{u!r} and {v!r} are not connected")
        return d

    def set_distance(self, sources, maxdist=-1):
        """Distance to the nearest vertex of ``sources`` (multi-source BFS)."""
        idx = [self.index[s] for s in sources]
        return kernels.bfs(self.indptr, self.indices, idx, -1, maxdist)

    # -- serialization -----------------------------------------------------
    def to_dict(self):
        verts = list(self.vertices)
        out = {
            "vertices": verts,
            "parabolic": sort_ids(self.parabolic),
            "edges": [list(e) for e in self.edges],
        }
        if self.action:
            out["action"] = {g: [p[v] for v in verts]
                             for g, p in sorted(self.action.items())}
        return out

    @classmethod
    def from_dict(cls, data, check=True):
        verts = data["vertices"]
        order = sort_ids(verts)
        action = {}
        for g, images in (data.get("action") or {}).items():
            if len(images) != len(order):
                raise GraphError(f"action of {g!r} has wrong length")
            action[g] = dict(zip(order, images))
        return cls(verts, [tuple(e) for e in data["edges"]],
                   data.get("parabolic", ()), action, check=check)

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def induced(self, keep):
        keep = set(keep)
        es = [e for e in self.edges if e[0] in keep and e[1] in keep]
        return FineGraph(keep, es, self.parabolic & keep, check=False)


# -- paths -------------------------------------------------------------------

def check_path(g, path):
    if len(path) == 0:
        raise GraphError("empty path")
    for u, v in zip(path, path[1:]):
        if not g.has_edge(u, v):
            raise GraphError(f"{u!r}-{v!r} is not an edge")
    return tuple(path)


class GeodesicSet(tuple):
    """Tuple of geodesics carrying ``truncated`` and ``count`` attributes."""

    def __new__(cls, paths, truncated, count):
        obj = super().__new__(cls, paths)
        obj.truncated = truncated
        obj.count = count
        return obj


def interval(g, u, v):
    """Vertices lying on some geodesic from u to v."""
    du = g.dist_row(u)
    dv = g.dist_row(v)
    d = du[g.index[v]]
    return [g.vertices[i] for i in np.nonzero(du + dv == d)[0]]


def count_geodesics(g, u, v):
    du = g.dist_row(u)
    dv = g.dist_row(v)
    d = int(du[g.index[v]])
    if d < 0:
        raise DisconnectedError(f"{u!r} and {v!r} are not connected")
    on = np.nonzero(du + dv == d)[0]
    layers = sorted(on.tolist(), key=lambda i: du[i])
    cnt = {g.index[u]: 1}
    for i in layers:
        if i == g.index[u]:
            continue
        cnt[i] = sum(cnt.get(j, 0) for j in g._adj[i] if du[j] == du[i] - 1)
    return cnt[g.index[v]]


def all_geodesics(g, u, v, cap=10000):
    """Geodesics from ``u`` to ``v`` in lexicographic vertex order.

    At most ``cap`` paths are returned.  ``result.truncated`` is set when
    more geodesics exist than were returned; ``result.count`` is the exact
    number of geodesics.
    """
    total = count_geodesics(g, u, v)
    if cap <= 0:
        return GeodesicSet([], True, total)
    du = g.dist_row(u)
    dv = g.dist_row(v)
    iv = g.index[v]
    d = int(du[iv])
    out = []
    stack = [(g.index[u],)]
    while stack and len(out) < cap:
        p = stack.pop()
        last = p[-1]
        if last == iv:
            out.append(tuple(g.vertices[i] for i in p))
            continue
        nxt = [w for w in g._adj[last]
               if du[w] == du[last] + 1 and dv[w] == d - du[w]]
        for w in reversed(nxt):
            stack.append(p + (w,))
    return GeodesicSet(out, total > len(out), total)


def geodesic(g, u, v):
    """The lexicographically first geodesic from u to v."""
    return all_geodesics(g, u, v, cap=1)[0]


def gromov_product(g, x, y, z):
    """(y.z)_x as an exact rational."""
    return Fraction(g.distance(x, y) + g.distance(x, z) - g.distance(y, z), 2)


def ball(g, x, r):
    if r < 0:
        return set()
    row = g.set_distance([x], r)
    return {g.vertices[i] for i in np.nonzero(row >= 0)[0]}


class DeltaResult(int):
    """Integer hyperbolicity constant with audit fields."""

    def __new__(cls, value, witness, lower_bound_only=False):
        obj = super().__new__(cls, value)
        obj.witness = witness
        obj.lower_bound_only = lower_bound_only
        return obj


def _far_arrays(g, D, x, z):
    """For every vertex p, the max over geodesics [x,z] of d(p, geodesic).

    Bottleneck dynamic programme over the geodesic DAG, vectorised over p.
    """
    ix, iz = g.index[x], g.index[z]
    dx, dz = D[ix], D[iz]
    d = dx[iz]
    on = np.nonzero(dx + dz == d)[0]
    order = on[np.argsort(dx[on], kind="stable")]
    best = {}
    for i in order.tolist():
        col = D[:, i]
        if i == ix:
            best[i] = col.copy()
            continue
        acc = None
        for j in g._adj[i]:
            if dx[j] == dx[i] - 1 and j in best:
                acc = best[j] if acc is None else np.maximum(acc, best[j])
        best[i] = np.minimum(acc, col)
    return best[iz], on


def hyperbolicity_delta(g):
    """Smallest integer delta making every geodesic triangle delta-thin.

    Every choice of geodesic sides is accounted for exactly, via a
    bottleneck recursion over the geodesic DAG, so the result never depends
    on an enumeration cap.  ``witness`` records a triple and a vertex that
    attain the value.
    """
    D = g.dist_matrix().astype(np.int64)
    n = len(g)
    dtype = np.int8 if n < 127 or D.max() < 127 else np.int32
    # far[a, c, p]: max over geodesics [a, c] of the distance from p
    far = np.zeros((n, n, n), dtype=dtype)
    on = {}
    for x in range(n):
        for z in range(x, n):
            f, o = _far_arrays(g, D, g.vertices[x], g.vertices[z])
            far[x, z] = far[z, x] = f
            on[(x, z)] = o
    best, wit = 0, None
    for a in range(n):
        for b in range(a, n):
            pts = on[(a, b)]
            # every third vertex c at once
            vals = np.minimum(far[a][:, pts], far[b][:, pts])
            k = int(vals.max())
            if k > best:
                best = k
                c, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
                wit = (g.vertices[a], g.vertices[b], g.vertices[int(c)],
                       g.vertices[int(pts[j])])
    return DeltaResult(best, wit)


def thin_defect(g, sides):
    """Max over vertices of each side of the distance to the other two sides.

    ``sides`` is a triple of explicit geodesic paths; used as a direct check.
    """
    worst = 0
    for k in range(3):
        others = [v for j in range(3) if j != k for v in sides[j]]
        row = g.set_distance(others)
        worst = max(worst, max(int(row[g.index[p]]) for p in sides[k]))
    return worst
