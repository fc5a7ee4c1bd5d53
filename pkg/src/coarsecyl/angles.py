"""Angles at vertices, cones, circuits, fineness and channels.

The angle between two edges ``(v, v1)`` and ``(v, v2)`` is the length of a
shortest path from ``v1`` to ``v2`` avoiding ``v``; it is ``math.inf`` when
no such path exists.  ``inf`` compares above every integer, so maxima and
triangle inequalities behave absorptively without special cases.
"""
import math
from collections import Counter

import numpy as np

from .graph import BudgetExceeded, GraphError, sort_ids, vkey

INF = math.inf


class ModelError(ValueError):
    """The model cannot host the requested constant."""


def _other(e, v):
    a, b = e
    if a == v:
        return b
    if b == v:
        return a
    raise GraphError(f"edge {e!r} is not incident to {v!r}")


def neighbor_angle(g, v, w1, w2, cap=None):
    """Angle at ``v`` between the edges towards ``w1`` and ``w2``.

    With ``cap`` set, angles above ``cap`` are reported as ``inf`` (the
    search is truncated, which is all a threshold test needs).
    """
    if w1 == w2:
        return 0
    d = int(g.avoid_row(w1, v, -1 if cap is None else cap)[g.index[w2]])
    return INF if d < 0 else d


def edge_angle(g, v, e1, e2):
    w1, w2 = _other(e1, v), _other(e2, v)
    if not (g.has_edge(v, w1) and g.has_edge(v, w2)):
        raise GraphError("edges must belong to the graph")
    return neighbor_angle(g, v, w1, w2)


def angle_table(g, v):
    """All pairwise angles between the edges at ``v``."""
    nb = g.neighbors(v)
    return {(a, b): neighbor_angle(g, v, a, b) for a in nb for b in nb}


def max_angle(g, path):
    """Largest angle at an interior vertex of a simple path (0 if none)."""
    if len(set(path)) != len(path):
        raise GraphError("max_angle expects a simple path")
    best = 0
    for i in range(1, len(path) - 1):
        a = neighbor_angle(g, path[i], path[i - 1], path[i + 1])
        if a > best:
            best = a
    return best


def cone_profile(g, e, v, dmax=None, angle_cap=None):
    """For each w reachable by a geodesic from ``v``, the least theta for
    which some geodesic [v, w] has interior angles and initial angle with
    ``e`` bounded by theta.

    Returns ``{w: (distance, theta_min)}``; unreachable-with-finite-angle
    vertices carry ``inf``.  Restricted to distance ``<= dmax`` if given;
    with ``angle_cap`` any value above the cap is reported as ``inf``.
    """
    u0 = _other(e, v)
    dv = g.dist_row(v)
    if dmax is None:
        dmax = int(dv.max())
    prof = {v: (0, 0)}
    # state (prev, cur) -> minimax value along the best geodesic ending so
    state = {}
    for w in g.neighbors(v):
        state[(v, w)] = neighbor_angle(g, v, u0, w, angle_cap)
    layer = [w for w in g.neighbors(v)] if dmax >= 1 else []
    depth = 1
    while layer:
        nxt = set()
        low = {}
        for (p, c), val in state.items():
            if c not in low or val < low[c]:
                low[c] = val
        for w in layer:
            prof[w] = (depth, low[w])
        if depth >= dmax:
            break
        new_state = {}
        for (p, w), val in state.items():
            for x in g.neighbors(w):
                if dv[g.index[x]] != depth + 1:
                    continue
                if val == INF:
                    cand = INF
                else:
                    cand = max(val, neighbor_angle(g, w, p, x, angle_cap))
                key = (w, x)
                if key not in new_state or cand < new_state[key]:
                    new_state[key] = cand
                nxt.add(x)
        state = new_state
        layer = sort_ids(nxt)
        depth += 1
    return prof


def cone(g, e, v, d, theta):
    """Vertices w with |w - v| <= d joined to v by a geodesic whose interior
    angles and whose angle with ``e`` at v are all <= theta."""
    cap = None if theta == INF else int(theta)
    prof = cone_profile(g, e, v, d, cap)
    return {w for w, (dist, t) in prof.items() if dist <= d and t <= theta}


def conical_neighborhood(g, seg, epsilon):
    """Union over edges of ``seg`` (both orientations) of the cones of radius
    and angle ``epsilon``."""
    if len(seg) < 2:
        raise GraphError("conical neighborhood needs a segment with an edge")
    out = set()
    for a, b in zip(seg, seg[1:]):
        out |= cone(g, (a, b), a, epsilon, epsilon)
        out |= cone(g, (a, b), b, epsilon, epsilon)
    return out


def canonical_circuit(cyc):
    n = len(cyc)
    best = None
    for seq in (list(cyc), list(reversed(cyc))):
        for k in range(n):
            rot = tuple(seq[k:] + seq[:k])
            if best is None or [vkey(x) for x in rot] < [vkey(x) for x in best]:
                best = rot
    return best


def circuits_through(g, e, L, budget=10 ** 6):
    """All simple circuits of length <= L containing the edge ``e``.

    Depth-first search from one endpoint, pruned by the distance back to the
    other; exceeding ``budget`` node expansions raises BudgetExceeded.
    """
    u, w = e
    if not g.has_edge(u, w):
        raise GraphError(f"{e!r} is not an edge")
    du = g.dist_row(u)
    iu = g.index
    found = set()
    expansions = 0
    # path from w back to u, never using the edge w-u itself
    stack = [(w, (w,), frozenset((u, w)))]
    while stack:
        cur, path, used = stack.pop()
        expansions += 1
        if expansions > budget:
            raise BudgetExceeded(f"circuit enumeration through {e!r} exceeded {budget}")
        k = len(path)  # edges so far in the circuit: 1 (u-w) + (k-1)
        for x in g.neighbors(cur):
            if x == u:
                if cur != w and k + 1 <= L:
                    found.add(canonical_circuit((u,) + path))
                continue
            if x in used:
                continue
            # circuit length after stepping to x is at least k + 1 + d(x, u)
            if k + 1 + int(du[iu[x]]) > L:
                continue
            stack.append((x, path + (x,), used | {x}))
    return found


def fineness_report(g, L, budget=10 ** 6):
    per_edge = {}
    for e in g.edges:
        per_edge[e] = len(circuits_through(g, e, L, budget))
    hist = Counter(per_edge.values())
    return {
        "L": L,
        "uniform_bound": max(per_edge.values(), default=0),
        "per_edge": {f"{a}--{b}": c for (a, b), c in per_edge.items()},
        "histogram": {str(k): hist[k] for k in sorted(hist)},
    }


class RhoReport(int):
    def __new__(cls, value, violations):
        obj = super().__new__(cls, value)
        obj.violations = violations
        return obj


def rho_constant(g):
    """Max finite angle between edges at non-parabolic vertices.

    Infinite angles at non-parabolic vertices are listed in
    ``result.violations``; a model with no finite pair raises ModelError.
    """
    best = None
    bad = []
    for v in g.vertices:
        if v in g.parabolic:
            continue
        nb = g.neighbors(v)
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                ang = neighbor_angle(g, v, a, b)
                if ang == INF:
                    bad.append((v, a, b))
                elif best is None or ang > best:
                    best = ang
    if best is None:
        raise ModelError("no finite angle at a non-parabolic vertex; rho undefined")
    return RhoReport(best, bad)


class ChannelSet(tuple):
    def __new__(cls, paths, region):
        obj = super().__new__(cls, paths)
        obj.count = len(paths)
        obj.region = region
        return obj


def channels(g, seg, epsilon, budget=10 ** 6):
    """Geodesics of length >= length(seg) inside the epsilon cone union of
    ``seg``.  A path and its reverse count once (oriented from the smaller
    endpoint)."""
    if len(seg) < 2:
        raise GraphError("channels need a segment with at least one edge")
    U = conical_neighborhood(g, seg, epsilon)
    m = len(seg) - 1
    inU = np.zeros(len(g), dtype=bool)
    for x in U:
        inU[g.index[x]] = True
    out = []
    steps = 0
    us = sort_ids(U)
    for i, s in enumerate(us):
        ds = g.dist_row(s)
        for t in us[i + 1:]:
            it = g.index[t]
            d = int(ds[it])
            if d < m:
                continue
            dt = g.dist_row(t)
            stack = [(g.index[s],)]
            while stack:
                p = stack.pop()
                steps += 1
                if steps > budget:
                    raise BudgetExceeded("channel enumeration exceeded budget")
                last = p[-1]
                if last == it:
                    out.append(tuple(g.vertices[j] for j in p))
                    continue
                for j in g._adj[last]:
                    if inU[j] and ds[j] == ds[last] + 1 and dt[j] == d - ds[j]:
                        stack.append(p + (j,))
    out.sort(key=lambda p: [vkey(x) for x in p])
    return ChannelSet(out, U)
