"""Brute-force reference implementations.

Everything here is deliberately naive and built on networkx rather than on
the package's own kernels, so that tests compare two independent codes.
"""
import math
from fractions import Fraction
from itertools import product

import networkx as nx


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    return G


def distances(g):
    return dict(nx.all_pairs_shortest_path_length(to_nx(g)))


def geodesics(g, u, v):
    return sorted(tuple(p) for p in nx.all_shortest_paths(to_nx(g), u, v))


def angle(g, v, w1, w2):
    if w1 == w2:
        return 0
    H = to_nx(g)
    H.remove_node(v)
    try:
        return nx.shortest_path_length(H, w1, w2)
    except nx.NetworkXNoPath:
        return math.inf


def max_angle(g, path):
    return max((angle(g, path[i], path[i - 1], path[i + 1])
                for i in range(1, len(path) - 1)), default=0)


def cone(g, e, v, d, theta):
    u0 = e[0] if e[1] == v else e[1]
    G = to_nx(g)
    out = {v}
    lengths = nx.single_source_shortest_path_length(G, v, cutoff=d)
    for w, dist in lengths.items():
        if w == v:
            continue
        for p in nx.all_shortest_paths(G, v, w):
            if angle(g, v, u0, p[1]) <= theta and max_angle(g, p) <= theta:
                out.add(w)
                break
    return out


def circuits_through(g, e, L):
    G = to_nx(g)
    out = set()
    for cyc in nx.simple_cycles(G, length_bound=L):
        if len(cyc) < 3:
            continue
        n = len(cyc)
        pairs = {frozenset((cyc[i], cyc[(i + 1) % n])) for i in range(n)}
        if frozenset(e) in pairs:
            out.add(frozenset(pairs))
    return out


def thin_delta(g):
    """Hyperbolicity by explicit enumeration of all geodesic triangles."""
    G = to_nx(g)
    dist = dict(nx.all_pairs_shortest_path_length(G))
    V = list(g.vertices)
    geo = {}
    for a in V:
        for b in V:
            geo[(a, b)] = [tuple(p) for p in nx.all_shortest_paths(G, a, b)]

    def gap(side, others):
        return max(min(dist[p][q] for q in others) for p in side)
    best = 0
    for x in V:
        for y in V:
            for z in V:
                for s1, s2, s3 in product(geo[(x, y)], geo[(y, z)], geo[(x, z)]):
                    best = max(best, gap(s1, s2 + s3), gap(s2, s1 + s3), gap(s3, s1 + s2))
    return best


def _qg_prefix_ok(dist, p, Lam, window):
    k = len(p) - 1
    w = p[-1]
    for i in range(max(0, k - window), k):
        if Fraction(k - i) > Lam * dist[p[i]][w]:
            return False
    return True


def walks(g, x, y, C):
    """All walks x -> y of length <= lambda |x - y| satisfying the local
    quasi-geodesic clause (which prefixes must already satisfy)."""
    dist = distances(g)
    cap = C.lambda_ * dist[x][y]
    Lam = Fraction(C.lambda_, 2)
    W = C.local_window
    G = to_nx(g)
    out = []

    def rec(p):
        cur = p[-1]
        if cur == y:
            out.append(tuple(p))
        for w in sorted(G[cur], key=str):
            if len(p) + dist[w][y] > cap:
                continue
            p.append(w)
            if _qg_prefix_ok(dist, p, Lam, W):
                rec(p)
            p.pop()
    rec([x])
    return out, dist


def _mlg(dist, p, c, d, mu):
    for i in range(c, d + 1):
        for j in range(i + 1, min(d, i + mu) + 1):
            if dist[p[i]][p[j]] != j - i:
                return False
    return True


def subdivisions(dist, p, l, eps, mu):
    """All subdivisions making ``p`` satisfy the piece and bridge clauses."""
    m = len(p) - 1
    out = []

    def rec(pos, cuts):
        for d in range(pos, m + 1):
            if not _mlg(dist, p, pos, d, mu):
                break
            if d == m:
                out.append(tuple(cuts + [pos, m]))
                continue
            if cuts and d - pos < l:
                continue
            for c2 in range(d, min(m, d + eps) + 1):
                if d == pos and c2 == d:
                    continue
                rec(c2, cuts + [pos, d])
    rec(0, [])
    return out


def cylinder(g, x, y, l, C):
    """Cyl_l(x, y) by enumerating every admissible walk and subdivision."""
    if x == y:
        return {x}
    ws, dist = walks(g, x, y, C)
    G = to_nx(g)
    geos = [tuple(p) for p in nx.all_shortest_paths(G, x, y)]
    out = set()
    for p in ws:
        if not any(all(min(dist[v][q] for q in geo) <= 2 * C.epsilon for v in p)
                   for geo in geos):
            continue
        for cuts in subdivisions(dist, p, l, C.epsilon, C.mu):
            for k in range(0, len(cuts), 2):
                c, d = cuts[k], cuts[k + 1]
                for s in range(c, d + 1):
                    if (p[c] == x or s - c >= l) and (p[d] == y or d - s >= l):
                        out.add(p[s])
    return out


def diff(dist, cyl, a, x, y, delta):
    """The four-term signed cardinality, computed from the raw sets."""
    def NR(u):
        return {v for v in cyl if dist[a][u] < dist[a][v] and dist[u][v] > 100 * delta}

    def NL(u):
        return {v for v in cyl if dist[a][u] > dist[a][v] and dist[u][v] > 100 * delta}
    return (len(NL(x) - NL(y)) - len(NL(y) - NL(x))
            + len(NR(y) - NR(x)) - len(NR(x) - NR(y)))
