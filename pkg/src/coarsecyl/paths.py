"""Local geodesics, quasi-geodesics and coarse piecewise geodesics.

Paths are vertex sequences; the parameter of a vertex is its index, so a
path with ``m + 1`` vertices is parameterised by ``0..m``.
"""
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .angles import INF, cone_profile
from .constants import PAPER
from .graph import GraphError, all_geodesics, check_path, geodesic, vkey


def _rows(g, path):
    """Distance matrix restricted to the vertices of ``path`` (by index)."""
    idx = np.array([g.index[v] for v in path], dtype=np.int64)
    return np.stack([g.dist_row(v)[idx] for v in path]) if len(path) else np.zeros((0, 0))


def geodesic_reach(g, path):
    """maxgeo[i] = largest j such that path[i..j] is a geodesic."""
    m = len(path) - 1
    out = [0] * (m + 1)
    j = 0
    for i in range(m + 1):
        j = max(j, i)
        row = g.dist_row(path[i])
        while j < m and row[g.index[path[j + 1]]] == j + 1 - i:
            j += 1
        out[i] = j
    return out


def is_local_geodesic(g, path, mu):
    """Every subpath of length <= mu is a geodesic."""
    reach = geodesic_reach(g, path)
    m = len(path) - 1
    return all(reach[i] >= min(i + mu, m) for i in range(m + 1))


def _qg_ok(D, Lam, window=None):
    Lam = Fraction(Lam)
    if Lam < 1:
        raise ValueError("quasi-geodesic constant must be >= 1")
    m = D.shape[0] - 1
    num, den = Lam.numerator, Lam.denominator
    for i in range(m):
        hi = m if window is None else min(m, i + window)
        if hi <= i:
            continue
        d = D[i, i + 1:hi + 1]
        gap = np.arange(1, hi - i + 1)
        # gap / Lam <= d <= Lam * gap
        if np.any(gap * den > num * d) or np.any(d * den > num * gap):
            return False
    return True


def is_quasi_geodesic(g, path, Lam):
    return _qg_ok(_rows(g, path), Lam)


def is_local_quasi_geodesic(g, path, L, c):
    """Every window of length <= L is a c-quasi-geodesic."""
    return _qg_ok(_rows(g, path), c, window=L)


@dataclass(frozen=True)
class CoarsePiecewiseGeodesic:
    path: tuple
    cuts: tuple
    l: int
    constants: object = None

    def __post_init__(self):
        c = self.cuts
        m = len(self.path) - 1
        if len(c) < 2 or len(c) % 2:
            raise ValueError("cuts must be c1, d1, ..., cn, dn")
        if c[0] != 0 or c[-1] != m:
            raise ValueError("cuts must start at 0 and end at the last index")
        if any(a > b for a, b in zip(c, c[1:])):
            raise ValueError("cuts must be non-decreasing")

    @property
    def pieces(self):
        return [(self.cuts[k], self.cuts[k + 1]) for k in range(0, len(self.cuts), 2)]

    @property
    def bridges(self):
        return [(self.cuts[k], self.cuts[k + 1]) for k in range(1, len(self.cuts) - 1, 2)]

    @property
    def start(self):
        return self.path[0]

    @property
    def end(self):
        return self.path[-1]

    def to_dict(self):
        return {"path": list(self.path), "cuts": list(self.cuts), "l": self.l}

    def reversed(self):
        m = len(self.path) - 1
        return CoarsePiecewiseGeodesic(self.path[::-1],
                                       tuple(m - c for c in reversed(self.cuts)),
                                       self.l, self.constants)


def single_piece(path, l, constants=None):
    return CoarsePiecewiseGeodesic(tuple(path), (0, len(path) - 1), l, constants)


class Report(dict):
    @property
    def valid(self):
        return all(v == "pass" for v in self["clauses"].values())

    @property
    def inconclusive(self):
        return "inconclusive" in self["clauses"].values() and "fail" not in self["clauses"].values()


def neighborhood_clause(g, path, radius, cap=1000):
    """Search enumerated geodesics [path[0], path[-1]] for one whose
    ``radius``-neighborhood contains ``path``.  Returns (verdict, geodesic)."""
    geos = all_geodesics(g, path[0], path[-1], cap)
    need = [g.index[v] for v in set(path)]
    for G in geos:
        row = g.set_distance(G, radius)
        if np.all(row[need] >= 0):
            return "pass", G
    return ("inconclusive" if geos.truncated else "fail"), None


def validate_cpg(g, f, geod_cap=1000):
    """Clause-by-clause check of the coarse-piecewise-geodesic definition."""
    C = f.constants
    check_path(g, f.path)
    D = _rows(g, f.path)
    reach = geodesic_reach(g, f.path)
    cl = {}
    cl["local_quasi_geodesic"] = _verdict(_qg_ok(D, C.Lambda, window=C.local_window))
    mlg = all(reach[i] >= min(i + C.mu, d) for c, d in f.pieces for i in range(c, d + 1))
    cl["pieces_local_geodesic"] = _verdict(mlg)
    inner = f.pieces[1:-1]
    cl["interior_piece_length"] = _verdict(all(d - c >= f.l for c, d in inner))
    cl["bridge_length"] = _verdict(all(c - d <= C.epsilon for d, c in f.bridges))
    verdict, G = neighborhood_clause(g, f.path, 2 * C.epsilon, geod_cap)
    cl["neighborhood"] = verdict
    return Report(clauses=cl, geodesic=G)


def _verdict(ok):
    return "pass" if ok else "fail"


def restrict(f, a2, b2):
    """Restriction to parameters [a2, b2] with the induced subdivision."""
    m = len(f.path) - 1
    if not 0 <= a2 < b2 <= m:
        raise ValueError("need 0 <= a2 < b2 <= last index")
    pieces = []
    for c, d in f.pieces:
        lo, hi = max(c, a2), min(d, b2)
        if lo <= hi:
            pieces.append((lo, hi))
    if not pieces or pieces[0][0] > a2:
        pieces.insert(0, (a2, a2))
    if pieces[-1][1] < b2:
        pieces.append((b2, b2))
    cuts = tuple(x - a2 for p in pieces for x in p)
    return CoarsePiecewiseGeodesic(f.path[a2:b2 + 1], cuts, f.l, f.constants)


def _nearest(g, target, candidates):
    """Nearest candidate to ``target``; ties go to the smallest vertex id."""
    row = g.dist_row(target)
    return min(candidates, key=lambda v: (int(row[g.index[v]]), vkey(v)))


def reroute(g, f, s_index, geod):
    """Re-route ``f`` at the vertex with parameter ``s_index`` onto ``geod``.

    ``s''`` is a nearest point of ``geod`` to ``s``, ``s'`` a nearest point
    of the containing piece to ``s''``; the result follows ``f`` up to
    ``s'``, a geodesic bridge to ``s''`` and then ``geod`` to the end.
    """
    C = f.constants
    geod = tuple(geod)
    if geod[0] != f.start or geod[-1] != f.end:
        raise GraphError("geod must join the endpoints of f")
    k = None
    for n, (c, d) in enumerate(f.pieces):
        if c <= s_index <= d and s_index - c > f.l + 2 * C.epsilon:
            k = n
            break
    if k is None:
        raise ValueError("s must lie on a piece more than l + 2 eps after its start")
    c, d = f.pieces[k]
    s = f.path[s_index]
    s2 = _nearest(g, s, geod)
    s1 = _nearest(g, s2, f.path[c:d + 1])
    t1 = c + f.path[c:d + 1].index(s1)
    bridge = geodesic(g, s1, s2)
    tail = geod[geod.index(s2):]
    path = f.path[:t1 + 1] + bridge[1:] + tail[1:]
    t2 = t1 + len(bridge) - 1
    cuts = f.cuts[:2 * k] + (c, t1, t2, len(path) - 1)
    return CoarsePiecewiseGeodesic(path, cuts, f.l, C)


def reroute_to(g, f, z, cap=1000):
    """A cpg from f(a) to ``z`` agreeing with ``f`` up to the start of its
    last piece.

    The last piece must be a geodesic of length >= l + 2 mu, and some
    geodesic [f(a), z] must pass within delta of f(b).
    """
    C = f.constants
    if z == f.end:
        return f
    c, b = f.pieces[-1]
    piece = f.path[c:b + 1]
    if g.distance(piece[0], piece[-1]) != b - c:
        raise ValueError("last piece is not a geodesic")
    if b - c < f.l + 2 * C.mu:
        raise ValueError("last piece shorter than l + 2 mu")
    G2 = None
    for G in all_geodesics(g, f.start, z, cap):
        row = g.set_distance(G)
        if row[g.index[f.end]] <= C.delta:
            G2 = G
            break
    if G2 is None:
        raise ValueError("no geodesic [f(a), z] passes within delta of f(b)")
    yp = _nearest(g, f.end, G2)
    head = G2[:G2.index(yp) + 1]
    s = f.path[c + f.l + C.mu]
    q = _nearest(g, s, head)
    tail_piece = f.path[c + f.l:b + 1]
    s2 = _nearest(g, q, tail_piece)
    t2 = c + f.l + tail_piece.index(s2)
    bridge = geodesic(g, s2, q)
    path = f.path[:t2 + 1] + bridge[1:] + G2[G2.index(q) + 1:]
    t3 = t2 + len(bridge) - 1
    cuts = f.cuts[:-2] + (c, t2, t3, len(path) - 1)
    return CoarsePiecewiseGeodesic(path, cuts, f.l, C)


def verify_appendix(g, f, cap=1000):
    """Check the two appendix statements on one validated cpg.

    Returns a dict with ``closeness`` (piece points at parameter distance
    >= 4 eps from both piece ends lie within 2 delta of a geodesic
    [f(a), f(b)]) and ``lower_bound`` (|f(t1) - f(t2)| >= |t1 - t2| / lambda
    for all pairs).  ``asserted`` is False outside the paper-faithful regime.
    """
    C = f.constants
    rep = validate_cpg(g, f, cap)
    if not rep.valid:
        raise ValueError(f"cpg does not validate: {rep['clauses']}")
    geos = all_geodesics(g, f.start, f.end, cap)
    rows = [g.set_distance(G, 2 * C.delta) for G in geos]
    close = True
    for c, d in f.pieces:
        for t in range(c + 4 * C.epsilon, d - 4 * C.epsilon + 1):
            i = g.index[f.path[t]]
            if not any(r[i] >= 0 for r in rows):
                close = False
    D = _rows(g, f.path)
    m = len(f.path) - 1
    gaps = np.abs(np.subtract.outer(np.arange(m + 1), np.arange(m + 1)))
    lower = bool(np.all(D * C.lambda_ >= gaps))
    return {"closeness": close, "lower_bound": lower,
            "asserted": C.regime == PAPER, "geodesics_truncated": geos.truncated}


# -- conical stability ----------------------------------------------------

def quasi_geodesics(g, x, y, Lam, budget=10 ** 6):
    """All Lam-quasi-geodesic paths from x to y (necessarily simple and of
    length <= Lam |x - y|)."""
    Lam = Fraction(Lam)
    num, den = Lam.numerator, Lam.denominator
    dy = g.dist_row(y)
    cap = int(Lam * int(dy[g.index[x]]))
    out = []
    steps = 0
    stack = [(x,)]
    while stack:
        p = stack.pop()
        steps += 1
        if steps > budget:
            raise RuntimeError("quasi-geodesic enumeration exceeded budget")
        last = p[-1]
        if last == y:
            out.append(p)
            continue
        k = len(p)
        for w in g.neighbors(last):
            iw = g.index[w]
            if k + int(dy[iw]) > cap:
                continue
            row = g.dist_row(w)
            ok = True
            for i, u in enumerate(p):
                gap = k - i
                if gap * den > num * int(row[g.index[u]]):
                    ok = False
                    break
            if ok:
                stack.append(p + (w,))
    out.sort(key=lambda p: [vkey(v) for v in p])
    return out


def _min_cone_param(g, w, G, cache):
    best = INF
    for a, b in zip(G, G[1:]):
        for e, v in (((a, b), a), ((a, b), b)):
            key = (e, v)
            prof = cache.get(key)
            if prof is None:
                prof = cone_profile(g, e, v)
                cache[key] = prof
            dist, t = prof.get(w, (INF, INF))
            n = max(dist, t)
            if n < best:
                best = n
    return best


def stability_constant(g, Lam, samples=50, seed=0, geod_cap=200, budget=10 ** 6):
    """Measure the deviation and cone constants of Lam-quasi-geodesics.

    Quasi-geodesics are enumerated between endpoint pairs (all pairs if there
    are at most ``samples``, otherwise a seeded sample) and compared with
    every enumerated geodesic between the same endpoints.

    Returns ``(D_emp, N_emp, info)``.
    """
    pairs = [(x, y) for i, x in enumerate(g.vertices) for y in g.vertices[i + 1:]]
    if samples < len(pairs):
        pairs = random.Random(seed).sample(pairs, samples)
        pairs.sort(key=lambda p: (vkey(p[0]), vkey(p[1])))
    D_emp, N_emp, nq = 0, 0, 0
    cache = {}
    for x, y in pairs:
        qs = quasi_geodesics(g, x, y, Lam, budget)
        geos = all_geodesics(g, x, y, geod_cap)
        grows = [g.set_distance(G) for G in geos]
        for q in qs:
            nq += 1
            qi = [g.index[v] for v in q]
            qrow = g.set_distance(q)
            haus = min(max(int(r[qi].max()), int(qrow[[g.index[v] for v in G]].max()))
                       for r, G in zip(grows, geos))
            D_emp = max(D_emp, haus)
            for w in q[1:-1]:
                for G in geos:
                    N_emp = max(N_emp, _min_cone_param(g, w, G, cache))
    if nq == 0:
        raise ValueError("no quasi-geodesics found")
    return D_emp, N_emp, {"pairs": len(pairs), "quasi_geodesics": nq, "seed": seed}
