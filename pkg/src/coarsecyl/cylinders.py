"""l-cylinders: bounded search for coarse piecewise geodesics.

For a fixed walk, which vertices it contributes to a cylinder is decided by
a dynamic programme over the possible subdivisions (``path_members``).  The
search enumerates walks from x to y of length at most lambda |x - y| inside
the conical neighborhood of one geodesic [x, y], pruning with the local
quasi-geodesic and neighborhood clauses as it goes.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .angles import conical_neighborhood
from .graph import all_geodesics, ball, gromov_product, sort_ids, vkey
from .paths import CoarsePiecewiseGeodesic, geodesic_reach

__all__ = ["Cylinder", "conical_neighborhood", "cylinder", "path_members",
           "check_equivariance", "select_l"]


# -- membership on one walk -------------------------------------------------

def _mlg_start(reach, mu):
    """cmin[d]: smallest c with path[c..d] a mu-local geodesic.

    Index i spoils every window [c, d] with c <= i once d > reach[i], unless
    its geodesic reach already covers i + mu; cmin is non-decreasing.
    """
    m = len(reach) - 1
    spoil = [-1] * (m + 2)
    for i, r in enumerate(reach):
        if r < i + mu and r + 1 <= m:
            spoil[r + 1] = max(spoil[r + 1], i)
    out = [0] * (m + 1)
    c = 0
    for d in range(m + 1):
        if spoil[d] >= 0:
            c = max(c, spoil[d] + 1)
        out[d] = c
    return out


class _Unvisited:
    """Next unvisited index >= i (path-compressed pointer jumping)."""

    def __init__(self, n):
        self.nxt = list(range(n + 1))

    def find(self, i):
        root = i
        while self.nxt[root] != root:
            root = self.nxt[root]
        while self.nxt[i] != root:
            self.nxt[i], i = root, self.nxt[i]
        return root

    def take(self, i):
        self.nxt[i] = i + 1


class _Subdivisions:
    """Reachability over prefix and suffix states with parent pointers.

    Forward states: P[d] a valid prefix ends with a piece at d; B[c] it ends
    with a bridge at c.  Backward states mirror these.  Every transition
    targets an interval of indices, so each state is entered once.
    """

    def __init__(self, m, cmin, l, eps):
        self.m, self.cmin, self.l, self.eps = m, cmin, l, eps
        # dmax[t]: largest d with cmin[d] <= t
        dmax = [0] * (m + 1)
        d = 0
        for t in range(m + 1):
            while d + 1 <= m and cmin[d + 1] <= t:
                d += 1
            dmax[t] = d
        self.dmax = dmax
        self.fP, self.fB = self._forward()
        self.bP, self.bB = self._backward()
        nb = [None] * (m + 2)
        for c in range(m, -1, -1):
            nb[c] = c if self.fB[c] is not None else nb[c + 1]
        self.next_fB = nb

    def _bfs(self, seeds, p_iv, b_iv):
        m = self.m
        P = [None] * (m + 1)
        B = [None] * (m + 1)
        uP, uB = _Unvisited(m + 1), _Unvisited(m + 1)
        queue = []
        for t in seeds:
            P[t] = -1
            uP.take(t)
            queue.append(("P", t))
        for kind, t in queue:
            if kind == "P":
                lo, hi = b_iv(t)
                arr, un, nk = B, uB, "B"
            else:
                lo, hi = p_iv(t)
                arr, un, nk = P, uP, "P"
            if lo > hi:
                continue
            j = un.find(lo)
            while j <= hi:
                arr[j] = t
                un.take(j)
                queue.append((nk, j))
                j = un.find(j)
        return P, B

    def _forward(self):
        m, l, eps = self.m, self.l, self.eps
        seeds = [d for d in range(m + 1) if self.cmin[d] == 0]
        return self._bfs(seeds, lambda t: (t + l, self.dmax[t]),
                         lambda t: (t, min(m, t + eps)))

    def _backward(self):
        m, l, eps, cmin = self.m, self.l, self.eps, self.cmin
        seeds = [c for c in range(cmin[m], m + 1)]
        return self._bfs(seeds, lambda t: (cmin[t], t - l),
                         lambda t: (max(0, t - eps), t))

    def usable(self, c, d):
        if self.cmin[d] > c:
            return False
        if c != 0 and self.fB[c] is None:
            return False
        if d != self.m and self.bB[d] is None:
            return False
        return c == 0 or d == self.m or d - c >= self.l

    def feasible(self):
        return any(self.usable(c, self.m) for c in range(self.cmin[self.m], self.m + 1))

    def prefix(self, c):
        """Cuts of a valid prefix ending with a bridge into ``c``."""
        out = []
        while True:
            d = self.fB[c]
            c0 = self.fP[d]
            out = [0 if c0 == -1 else c0, d] + out
            if c0 == -1:
                return out
            c = c0

    def suffix(self, d):
        """Cuts of a valid suffix leaving ``d`` by a bridge."""
        out = []
        while True:
            c = self.bB[d]
            d0 = self.bP[c]
            out += [c, self.m if d0 == -1 else d0]
            if d0 == -1:
                return out
            d = d0


def path_members(path, x, y, l, C, reach):
    """Vertices of ``path`` admitted to Cyl_l(x, y) by some subdivision.

    Returns ``{vertex: cuts}`` where ``cuts`` is one witnessing subdivision.
    For each piece end d the admitted parameters form an interval ending at
    a bound fixed by d, so only the smallest usable piece start matters
    (plus starts sitting on a revisit of x).
    """
    m = len(path) - 1
    cmin = _mlg_start(reach, C.mu)
    sub = _Subdivisions(m, cmin, l, C.epsilon)
    at_x = [c for c in range(1, m + 1) if path[c] == x]
    ivs = []
    for d in range(m + 1):
        if d != m and sub.bB[d] is None:
            continue
        hi = d if path[d] == y else d - l
        best = None
        starts = []
        if cmin[d] == 0:
            starts.append(0)
        else:
            c = sub.next_fB[cmin[d]]
            if c is not None and (c <= d - l or (d == m and c <= d)):
                starts.append(c)
        starts += [c for c in at_x if sub.usable(c, d)]
        for c in starts:
            lo = c if path[c] == x else c + l
            if best is None or lo < best[0]:
                best = (lo, c)
        if best is not None and best[0] <= hi:
            ivs.append((best[0], hi, best[1], d))
    ivs.sort()
    out = {}
    k = 0
    s = 0
    cur = None
    while s <= m:
        while k < len(ivs) and ivs[k][0] <= s:
            if cur is None or ivs[k][1] > cur[1]:
                cur = ivs[k]
            k += 1
        if cur is None or cur[1] < s:
            if k >= len(ivs):
                break
            s = ivs[k][0]
            continue
        lo, hi, c, d = cur
        cuts = tuple((sub.prefix(c) if c != 0 else []) + [c, d]
                     + (sub.suffix(d) if d != m else []))
        for t in range(s, hi + 1):
            out.setdefault(path[t], cuts)
        s = hi + 1
    return out


# -- the search ---------------------------------------------------------------

@dataclass
class Cylinder:
    x: object
    y: object
    l: int
    members: frozenset
    complete: bool
    constants: object
    witnesses: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    def to_dict(self, with_witnesses=False):
        out = {"x": self.x, "y": self.y, "l": self.l,
               "members": sort_ids(self.members), "complete": self.complete,
               "constants": self.constants.to_dict(), "info": self.info}
        if with_witnesses:
            out["witnesses"] = {str(v): {"path": list(p), "cuts": list(c)}
                                for v, (p, c) in sorted(self.witnesses.items(),
                                                        key=lambda kv: vkey(kv[0]))}
        return out

    def witness(self, v):
        p, c = self.witnesses[v]
        return CoarsePiecewiseGeodesic(p, c, self.l, self.constants)


def search_region(g, x, y, C, geod_cap=1000, cone=True):
    """Enumerated geodesics and the vertex set the walk search may use.

    The restriction to the conical neighbourhood of the first geodesic is
    only justified when epsilon is large enough; when some other enumerated
    geodesic leaves that neighbourhood the restriction is dropped.
    """
    geos = all_geodesics(g, x, y, geod_cap)
    region = set(g.vertices)
    if cone and len(geos[0]) > 1:
        U = conical_neighborhood(g, geos[0], C.epsilon)
        if all(set(G) <= U for G in geos):
            region = U
    return geos, region


def cylinder(g, x, y, l, C, budget=10 ** 6, geod_cap=1000, cone=True,
             keep_witnesses=True):
    """Compute Cyl_l(x, y) by bounded search.

    ``complete`` is False when the node budget ran out or the geodesic
    enumeration was truncated; members found are always genuine.
    ``cone=False`` drops the conical-neighborhood restriction.
    """
    if x == y:
        return Cylinder(x, y, l, frozenset([x]), True, C,
                        {x: ((x,), (0, 0))} if keep_witnesses else {},
                        {"walks": 1, "nodes": 1})
    geos, region = search_region(g, x, y, C, geod_cap, cone)
    d_xy = g.distance(x, y)
    cap = int(C.lambda_ * d_xy)
    Lam = Fraction(C.lambda_, 2)
    num, den = Lam.numerator, Lam.denominator
    W = C.local_window
    n = len(g)
    # neighborhood clause: bit k set while the walk stays in N_{2eps}(geos[k])
    near = np.zeros(n, dtype=object)
    near[:] = 0
    for k, G in enumerate(geos):
        row = g.set_distance(G, 2 * C.epsilon)
        for i in np.nonzero(row >= 0)[0]:
            near[i] |= 1 << k
    allow = np.zeros(n, dtype=bool)
    for v in region:
        allow[g.index[v]] = near[g.index[v]] != 0
    dy = g.dist_row(y)
    iy = g.index[y]
    D = g.dist_matrix() if n <= 3000 else None
    members = {}
    walks = 0
    exhausted = False
    adj = g._adj
    path = [g.index[x]]
    buf = np.empty(1024, dtype=np.int64)
    buf[0] = path[0]
    masks = [near[path[0]]]
    # one iterator of candidate successors per depth; a single shared path
    frames = [iter(reversed(adj[path[0]]))]
    nodes = 1
    while frames:
        k = len(path)
        w = next(frames[-1], None)
        if w is None:
            frames.pop()
            path.pop()
            masks.pop()
            continue
        if not allow[w] or k + int(dy[w]) > cap:
            continue
        m2 = masks[-1] & near[w]
        if not m2:
            continue
        row = D[w] if D is not None else g.dist_row(g.vertices[w])
        lo = max(0, k - W)
        if k - lo <= 32:
            ok = all((k - i) * den <= num * int(row[path[i]]) for i in range(lo, k))
        else:
            gaps = np.arange(k - lo, 0, -1, dtype=np.int64)
            ok = not np.any(gaps * den > num * row[buf[lo:k]].astype(np.int64))
        if not ok:
            continue
        nodes += 1
        if nodes > budget:
            exhausted = True
            break
        path.append(w)
        if k >= len(buf):
            buf = np.concatenate([buf, np.empty(len(buf), dtype=np.int64)])
        buf[k] = w
        masks.append(m2)
        frames.append(iter(reversed(adj[w])))
        if w == iy:
            walks += 1
            walk = tuple(g.vertices[i] for i in path)
            reach = geodesic_reach(g, walk)
            for v, cuts in path_members(walk, x, y, l, C, reach).items():
                if v not in members:
                    members[v] = (walk, cuts)
    complete = not exhausted and not geos.truncated
    wit = members if keep_witnesses else {}
    return Cylinder(x, y, l, frozenset(members), complete, C, wit,
                    {"walks": walks, "nodes": nodes, "length_cap": cap,
                     "region": len(region), "cone_restricted": len(region) < n,
                     "geodesics": len(geos),
                     "geodesics_truncated": geos.truncated})


# -- equivariance and the choice of l ---------------------------------------

def _image(action, S):
    out = set()
    for v in S:
        if v not in action:
            return None
        out.add(action[v])
    return out


def check_equivariance(g, gen, x, y, l, C, budget=10 ** 6, action=None,
                       boundary=(), geod_cap=1000):
    """Compare gen . Cyl(x, y) with Cyl(gen x, gen y).

    Returns ``"true"``, ``"false"`` or ``"inconclusive"``.  Instances whose
    search regions meet ``boundary`` (the truncation frontier of a ball
    model), or whose members leave the domain of a partial action, are
    inconclusive rather than false.
    """
    act = action if action is not None else g.action[gen]
    if x not in act or y not in act:
        return "inconclusive"
    gx, gy = act[x], act[y]
    c1 = cylinder(g, x, y, l, C, budget, geod_cap)
    c2 = cylinder(g, gx, gy, l, C, budget, geod_cap)
    if not (c1.complete and c2.complete):
        return "inconclusive"
    bset = set(boundary)
    if bset:
        for a, b in ((x, y), (gx, gy)):
            _, region = search_region(g, a, b, C, geod_cap)
            reach = set()
            for v in region:
                reach |= ball(g, v, 1)
            if reach & bset:
                return "inconclusive"
    img = _image(act, c1.members)
    if img is None:
        return "inconclusive"
    return "true" if img == set(c2.members) else "false"


def _compose(maps, p):
    for m in reversed(maps):
        if p not in m:
            return None
        p = m[p]
    return p


def _inverse(m):
    return {b: a for a, b in m.items()}


def triangles(p, F, actions):
    """Triples (alpha, beta, gamma) of letters in F and their inverses with
    alpha beta gamma = 1 (tested on the base point, whose stabiliser is
    trivial).  A letter ``a`` is paired with inverse ``a^-1``.  Digons
    alpha beta = 1 are listed with ``gamma = ""`` (the identity)."""
    letters = {}
    for a in sorted(F):
        letters[a] = actions[a]
        letters[a + "^-1"] = _inverse(actions[a])
    names = sorted(letters)
    out = []
    for a in names:
        for b in names:
            for c in names:
                if _compose([letters[a], letters[b], letters[c]], p) == p:
                    out.append((a, b, c))
    for a in names:
        for b in names:
            if a < b and _compose([letters[a], letters[b]], p) == p:
                out.append((a, b, ""))
    letters[""] = {}
    return out, letters


def select_l(g, p, F, C, budget=10 ** 5, actions=None, n_triangle=None):
    """Try the candidates l_i in order; return the first l for which every
    triangle satisfies the ball-intersection equations.

    Returns ``(l, report)``.  ``report["vacuous"]`` is True when every radius
    R_{x,y,z} is <= 0, so the equations held only because the balls are
    trivial.
    """
    acts = actions if actions is not None else g.action
    tri, letters = triangles(p, F, acts)
    cands = C.candidate_ls()
    phi = C.phi_n
    report = {"candidates": [], "triangles": [list(t) for t in tri],
              "n": n_triangle if n_triangle is not None else (2 * len(F)) ** 3}
    corners = []
    for a, b, c in tri:
        x = p
        y = letters[a].get(p)
        z = _compose([_inverse(letters[c])], p) if c else p
        if y is None or z is None:
            continue
        corners.append(((a, b, c), x, y, z))
    radii = []
    for _, x, y, z in corners:
        for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
            R = gromov_product(g, u, v, w) - 4 * (11 * C.mu + phi)
            radii.append(R)
    vacuous = all(R <= 0 for R in radii)
    report["vacuous"] = vacuous
    for l in cands:
        fails, inconclusive = [], []
        cache = {}

        def cyl(a, b):
            if (a, b) not in cache:
                cache[(a, b)] = cylinder(g, a, b, l, C, budget, keep_witnesses=False)
            return cache[(a, b)]
        for name, x, y, z in corners:
            for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
                R = gromov_product(g, u, v, w) - 4 * (11 * C.mu + phi)
                if R < 0:
                    continue
                B = ball(g, u, int(R))
                c1, c2 = cyl(u, v), cyl(u, w)
                if not (c1.complete and c2.complete):
                    inconclusive.append([list(name), u])
                    continue
                A1, A2 = set(c1.members) & B, set(c2.members) & B
                if not A1 <= A2:
                    fails.append([list(name), u, "subset"])
                if not A2 <= A1:
                    fails.append([list(name), u, "superset"])
        report["candidates"].append({"l": l, "failures": fails,
                                     "inconclusive": inconclusive})
        if not fails and not inconclusive:
            report["chosen"] = l
            return l, report
    raise LookupError(report)
