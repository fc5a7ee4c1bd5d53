"""Slice decompositions of cylinders and of triangles of cylinders."""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .angles import INF, max_angle, neighbor_angle
from .constants import PAPER
from .cylinders import cylinder
from .graph import all_geodesics, ball, gromov_product, sort_ids


class SliceError(ValueError):
    pass


class IncompleteError(SliceError):
    """A required cylinder search did not finish within budget."""


class BoundViolation(AssertionError):
    """A bound that must hold under paper-faithful constants failed."""


@dataclass(frozen=True)
class Slice:
    kind: str
    members: frozenset
    angle: object = None
    flagged: bool = False  # regular singleton on a parabolic-flagged vertex

    def to_dict(self):
        out = {"kind": self.kind, "members": sort_ids(self.members)}
        if self.angle is not None:
            out["angle"] = "inf" if self.angle == INF else self.angle
        if self.flagged:
            out["flagged"] = True
        return out


@dataclass
class SliceDecomposition:
    x: object
    y: object
    slices: list
    cylinder: object
    report: dict = field(default_factory=dict)

    @property
    def index(self):
        return {v: i for i, s in enumerate(self.slices) for v in s.members}

    def to_dict(self):
        return {"x": self.x, "y": self.y,
                "slices": [s.to_dict() for s in self.slices],
                "report": self.report}

    def reversed(self):
        return SliceDecomposition(self.y, self.x, self.slices[::-1],
                                  self.cylinder, dict(self.report))


def _large_angle(g, mem, v, theta):
    """Largest angle >= theta between cylinder neighbours of v, or None."""
    nb = [w for w in g.neighbors(v) if w in mem]
    cap = None if theta == INF else int(theta)
    best = None
    for i, a in enumerate(nb):
        for b in nb[i + 1:]:
            ang = neighbor_angle(g, v, a, b, cap)
            if ang >= theta and (best is None or ang > best):
                best = ang
    return best


def parabolic_slices(g, cyl, theta, violations=None):
    """Interior members v with neighbours w, w' in the cylinder making an
    angle >= theta at v; the slice angle is the largest such angle.

    Only parabolic-flagged vertices qualify.  A large angle at an unflagged
    vertex cannot occur in a well-formed model (it is bounded by rho); such
    vertices are appended to ``violations`` when a list is given.
    """
    mem = set(cyl.members)
    out = []
    for v in sort_ids(mem - {cyl.x, cyl.y}):
        if v not in g.parabolic and violations is None:
            continue
        best = _large_angle(g, mem, v, theta)
        if best is None:
            continue
        if v in g.parabolic:
            out.append(Slice("parabolic", frozenset([v]), best))
        else:
            violations.append(v)
    return out


def _identity(ok, complete):
    if not complete:
        return "inconclusive"
    return "pass" if ok else "fail"


def split_cylinder(g, cyl, v, budget=10 ** 6, geod_cap=1000):
    """Cyl(a, v) and Cyl(v, b) for a large-angle vertex v of a geodesic.

    Refuses unless some enumerated geodesic [a, b] passes through v with
    an angle there exceeding Theta - 20 D.  Returns ``(left, right, report)``.
    """
    C = cyl.constants
    a, b = cyl.x, cyl.y
    if v in (a, b):
        raise SliceError("endpoints are never parabolic slices")
    if v not in g.parabolic:
        raise SliceError(f"{v!r} is not a parabolic vertex")
    need = C.theta - 20 * C.stability_D
    ok = False
    for G in all_geodesics(g, a, b, geod_cap):
        if v in G:
            i = G.index(v)
            if neighbor_angle(g, v, G[i - 1], G[i + 1]) > need:
                ok = True
                break
    if not ok:
        raise SliceError(f"no geodesic [a, b] has an angle > Theta - 20D at {v!r}")
    left = cylinder(g, a, v, cyl.l, C, budget, geod_cap)
    right = cylinder(g, v, b, cyl.l, C, budget, geod_cap)
    full = cyl.complete and left.complete and right.complete
    U, I = set(left.members) | set(right.members), set(left.members) & set(right.members)
    rep = {"union": _identity(U == set(cyl.members), full),
           "intersection": _identity(I == {v}, full)}
    return left, right, rep


# -- regular slices ---------------------------------------------------------

def _member_mask(g, cyl):
    mask = np.zeros(len(g), dtype=np.uint8)
    for v in cyl.members:
        mask[g.index[v]] = 1
    return mask


def _require_regular(g, cyl):
    if parabolic_slices(g, cyl, cyl.constants.theta):
        raise SliceError("defined only for cylinders without parabolic slice")


def neighborhood_sets(g, cyl, x, check=True):
    """(N_L(x), N_R(x)) relative to the cylinder's first endpoint."""
    if check:
        _require_regular(g, cyl)
    if x not in cyl.members:
        raise SliceError(f"{x!r} is not in the cylinder")
    far = 100 * cyl.constants.delta
    da = g.dist_row(cyl.x)
    dx = g.dist_row(x)
    ax = da[g.index[x]]
    L, R = set(), set()
    for v in cyl.members:
        i = g.index[v]
        if dx[i] > far:
            if da[i] > ax:
                R.add(v)
            elif da[i] < ax:
                L.add(v)
    return L, R


def potential(g, cyl, check=True):
    """P(v) = |N_L(v)| - |N_R(v)| for every member; Diff(x, y) = P(x) - P(y).

    Counts are obtained from the totals to either side of v minus the
    members within 100 delta, so only balls of radius 100 delta are
    explored.
    """
    if check:
        _require_regular(g, cyl)
    mask = _member_mask(g, cyl)
    da = g.dist_row(cyl.x).astype(np.int32)
    above, below = kernels.near_counts(g.indptr, g.indices, mask, da,
                                       100 * cyl.constants.delta)
    keys = np.sort(da[mask.astype(bool)])
    out = {}
    for v in cyl.members:
        i = g.index[v]
        k = da[i]
        n_left = int(np.searchsorted(keys, k, "left"))
        n_right = len(keys) - int(np.searchsorted(keys, k, "right"))
        out[v] = (n_left - int(below[i])) - (n_right - int(above[i]))
    return out


def diff(g, cyl, x, y, check=True):
    """The four-term difference of the left and right neighbourhood sets."""
    Lx, Rx = neighborhood_sets(g, cyl, x, check)
    Ly, Ry = neighborhood_sets(g, cyl, y, check=False)
    return (len(Lx - Ly) - len(Ly - Lx) + len(Ry - Rx) - len(Rx - Ry))


def regular_slices(g, cyl, check=True):
    """Classes of Cyl \\ {a, b} under Diff = 0, ordered by increasing P.

    Consecutive classes are those with the smallest positive Diff
    increment, so sorting by P is the greedy ordering.
    """
    P = potential(g, cyl, check)
    classes = {}
    for v, p in P.items():
        if v in (cyl.x, cyl.y):
            continue
        classes.setdefault(p, set()).add(v)
    out = []
    for p in sorted(classes):
        mem = frozenset(classes[p])
        flagged = len(mem) == 1 and next(iter(mem)) in g.parabolic
        out.append(Slice("regular", mem, None, flagged))
    return out


def _order_parabolics(g, a, b, vs, geod_cap):
    for G in all_geodesics(g, a, b, geod_cap):
        pos = {v: i for i, v in enumerate(G)}
        if all(v in pos for v in vs):
            return sorted(vs, key=lambda v: pos[v])
    raise SliceError("parabolic slices are not ordered along any enumerated geodesic")


def _interior(g, a, b, l, C, budget, geod_cap, depth, report):
    cyl = cylinder(g, a, b, l, C, budget, geod_cap)
    if not cyl.complete:
        raise IncompleteError(f"cylinder ({a!r}, {b!r}) incomplete")
    par = parabolic_slices(g, cyl, C.theta)
    if not par or depth > len(g):
        return regular_slices(g, cyl, check=False), cyl
    by_v = {next(iter(s.members)): s for s in par}
    order = _order_parabolics(g, a, b, list(by_v), geod_cap)
    out = []
    ends = [a] + order + [b]
    covered = set()
    for i in range(len(ends) - 1):
        sub, subcyl = _interior(g, ends[i], ends[i + 1], l, C, budget, geod_cap,
                                depth + 1, report)
        covered |= set(subcyl.members)
        out += sub
        if i + 1 < len(ends) - 1:
            out.append(by_v[ends[i + 1]])
    report.setdefault("split_cover", []).append(
        {"a": a, "b": b, "covers": covered == set(cyl.members)})
    return out, cyl


def order_slices(g, x, y, l, C, budget=10 ** 6, geod_cap=1000):
    """Ordered slices S_0 = {x}, ..., S_m = {y} of Cyl_l(x, y)."""
    report = {}
    if x == y:
        cyl = cylinder(g, x, y, l, C, budget, geod_cap)
        return SliceDecomposition(x, y, [Slice("regular", frozenset([x]))], cyl, report)
    inner, cyl = _interior(g, x, y, l, C, budget, geod_cap, 0, report)
    slices = [Slice("regular", frozenset([x]))] + inner + [Slice("regular", frozenset([y]))]
    seen = set()
    for s in slices:
        seen |= s.members
    report["partition"] = seen == set(cyl.members) and \
        sum(len(s.members) for s in slices) == len(seen)
    report["consecutive_parabolic"] = any(
        s.kind == t.kind == "parabolic" for s, t in zip(slices, slices[1:]))
    ps = [s for s in inner if s.kind == "regular"]
    report["flagged_regular"] = [sort_ids(s.members) for s in ps if s.flagged]
    return SliceDecomposition(x, y, slices, cyl, report)


def slice_metrics(g, dec):
    """Largest same-slice distance and largest distance between members of
    consecutive slices."""
    diam = 0
    cons = 0
    sl = dec.slices
    for k, s in enumerate(sl):
        nxt = sl[k + 1].members if k + 1 < len(sl) else frozenset()
        for u in s.members:
            row = g.dist_row(u)
            for v in s.members:
                diam = max(diam, int(row[g.index[v]]))
            for v in nxt:
                cons = max(cons, int(row[g.index[v]]))
    return diam, cons


# -- triangles ----------------------------------------------------------------

def apply_word(actions, word, p):
    """Left action of a word (capital letter = inverse) on a vertex."""
    for ch in reversed(word):
        m = actions.get(ch)
        if m is None and ch.isupper():
            inv = actions.get(ch.lower())
            m = {b: a for a, b in inv.items()} if inv is not None else None
        if m is None:
            raise KeyError(f"no action for letter {ch!r}")
        if p not in m:
            return None
        p = m[p]
    return p


def _common_prefix(A, B):
    k = 0
    while k < min(len(A), len(B)) and A[k].members == B[k].members:
        k += 1
    return k


@dataclass
class TriangleDecomposition:
    vertices: tuple
    sides: dict
    shared: dict
    holes: dict
    report: dict

    def to_dict(self):
        return {"vertices": list(self.vertices),
                "sides": {k: v.to_dict() for k, v in sorted(self.sides.items())},
                "shared": self.shared,
                "holes": {k: [s.to_dict() for s in v] for k, v in sorted(self.holes.items())},
                "report": self.report}


def triangle_slices(g, p, alpha, beta, gamma, l, C, budget=10 ** 6, actions=None,
                    geod_cap=1000):
    """Three slice decompositions of the triangle (p, alpha p, gamma^-1 p)
    with their shared prefixes, suffixes and holes.

    ``alpha``, ``beta``, ``gamma`` are words; pass ``gamma=""`` with
    ``beta = alpha^-1`` for a digon.
    """
    acts = actions if actions is not None else g.action
    x = p
    y = apply_word(acts, alpha, p)
    if apply_word(acts, alpha + beta + gamma, p) != p:
        raise SliceError("alpha beta gamma does not fix the base point")
    z = apply_word(acts, alpha + beta, p)
    if y is None or z is None:
        raise IncompleteError("triangle leaves the model")
    if gamma == "" or z == x:
        dxy = order_slices(g, x, y, l, C, budget, geod_cap)
        dyx = order_slices(g, y, x, l, C, budget, geod_cap)
        same = [s.members for s in dxy.slices] == [s.members for s in dyx.reversed().slices]
        rep = {"digon": True, "identical": same, "violations": []}
        return TriangleDecomposition((x, y), {"xy": dxy, "yx": dyx},
                                     {"prefix": len(dxy.slices) if same else 0},
                                     {"xy": [] if same else dxy.slices[1:-1]}, rep)
    D = {"xy": order_slices(g, x, y, l, C, budget, geod_cap),
         "xz": order_slices(g, x, z, l, C, budget, geod_cap),
         "yz": order_slices(g, y, z, l, C, budget, geod_cap)}
    fwd = {k: v.slices for k, v in D.items()}
    rev = {k: v.slices[::-1] for k, v in D.items()}
    S = _common_prefix(fwd["xy"], fwd["xz"])   # shared at x
    T = _common_prefix(rev["xy"], fwd["yz"])   # shared at y
    V = _common_prefix(rev["xz"], rev["yz"])   # shared at z
    shares = {"xy": (S, T), "xz": (S, V), "yz": (T, V)}
    holes = {}
    for side, (h, t) in shares.items():
        sl = fwd[side]
        n = len(sl)
        h, t = min(h, n), min(t, n)
        holes[side] = sl[h:n - t] if h + t < n else []
    bound = 10 * C.phi_n
    ang = 3 * C.theta + 100 * C.delta
    viol = []
    for side, hs in holes.items():
        if len(hs) > bound:
            viol.append(f"hole {side} has {len(hs)} > 10 phi(n) slices")
        for s in hs:
            if s.kind == "parabolic" and s.angle > ang:
                viol.append(f"hole {side} contains a parabolic slice of angle {s.angle}")
    # locality: slices well inside the coincidence ball are shared
    locality = []
    for corner, (u, v, w), side, k in (("x", (x, y, z), "xy", S), ("y", (y, z, x), "yz", T),
                                       ("z", (z, x, y), "xz", V)):
        R = gromov_product(g, u, v, w) - 4 * (11 * C.mu + C.phi_n) - 200 * C.delta
        if R < 0:
            locality.append({"corner": corner, "radius": float(R), "vacuous": True})
            continue
        B = ball(g, u, int(R))
        sl = fwd[side] if corner != "z" else rev["xz"]
        if corner == "y":
            sl = fwd["yz"]
        inside = [i for i, s in enumerate(sl) if s.members <= B]
        ok = all(i < k for i in inside)
        locality.append({"corner": corner, "radius": float(R), "vacuous": False, "ok": ok})
        if not ok:
            viol.append(f"locality fails at {corner}")
    rep = {"digon": False, "violations": viol, "locality": locality,
           "hole_bound": bound, "angle_bound": ang}
    if viol and C.regime == PAPER:
        raise BoundViolation("; ".join(viol))
    return TriangleDecomposition(
        (x, y, z), D, {"S": S, "T": T, "V": V},
        {"H_z": holes["xy"], "H_y": holes["xz"], "H_x": holes["yz"]}, rep)


def check_slice_lemmas(g, dec, geod_cap=1000):
    """Instance checks of the slice lemmas on one decomposition.

    Returns a dict of named verdicts; bounds scaled by D, delta and Theta
    are meaningful under paper-faithful constants only.
    """
    cyl = dec.cylinder
    C = cyl.constants
    a, b = dec.x, dec.y
    geos = all_geodesics(g, a, b, geod_cap)
    out = {}
    # every member within 2 delta of every enumerated geodesic
    rows = [g.set_distance(G) for G in geos]
    out["two_delta"] = all(int(r[g.index[v]]) <= 2 * C.delta
                           for r in rows for v in cyl.members)
    # parabolic slices lie on every geodesic with angle >= A - 20 D
    ok = True
    for s in dec.slices:
        if s.kind != "parabolic":
            continue
        v = next(iter(s.members))
        for G in geos:
            if v not in G:
                ok = False
                break
            i = G.index(v)
            if neighbor_angle(g, v, G[i - 1], G[i + 1]) < s.angle - 20 * C.stability_D:
                ok = False
    out["parabolic_on_geodesics"] = ok
    # slices are small
    small = True
    for s in dec.slices:
        mem = sort_ids(s.members)
        for i, u in enumerate(mem):
            for v in mem[i + 1:]:
                if g.distance(u, v) > 200 * C.delta:
                    small = False
                elif not any(max_angle(g, G) <= 2 * C.theta
                             for G in all_geodesics(g, u, v, geod_cap)):
                    small = False
    out["slices_small"] = small
    _, cons = slice_metrics(g, dec)
    out["consecutive_close"] = cons <= 1000 * C.delta
    out["geodesics_truncated"] = geos.truncated
    return out
