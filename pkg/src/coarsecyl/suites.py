"""Property suites over the bundled fixtures, as run by ``coarsecyl suite``.

Every suite returns a plain dict with a ``verdict`` of ``pass``, ``fail`` or
``inconclusive``, an instance count, and the first few violations.  Nothing
time-dependent is recorded, so two runs with the same seed agree byte for
byte.
"""
import os
import random
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

from . import fixtures as fx
from .angles import INF, circuits_through, cone, conical_neighborhood, neighbor_angle
from .constants import exploratory, paper_faithful
from .cylinders import check_equivariance, cylinder
from .graph import BudgetExceeded, all_geodesics, hyperbolicity_delta, sort_ids
from .lamination import LaminationError, laminate
from .paths import single_piece, stability_constant, verify_appendix
from .slices import (IncompleteError, SliceError, neighborhood_sets, order_slices,
                     parabolic_slices, slice_metrics, split_cylinder)

MAX_SHOWN = 5


class _Tally:
    def __init__(self):
        self.instances = 0
        self.violations = []
        self.nviol = 0
        self.inconclusive = 0
        self.extra = {}

    def check(self, ok, where):
        self.instances += 1
        if ok is None:
            self.inconclusive += 1
        elif not ok:
            self.nviol += 1
            if len(self.violations) < MAX_SHOWN:
                self.violations.append(where)

    def result(self, boundary_ok=False):
        """``boundary_ok``: inconclusive instances are expected (truncated
        balls) and do not downgrade a pass, provided something was decided."""
        decided = self.instances - self.inconclusive
        soft = boundary_ok and decided > 0
        verdict = "fail" if self.nviol else (
            "inconclusive" if self.inconclusive and not soft else "pass")
        out = {"verdict": verdict, "instances": self.instances,
               "violations": self.nviol, "examples": self.violations,
               "inconclusive": self.inconclusive}
        out.update(self.extra)
        return out


def small_constants(g, seed=0, delta=None):
    """Exploratory constants fitted to ``g``: delta from the graph (at least
    1) and epsilon the empirical cone constant of lambda/2-quasi-geodesics."""
    if delta is None:
        delta = max(int(hyperbolicity_delta(g)), 1)
    try:
        _, N, _ = stability_constant(g, 2, samples=30, seed=seed, budget=10 ** 5)
    except (RuntimeError, ValueError):
        N = 1
    return exploratory(delta=delta, lambda_=4, epsilon=max(int(N), 1), mu=3, l=2)


def _pairs(g, limit, rng):
    pairs = list(combinations(g.vertices, 2))
    if len(pairs) > limit:
        pairs = sorted(rng.sample(pairs, limit), key=repr)
    return pairs


def angle_axioms(seed=0, names=None, L=6):
    t = _Tally()
    for name in names or fx.names():
        g = fx.graph(name)
        for v in g.vertices:
            nb = g.neighbors(v)
            if len(nb) > 8:
                continue
            A = {(a, b): neighbor_angle(g, v, a, b) for a in nb for b in nb}
            for a in nb:
                for b in nb:
                    for c in nb:
                        t.check(A[a, c] <= A[a, b] + A[b, c], [name, "triangle", v, a, b, c])
        acts = fx.actions_of(name)
        bnd = fx.boundary_of(name)
        cap = 4
        dist_b = g.set_distance(sort_ids(bnd)) if bnd else None
        for gen in sorted(acts):
            m = acts[gen]
            for v in g.vertices:
                if v not in m or any(w not in m for w in g.neighbors(v)):
                    continue
                if dist_b is not None and (dist_b[g.index[v]] <= cap + 1
                                           or dist_b[g.index[m[v]]] <= cap + 1):
                    continue
                nb = g.neighbors(v)
                for a, b in combinations(nb, 2):
                    c = None if dist_b is None else cap
                    t.check(neighbor_angle(g, v, a, b, c) ==
                            neighbor_angle(g, m[v], m[a], m[b], c),
                            [name, "isometry", gen, v, a, b])
        if len(g) <= 40:
            for e in g.edges:
                for cyc in circuits_through(g, e, L):
                    n = len(cyc)
                    mx = max(neighbor_angle(g, cyc[i], cyc[i - 1], cyc[(i + 1) % n])
                             for i in range(n))
                    t.check(mx <= n - 2, [name, "circuit", list(cyc)])
    return t.result()


def cone_monotonicity(seed=0, names=("C6", "theta234", "ladder4", "bintree3")):
    t = _Tally()
    for name in names:
        g = fx.graph(name)
        for a, b in g.edges:
            prev = {}
            for d in range(4):
                for th in range(5):
                    S = cone(g, (a, b), a, d, th)
                    for (d0, t0), S0 in prev.items():
                        if d0 <= d and t0 <= th:
                            t.check(S0 <= S, [name, [a, b], d0, t0, d, th])
                    prev[(d, th)] = S
    return t.result()


def stability(seed=0, names=("C5", "C8", "ladder4", "ladder6")):
    t = _Tally()
    t.extra["N_emp"] = {}
    for name in names:
        g = fx.graph(name)
        for Lam in (1, 5):
            try:
                D, N, info = stability_constant(g, Lam, samples=30, seed=seed)
            except (RuntimeError, ValueError):
                t.check(None, [name, Lam])
                continue
            t.extra["N_emp"][f"{name}/{Lam}"] = N
            t.check(N != INF, [name, Lam, N])
    return t.result()


def cylinder_symmetry(seed=0, names=None, limit=40):
    rng = random.Random(seed)
    t = _Tally()
    for name in names or (fx.CYCLES + fx.THETAS + fx.LADDERS + ("bintree3", "cayley:F2:4")):
        g = fx.graph(name)
        C = small_constants(g, seed)
        for x, y in _pairs(g, limit, rng):
            c1 = cylinder(g, x, y, C.l, C, keep_witnesses=False)
            c2 = cylinder(g, y, x, C.l, C, keep_witnesses=False)
            if not (c1.complete and c2.complete):
                t.check(None, [name, x, y])
                continue
            geos = all_geodesics(g, x, y, 200)
            inside = all(set(G) <= c1.members for G in geos)
            near = all(c1.members <= conical_neighborhood(g, G, C.epsilon) for G in geos)
            t.check(inside and near and c1.members == c2.members, [name, x, y])
    return t.result()


def equivariance(seed=0, models=("cayley:Z:5", "cayley:Z6:3", "cayley:F2:4"), limit=60):
    rng = random.Random(seed)
    t = _Tally()
    for name in models:
        M = fx.model(name)
        g = M.graph
        C = small_constants(g, seed)
        for x, y in _pairs(g, limit, rng):
            for gen in sorted(M.action):
                r = check_equivariance(g, gen, x, y, C.l, C, action=M.action[gen],
                                       boundary=M.boundary_vertices)
                t.check({"true": True, "false": False}.get(r), [name, gen, x, y])
    return t.result(boundary_ok=True)


def diff_algebra(seed=0, triples=2000):
    """Four-term Diff from the raw neighbourhood sets.  The graphs are long
    enough for the 100 delta radius to matter."""
    rng = random.Random(seed)
    t = _Tally()
    graphs = {"path260": fx.path_graph(260), "comb240": fx.comb(240)}
    for name, g in graphs.items():
        C = exploratory(delta=1, lambda_=4, epsilon=1, mu=3, l=2)   # trees
        for x, y in ((g.vertices[0], 260 if name == "path260" else 240), (17, 230)):
            cyl = cylinder(g, x, y, C.l, C, keep_witnesses=False)
            if not cyl.complete or cyl.members & g.parabolic:
                t.check(None, [name, x, y])
                continue
            mem = sort_ids(cyl.members)
            sets = {v: neighborhood_sets(g, cyl, v) for v in mem}

            def d(u, v):
                (Lu, Ru), (Lv, Rv) = sets[u], sets[v]
                return len(Lu - Lv) - len(Lv - Lu) + len(Rv - Ru) - len(Ru - Rv)
            for _ in range(triples // 4):
                a, b, c = (rng.choice(mem) for _ in range(3))
                t.check(d(a, b) == -d(b, a) and d(a, c) == d(a, b) + d(b, c),
                        [name, x, y, a, b, c])
    return t.result()


def split_identities(seed=0, names=fx.PARABOLIC):
    t = _Tally()
    for name in names:
        g = fx.graph(name)
        C = exploratory(delta=1, lambda_=4, epsilon=1, mu=3, l=2, theta=3)
        for x, y in combinations(g.vertices, 2):
            cyl = cylinder(g, x, y, C.l, C, keep_witnesses=False)
            for sl in parabolic_slices(g, cyl, C.theta):
                v = next(iter(sl.members))
                try:
                    _, _, rep = split_cylinder(g, cyl, v)
                except SliceError:
                    continue
                u, i = rep["union"], rep["intersection"]
                t.check(None if "inconclusive" in (u, i) else (u == i == "pass"),
                        [name, x, y, v])
    return t.result()


def slice_bounds(seed=0, n=10 ** 4):
    t = _Tally()
    g = fx.path_graph(n)
    C = paper_faithful(0, 1)
    try:
        dec = order_slices(g, 0, n, C.l, C)
    except IncompleteError:
        t.check(None, ["incomplete"])
        return t.result()
    diam, cons = slice_metrics(g, dec)
    t.extra.update({"slices": len(dec.slices), "diameter": diam, "consecutive": cons,
                    "delta": C.delta})
    t.check(diam <= 200 * C.delta, ["diameter", diam])
    t.check(cons <= 1000 * C.delta, ["consecutive", cons])
    return t.result()


def appendix(seed=0, names=fx.TREES + fx.CYCLES + fx.THETAS + fx.LADDERS):
    t = _Tally()
    for name in names:
        g = fx.graph(name)
        C = paper_faithful(hyperbolicity_delta(g), 1)
        for x, y in combinations(g.vertices, 2):
            for G in all_geodesics(g, x, y, 50):
                f = single_piece(G, C.l, C)
                rep = verify_appendix(g, f)
                t.check(rep["closeness"] and rep["lower_bound"], [name, list(G)])
    return t.result()


def lamination(seed=0):
    t = _Tally()
    C = fx.lamination_constants()
    skel = {}
    for name in sorted(fx.LAMINATIONS):
        M, P, images, l = fx.lamination_fixture(name)
        try:
            r = laminate(M, P, l, C, images=images)
        except LaminationError as e:
            t.check(False, [name, str(e)])
            continue
        for k, ok in sorted(r["checks"].items()):
            t.check(ok, [name, k])
        skel[name] = {"vertices": len(r["skeleton"]["vertices"]),
                      "edges": len(r["skeleton"]["edges"])}
        if name in fx.FULL_COINCIDENCE:
            t.check(r["skeleton"]["single_vertex"], [name, "single_vertex"])
    t.extra["skeletons"] = skel
    return t.result()


SUITES = {
    "angle_axioms": angle_axioms,
    "cone_monotonicity": cone_monotonicity,
    "stability": stability,
    "cylinder_symmetry": cylinder_symmetry,
    "equivariance": equivariance,
    "diff_algebra": diff_algebra,
    "split_identities": split_identities,
    "slice_bounds": slice_bounds,
    "appendix": appendix,
    "lamination": lamination,
}


def threads():
    try:
        return max(1, int(os.environ.get("COARSECYL_THREADS", "1")))
    except ValueError:
        return 1


def run_all(seed=0, only=None):
    names = [n for n in SUITES if not only or n in only]

    def one(n):
        try:
            return SUITES[n](seed=seed)
        except BudgetExceeded as e:
            return {"verdict": "inconclusive", "error": str(e)}
    with ThreadPoolExecutor(max_workers=threads()) as ex:
        results = dict(zip(names, ex.map(one, names)))
    verdicts = {r["verdict"] for r in results.values()}
    overall = "fail" if "fail" in verdicts else (
        "inconclusive" if "inconclusive" in verdicts else "pass")
    return {"seed": seed, "verdict": overall, "suites": results}
