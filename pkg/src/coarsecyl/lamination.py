"""Markings, arcs and the dual graph K on a Van Kampen polyhedron.

Faces are handled combinatorially: each face is a polygon whose boundary
carries markings in cyclic order, leaves are non-crossing blocks of
markings, and regions of the complement are found by face tracing.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from .presentations import invert
from .slices import order_slices, triangle_slices


class LaminationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Marking:
    edge: str
    index: int          # 1-based
    position: Fraction
    slice: int          # index into the decomposition's slice list
    kind: str


def markings_for_edge(decomp, edge=""):
    """Markings strictly inside the edge: one per regular slice, two
    consecutive ones per parabolic slice; endpoint slices get none."""
    inner = list(range(1, len(decomp.slices) - 1))
    seq = []
    for i in inner:
        s = decomp.slices[i]
        seq += [i, i] if s.kind == "parabolic" else [i]
    N = len(seq)
    return [Marking(edge, k + 1, Fraction(k + 1, N + 1), i, decomp.slices[i].kind)
            for k, i in enumerate(seq)]


@dataclass
class VanKampenComplex:
    generators: tuple
    faces: tuple                       # boundary words, length 1 to 3
    markings: dict = field(default_factory=dict)   # generator -> [Marking]

    def chi(self):
        return 1 - len(self.generators) + len(self.faces)


@dataclass
class FaceLamination:
    word: str
    points: list        # boundary markings in cyclic order: dicts
    leaves: list        # blocks of point indices
    singular: list      # point indices joined to the singular point
    report: dict

    @property
    def arcs(self):
        out = [("regular", b[0], b[1]) for b in self.leaves if len(b) == 2 and
               tuple(b) != tuple(self.singular)]
        out += [("singular", i, "p_T") for i in self.singular]
        return out


def _interleave(A, B):
    """True when the blocks cross as chords of the circle."""
    sa, sb = set(A), set(B)
    seq = [0 if i in sa else 1 for i in sorted(sa | sb)]
    changes = sum(1 for a, b in zip(seq, seq[1:] + seq[:1]) if a != b)
    return changes > 2


def _side_lists(aligned):
    rep = aligned.report
    if rep.get("digon"):
        a, b = aligned.sides["xy"], aligned.sides["yx"]
        n = len(a.slices)
        holes = ({} if rep["identical"] else
                 {0: set(range(1, n - 1)), 1: set(range(1, len(b.slices) - 1))})
        matches = []
        if rep["identical"]:
            matches = [("x", 0, i, 1, n - 1 - i) for i in range(1, n - 1)]
        return [a.slices, b.slices], holes, matches
    xy, xz, yz = (aligned.sides[k].slices for k in ("xy", "xz", "yz"))
    sides = [xy, yz, xz[::-1]]
    n = [len(s) for s in sides]
    hole_sets = {}
    for k, key in ((0, "H_z"), (1, "H_x"), (2, "H_y")):
        ids = {id(s) for s in aligned.holes[key]}
        src = sides[k] if k != 2 else xz
        idx = {i for i, s in enumerate(src) if id(s) in ids}
        hole_sets[k] = idx if k != 2 else {n[2] - 1 - i for i in idx}
    S, T, V = (aligned.shared[k] for k in ("S", "T", "V"))
    matches = []
    # corner x: xy forward against zx backward
    for i in range(1, S):
        if 0 < i < n[0] - 1 and 0 < i < n[2] - 1:
            matches.append(("x", 0, i, 2, n[2] - 1 - i))
    # corner y: xy backward against yz forward
    for i in range(1, T):
        if 0 < i < n[0] - 1 and 0 < i < n[1] - 1:
            matches.append(("y", 0, n[0] - 1 - i, 1, i))
    # corner z: yz backward against zx forward
    for i in range(1, V):
        if 0 < i < n[1] - 1 and 0 < i < n[2] - 1:
            matches.append(("z", 1, n[1] - 1 - i, 2, i))
    return sides, hole_sets, matches


def face_lamination(word, aligned):
    """Regular and singular arcs of one face.

    ``aligned`` is the face's :class:`TriangleDecomposition` (digon mode for
    two-letter faces), or None for a face without markings.
    """
    if aligned is None:
        return FaceLamination(word, [], [], [], {"leaves": 0, "singular_point": False})
    sides, holes, matches = _side_lists(aligned)
    points = []
    first = {}
    for s, sl in enumerate(sides):
        for i in range(1, len(sl) - 1):
            mult = 2 if sl[i].kind == "parabolic" else 1
            first[(s, i)] = len(points)
            for j in range(mult):
                points.append({"side": s, "slice": i, "copy": j, "kind": sl[i].kind,
                               "hole": i in holes.get(s, ())})
    claims = {}
    for m in matches:
        claims.setdefault(m[1:3], []).append(m)
        claims.setdefault(m[3:5], []).append(m)
    used = set()
    leaves = []

    def pos(s, i, j):
        return first[(s, i)] + j

    done_triples = set()
    for corner, sa, ia, sb, ib in matches:
        kind = sides[sa][ia].kind
        if kind == "regular":
            a, b = pos(sa, ia, 0), pos(sb, ib, 0)
            if a in used or b in used:
                continue
            leaves.append([a, b])
            used |= {a, b}
            continue
        members = sides[sa][ia].members
        occ = [(s, i) for s, sl in enumerate(sides) for i in range(1, len(sl) - 1)
               if sl[i].kind == "parabolic" and sl[i].members == members]
        multi = any(len(claims.get(o, [])) > 1 for o in occ)
        if len({s for s, _ in occ}) == 3 and multi and len(occ) == 3:
            if members in done_triples:
                continue
            done_triples.add(members)
            ps = sorted(p for s, i in occ for p in (pos(s, i, 0), pos(s, i, 1)))
            if any(p in used for p in ps):
                continue
            for a, b in ((ps[1], ps[2]), (ps[3], ps[4]), (ps[5], ps[0])):
                leaves.append([min(a, b), max(a, b)])
            used |= set(ps)
            continue
        # nested pair around the shared corner
        a0, a1 = pos(sa, ia, 0), pos(sa, ia, 1)
        b0, b1 = pos(sb, ib, 0), pos(sb, ib, 1)
        if {a0, a1, b0, b1} & used:
            continue
        leaves += [sorted([a0, b1]), sorted([a1, b0])]
        used |= {a0, a1, b0, b1}
    singular = [i for i in range(len(points)) if i not in used]
    blocks = [list(b) for b in leaves] + ([singular] if singular else [])
    for i, A in enumerate(blocks):
        for B in blocks[i + 1:]:
            if _interleave(A, B):
                raise LaminationError(f"crossing arcs {A} and {B} in face {word!r}")
    unmatched_outside_holes = [i for i in singular if not points[i]["hole"]]
    rep = {"leaves": len(blocks), "singular_point": bool(singular),
           "unmatched_outside_holes": unmatched_outside_holes}
    return FaceLamination(word, points, leaves, singular, rep)


# -- the graph K ------------------------------------------------------------------

class _DSU:
    def __init__(self):
        self.p = {}

    def find(self, a):
        self.p.setdefault(a, a)
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            if repr(a) > repr(b):
                a, b = b, a
            self.p[b] = a

    def classes(self, items):
        out = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return sorted((sorted(v, key=repr) for v in out.values()), key=lambda c: repr(c[0]))


def _regions(n, blocks):
    """Face tracing: regions as cyclic lists of (gap, block) steps."""
    if n == 0:
        return []
    owner = {}
    for b, B in enumerate(blocks):
        for p in B:
            owner[p] = b
    succ = {}
    for b, B in enumerate(blocks):
        s = sorted(B)
        for k, p in enumerate(s):
            succ[p] = s[(k + 1) % len(s)]
    seen, out = set(), []
    for g in range(n):
        if g in seen:
            continue
        cyc = []
        cur = g
        while cur not in seen:
            seen.add(cur)
            m = (cur + 1) % n
            cyc.append((cur, owner[m]))
            cur = succ[m]
        out.append(cyc)
    return out


@dataclass
class LaminationGraph:
    complex: VanKampenComplex
    faces: list
    vertices: list          # K vertices: ("v", gen, gap) and ("c", face, region)
    edges: list             # spokes
    components: list        # vertex lists
    pruned: list            # component indices removed for K'
    hole_vertices: set
    face_data: list
    checks: dict
    types: dict = field(default_factory=dict)
    sides: dict = field(default_factory=dict)   # component -> [(gap vertex, sign)]

    @property
    def retained(self):
        return [i for i in range(len(self.components)) if i not in self.pruned]


def _face_geometry(f, word, lam, counts):
    """Per-face boundary bookkeeping for K and for cutting."""
    pts = lam.points
    n = len(pts)
    letters = list(word)
    side_len = {}
    for p in pts:
        side_len[p["side"]] = side_len.get(p["side"], 0) + 1
    side_start = {}
    k = 0
    for s in range(len(letters)):
        side_start[s] = k
        k += side_len.get(s, 0)
    for s, letter in enumerate(letters):
        g = letter.lower()
        if side_len.get(s, 0) != counts.get(g, 0):
            raise LaminationError(
                f"face {word!r}: side {s} has {side_len.get(s, 0)} markings, "
                f"edge {g!r} has {counts.get(g, 0)}")

    def on_edge(i):
        """(generator, marking index on c_g, forward?) of face point i."""
        s = pts[i]["side"]
        j = i - side_start[s]
        g = letters[s].lower()
        fwd = letters[s].islower()
        return g, (j if fwd else counts[g] - 1 - j), fwd

    gaps = []
    for i in range(n):
        a, b = i, (i + 1) % n
        if n > 1 and pts[a]["side"] == pts[b]["side"] and b == a + 1:
            g, ja, fwd = on_edge(a)
            r = ja if fwd else ja - 1
            hole = pts[a]["hole"] or pts[b]["hole"]
            gaps.append({"corner": False, "gen": g, "gap": r, "fwd": fwd, "hole": hole})
        else:
            gaps.append({"corner": True})
    blocks = [list(b) for b in lam.leaves] + ([list(lam.singular)] if lam.singular else [])
    regions = _regions(n, blocks)
    return {"face": f, "word": word, "n": n, "gaps": gaps, "blocks": blocks,
            "regions": regions, "on_edge": on_edge,
            "singular_block": len(blocks) - 1 if lam.singular else None}


def build_K(P, laminations):
    """Dual graph K: one star per complementary region with edge gaps,
    glued along shared generator edges; K' drops components meeting holes."""
    counts = {g: len(P.markings.get(g, [])) for g in P.generators}
    faces = [_face_geometry(f, w, lam, counts)
             for f, (w, lam) in enumerate(zip(P.faces, laminations))]
    dsu = _DSU()
    vertices, edges = set(), []
    hole_vertices = set()
    for fd in faces:
        f = fd["face"]
        fd["stars"] = []
        for r, cyc in enumerate(fd["regions"]):
            kg = [g for g, _ in cyc if not fd["gaps"][g]["corner"]]
            if not kg:
                fd["stars"].append(None)
                continue
            c = ("c", f, r)
            vertices.add(c)
            dsu.find(c)
            spokes = []
            for g in kg:
                info = fd["gaps"][g]
                v = ("v", info["gen"], info["gap"])
                vertices.add(v)
                if info["hole"]:
                    hole_vertices.add(v)
                edges.append((c, v, f, g))
                spokes.append(g)
                dsu.union(c, v)
            fd["stars"].append((c, spokes))
    comps = dsu.classes(sorted(vertices, key=repr))
    comp_of = {v: i for i, cmp in enumerate(comps) for v in cmp}
    pruned = sorted({comp_of[v] for v in hole_vertices})
    checks = {"leaf_region": _leaf_region_check(faces),
              "pruning_sound": all(any(v in hole_vertices for v in comps[i]) for i in pruned)
              and not any(v in hole_vertices for i, cmp in enumerate(comps)
                          if i not in pruned for v in cmp)}
    return LaminationGraph(P, list(laminations), sorted(vertices, key=repr), edges, comps,
                           pruned, hole_vertices, faces, checks)


def _sectors(fd, r):
    """Pieces of region r cut by its star: lists of cycle steps."""
    cyc = fd["regions"][r]
    star = fd["stars"][r]
    if star is None or len(star[1]) <= 1:
        return [list(range(len(cyc)))]
    cut = [k for k, (g, _) in enumerate(cyc) if not fd["gaps"][g]["corner"]]
    out = []
    for a, b in zip(cut, cut[1:] + cut[:1]):
        steps = []
        k = a
        while True:
            steps.append(k)
            k = (k + 1) % len(cyc)
            if k == b:
                break
        out.append(steps)
    return out


def _leaf_region_check(faces):
    ok = True
    for fd in faces:
        if not fd["blocks"]:
            continue
        dsu = _DSU()
        for r in range(len(fd["regions"])):
            cyc = fd["regions"][r]
            for s, steps in enumerate(_sectors(fd, r)):
                for k in steps:
                    dsu.union(("s", r, s), ("b", cyc[k][1]))
        leaves = [("b", b) for b in range(len(fd["blocks"]))]
        for cls in dsu.classes(list(dsu.p)):
            if sum(1 for x in cls if x in leaves) != 1:
                ok = False
    return ok


def classify_components(KG, only_retained=True):
    """Type I (two-sided) or II by counting side classes of each component."""
    dsu = _DSU()
    spoke_sides = {}
    for fd in KG.face_data:
        for r, star in enumerate(fd["stars"]):
            if star is None:
                continue
            c, spokes = star
            # sectors at the centre: after(s_j) ~ before(s_{j+1})
            for a, b in zip(spokes, spokes[1:] + spokes[:1]):
                dsu.union((fd["face"], a, "after"), (fd["face"], b, "before"))
            for g in spokes:
                info = fd["gaps"][g]
                v = ("v", info["gen"], info["gap"])
                minus = "before" if info["fwd"] else "after"
                plus = "after" if info["fwd"] else "before"
                dsu.union((fd["face"], g, minus), (v, "-"))
                dsu.union((fd["face"], g, plus), (v, "+"))
                spoke_sides.setdefault(v, []).append((fd["face"], g))
    types, KG.sides = {}, {}
    idx = KG.retained if only_retained else range(len(KG.components))
    for i in idx:
        sides = {}
        for v in sorted((v for v in KG.components[i] if v[0] == "v"), key=repr):
            for sign in "-+":
                sides.setdefault(dsu.find((v, sign)), (v, sign))
        if not sides:
            raise LaminationError(f"component {i} does not meet the 1-skeleton")
        # a tripod in a face has three sides; it becomes a vertex like type II
        types[i] = {1: "II", 2: "I"}.get(len(sides), "branched")
        KG.sides[i] = sorted(sides.values(), key=repr)
    KG.types = types
    KG._side_dsu = dsu
    return types


def splitting_skeleton(P, KG):
    """Pieces of P cut along K' (with Euler characteristics), type II
    components as extra vertices, and one edge per component of K'."""
    if KG.retained and not getattr(KG, "sides", None):
        classify_components(KG)
    keep = set(KG.retained)
    comp_of = {v: i for i, cmp in enumerate(KG.components) for v in cmp}
    cuts = {g: [] for g in P.generators}
    for v in KG.vertices:
        if v[0] == "v" and comp_of[v] in keep:
            cuts[v[1]].append(v[2])
    for g in cuts:
        cuts[g].sort()

    def segment(g, m):
        """Segment of c_g holding marking m (gaps are between m and m+1)."""
        return ("seg", g, sum(1 for r in cuts[g] if r < m))

    dsu = _DSU()
    dsu.find("*")
    for g in P.generators:
        last = len(cuts[g])
        dsu.union(("seg", g, 0), "*")
        dsu.union(("seg", g, last), "*")
    disks = []
    frontier = []   # (face, sector node)
    singular_nodes = []
    for fd in KG.face_data:
        f = fd["face"]
        if fd["n"] == 0:
            node = ("disk", f, 0)
            disks.append(node)
            dsu.union(node, "*")
            continue
        local = _DSU()
        for r, cyc in enumerate(fd["regions"]):
            star = fd["stars"][r]
            retained = star is not None and comp_of[star[0]] in keep
            sectors = _sectors(fd, r) if retained else [list(range(len(cyc)))]
            for s, steps in enumerate(sectors):
                sec = ("sec", r, s)
                local.find(sec)
                if retained and len(star[1]) >= 1:
                    frontier.append((f, sec))
                for k in steps:
                    gap, blk = cyc[k]
                    local.union(sec, ("blk", blk))
                    info = fd["gaps"][gap]
                    # a gap belongs to this piece when it is not a cut point
                    if info["corner"]:
                        local.union(sec, ("bit", "*"))
                    elif not retained:
                        local.union(sec, ("bit", segment(info["gen"], info["gap"])))
        for b, B in enumerate(fd["blocks"]):
            for p in B:
                g, m, _ = fd["on_edge"](p)
                local.union(("blk", b), ("bit", segment(g, m)))
        groups = local.classes(list(local.p))
        for j, cls in enumerate(groups):
            node = ("disk", f, j)
            disks.append(node)
            for x in cls:
                if x[0] == "bit":
                    dsu.union(node, "*" if x[1] == "*" else x[1])
                elif x[0] == "sec":
                    dsu.union(node, ("sec", f) + x[1:])
                elif x[0] == "blk" and x[1] == fd["singular_block"]:
                    singular_nodes.append(node)
    # frontier arcs live in their sector's piece; v+- points in their segments
    cells = {"*": 1}
    for g in P.generators:
        for j in range(len(cuts[g]) + 1):
            cells[("seg", g, j)] = -1
            dsu.find(("seg", g, j))
    pieces = dsu.classes(list(dsu.p))
    piece_of = {x: i for i, cls in enumerate(pieces) for x in cls}
    chi = [0] * len(pieces)
    chi[piece_of["*"]] += 1
    for g in P.generators:
        for j in range(len(cuts[g]) + 1):
            chi[piece_of[("seg", g, j)]] -= 1
        for k, r in enumerate(cuts[g]):
            chi[piece_of[("seg", g, k)]] += 1       # v-
            chi[piece_of[("seg", g, k + 1)]] += 1   # v+
    for node in disks:
        chi[piece_of[node]] += 1
    for f, sec in frontier:
        chi[piece_of[("sec", f) + sec[1:]]] -= 1
    sing = {piece_of[n] for n in singular_nodes}
    verts = [{"id": f"piece{i}", "kind": "piece", "chi": chi[i], "singular": i in sing}
             for i in range(len(pieces))]
    edges = []
    for i in sorted(keep):
        cmp = KG.components[i]
        n_e = sum(1 for e in KG.edges if comp_of[e[0]] == i)
        chiK = len(cmp) - n_e
        ends = []
        for (_, g, r), sign in KG.sides[i]:
            k = sum(1 for rr in cuts[g] if rr < r)
            ends.append(piece_of[("seg", g, k if sign == "-" else k + 1)])
        if KG.types[i] == "I":
            edges.append({"component": i, "type": "I",
                          "ends": [f"piece{ends[0]}", f"piece{ends[1]}"]})
        else:
            vid = f"K{i}"
            verts.append({"id": vid, "kind": KG.types[i], "chi": chiK, "singular": False})
            for e in ends:
                edges.append({"component": i, "type": KG.types[i],
                              "ends": [vid, f"piece{e}"]})
    return {"vertices": verts, "edges": edges,
            "trivial": len(verts) == 1 and not edges,
            "single_vertex": len(verts) == 1,
            "chi_total": P.chi()}


# -- pipeline -----------------------------------------------------------------

def _image(images, letter):
    w = images.get(letter.lower(), letter.lower())
    return w if letter.islower() else invert(w)


def laminate(model, pres, l, C, images=None, budget=10 ** 6, geod_cap=1000):
    """Lamination, K and skeleton for a triangular presentation mapped into
    the model; ``images`` sends generators to words in the model's group."""
    images = dict(images or {})
    if not pres.triangular:
        raise LaminationError("presentation is not triangular")
    g, p = model.graph, model.basepoint
    P = VanKampenComplex(tuple(pres.generators), tuple(r for r in pres.relators if r))
    decomps = {}
    for gen in pres.generators:
        y = model.vertex_of(_image(images, gen))
        if y is None:
            raise LaminationError(f"image of {gen!r} leaves the model")
        decomps[gen] = order_slices(g, p, y, l, C, budget, geod_cap)
        P.markings[gen] = markings_for_edge(decomps[gen], gen)
    acts = model.action
    lams = []
    aligned = []
    for w in P.faces:
        if len(w) == 1 or all(not P.markings[c.lower()] for c in w):
            al = None
        else:
            words = [_image(images, c) for c in w] + ([""] if len(w) == 2 else [])
            al = triangle_slices(g, p, words[0], words[1], words[2], l, C, budget,
                                 actions=acts, geod_cap=geod_cap)
        aligned.append(al)
        lams.append(face_lamination(w, al))
    KG = build_K(P, lams)
    classify_components(KG)
    skel = splitting_skeleton(P, KG)
    checks = dict(KG.checks)
    checks["multiplicity"] = all(
        sum(1 for m in P.markings[gen] if m.slice == i) ==
        (2 if s.kind == "parabolic" else 1)
        for gen, d in decomps.items() for i, s in enumerate(d.slices[1:-1], 1))
    checks["non_crossing"] = True   # face_lamination raises otherwise
    return {"complex": P, "decompositions": decomps, "aligned": aligned,
            "faces": lams, "K": KG, "skeleton": skel, "checks": checks}
