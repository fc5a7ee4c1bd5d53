"""Group presentations and the finite graph models built from them.

Words are strings over single-letter generators; a capital letter is the
inverse of its lower-case generator.
"""
import re
import string
import warnings
from collections import deque
from dataclasses import dataclass, field

from .angles import INF, max_angle
from .graph import BudgetExceeded, FineGraph, all_geodesics, sort_ids


class PresentationError(ValueError):
    pass


def invert(word):
    return word[::-1].swapcase()


def free_reduce(word):
    out = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_reduce(word):
    w = free_reduce(word)
    while len(w) > 1 and w[0] == w[-1].swapcase():
        w = w[1:-1]
    return w


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()
    peripherals: tuple = ()   # tuple of tuples of words

    def __post_init__(self):
        for g in self.generators:
            if len(g) != 1 or not g.islower():
                raise PresentationError(f"generator {g!r} must be one lower-case letter")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("repeated generator")
        gens = set(self.generators)
        for w in list(self.relators) + [h for H in self.peripherals for h in H]:
            for ch in w:
                if ch.lower() not in gens:
                    raise PresentationError(f"letter {ch!r} in {w!r} is not a generator")
        object.__setattr__(self, "relators",
                           tuple(free_reduce(r) for r in self.relators))

    @property
    def letters(self):
        return tuple(self.generators) + tuple(g.upper() for g in self.generators)

    @property
    def triangular(self):
        return all(len(r) <= 3 for r in self.relators)

    def to_text(self):
        per = ", ".join("[" + " ".join(H) + "]" for H in self.peripherals)
        return (f"gens: {' '.join(self.generators)}; rels: {' '.join(self.relators)}; "
                f"peripherals: {per}")

    def to_dict(self):
        return {"generators": list(self.generators), "relators": list(self.relators),
                "peripherals": [list(H) for H in self.peripherals]}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["generators"]), tuple(d.get("relators", ())),
                   tuple(tuple(H) for H in d.get("peripherals", ())))


def parse_presentation(text):
    """Parse ``gens: a b; rels: aBAb; peripherals: [a], [b]``."""
    fields = {}
    for part in text.replace("\n", ";").split(";"):
        part = part.strip()
        if not part or part.startswith("#"):
            continue
        if ":" not in part:
            raise PresentationError(f"cannot parse {part!r}")
        key, val = part.split(":", 1)
        key = key.strip().lower()
        if key not in ("gens", "rels", "peripherals"):
            raise PresentationError(f"unknown field {key!r}")
        fields[key] = val.strip()
    if "gens" not in fields:
        raise PresentationError("missing 'gens'")
    gens = tuple(fields["gens"].split())
    rels = tuple(w for w in re.split(r"[\s,]+", fields.get("rels", "")) if w)
    per = tuple(tuple(w for w in re.split(r"[\s,]+", grp) if w)
                for grp in re.findall(r"\[([^\]]*)\]", fields.get("peripherals", "")))
    return Presentation(gens, rels, per)


def triangularize(pres):
    """Equivalent presentation whose relators have length <= 3.

    A relator x1 x2 ... xk with k > 3 is cut as x1 x2 T and t x3 ... xk for
    a fresh generator t, repeatedly.  Empty relators are dropped.
    """
    used = set(pres.generators)
    fresh = (c for c in string.ascii_lowercase if c not in used)
    gens = list(pres.generators)
    rels = []
    for r in pres.relators:
        if not r:
            warnings.warn("empty relator dropped")
            continue
        while len(r) > 3:
            try:
                t = next(fresh)
            except StopIteration:
                raise PresentationError("ran out of generator letters") from None
            gens.append(t)
            rels.append(r[:2] + t.upper())
            r = t + r[2:]
        rels.append(r)
    return Presentation(tuple(gens), tuple(rels), pres.peripherals)


# -- normal forms -------------------------------------------------------------

def _echelon(rows, k):
    rows = [list(r) for r in rows if any(r)]
    out = []
    for col in range(k):
        nz = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv, keep = nz[0], [nz[0]]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col] != 0:
                    keep.append(r)
                elif any(r):
                    rest.append(r)
            nz = keep
        if nz:
            piv = nz[0] if nz[0][col] > 0 else [-a for a in nz[0]]
            out.append((col, piv))
        rows = rest
    return out


class _Abelian:
    """Z^k modulo the lattice spanned by the relator exponent vectors."""

    def __init__(self, gens, rels, alias):
        self.gens = gens
        self.pos = {g: i for i, g in enumerate(gens)}
        self.alias = alias      # letter -> (class generator, sign)
        vecs = []
        for r in rels:
            v = [0] * len(gens)
            for ch in r:
                g, s = self._letter(ch)
                v[self.pos[g]] += s
            vecs.append(v)
        self.basis = _echelon(vecs, len(gens))
        self.identity = tuple([0] * len(gens))

    def _letter(self, ch):
        g, s = self.alias[ch.lower()]
        return g, (s if ch.islower() else -s)

    def reduce(self, v):
        v = list(v)
        for col, row in self.basis:
            q = v[col] // row[col]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    def mul(self, e, ch):
        g, s = self._letter(ch)
        v = list(e)
        v[self.pos[g]] += s
        return self.reduce(v)


class _Finite:
    """A finite factor, enumerated by Todd-Coxeter over the trivial subgroup."""

    def __init__(self, gens, rels, budget):
        from sympy.combinatorics.fp_groups import FpGroup
        from sympy.combinatorics.free_groups import free_group
        F, *syms = free_group(" ".join(gens))
        sym = dict(zip(gens, syms))

        def conv(w):
            out = F.identity
            for ch in w:
                out = out * (sym[ch] if ch.islower() else sym[ch.lower()] ** -1)
            return out
        G = FpGroup(F, [conv(r) for r in rels])
        try:
            C = G.coset_enumeration([], max_cosets=budget)
        except ValueError as exc:
            raise BudgetExceeded(f"coset enumeration exceeded {budget} cosets") from exc
        C.compress()
        C.standardize()
        self.table = C.table
        self.col = {}
        for ch in gens:
            self.col[ch] = C.A_dict[sym[ch]]
            self.col[ch.upper()] = C.A_dict[sym[ch] ** -1]
        self.identity = 0
        self.order = len(C.table)

    def mul(self, e, ch):
        return self.table[e][self.col[ch]]


def _is_commutator(w):
    w = cyclic_reduce(w)
    if len(w) != 4 or len(w) != len(free_reduce(w)):
        return None
    gens = sorted({c.lower() for c in w})
    if len(gens) != 2:
        return None
    for g in gens:
        if w.count(g) != 1 or w.count(g.upper()) != 1:
            return None
    return tuple(gens)


class Group:
    """Normal forms for free products of abelian and finite factors.

    Factors are the classes of generators linked by relators.  A factor is
    abelian when, after identifying generators related by two-letter
    relators, every pair of its generators has a commutator relator;
    otherwise it must be finite and is enumerated with a coset budget.
    """

    def __init__(self, pres, budget=10 ** 5):
        self.pres = pres
        parent = {g: g for g in pres.generators}

        def find(g):
            while parent[g] != g:
                parent[g] = parent[parent[g]]
                g = parent[g]
            return g
        for r in pres.relators:
            ls = [c.lower() for c in r]
            for c in ls[1:]:
                parent[find(c)] = find(ls[0])
        comps = {}
        for g in pres.generators:
            comps.setdefault(find(g), []).append(g)
        self.factors = []
        self.factor_of = {}
        for gens in sorted(comps.values()):
            rels = [r for r in pres.relators if r and r[0].lower() in gens]
            fac = self._abelian(gens, rels)
            if fac is None:
                fac = _Finite(gens, rels, budget)
            k = len(self.factors)
            self.factors.append(fac)
            for g in gens:
                self.factor_of[g] = k
        self.identity = ()

    @staticmethod
    def _abelian(gens, rels):
        alias = {g: (g, 1) for g in gens}

        def root(g):
            s = 1
            while alias[g][0] != g:
                g, t = alias[g]
                s *= t
            return g, s
        for r in rels:
            w = cyclic_reduce(r)
            if len(w) == 2 and w[0].lower() != w[1].lower():
                (a, sa), (b, sb) = root(w[0].lower()), root(w[1].lower())
                sa *= 1 if w[0].islower() else -1
                sb *= 1 if w[1].islower() else -1
                if a != b:   # a^sa b^sb = 1  =>  b = a^(-sa*sb)
                    alias[b] = (a, -sa * sb)
        full = {g: root(g) for g in gens}
        classes = sorted({v[0] for v in full.values()})
        comm = set()
        for r in rels:
            pair = _is_commutator(r)
            if pair:
                a, b = full[pair[0]][0], full[pair[1]][0]
                comm.add(frozenset((a, b)))
        for i, a in enumerate(classes):
            for b in classes[i + 1:]:
                if frozenset((a, b)) not in comm:
                    return None
        return _Abelian(classes, rels, full)

    def mul(self, e, ch):
        k = self.factor_of[ch.lower()]
        fac = self.factors[k]
        if e and e[-1][0] == k:
            x = fac.mul(e[-1][1], ch)
            return e[:-1] if x == fac.identity else e[:-1] + ((k, x),)
        x = fac.mul(fac.identity, ch)
        return e if x == fac.identity else e + ((k, x),)

    def nf(self, word, start=()):
        e = start
        for ch in word:
            e = self.mul(e, ch)
        return e


# -- graph models ---------------------------------------------------------------

@dataclass
class GraphModel:
    graph: FineGraph
    basepoint: object
    truncation_radius: int
    boundary_vertices: frozenset
    action: dict                 # generator -> partial map
    labels: dict                 # vertex -> word (orbit) or cone descriptor
    word_length: dict = field(default_factory=dict)
    presentation: Presentation = None
    cones: dict = field(default_factory=dict)
    group: object = field(default=None, repr=False, compare=False)

    def to_dict(self):
        g = self.graph.to_dict()
        g.pop("action", None)
        return {"graph": g, "basepoint": self.basepoint,
                "truncation_radius": self.truncation_radius,
                "boundary": sort_ids(self.boundary_vertices),
                "action": {s: [[u, v] for u, v in sorted(m.items())]
                           for s, m in sorted(self.action.items())},
                "labels": [[v, self.labels[v]] for v in sort_ids(self.labels)],
                "word_length": [[v, n] for v, n in sorted(self.word_length.items())],
                "presentation": self.presentation.to_dict() if self.presentation else None,
                "cones": {c: info for c, info in sorted(self.cones.items())}}

    @classmethod
    def from_dict(cls, d):
        pres = Presentation.from_dict(d["presentation"]) if d.get("presentation") else None
        return cls(FineGraph.from_dict(d["graph"]), d["basepoint"], d["truncation_radius"],
                   frozenset(d["boundary"]),
                   {s: {u: v for u, v in pairs} for s, pairs in d["action"].items()},
                   {v: w for v, w in d["labels"]},
                   {v: n for v, n in d["word_length"]}, pres, dict(d.get("cones", {})))

    def vertex_of(self, word):
        """Vertex of the element represented by ``word``, or None outside."""
        if self.group is None:
            self.group = Group(self.presentation)
        e = self.group.nf(word)
        return self._by_elem().get(e)

    def _by_elem(self):
        if not hasattr(self, "_elem_index"):
            G = self.group
            self._elem_index = {G.nf(w): v for v, w in self.labels.items()
                                if v in self.word_length}
        return self._elem_index


def cayley_ball(pres, R, budget=10 ** 5):
    """Ball of radius R about the identity in the Cayley graph.

    Vertices are integers in breadth-first order (0 is the identity).  The
    action of a generator s is left multiplication, defined on v when s v
    stays in the ball.
    """
    G = Group(pres, budget)
    letters = pres.letters
    index = {G.identity: 0}
    words = [""]
    depth = [0]
    queue = deque([G.identity])
    elems = [G.identity]
    while queue:
        e = queue.popleft()
        i = index[e]
        if depth[i] == R:
            continue
        for ch in letters:
            f = G.mul(e, ch)
            if f not in index:
                if len(elems) >= budget:
                    raise BudgetExceeded(f"ball has more than {budget} elements")
                index[f] = len(elems)
                elems.append(f)
                words.append(words[i] + ch)
                depth.append(depth[i] + 1)
                queue.append(f)
    edges = set()
    boundary = set()
    for i, e in enumerate(elems):
        for ch in letters:
            j = index.get(G.mul(e, ch))
            if j is None:
                boundary.add(i)
            elif j != i and ch.islower():
                edges.add((min(i, j), max(i, j)))
    action = {}
    for s in pres.generators:
        m = {}
        for i, w in enumerate(words):
            j = index.get(G.nf(s + w))
            if j is not None:
                m[i] = j
        action[s] = m
    g = FineGraph(range(len(elems)), sorted(edges))
    model = GraphModel(g, 0, R, frozenset(boundary), action,
                       dict(enumerate(words)), dict(enumerate(depth)), pres, {}, G)
    model._elem_index = dict(index)
    return model


def coned_off(model, peripherals=None):
    """Add a parabolic cone vertex per peripheral coset met by the ball.

    Cosets are the classes of the links v ~ v h for the subgroup generators
    h.  A coset touching the boundary (or with a link leaving the ball) is
    marked truncated and its cone vertex joins the boundary set.
    """
    pres = model.presentation
    per = tuple(peripherals) if peripherals is not None else pres.peripherals
    if not per:
        return model
    G = model.group or Group(pres)
    byel = model._by_elem() if model.group else {G.nf(w): v for v, w in model.labels.items()}
    orbit = sort_ids(model.word_length)
    g0 = model.graph
    edges = list(g0.edges)
    verts = list(g0.vertices)
    boundary = set(model.boundary_vertices)
    cones = {}
    comp_of = {}
    labels = dict(model.labels)
    for k, H in enumerate(per):
        parent = {v: v for v in orbit}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v
        leaks = set()
        for v in orbit:
            e = G.nf(model.labels[v])
            for h in H:
                for hw in (h, invert(h)):
                    w = byel.get(G.nf(hw, e))
                    if w is None:
                        leaks.add(v)
                    else:
                        a, b = find(v), find(w)
                        if a != b:
                            parent[max(a, b)] = min(a, b)
        groups = {}
        for v in orbit:
            groups.setdefault(find(v), []).append(v)
        for j, root in enumerate(sorted(groups)):
            mem = groups[root]
            cid = f"c{k}.{j}"
            trunc = any(v in boundary or v in leaks for v in mem)
            cones[cid] = {"peripheral": k, "members": mem, "truncated": trunc}
            labels[cid] = f"{model.labels[mem[0]]}<{','.join(H)}>"
            verts.append(cid)
            edges += [(cid, v) for v in mem]
            for v in mem:
                comp_of[(k, v)] = cid
    action = {s: dict(m) for s, m in model.action.items()}
    for s, m in model.action.items():
        for cid, info in cones.items():
            img = [m.get(v) for v in info["members"]]
            if any(w is None for w in img):
                continue
            tgt = comp_of[(info["peripheral"], img[0])]
            if set(img) == set(cones[tgt]["members"]):
                action[s][cid] = tgt
    g = FineGraph(verts, edges, parabolic=list(cones))
    return GraphModel(g, model.basepoint, model.truncation_radius, frozenset(boundary),
                      action, labels, dict(model.word_length), pres, cones, G)


def check_word_bound(model, gamma, geod_cap=1000):
    """|gamma p - p| (MaxAng([p, gamma p]) + 1) >= |gamma| on every geodesic.

    Returns ``"true"``, ``"false"`` or ``"inconclusive"`` (target outside the
    ball, a geodesic meeting the boundary, or a truncated enumeration).  An
    infinite angle satisfies the bound.
    """
    g, p = model.graph, model.basepoint
    v = model.vertex_of(gamma)
    if v is None:
        return "inconclusive"
    n = model.word_length[v]
    if v == p:
        return "true"
    geos = all_geodesics(g, p, v, geod_cap)
    if geos.truncated:
        return "inconclusive"
    d = len(geos[0]) - 1
    for G in geos:
        if set(G) & model.boundary_vertices:
            return "inconclusive"
        A = max_angle(g, G)
        if A != INF and d * (A + 1) < n:
            return "false"
    return "true"


def subgroup_orbit(model, gens):
    """Classify the orbit of the base point under the subgroup generated by
    ``gens``: ``"finite"`` if it closes up inside the ball, ``"parabolic"``
    if it escapes but every generator fixes a common cone vertex, else
    ``"inconclusive"``."""
    G = model.group or Group(model.presentation)
    byel = model._by_elem()
    start = model.basepoint
    seen, queue, escaped = {start}, deque([start]), False
    while queue:
        v = queue.popleft()
        for h in gens:
            for hw in (h, invert(h)):
                w = byel.get(G.nf(hw + model.labels[v]))
                if w is None or w in model.boundary_vertices:
                    escaped = True
                    continue
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    if not escaped:
        return "finite", sort_ids(seen)
    for cid in sort_ids(model.cones):
        fixed = True
        for h in gens:
            for v in model.cones[cid]["members"]:
                w = byel.get(G.nf(h + model.labels[v]))
                if w is not None and w not in model.cones[cid]["members"]:
                    fixed = False
        if fixed and start in model.cones[cid]["members"]:
            return "parabolic", [cid]
    return "inconclusive", sort_ids(seen)
