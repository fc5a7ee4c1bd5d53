"""Bundled desk-scale fixtures.

Graph fixtures are small :class:`FineGraph` instances (trees, cycles, theta
graphs, ladders, Cayley balls).  Model fixtures keep the partial group action
of a truncated Cayley graph.  Lamination fixtures pair a triangular
presentation with images in a model.
"""
from functools import lru_cache

from .constants import exploratory
from .graph import FineGraph
from .presentations import cayley_ball, coned_off, parse_presentation


def path_graph(n, parabolic=()):
    """Path 0 - 1 - ... - n."""
    return FineGraph(range(n + 1), [(i, i + 1) for i in range(n)], parabolic=parabolic)


def comb(n, every=10, tooth=3):
    """Path 0..n with a path of length ``tooth`` hanging off every
    ``every``-th vertex."""
    V, E = list(range(n + 1)), [(i, i + 1) for i in range(n)]
    nxt = n + 1
    for i in range(0, n + 1, every):
        prev = i
        for _ in range(tooth):
            V.append(nxt)
            E.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return FineGraph(V, E)


def star(k):
    return FineGraph(range(k + 1), [(0, i) for i in range(1, k + 1)])


def binary_tree(depth):
    n = 2 ** (depth + 1) - 1
    return FineGraph(range(n), [((i - 1) // 2, i) for i in range(1, n)])


def spider(legs, length, parabolic_center=False):
    V, E = [0], []
    for a in range(legs):
        prev = 0
        for j in range(1, length + 1):
            v = a * length + j
            V.append(v)
            E.append((prev, v))
            prev = v
    return FineGraph(V, E, parabolic=[0] if parabolic_center else ())


def cycle(n):
    """C_n with rotation ``r`` and reflection ``s``."""
    act = {"r": {i: (i + 1) % n for i in range(n)},
           "s": {i: (-i) % n for i in range(n)}}
    return FineGraph(range(n), [(i, (i + 1) % n) for i in range(n)], action=act)


def theta(a, b, c):
    """Two poles joined by three internally disjoint paths of lengths a, b, c."""
    if sorted((a, b, c))[1] < 2:
        raise ValueError("theta graph would have a multi-edge")
    V, E = ["N", "S"], []
    for k, m in enumerate((a, b, c)):
        prev = "N"
        for j in range(1, m):
            v = f"p{k}.{j}"
            V.append(v)
            E.append((prev, v))
            prev = v
        E.append((prev, "S"))
    return FineGraph(V, E)


def ladder(n):
    """2 x n grid; top row 0..n-1, bottom row n..2n-1.

    ``s`` swaps the rows, ``r`` reverses them.
    """
    E = [(i, i + 1) for i in range(n - 1)]
    E += [(n + i, n + i + 1) for i in range(n - 1)]
    E += [(i, n + i) for i in range(n)]
    act = {"s": {**{i: n + i for i in range(n)}, **{n + i: i for i in range(n)}},
           "r": {**{i: n - 1 - i for i in range(n)},
                 **{n + i: 2 * n - 1 - i for i in range(n)}}}
    return FineGraph(range(2 * n), E, action=act)


PRESENTATIONS = {
    "Z": "gens: t",
    "Z6": "gens: t; rels: tttttt",
    "F2": "gens: a b; peripherals: [a], [b]",
}


@lru_cache(maxsize=None)
def model(name):
    """Cayley-ball models, keyed as ``cayley:<group>:<R>`` or
    ``coned:<group>:<R>``."""
    kind, grp, R = name.split(":")
    M = cayley_ball(parse_presentation(PRESENTATIONS[grp]), int(R))
    if kind == "coned":
        M = coned_off(M)
    elif kind != "cayley":
        raise KeyError(name)
    return M


MODELS = ("cayley:Z:5", "cayley:Z6:3", "cayley:F2:4", "coned:F2:3", "coned:F2:4",
          "coned:F2:5")


_GRAPHS = {
    "path2": lambda: path_graph(2),
    "path6": lambda: path_graph(6),
    "path10": lambda: path_graph(10),
    "star5": lambda: star(5),
    "bintree3": lambda: binary_tree(3),
    "spider3x3": lambda: spider(3, 3),
    "spider3x3_parabolic": lambda: spider(3, 3, parabolic_center=True),
    "path8_parabolic": lambda: path_graph(8, parabolic=[4]),
    **{f"C{n}": (lambda n=n: cycle(n)) for n in range(3, 13)},
    "theta222": lambda: theta(2, 2, 2),
    "theta133": lambda: theta(1, 3, 3),
    "theta234": lambda: theta(2, 3, 4),
    "ladder4": lambda: ladder(4),
    "ladder6": lambda: ladder(6),
    **{m: (lambda m=m: model(m).graph) for m in MODELS},
}

TREES = ("path2", "path6", "path10", "star5", "bintree3", "spider3x3",
         "spider3x3_parabolic", "path8_parabolic")
CYCLES = tuple(f"C{n}" for n in range(3, 13))
THETAS = ("theta222", "theta133", "theta234")
LADDERS = ("ladder4", "ladder6")
# fixtures with a flagged parabolic vertex inside a geodesic
PARABOLIC = ("path8_parabolic", "spider3x3_parabolic")


def names():
    return tuple(_GRAPHS)


@lru_cache(maxsize=None)
def graph(name):
    return _GRAPHS[name]()


def boundary_of(name):
    """Boundary vertices for model-derived graphs, empty otherwise."""
    return model(name).boundary_vertices if name in MODELS else frozenset()


def actions_of(name):
    """Generator maps: full permutations for finite fixtures, partial maps
    for truncated Cayley balls."""
    if name in MODELS:
        return model(name).action
    return graph(name).action or {}


def lamination_constants():
    return exploratory(delta=1, lambda_=4, epsilon=1, mu=3, l=2)


# name -> (model, presentation, generator images, l)
_DIGON = "gens: a b; rels: aB"
_TRI = "gens: x y z; rels: xyZ"
LAMINATIONS = {
    "digon_t3": ("cayley:Z:5", _DIGON, {"a": "ttt", "b": "ttt"}, 2),
    "digon_t150": ("cayley:Z:150", _DIGON, {"a": "t" * 150, "b": "t" * 150}, 2),
    "digon_f2_parabolic": ("coned:F2:5", _DIGON, {"a": "aab", "b": "aab"}, 1),
    "triangle_z": ("cayley:Z:150", "gens: a b c; rels: abC",
                   {"a": "t" * 60, "b": "t" * 90, "c": "t" * 150}, 2),
    "triangle_f2": ("coned:F2:5", _TRI, {"x": "ab", "y": "ab", "z": "abab"}, 1),
    "tripod_f2": ("coned:F2:5", _TRI, {"x": "aa", "y": "aaa", "z": "aaaaa"}, 1),
    "triangle_f2_branched": ("coned:F2:5", _TRI, {"x": "aab", "y": "Baa", "z": "aaaa"}, 1),
    # degenerate corner: the xz side passes through the vertex y
    "triangle_f2_parabolic": ("coned:F2:5", _TRI, {"x": "aaa", "y": "b", "z": "aaab"}, 1),
}
# digons whose two sides have identical images
FULL_COINCIDENCE = ("digon_t3", "digon_t150", "digon_f2_parabolic")


def lamination_fixture(name):
    mname, text, images, l = LAMINATIONS[name]
    return model(mname), parse_presentation(text), dict(images), l
