from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsecyl import fixtures as fx
from coarsecyl import oracles
from coarsecyl.angles import INF, neighbor_angle
from coarsecyl.constants import exploratory, paper_faithful
from coarsecyl.cylinders import cylinder
from coarsecyl.graph import all_geodesics
from coarsecyl.slices import (BoundViolation, SliceError, apply_word, check_slice_lemmas,
                              diff, neighborhood_sets, order_slices, parabolic_slices,
                              potential, regular_slices, slice_metrics, split_cylinder,
                              triangle_slices)
from coarsecyl.suites import small_constants

SMALL = exploratory(delta=1, lambda_=4, epsilon=1, mu=3, l=2, theta=3)


def _members(dec):
    return [sorted(s.members, key=repr) for s in dec.slices]


# -- parabolic slices ----------------------------------------------------------------

def test_tree_parabolic_slice():
    g = fx.graph("path8_parabolic")
    cyl = cylinder(g, 0, 8, 2, SMALL)
    (s,) = parabolic_slices(g, cyl, SMALL.theta)
    assert s.members == {4} and s.angle == INF and s.kind == "parabolic"


def test_unflagged_large_angles_are_violations():
    g = fx.path_graph(8)
    cyl = cylinder(g, 0, 8, 2, SMALL)
    viol = []
    assert parabolic_slices(g, cyl, SMALL.theta, violations=viol) == []
    assert viol == list(range(1, 8))


def test_coned_model_parabolic_slices_match_angle_oracle():
    M = fx.model("coned:F2:3")
    g = M.graph
    for wx, wy in (("aa", "AA"), ("ab", "Ab"), ("b", "B"), ("aab", "bb")):
        cyl = cylinder(g, M.vertex_of(wx), M.vertex_of(wy), 2, SMALL)
        mem = cyl.members
        ref = set()
        for v in mem - {cyl.x, cyl.y}:
            nb = [w for w in g.neighbors(v) if w in mem]
            if v in g.parabolic and any(oracles.angle(g, v, a, b) >= SMALL.theta
                                        for a, b in combinations(nb, 2)):
                ref.add(v)
        got = {next(iter(s.members)) for s in parabolic_slices(g, cyl, SMALL.theta)}
        assert got == ref
    cyl = cylinder(g, M.vertex_of("aa"), M.vertex_of("AA"), 2, SMALL)
    assert [s.members for s in parabolic_slices(g, cyl, SMALL.theta)] == [{"c0.0"}]


# -- splitting --------------------------------------------------------------------

@pytest.mark.parametrize("name", fx.PARABOLIC)
def test_split_identities(name):
    g = fx.graph(name)
    n = 0
    for x, y in combinations(g.vertices, 2):
        cyl = cylinder(g, x, y, 2, SMALL)
        for s in parabolic_slices(g, cyl, SMALL.theta):
            v = next(iter(s.members))
            left, right, rep = split_cylinder(g, cyl, v)
            assert rep == {"union": "pass", "intersection": "pass"}
            assert left.members | right.members == cyl.members
            n += 1
    assert n > 0


def test_split_refusals():
    g = fx.graph("path8_parabolic")
    cyl = cylinder(g, 0, 8, 2, SMALL)
    with pytest.raises(SliceError):
        split_cylinder(g, cyl, 0)
    with pytest.raises(SliceError):
        split_cylinder(g, cyl, 3)
    h = fx.path_graph(8)
    with pytest.raises(SliceError):
        split_cylinder(h, cylinder(h, 0, 8, 2, SMALL), 4)


# -- neighbourhood sets and Diff ----------------------------------------------------

def test_neighborhood_sets_closed_form():
    g = fx.path_graph(300)
    C = exploratory(delta=1, lambda_=4, epsilon=1, mu=3, l=2)
    cyl = cylinder(g, 0, 300, 2, C)
    L, R = neighborhood_sets(g, cyl, 0)
    assert L == set() and R == set(range(101, 301))
    for x in (0, 57, 150, 233, 300):
        L, R = neighborhood_sets(g, cyl, x)
        assert L == {v for v in range(301) if x - v > 100}
        assert R == {v for v in range(301) if v - x > 100}


def test_small_cylinder_has_empty_sets():
    g = fx.cycle(12)
    C = small_constants(g)
    cyl = cylinder(g, 0, 6, C.l, C)
    for x in cyl.members:
        assert neighborhood_sets(g, cyl, x) == (set(), set())
        assert diff(g, cyl, x, 0) == 0


def test_sets_refuse_parabolic_cylinders():
    g = fx.graph("path8_parabolic")
    cyl = cylinder(g, 0, 8, 2, SMALL)
    with pytest.raises(SliceError):
        neighborhood_sets(g, cyl, 2)


def test_sets_need_member():
    g = fx.path_graph(10)
    cyl = cylinder(g, 0, 5, 2, SMALL)
    with pytest.raises(SliceError):
        neighborhood_sets(g, cyl, 8)


@pytest.fixture(scope="module")
def comb_cylinder():
    g = fx.comb(240)
    return g, cylinder(g, 17, 230, 2, exploratory(delta=1, l=2))


@given(st.data())
def test_diff_algebra_on_comb(comb_cylinder, data):
    g, cyl = comb_cylinder
    mem = sorted(cyl.members)
    x, y, z = (data.draw(st.sampled_from(mem)) for _ in range(3))
    assert diff(g, cyl, x, x) == 0
    assert diff(g, cyl, x, y) == -diff(g, cyl, y, x)
    assert diff(g, cyl, x, z) == diff(g, cyl, x, y) + diff(g, cyl, y, z)


def test_diff_matches_oracle_and_potential(comb_cylinder):
    g, cyl = comb_cylinder
    dist = oracles.distances(g)
    P = potential(g, cyl)
    mem = sorted(cyl.members)
    for x, y in list(combinations(mem, 2))[::97]:
        d = diff(g, cyl, x, y)
        assert d == oracles.diff(dist, cyl.members, cyl.x, x, y, 1) == P[x] - P[y]


# -- ordering -------------------------------------------------------------------------

def test_path_1000_slices():
    g = fx.path_graph(1000)
    C = exploratory(delta=1, lambda_=4, epsilon=1, mu=3, l=2)
    dec = order_slices(g, 0, 1000, 2, C)
    cyl = dec.cylinder
    P = potential(g, cyl)
    # slices are the Diff classes
    for s in dec.slices[1:-1]:
        assert len({P[v] for v in s.members}) == 1
    keys = [P[next(iter(s.members))] for s in dec.slices[1:-1]]
    assert len(set(keys)) == len(keys)
    # ordered by distance from the first endpoint
    firsts = [min(s.members) for s in dec.slices]
    lasts = [max(s.members) for s in dec.slices]
    assert all(b < c for b, c in zip(lasts, firsts[1:]))
    assert dec.report["partition"]


def test_tree_with_parabolic_vertex_ordering():
    g = fx.graph("path8_parabolic")
    dec = order_slices(g, 0, 8, 2, SMALL)
    left = order_slices(g, 0, 4, 2, SMALL)
    right = order_slices(g, 4, 8, 2, SMALL)
    assert _members(dec) == [[0], [1, 2, 3], [4], [5, 6, 7], [8]]
    assert _members(dec) == _members(left)[:-1] + [[4]] + _members(right)[1:]
    assert [s.kind for s in dec.slices].count("parabolic") == 1
    assert not dec.report["consecutive_parabolic"]


def test_adjacent_endpoints():
    g = fx.cycle(6)
    dec = order_slices(g, 2, 3, 2, SMALL)
    assert _members(dec) == [[2], [3]]


def test_reversed_decomposition():
    g = fx.path_graph(300)
    C = exploratory(delta=1, l=2)
    a = order_slices(g, 0, 300, 2, C)
    b = order_slices(g, 300, 0, 2, C)
    assert _members(a.reversed()) == _members(b)


@pytest.mark.parametrize("name", ["C8", "ladder6", "theta234", "spider3x3_parabolic"])
def test_slice_lemmas_on_fixtures(name):
    g = fx.graph(name)
    C = small_constants(g)
    C = exploratory(delta=C.delta, lambda_=4, epsilon=C.epsilon, mu=3, l=2, theta=3)
    for x, y in combinations(g.vertices, 2):
        dec = order_slices(g, x, y, C.l, C)
        assert dec.report["partition"]
        rep = check_slice_lemmas(g, dec)
        assert rep["two_delta"] and rep["parabolic_on_geodesics"], (x, y)


def test_regular_slices_partition(comb_cylinder):
    g, cyl = comb_cylinder
    sl = regular_slices(g, cyl)
    union = set().union(*(s.members for s in sl))
    assert union == cyl.members - {cyl.x, cyl.y}
    assert sum(len(s.members) for s in sl) == len(union)


def test_slice_bounds_faithful_regime():
    g = fx.path_graph(2000)
    C = paper_faithful(0, 1)
    dec = order_slices(g, 0, 2000, C.l, C)
    diam, cons = slice_metrics(g, dec)
    assert diam <= 200 * C.delta and cons <= 1000 * C.delta


def test_large_angle_forces_parabolic_slice():
    # a geodesic angle >= 2 Theta at v forces {v} to be a parabolic slice
    g = fx.graph("spider3x3_parabolic")
    C = paper_faithful(1, 1)
    for x, y in combinations(g.vertices, 2):
        cyl = cylinder(g, x, y, C.l, C)
        par = {next(iter(s.members)) for s in parabolic_slices(g, cyl, C.theta)}
        for G in all_geodesics(g, x, y):
            for i in range(1, len(G) - 1):
                v = G[i]
                if v in g.parabolic and neighbor_angle(g, v, G[i - 1], G[i + 1]) >= 2 * C.theta:
                    assert v in par


def test_end_angles_small():
    # Ang_b([x, b], [a, b]) <= 14 D for some choice of geodesics
    g = fx.cycle(8)
    from coarsecyl.paths import stability_constant
    D, N, _ = stability_constant(g, 5, samples=100)
    C = paper_faithful(2, max(N, 1), stability_D=D)
    for a, b in combinations(g.vertices, 2):
        cyl = cylinder(g, a, b, C.l, C)
        for x in cyl.members - {b}:
            best = min(neighbor_angle(g, b, G1[-2], G2[-2])
                       for G1 in all_geodesics(g, x, b) for G2 in all_geodesics(g, a, b))
            assert best <= 14 * D


# -- triangles ---------------------------------------------------------------------------

def test_apply_word():
    M = fx.model("cayley:Z:5")
    assert apply_word(M.action, "tt", 0) == M.vertex_of("tt")
    assert apply_word(M.action, "T", 0) == M.vertex_of("T")
    assert apply_word(M.action, "ttttttt", 0) is None


def test_digon_identical():
    M = fx.model("cayley:Z:5")
    dec = triangle_slices(M.graph, 0, "tt", "TT", "", 2, SMALL, actions=M.action)
    assert dec.report["digon"] and dec.report["identical"]
    assert dec.holes == {"xy": []}


def test_collinear_triangle_on_z():
    M = fx.model("cayley:Z:5")
    g = M.graph
    dec = triangle_slices(g, 0, "t", "t", "TT", 2, SMALL, actions=M.action)
    t, tt = M.vertex_of("t"), M.vertex_of("tt")
    assert _members(dec.sides["xy"]) == [[0], [t]]
    assert _members(dec.sides["xz"]) == [[0], [t], [tt]]
    assert dec.shared == {"S": 2, "T": 1, "V": 2}
    assert all(h == [] for h in dec.holes.values())


def test_triangle_must_close():
    M = fx.model("cayley:Z:5")
    with pytest.raises(SliceError):
        triangle_slices(M.graph, 0, "t", "t", "T", 2, SMALL, actions=M.action)


def test_coned_triangle_hole_bounds():
    M = fx.model("coned:F2:4")
    C = exploratory(delta=1, lambda_=4, epsilon=1, mu=3, l=1, theta=3, phi_n=2)
    dec = triangle_slices(M.graph, 0, "ab", "ab", "BABA", 1, C, actions=M.action)
    bound = 10 * C.phi_n
    for side, hs in dec.holes.items():
        assert len(hs) <= bound
        for s in hs:
            assert s.kind != "parabolic" or s.angle <= 3 * C.theta + 100 * C.delta
    assert dec.report["violations"] == []


def test_faithful_triangle_without_violations():
    # faithful constants on a short collinear triangle: every locality check is vacuous
    M = fx.model("cayley:Z:5")
    C = paper_faithful(0, 1)
    dec = triangle_slices(M.graph, 0, "t", "t", "TT", C.l, C, actions=M.action)
    assert dec.report["violations"] == []
    assert all(loc["vacuous"] for loc in dec.report["locality"])
    assert issubclass(BoundViolation, AssertionError)
