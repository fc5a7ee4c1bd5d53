import math

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coarsecyl import oracles
from coarsecyl.angles import (INF, ModelError, angle_table, channels, circuits_through,
                              cone, conical_neighborhood, edge_angle, fineness_report,
                              max_angle, neighbor_angle, rho_constant)
from coarsecyl.fixtures import binary_tree, cycle, graph, path_graph, star, theta
from coarsecyl.graph import BudgetExceeded, FineGraph, GraphError, all_geodesics

from conftest import connected_graphs, trees


def test_tree_angle_infinite():
    g = binary_tree(2)
    assert edge_angle(g, 1, (0, 1), (1, 3)) == INF
    assert edge_angle(g, 1, (1, 3), (1, 3)) == 0


def test_c6_angle():
    g = cycle(6)
    assert edge_angle(g, 0, (0, 1), (5, 0)) == 4 == oracles.angle(g, 0, 1, 5)


def test_edge_angle_needs_incident_edges():
    with pytest.raises(GraphError):
        edge_angle(cycle(6), 0, (1, 2), (0, 1))


@given(connected_graphs())
def test_angles_match_oracle(g):
    for v in g.vertices:
        for (a, b), ang in angle_table(g, v).items():
            assert ang == oracles.angle(g, v, a, b)


@given(connected_graphs(), st.data())
def test_angle_triangle_inequality(g, data):
    v = data.draw(st.sampled_from(g.vertices))
    nb = g.neighbors(v)
    a, b, c = (data.draw(st.sampled_from(nb)) for _ in range(3))
    A = lambda p, q: neighbor_angle(g, v, p, q)  # noqa: E731
    assert A(a, c) <= A(a, b) + A(b, c)


def test_capped_angle_reports_inf_above_cap():
    g = cycle(8)
    assert neighbor_angle(g, 0, 1, 7) == 6
    assert neighbor_angle(g, 0, 1, 7, cap=5) == INF
    assert neighbor_angle(g, 0, 1, 7, cap=6) == 6


# -- max_angle -----------------------------------------------------------------

def test_max_angle_examples():
    assert max_angle(cycle(6), (0, 1)) == 0
    assert max_angle(path_graph(4), (0, 1, 2)) == INF
    g = cycle(6)
    assert max_angle(g, (0, 1, 2)) == 4 == oracles.max_angle(g, (0, 1, 2))


def test_max_angle_rejects_non_simple():
    with pytest.raises(GraphError):
        max_angle(cycle(6), (0, 1, 0))


@given(connected_graphs(), st.data())
def test_max_angle_matches_oracle(g, data):
    u, v = (data.draw(st.sampled_from(g.vertices)) for _ in range(2))
    for G in all_geodesics(g, u, v, 5):
        assert max_angle(g, G) == oracles.max_angle(g, G)


# -- cones ---------------------------------------------------------------------

def test_cone_radius_zero():
    g = cycle(6)
    assert cone(g, (0, 1), 0, 0, 10) == {0}


@given(trees(min_n=3), st.integers(1, 4), st.integers(0, 6), st.data())
def test_tree_cone_is_edge(g, d, th, data):
    a, b = data.draw(st.sampled_from(g.edges))
    assert cone(g, (a, b), a, d, th) == {a, b}


@pytest.mark.parametrize("th", [4, 5, 8])
def test_c6_cone_matches_oracle(th):
    g = cycle(6)
    for a, b in g.edges:
        for v in (a, b):
            assert cone(g, (a, b), v, 2, th) == oracles.cone(g, (a, b), v, 2, th)


@given(connected_graphs(max_n=8), st.integers(0, 3), st.integers(0, 5), st.data())
def test_cone_matches_oracle(g, d, th, data):
    a, b = data.draw(st.sampled_from(g.edges))
    v = data.draw(st.sampled_from((a, b)))
    assert cone(g, (a, b), v, d, th) == oracles.cone(g, (a, b), v, d, th)


@given(connected_graphs(max_n=8), st.data())
def test_cone_monotone(g, data):
    a, b = data.draw(st.sampled_from(g.edges))
    d1, d2 = sorted(data.draw(st.integers(0, 4)) for _ in range(2))
    t1, t2 = sorted(data.draw(st.integers(0, 5)) for _ in range(2))
    assert cone(g, (a, b), a, d1, t1) <= cone(g, (a, b), a, d2, t2)


def test_cone_infinite_theta_is_ball():
    g = path_graph(6)
    assert cone(g, (2, 3), 2, 2, INF) == {0, 1, 2, 3, 4}


# -- circuits and fineness ------------------------------------------------------

def test_tree_has_no_circuits():
    g = binary_tree(3)
    assert all(not circuits_through(g, e, 10) for e in g.edges)
    assert fineness_report(g, 10)["uniform_bound"] == 0


def test_c6_circuit():
    g = cycle(6)
    cs = circuits_through(g, (0, 1), 6)
    assert cs == {(0, 1, 2, 3, 4, 5)}
    assert not circuits_through(g, (0, 1), 5)
    assert fineness_report(g, 6)["uniform_bound"] == 1


def test_theta_circuits():
    g = theta(2, 2, 2)
    for e in g.edges:
        cs = circuits_through(g, e, 4)
        assert len(cs) == len(oracles.circuits_through(g, e, 4)) == 2
    assert fineness_report(g, 4)["uniform_bound"] == 2


@given(connected_graphs(max_n=7), st.integers(3, 7), st.data())
def test_circuits_match_oracle(g, L, data):
    e = data.draw(st.sampled_from(g.edges))
    ours = {frozenset(frozenset((c[i], c[(i + 1) % len(c)])) for i in range(len(c)))
            for c in circuits_through(g, e, L)}
    assert ours == oracles.circuits_through(g, e, L)


def test_circuit_budget_is_explicit():
    g = graph("ladder6")
    with pytest.raises(BudgetExceeded):
        circuits_through(g, (0, 1), 12, budget=5)


@given(connected_graphs(max_n=7), st.integers(3, 7))
def test_circuit_angle_bound(g, L):
    for e in g.edges:
        for cyc in circuits_through(g, e, L):
            n = len(cyc)
            for i in range(n):
                assert neighbor_angle(g, cyc[i], cyc[i - 1], cyc[(i + 1) % n]) <= n - 2


# -- rho -----------------------------------------------------------------------

def test_rho_examples():
    assert rho_constant(cycle(6)) == 4
    assert rho_constant(theta(2, 2, 2)) == 2


def test_rho_star_with_parabolic_centre():
    g = FineGraph(range(4), [(0, i) for i in range(1, 4)], parabolic=[0])
    with pytest.raises(ModelError):
        rho_constant(g)


def test_rho_reports_tree_violations():
    r = rho_constant(FineGraph(range(5), [(0, 1), (1, 2), (2, 3), (0, 4), (4, 3)]))
    assert r == 3 and not r.violations
    with pytest.raises(ModelError):
        rho_constant(star(3))


# -- conical neighbourhood and channels ----------------------------------------

def test_tree_conical_neighborhood():
    g = binary_tree(3)
    seg = (7, 3, 1, 0, 2)
    assert conical_neighborhood(g, seg, 3) == set(seg)


def test_conical_neighborhood_needs_edge():
    with pytest.raises(GraphError):
        conical_neighborhood(cycle(6), (0,), 2)
    with pytest.raises(GraphError):
        channels(cycle(6), (0,), 2)


def test_c6_conical_neighborhood_oracle():
    g = cycle(6)
    seg = (0, 1, 2)
    ref = set()
    for a, b in ((0, 1), (1, 2)):
        ref |= oracles.cone(g, (a, b), a, 4, 4) | oracles.cone(g, (a, b), b, 4, 4)
    assert conical_neighborhood(g, seg, 4) == ref


def _channels_oracle(g, seg, U):
    G = oracles.to_nx(g)
    m = len(seg) - 1
    out = set()
    for s in U:
        for t in U:
            if s == t or nx.shortest_path_length(G, s, t) < m:
                continue
            for p in nx.all_shortest_paths(G, s, t):
                if set(p) <= U:
                    p = tuple(p)
                    out.add(min(p, p[::-1], key=repr))
    return out


def test_tree_channels():
    g = binary_tree(3)
    seg = (7, 3, 1, 0)
    ch = channels(g, seg, 2)
    assert list(ch) == [seg[::-1]] and ch.count == 1


def test_c6_channels_oracle():
    g = cycle(6)
    seg = (0, 1, 2)
    ch = channels(g, seg, 4)
    ref = _channels_oracle(g, seg, ch.region)
    # six length-2 arcs and two geodesics for each antipodal pair
    assert set(ch) == ref and ch.count == 12


def test_inf_is_math_inf():
    assert INF is math.inf
