import networkx as nx
import pytest

from coarsecyl import fixtures as fx
from coarsecyl import oracles


@pytest.mark.parametrize("name", fx.names())
def test_fixture_is_connected(name):
    g = fx.graph(name)
    assert nx.is_connected(oracles.to_nx(g))
    assert fx.graph(name) is g


@pytest.mark.parametrize("name", fx.TREES)
def test_trees_are_trees(name):
    assert nx.is_tree(oracles.to_nx(fx.graph(name)))


def test_families():
    assert len(fx.CYCLES) == 10
    for n in range(3, 13):
        assert nx.is_isomorphic(oracles.to_nx(fx.graph(f"C{n}")), nx.cycle_graph(n))
    assert nx.is_isomorphic(oracles.to_nx(fx.ladder(5)), nx.ladder_graph(5))
    # theta(a, b, c): two poles joined by paths of lengths a, b, c
    g = fx.theta(2, 3, 4)
    assert len(g) == 2 + 1 + 2 + 3 and len(g.edges) == 9


@pytest.mark.parametrize("name", ["ladder4", "ladder6", "C8"])
def test_actions_are_automorphisms(name):
    g = fx.graph(name)
    E = {frozenset(e) for e in g.edges}
    for m in g.action.values():
        assert sorted(m) == sorted(m.values()) == sorted(g.vertices)
        assert {frozenset((m[a], m[b])) for a, b in g.edges} == E


def test_parabolic_fixtures():
    assert fx.graph("path8_parabolic").parabolic == {4}
    assert fx.graph("spider3x3_parabolic").parabolic == {0}


def test_models_and_boundaries():
    assert fx.boundary_of("C6") == frozenset()
    assert fx.boundary_of("cayley:Z:5") == fx.model("cayley:Z:5").boundary_vertices
    assert fx.actions_of("cayley:Z:5") is fx.model("cayley:Z:5").action
    assert len(fx.graph("coned:F2:5")) <= 2000
    with pytest.raises(KeyError):
        fx.model("spiral:Z:3")


def test_comb():
    g = fx.comb(40)
    assert nx.is_tree(oracles.to_nx(g))
    assert g.distance(0, 40) == 40


@pytest.mark.parametrize("name", sorted(fx.LAMINATIONS))
def test_lamination_fixtures_load(name):
    M, P, images, l = fx.lamination_fixture(name)
    assert P.triangular and l >= 1
    for gen in P.generators:
        assert M.vertex_of(images[gen]) is not None
