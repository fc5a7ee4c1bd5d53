from fractions import Fraction
from itertools import combinations

import pytest

from coarsecyl import fixtures as fx
from coarsecyl.lamination import (LaminationError, VanKampenComplex, build_K,
                                  classify_components, face_lamination, laminate,
                                  markings_for_edge, splitting_skeleton)
from coarsecyl.presentations import parse_presentation
from coarsecyl.slices import Slice, SliceDecomposition, triangle_slices

C = fx.lamination_constants()


def _decomp(kinds):
    sl = [Slice("endpoint", frozenset({-1}))]
    sl += [Slice(k, frozenset({i})) for i, k in enumerate(kinds)]
    sl += [Slice("endpoint", frozenset({-2}))]
    return SliceDecomposition(-1, -2, sl, None)


def _crosses(A, B):
    # chords (a, b), (c, d) cross when exactly one end of one lies strictly
    # between the ends of the other
    a, b = sorted(A)
    return sum(1 for p in B if a < p < b) == 1 and not set(A) & set(B)


@pytest.fixture(scope="module")
def runs():
    out = {}
    for name in fx.LAMINATIONS:
        M, P, images, l = fx.lamination_fixture(name)
        out[name] = laminate(M, P, l, C, images=images)
    return out


# -- markings ------------------------------------------------------------------------

def test_three_regular_slices():
    ms = markings_for_edge(_decomp(["regular"] * 3), "a")
    assert [m.index for m in ms] == [1, 2, 3]
    assert [m.position for m in ms] == [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    assert {m.edge for m in ms} == {"a"}


def test_parabolic_slice_two_markings():
    ms = markings_for_edge(_decomp(["parabolic"]))
    assert len(ms) == 2 and ms[0].slice == ms[1].slice == 1
    assert [m.position for m in ms] == [Fraction(1, 3), Fraction(2, 3)]


def test_endpoints_only():
    assert markings_for_edge(_decomp([])) == []


def test_mixed_marking_order():
    ms = markings_for_edge(_decomp(["regular", "parabolic", "regular"]))
    assert [m.slice for m in ms] == [1, 2, 2, 3]
    assert all(a.position < b.position for a, b in zip(ms, ms[1:]))


def test_markings_in_pipeline_match_slices(runs):
    for name, r in runs.items():
        for gen, d in r["decompositions"].items():
            want = sum(2 if s.kind == "parabolic" else 1 for s in d.slices[1:-1])
            assert len(r["complex"].markings[gen]) == want


# -- face laminations -----------------------------------------------------------------

def test_face_without_markings():
    lam = face_lamination("abc", None)
    assert lam.leaves == [] and lam.arcs == [] and not lam.report["singular_point"]


def test_digon_perfect_matching():
    M = fx.model("cayley:Z:150")
    d = triangle_slices(M.graph, 0, "t" * 40, "T" * 40, "", 2, C, actions=M.action)
    lam = face_lamination("aB", d)
    n = len(lam.points)
    assert n > 0 and n % 2 == 0
    assert sorted(p for b in lam.leaves for p in b) == list(range(n))
    assert not lam.singular
    # leaf k joins the k-th marking of one side to the k-th of the other
    half = n // 2
    assert sorted(tuple(b) for b in lam.leaves) == [(k, n - 1 - k) for k in range(half)]


@pytest.mark.parametrize("name", sorted(fx.LAMINATIONS))
def test_leaves_never_cross(runs, name):
    for lam in runs[name]["faces"]:
        blocks = [b for b in lam.leaves] + ([lam.singular] if lam.singular else [])
        for A, B in combinations([b for b in blocks if len(b) == 2], 2):
            assert not _crosses(A, B)
        covered = sorted(p for b in blocks for p in b)
        assert covered == list(range(len(lam.points)))


def test_parabolic_marking_pairs_stay_together(runs):
    # the two copies of a parabolic marking lie on distinct leaves
    lam = runs["digon_f2_parabolic"]["faces"][0]
    par = [i for i, p in enumerate(lam.points) if p["kind"] == "parabolic"]
    assert par
    leaf_of = {p: k for k, b in enumerate(lam.leaves) for p in b}
    for i in par:
        if lam.points[i]["copy"] == 0:
            assert leaf_of[i] != leaf_of[i + 1]


def test_z_triangle_singular_point(runs):
    lam = runs["triangle_z"]["faces"][0]
    assert lam.report["singular_point"]
    assert all(kind in ("regular", "singular") for kind, *_ in lam.arcs)


# -- K and the skeleton -----------------------------------------------------------------

def test_empty_K():
    P = VanKampenComplex(("a",), ("aa",))
    KG = build_K(P, [face_lamination("aa", None)])
    assert KG.components == [] and classify_components(KG) == {}
    sk = splitting_skeleton(P, KG)
    assert sk["single_vertex"] and sk["trivial"]


def test_short_z_digon_is_trivial(runs):
    r = runs["digon_t3"]
    assert r["K"].components == []
    assert r["skeleton"]["single_vertex"]


def test_long_digon_arcs_are_type_one(runs):
    r = runs["digon_t150"]
    K = r["K"]
    assert K.pruned == [] and set(K.types.values()) == {"I"}
    # one dual arc per gap between consecutive markings
    assert len(K.components) == len(r["complex"].markings["a"]) - 1
    for i in K.retained:
        assert len(K.sides[i]) == 2


def test_pruning_removes_hole_components(runs):
    K = runs["triangle_z"]["K"]
    assert K.pruned == [0] and K.checks["pruning_sound"]
    assert any(v in K.hole_vertices for v in K.components[0])
    assert runs["triangle_z"]["skeleton"]["single_vertex"]


def test_tripod_is_branched(runs):
    r = runs["tripod_f2"]
    assert r["K"].types == {0: "branched"}
    assert len(r["K"].sides[0]) == 3
    edges = r["skeleton"]["edges"]
    assert len(edges) == 3 and {e["ends"][0] for e in edges} == {"K0"}


def test_euler_characteristic(runs):
    for r in runs.values():
        assert r["skeleton"]["chi_total"] == r["complex"].chi()


@pytest.mark.parametrize("name", sorted(set(fx.LAMINATIONS) - {"triangle_f2_parabolic"}))
def test_checks_pass(runs, name):
    assert all(runs[name]["checks"].values())


def test_degenerate_corner_fails_leaf_region(runs):
    # the xz side passes through y; the leaf region check flags it
    ch = runs["triangle_f2_parabolic"]["checks"]
    assert ch["leaf_region"] is False
    assert ch["pruning_sound"] and ch["multiplicity"]


def test_full_coincidence_single_vertex(runs):
    got = {n: runs[n]["skeleton"]["single_vertex"] for n in fx.FULL_COINCIDENCE}
    assert got["digon_t3"]
    # long digons keep their parallel arcs and do not collapse
    assert not got["digon_t150"] and not got["digon_f2_parabolic"]


# -- errors --------------------------------------------------------------------------------

def test_non_triangular_rejected():
    M = fx.model("cayley:Z:5")
    with pytest.raises(LaminationError):
        laminate(M, parse_presentation("gens: a; rels: aaaa"), 2, C, {"a": "t"})


def test_image_outside_model():
    M = fx.model("cayley:Z:5")
    P = parse_presentation("gens: a b; rels: aB")
    with pytest.raises(LaminationError):
        laminate(M, P, 2, C, {"a": "tttttt", "b": "tttttt"})
