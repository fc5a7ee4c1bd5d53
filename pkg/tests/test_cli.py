import json

import pytest

from coarsecyl import fixtures as fx
from coarsecyl.cli import dumps, main


def _run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


@pytest.fixture
def tree_json(tmp_path):
    p = tmp_path / "tree.json"
    p.write_text(fx.binary_tree(3).to_json())
    return str(p)


@pytest.fixture
def z_model(tmp_path):
    pres = tmp_path / "z.pres"
    pres.write_text("gens: t\n")
    out = tmp_path / "z.json"
    assert main(["build", "--pres", str(pres), "--radius", "5", "--out", str(out)]) == 0
    return str(out)


def test_certify_tree(tree_json, tmp_path):
    code, d = _run(["certify", "--graph", tree_json], tmp_path)
    assert code == 0 and d["status"] == "pass"
    assert d["delta"]["raw"] == 0 and not d["delta"]["lower_bound_only"]
    assert d["fineness"]["uniform_bound"] == 0


def test_certify_cycle_fixture(tmp_path):
    code, d = _run(["certify", "--fixture", "C6"], tmp_path)
    assert code == 0
    assert d["delta"]["raw"] == 1 and d["rho"]["value"] == 4
    assert d["fineness"]["uniform_bound"] == 1


def test_certify_circuit_budget_is_inconclusive(tmp_path):
    code, d = _run(["certify", "--fixture", "ladder6", "--budget-circuits", "3"], tmp_path)
    assert code == 2 and d["status"] == "inconclusive"


def test_build_model_roundtrip(z_model):
    d = json.loads(open(z_model).read())
    assert d["truncation_radius"] == 5 and len(d["graph"]["vertices"]) == 11


def test_build_needs_radius(tmp_path, capsys):
    pres = tmp_path / "z.pres"
    pres.write_text("gens: t\n")
    assert main(["build", "--pres", str(pres)]) == 1
    assert "radius" in capsys.readouterr().err


def test_triangle_on_z(z_model, tmp_path):
    code, d = _run(["triangle", "--model", z_model, "--gens", "t"], tmp_path)
    assert code == 0
    assert d["vacuous"] is True and "vacuous" in d["selection"]
    assert [t["word"] for t in d["triangles"]] == [["t", "T", ""]]
    dec = d["triangles"][0]["decomposition"]
    assert dec["report"]["digon"] and dec["report"]["identical"]


def test_triangle_faithful_regime_reports_vacuity(z_model, tmp_path):
    code, d = _run(["triangle", "--model", z_model, "--gens", "t", "--regime", "paper"],
                   tmp_path)
    assert code == 0 and d["vacuous"] is True
    assert d["l"] > 10 ** 9


def test_triangle_rejects_unknown_generator(z_model, capsys):
    assert main(["triangle", "--model", z_model, "--gens", "q"]) == 1
    assert "'q'" in capsys.readouterr().err


def test_cyl_command(tmp_path):
    code, d = _run(["cyl", "--fixture", "C6", "--x", "0", "--y", "3", "--epsilon", "4",
                    "--l", "2", "--witnesses"], tmp_path)
    assert code == 0 and d["complete"]
    assert d["members"] == [0, 1, 2, 3, 4, 5]
    assert set(d["witnesses"]) == {str(v) for v in range(6)}


def test_cyl_budget_is_inconclusive(tmp_path):
    code, d = _run(["cyl", "--fixture", "ladder6", "--x", "0", "--y", "11",
                    "--l", "2", "--budget-search", "5"], tmp_path)
    assert code == 2 and d["status"] == "inconclusive"


def test_cyl_unknown_vertex(capsys):
    assert main(["cyl", "--fixture", "C6", "--x", "0", "--y", "9"]) == 1
    assert "9" in capsys.readouterr().err


def test_slices_command(tmp_path):
    code, d = _run(["slices", "--fixture", "path8_parabolic", "--x", "0", "--y", "8",
                    "--l", "2"], tmp_path)
    assert code == 0
    kinds = [s["kind"] for s in d["slices"]]
    assert kinds.count("parabolic") == 1


def test_constants_command(tmp_path):
    code, d = _run(["constants", "--fixture", "C8", "--regime", "paper"], tmp_path)
    assert code == 0
    C = d["constants"]
    assert C["regime"] == "paper-faithful" and C["delta"] >= 2
    assert d["paper_violations"] == []


def test_laminate_command(tmp_path):
    model = tmp_path / "m.json"
    model.write_text(dumps(fx.model("cayley:Z:5").to_dict()))
    pres = tmp_path / "d.pres"
    pres.write_text("gens: a b; rels: aB")
    code, d = _run(["laminate", "--model", str(model), "--pres", str(pres),
                    "--images", "a=ttt,b=ttt", "--l", "2", "--epsilon", "1"], tmp_path)
    assert code == 0 and d["skeleton"]["single_vertex"]
    dot = tmp_path / "k.dot"
    assert main(["export-dot", "--lam", str(tmp_path / "out.json"), "--out", str(dot)]) == 0
    assert dot.read_text().startswith("graph K {")


def test_laminate_failure_exit_code(tmp_path):
    M, P, images, l = fx.lamination_fixture("triangle_f2_parabolic")
    model = tmp_path / "m.json"
    model.write_text(dumps(M.to_dict()))
    pres = tmp_path / "t.pres"
    pres.write_text(P.to_text())
    imgs = ",".join(f"{k}={v}" for k, v in images.items())
    code, d = _run(["laminate", "--model", str(model), "--pres", str(pres), "--images", imgs,
                    "--l", str(l), "--epsilon", "1"], tmp_path)
    assert code == 1 and d["checks"]["leaf_region"] is False


def test_export_dot_cone(tmp_path, capsys):
    assert main(["export-dot", "--fixture", "C6", "--cone-edge", "0,1", "--d", "2",
                 "--theta", "4"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("graph G {") and "fillcolor=gold" in text


def test_malformed_json_reports_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [0, 1],\n "edges": [[0, 1]')
    assert main(["certify", "--graph", str(bad)]) == 1
    err = capsys.readouterr().err
    assert f"{bad}:2:" in err


def test_missing_file(capsys):
    assert main(["certify", "--graph", "/nonexistent.json"]) == 1
    assert "/nonexistent.json" in capsys.readouterr().err


def test_nonpositive_budget():
    assert main(["certify", "--fixture", "C6", "--budget-search", "0"]) == 1


def test_suite_subset_deterministic(tmp_path):
    argv = ["suite", "--only", "diff_algebra,cone_monotonicity", "--seed", "3"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    d = json.loads(a.read_text())
    assert d["seed"] == 3 and d["verdict"] == "pass"
    assert set(d["suites"]) == {"diff_algebra", "cone_monotonicity"}
