import dataclasses
import io
import json

import pytest

from shadowknots import cli
from shadowknots.banded import parse_bud
from shadowknots.egraph import HalfInt

from support import CORPUS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--json")
    return code, json.loads(out)


def test_classify_example():
    code, out, _ = run("classify", CORPUS / "kn3.egf", "--g", 3)
    assert code == 0
    assert out.strip() == '{"classification":"Kn","n":3}'


def test_verify_example():
    code, report = run_json("verify", "--family", "X8-i", "--max", 3)
    assert code == 0
    assert report["matches_paper"] is True
    assert report["result"]["survivors"]
    assert all(s["k0"] == s["k1"] == s["l"] == 0 for s in report["result"]["survivors"])


def test_alexander_example():
    code, out, _ = run("alexander", "--pres", "gens: x,mu ; rels: x^2*mu*x^-1*mu^-1",
                       "--meridian", "mu")
    assert (code, out.strip()) == (0, "2 - t")


def test_json_is_byte_identical():
    args = ("shadow", CORPUS / "twist_spun_2_3.bud", "--json")
    assert run(*args)[1] == run(*args)[1]
    report = json.loads(run(*args)[1])
    assert list(report) == sorted(report)
    assert set(report) == {"command", "inputs", "result", "diagnostics"}


@pytest.mark.parametrize("argv", [
    ["frob"],
    [],
    ["classify", str(CORPUS / "kn3.egf")],
    ["classify", str(CORPUS / "missing.egf"), "--g", "1"],
    ["shadow", str(CORPUS / "kn3.egf")],
    ["alexander", "--pres", "gens: x,y ; rels: x*y^-1"],
    ["gen", "twist-spun", "1"],
    ["gen", "frob", "1"],
    ["verify", "--family", "X12"],
    ["move", str(CORPUS / "kn3.egf"), "--kind", "A", "--site", "99"],
    ["knot-group", str(CORPUS / "disk.egf"), "--g", "2"],
])
def test_input_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == 2
    assert err.startswith("shadowknots: error:")


def test_input_error_with_json_reports_diagnostic():
    code, report = run_json("verify", "--family", "X12")
    assert code == 2
    assert report["result"] is None and report["diagnostics"]


def test_invariant_violation_exits_3(monkeypatch):
    real = cli.shadow_of

    def skewed(d):
        rep = real(d)
        return dataclasses.replace(rep, gleam_sum_over_K=rep.gleam_sum_over_K + HalfInt.of(1))

    monkeypatch.setattr(cli, "shadow_of", skewed)
    code, _, err = run("shadow", CORPUS / "kn_1.bud")
    assert code == 3
    assert "internal invariant violated" in err


def test_validate():
    assert run("validate", CORPUS / "kn3.egf")[0] == 0
    code, report = run_json("validate", CORPUS / "kn3.egf", "--strict")
    assert code == 0 and report["result"]["ok"]


def test_validate_invalid_graph(tmp_path):
    path = tmp_path / "bad.egf"
    path.write_text("vertex b B\nvertex p P\nedge e b:0 p:0 gleam=0\n")
    code, report = run_json("validate", path)
    assert code == 2
    assert "unused-slot" in {f["code"] for f in report["result"]["findings"]}


def test_pi1_and_h1():
    code, report = run_json("pi1", CORPUS / "kn3.egf")
    assert code == 0
    assert set(report["result"]["boundary_classes"]) == {"b"}
    code, report = run_json("h1", CORPUS / "disk.egf")
    assert (code, report["result"]["group"]) == (0, "0")
    code, report = run_json("h1", "--pres", "gens: x ; rels: x^4")
    assert report["result"]["torsion"] == [4]


def test_knot_group():
    code, report = run_json("knot-group", CORPUS / "kn3.egf", "--g", 3)
    assert code == 0 and report["result"]["h1"] == "Z"
    code, report = run_json("knot-group", CORPUS / "kn_1.bud")
    assert code == 0 and report["result"]["h1"] == "Z"


def test_alexander_from_files():
    assert run("alexander", CORPUS / "kn_minus2.egf", "--g", 1)[1].strip() == "1 - t^2 + t^4"
    assert run("alexander", CORPUS / "kn_3.bud")[1].strip() == "2 - t^3"
    assert run("alexander", CORPUS / "self_band_unknot.bud")[1].strip() == "1"


def test_classify_survivor_and_vertex_on_k():
    assert json.loads(run("classify", CORPUS / "x8_survivor.egf", "--g", 1)[1]) == {
        "classification": "InfiniteCyclicGroup"}
    code, out, _ = run("classify", CORPUS / "kn3.egf", "--g", 3, "--vertex-on-K")
    assert json.loads(out)["classification"] == "InfiniteCyclicGroup"


def test_move_lists_and_applies(tmp_path):
    path = tmp_path / "g.egf"
    path.write_text("vertex b B\nvertex q P\nvertex dq D\nvertex d D\n"
                    "edge e0 b:0 q:0 gleam=0\nedge eq q:1 dq:0 gleam=0\n"
                    "edge e3 q:2 d:0 gleam=1\n")
    code, report = run_json("move", path, "--kind", "C", "--inverse")
    assert code == 0 and len(report["result"]["sites"]) == 2
    code, report = run_json("move", path, "--kind", "C", "--inverse", "--site", 0)
    assert code == 0
    assert report["result"]["h1_before"] == report["result"]["h1_after"] == "0"
    assert "Y12" in report["result"]["egf"]


def test_move_with_rules_file(tmp_path):
    rules = tmp_path / "broken.rules"
    rules.write_text("rule A\n  lhs\n    frob\nend\n")
    code, _, err = run("move", CORPUS / "kn3.egf", "--kind", "A", "--rules", rules)
    assert code == 2 and "frob" in err


def test_shadow_and_bound():
    code, report = run_json("shadow", CORPUS / "twist_spun_2_3.bud")
    assert code == 0
    assert report["result"]["true_vertices"] == 18
    assert report["result"]["gleam_sum_over_K"] == "0"
    code, report = run_json("bound", CORPUS / "self_band_unknot.bud", "--seed", 5)
    assert (code, report["result"]["collapse_bound"]) == (0, 0)


def test_gen_output_is_a_valid_file():
    code, out, _ = run("gen", "kn", -2)
    assert code == 0
    assert "# matches_paper: true" in out
    assert parse_bud(out).n == 1
    code, report = run_json("gen", "twist-spun", 1, 1)
    assert report["result"]["true_vertices"] == 10
    code, out, _ = run("gen", "kn-shadow", -2, "--m", 1)
    assert code == 0 and out.startswith("# boundary gleam g = 1")


def test_main_entry_point(capsys):
    assert cli.main(["h1", "--pres", "gens: x ; rels: x^2"]) == 0
    assert capsys.readouterr().out.startswith("Z/2")
