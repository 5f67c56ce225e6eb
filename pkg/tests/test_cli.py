import io as _io
import json
import subprocess
import sys

import pytest

from flipforge import fixtures, io
from flipforge.cli import main
from flipforge.paths import FlipPath


def run(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_info_on_a_fixture():
    doc = run_json("info", "fixture:punctured_torus")
    assert doc["format"] == "flipforge/1"
    assert doc["arcs"] == 3 and doc["triangles"] == 2
    assert doc["flippable"] == [0, 1, 2]


def test_census_of_the_hexagon():
    doc = run_json("census", "--sig", "g=0,b=1,s=0,p=6")
    assert doc["vertices"] == 14
    assert doc["diameter"] == 4


def test_census_formats():
    code, out, _ = run("census", "--sig", "g=0,b=1,s=0,p=5", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("vertex")
    code, out, _ = run("census", "--sig", "g=0,b=1,s=0,p=5", "--format", "dot")
    assert code == 0 and out.startswith("graph")


def test_unlabeled_census():
    doc = run_json("census", "--sig", "g=0,b=1,s=2,p=1", "--mode", "unlabeled")
    assert doc["vertices"] == 4 and doc["diameter"] == 3


def test_square_distance_through_files(tmp_path):
    T = fixtures.get("square")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    io.save(T, a)
    io.save(T.flip(0), b)
    assert run_json("distance", str(a), str(b))["distance"] == 1


def test_distance_of_a_path_document(tmp_path):
    path = FlipPath(fixtures.get("punctured_torus"), (0, 1, 2, 0))
    target = tmp_path / "path.json"
    io.save(path, target)
    assert run_json("distance", str(target))["distance"] == 4


def test_flip_and_as_path():
    doc = run_json("flip", "fixture:hexagon", "0", "1")
    assert doc["kind"] == "triangulation"
    doc = run_json("flip", "fixture:hexagon", "0", "1", "--as-path")
    assert doc["kind"] == "path" and doc["steps"] == [0, 1]


def test_ball_formats():
    doc = run_json("ball", "fixture:punctured_torus", "--radius", "2")
    assert doc["layer_sizes"] == [1, 3, 6]
    code, out, _ = run("ball", "fixture:punctured_torus", "--radius", "1", "--format", "dot")
    assert code == 0 and out.count("--") == 3


def test_path_to_stratum_and_project(tmp_path):
    doc = run_json("construct", "loop", "--source", "fixture:thrice_punctured_torus", "--point", "2")
    assert doc["certificate"]["measured"] == doc["certificate"]["claimed"] == 14
    arc_file = tmp_path / "arc.json"
    arc_file.write_text(json.dumps({k: v for k, v in doc.items() if k != "certificate"}))
    result = run_json("path-to-stratum", str(arc_file))
    assert result["kind"] == "path" and len(result["steps"]) >= 1
    image = run_json("project", str(arc_file))
    assert image["format"] == "flipforge/1"


def test_constructions():
    assert run_json("construct", "seashell", "--n", "3")["signature"]["s"] == 3
    assert run_json("construct", "canonical-genus", "--g", "2")["signature"]["g"] == 2
    doc = run_json("construct", "genus-split", "--source", "fixture:genus_two_piece")
    assert doc["kind"] == "multiarc" and doc["certificate"]["ok"]
    doc = run_json("construct", "puncture-split", "--source", "fixture:four_punctured_disk")
    assert doc["certificate"]["ok"]
    doc = run_json("construct", "canonical-path", "--source", "fixture:four_punctured_disk")
    assert doc["kind"] == "path" and doc["certificate"]["ok"]


def test_verify_bounds_suite():
    doc = run_json("verify", "--suites", "bounds")
    assert doc["passed"] is True
    assert all(c["passed"] for c in doc["suites"]["bounds"])


def test_verify_csv():
    code, out, _ = run("verify", "--suites", "censuses", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "suite,check,passed,detail"


def test_export_all_and_round_trip(tmp_path):
    doc = run_json("export", "--all", "--dir", str(tmp_path))
    assert len(doc["written"]) == len(fixtures.names())
    for name in fixtures.names():
        text = (tmp_path / f"{name}.json").read_text()
        assert text == io.dumps(fixtures.get(name))
    code, out, _ = run("export", str(tmp_path / "octagon.json"))
    assert code == 0 and out == (tmp_path / "octagon.json").read_text()


def test_export_dot():
    code, out, _ = run("export", "fixture:square", "--format", "dot")
    assert code == 0 and "style=bold" in out


def test_budget_exit_code(monkeypatch):
    code, _, err = run("--budget", "5", "ball", "fixture:octagon", "--radius", "4")
    assert code == 2
    assert json.loads(err)["error"] == "SearchBudgetExceeded"
    monkeypatch.setenv("FLIPFORGE_BUDGET", "5")
    code, _, _ = run("ball", "fixture:octagon", "--radius", "4")
    assert code == 2


def test_census_budget_exit_code():
    code, _, _ = run("census", "--sig", "g=0,b=1,s=0,p=9", "--max-vertices", "10")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["info", "fixture:no_such_fixture"],
    ["census", "--sig", "g=0,b=1"],
    ["flip", "fixture:punctured_monogon", "0"],
    ["distance", "fixture:punctured_torus", "fixture:punctured_torus"],
    ["nonsense"],
    ["--budget", "0", "info", "fixture:square"],
])
def test_invalid_input_exit_code(argv):
    code, out, err = run(*argv)
    assert code == 1
    assert out == ""
    assert json.loads(err)["format"] == "flipforge/1"


def test_schema_errors_carry_a_pointer(tmp_path):
    doc = io.to_document(fixtures.get("pentagon"))
    doc["gluings"].append(doc["gluings"][0])
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run("info", str(bad))
    assert code == 1
    assert json.loads(err)["pointer"].startswith("/gluings/")


def test_threads_do_not_change_results():
    one = run_json("--threads", "1", "census", "--sig", "g=0,b=1,s=0,p=7")
    four = run_json("--threads", "4", "census", "--sig", "g=0,b=1,s=0,p=7")
    assert one == four


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "flipforge", "info", "fixture:square"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["arcs"] == 1
