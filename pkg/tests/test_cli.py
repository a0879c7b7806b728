import json

import jsonschema
import pytest

from unknotkit import fixture
from unknotkit.cli import REPORT_SCHEMA, main
from unknotkit.complex import parse_triangulation
from unknotkit.diagram import TREFOIL

CURL = "K[X(1,1,2,2)]"
DOUBLED = "K[X(1,2,2,3), X(4,4,1,3)]"


@pytest.fixture
def write(tmp_path):
    def _w(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _w


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    rep = json.loads(out.out) if out.out.strip() else json.loads(out.err)
    jsonschema.validate(rep, REPORT_SCHEMA)
    return code, rep


def test_validate_loop_and_trefoil(capsys, write):
    code, rep = run(capsys, "validate", write("loop.pd", "L[]"))
    assert code == 0 and rep["n"] == 0
    code, rep = run(capsys, "validate", write("t.pd", TREFOIL))
    assert code == 0 and rep["n"] == 3


def test_validate_triangulation(capsys):
    code, rep = run(capsys, "validate", fixture_path("lst.tri"))
    assert code == 0 and rep["kind"] == "triangulation"


def fixture_path(name):
    from importlib.resources import files
    return str(files("unknotkit") / "fixtures" / name)


def test_corrupted_gluing_is_input_error(capsys, write):
    code, rep = run(capsys, "validate", write("bad.tri", "tets=2\n1:0:0123 bd bd bd\n1:1:0123 bd bd bd\n"))
    assert code == 3 and "Involution" in rep["error"]


def test_missing_and_garbage_files(capsys, write, tmp_path):
    assert run(capsys, "validate", str(tmp_path / "nope"))[0] == 3
    assert run(capsys, "validate", write("x.txt", "hello"))[0] == 3
    assert run(capsys, "validate", write("y.pd", "K[X(1,2"))[0] == 3


def test_build_curl_writes_files(capsys, write, tmp_path):
    out = tmp_path / "out"
    code, rep = run(capsys, "build", write("c.pd", CURL), "--out", str(out))
    assert code == 0 and rep["certificate"]["tetrahedra"] <= 840
    T = parse_triangulation((out / "polytope.tri").read_text())
    assert T.size == rep["certificate"]["tetrahedra"] and "knot" in T.curves
    assert json.loads((out / "certificate.json").read_text()) == rep["certificate"]


def test_build_loop_and_trefoil(capsys, write):
    code, rep = run(capsys, "build", write("l.pd", "L[]"))
    assert code == 0 and rep["certificate"]["n"] == 0
    code, rep = run(capsys, "build", write("t.pd", TREFOIL), "--json", write("r.json", ""))
    assert code == 0 and rep["certificate"]["tetrahedra"] <= 2520


def test_build_guard(capsys, write):
    code, rep = run(capsys, "build", write("t.pd", TREFOIL), "--max-crossings", "2")
    assert code == 2 and rep["verdict"] == "INDETERMINATE"


def test_certify_fixtures(capsys):
    code, rep = run(capsys, "certify", fixture_path("lst.tri"))
    assert code == 0 and rep["verdict"] == "UNKNOTTED"
    code, rep = run(capsys, "certify", fixture_path("trefoil_exterior.tri"))
    assert code == 1 and rep["verdict"] == "KNOTTED"


def test_certify_oversize(capsys):
    code, rep = run(capsys, "certify", fixture_path("trefoil_exterior.tri"), "--max-dim", "10")
    assert code == 2 and rep["verdict"] == "INDETERMINATE"
    code, rep = run(capsys, "certify", fixture_path("s3_triangle.tri"))
    assert code == 2 and rep["reason"] == "dimension guard"


def test_certify_needs_triangulation(capsys, write):
    assert run(capsys, "certify", write("c.pd", CURL))[0] == 3


def test_moves_one_step_scripts(capsys, write):
    for text in (CURL, DOUBLED):
        code, rep = run(capsys, "moves", write("d.pd", text))
        assert code == 0 and rep["verdict"] == "UNKNOTTED" and rep["length"] == 1


def test_moves_trefoil_exhausts(capsys, write):
    code, rep = run(capsys, "moves", write("t.pd", TREFOIL), "--max-depth", "2", "--max-crossings", "5")
    assert code == 2 and rep["verdict"] == "INDETERMINATE"


def test_report_curl(capsys, write):
    code, rep = run(capsys, "report", write("c.pd", CURL), "--max-depth", "2")
    assert code == 0 and rep["verdict"] == "UNKNOTTED"
    assert rep["stages"]["build"]["tetrahedra"] == rep["input"]["t"]
    assert rep["budgets"]["polytope_tetrahedra_840n"] == 840
    assert rep["stages"]["certify"]["status"] == "skipped"


def test_json_flag_writes_report(capsys, write, tmp_path):
    dest = tmp_path / "rep.json"
    code, rep = run(capsys, "validate", write("l.pd", "L[]"), "--json", str(dest))
    assert json.loads(dest.read_text()) == rep
