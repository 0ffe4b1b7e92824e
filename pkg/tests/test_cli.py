from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from psdmin.catalogue import build_class
from psdmin.cli import run
from psdmin.polytope import VPolytope, write_polytope
from psdmin.slack import dumps_matrix, slack_matrix


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("inputs")
    out = {}

    def put(name, P):
        path = d / f"{name}.json"
        write_polytope(P, path)
        out[name] = str(path)

    put("class1", build_class(1))
    put("class25", build_class(25))
    put("square", VPolytope.make("square", [(0, 0), (1, 0), (0, 1), (1, 1)]))
    put("hexagon", VPolytope.make("hexagon", [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)]))
    put("octahedron", VPolytope.make("oct", [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]))
    put("skew", VPolytope.make("skew", [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0),
                                        (Fraction(1, 10), Fraction(1, 10), 1), (0, 0, -1)]))
    put("tesseract", build_class(30))
    rep = d / "repeated.json"
    rep.write_text(json.dumps({"name": "r", "dimension": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["0", "0"]]}))
    out["repeated"] = str(rep)
    bad = d / "bad.json"
    bad.write_text("{ nope")
    out["bad"] = str(bad)
    mat = d / "class12.slack"
    mat.write_text(dumps_matrix(slack_matrix(build_class(12))))
    out["matrix"] = str(mat)
    out["dir"] = d
    return out


def report(argv):
    code, out, err = run(["--json", *argv])
    return code, (json.loads(out) if out else None), err


def test_hull(files):
    code, doc, _ = report(["hull", files["class1"]])
    assert code == 0 and len(doc["findings"]["facets"]) == 5
    assert doc["findings"]["f_vector"] == [5, 10, 10, 5]
    code, doc, _ = report(["hull", files["square"]])
    assert code == 0 and len(doc["findings"]["facets"]) == 4


def test_hull_errors(files):
    assert run(["hull", files["repeated"]])[0] == 3
    assert run(["hull", files["bad"]])[0] == 2
    assert run(["hull", files["matrix"]])[0] == 2
    assert run(["hull", str(files["dir"] / "missing.json")])[0] == 2


def test_trinomial(files):
    code, doc, _ = report(["trinomial", files["hexagon"], "--order", "4"])
    assert code == 1 and doc["status"] == "fail" and doc["findings"]["hits"] >= 1
    code, doc, _ = report(["trinomial", files["class25"], "--order", "6"])
    assert code == 0 and doc["findings"]["hits"] == 0
    code, doc, _ = report(["trinomial", files["square"], "--order", "4"])
    assert code == 0
    code, doc, _ = report(["trinomial", files["hexagon"], "--order", "4", "--first"])
    assert doc["findings"]["hits"] == 1


def test_trinomial_accepts_matrix_files(files):
    code, doc, _ = report(["trinomial", files["matrix"], "--order", "6"])
    assert code == 0 and doc["findings"]["shape"] == [9, 8]


def test_certify(files, tmp_path):
    code, doc, _ = report(["certify", files["octahedron"]])
    assert code == 0 and doc["findings"]["certificate"]["signs"].count("-") == 0
    cert = tmp_path / "cert.json"
    code, doc, _ = report(["certify", files["skew"], "--exhaustive", "--certificate", str(cert)])
    assert code == 1 and json.loads(cert.read_text())["explored"] == 2048
    code, doc, _ = report(["certify", files["tesseract"]])
    assert code == 0 and doc["findings"]["status"] == "psd-minimal"


def test_certify_inconclusive_and_template_path(files, tmp_path):
    from psdmin.catalogue import load_templates
    S = load_templates()["class-12"][0].instantiate(x1=Fraction(1, 9), x2=Fraction(4, 9))
    path = tmp_path / "form.slack"
    path.write_text(dumps_matrix(S))
    code, doc, _ = report(["certify", str(path), "--budget", "1", "--no-templates"])
    assert code == 4 and doc["status"] == "inconclusive"
    code, doc, _ = report(["certify", str(path), "--budget", "1"])
    assert code == 0 and doc["findings"]["method"] == "template"


def test_catalogue(files):
    code, doc, _ = report(["catalogue", "--class", "12"])
    assert code == 0 and doc["findings"]["details"]["condition_value"] == "0"
    assert doc["findings"]["record"]["id"] == 12
    code, doc, _ = report(["catalogue", "--all"])
    assert code == 0 and doc["findings"]["passed"] == 31
    code, _, err = report(["catalogue", "--class", "32"])
    assert code == 2 and "32" in err


def test_usage_errors():
    assert run([])[0] == 2
    assert run(["catalogue"])[0] == 2
    assert run(["frobnicate"])[0] == 2


def test_reports_are_deterministic(files):
    for argv in (["hull", files["class25"]], ["trinomial", files["hexagon"], "--order", "4"],
                 ["certify", files["skew"], "--exhaustive"], ["catalogue", "--class", "14"]):
        a = run(["--json", *argv])
        b = run(["--json", *argv])
        assert a == b
        assert run(argv)[1] == run(argv)[1]


def test_text_rendering(files):
    code, out, _ = run(["hull", files["square"]])
    assert out.startswith("hull: ok") and "f_vector: 4 4" in out


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "psdmin.cli", "hull", files["square"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "f_vector" in proc.stdout
