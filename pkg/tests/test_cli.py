from __future__ import annotations

import json
import subprocess
import sys

import pytest

from fivedist.cli import EXIT_FAIL, EXIT_OK, EXIT_UNDECIDED, EXIT_USAGE, main
from fivedist.dsets import C1_MATRIX, Coloring, cube_coloring


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def cube_file(tmp_path):
    p = tmp_path / "cube.col"
    p.write_text(cube_coloring().to_text())
    return str(p)


@pytest.fixture
def c1_file(tmp_path):
    p = tmp_path / "c1.col"
    p.write_text(Coloring(C1_MATRIX).to_text())
    return str(p)


def test_bounds_f(capsys):
    code, data = run(capsys, "bounds", "f", "--n", "17")
    assert code == EXIT_OK
    assert data == {"lower": 7, "upper": 7, "witness": "cayley17"}


def test_bounds_f_exhaustive(capsys):
    code, data = run(capsys, "bounds", "f", "--n", "5", "--exhaustive")
    assert code == EXIT_OK
    assert data["exhaustive"] == data["lower"] == 3


def test_bounds_f_usage_errors(capsys):
    assert run(capsys, "bounds", "f")[0] == EXIT_USAGE
    assert run(capsys, "bounds", "f", "--n", "21")[0] == EXIT_USAGE
    assert run(capsys, "bounds", "f", "--n", "10", "--exhaustive")[0] == EXIT_USAGE


def test_diameter20_proof_roundtrip(capsys, tmp_path):
    proof = tmp_path / "d20.json"
    code, data = run(capsys, "bounds", "diameter20", "--emit-proof", str(proof))
    assert code == EXIT_OK
    assert data["verdict"] and data["reverified"]
    code, data = run(capsys, "verify-proof", str(proof))
    assert code == EXIT_OK and data["ok"]
    log = json.loads(proof.read_text())
    log["children"][1]["children"][0]["params"]["cites"] = [[10, 9], [10, 9]]
    proof.write_text(json.dumps(log))
    code, data = run(capsys, "verify-proof", str(proof))
    assert code == EXIT_FAIL and not data["ok"]


def test_verify_proof_bad_input(capsys, tmp_path):
    assert run(capsys, "verify-proof", str(tmp_path / "missing.json"))[0] == EXIT_USAGE
    junk = tmp_path / "junk.json"
    junk.write_text("[1, 2]")
    assert run(capsys, "verify-proof", str(junk))[0] == EXIT_USAGE


def test_dodeca_census_and_burnside(capsys):
    code, data = run(capsys, "dodeca", "census", "--k", "8")
    assert code == EXIT_OK
    assert data["counts"]["3"] == 5 and data["counts"]["4"] == 11520
    assert data["four_iff_antipode_free"]
    code, data = run(capsys, "dodeca", "burnside")
    assert code == EXIT_OK and data["orbits"] == data["burnside"] == 116


def test_coloring_check_and_canon(capsys, cube_file, c1_file, tmp_path):
    code, data = run(capsys, "coloring", "check", cube_file, c1_file)
    assert code == EXIT_OK
    assert data[cube_file] == {"status": "yes", "count": 1}
    assert data[c1_file] == {"status": "yes", "count": 4}
    relabeled = tmp_path / "c1b.col"
    relabeled.write_text(Coloring(C1_MATRIX).relabel([7, 6, 5, 4, 3, 2, 1, 0]).to_text())
    code, data = run(capsys, "coloring", "canon", c1_file, str(relabeled))
    assert code == EXIT_OK and data["all_equal"]


def test_coloring_budget_is_undecided(capsys, c1_file):
    code, data = run(capsys, "coloring", "check", c1_file, "--budget", "1")
    assert code == EXIT_UNDECIDED
    assert data[c1_file]["status"] == "budget"


def test_coloring_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.col"
    bad.write_text("3 2\n1 1\n")
    assert run(capsys, "coloring", "check", str(bad))[0] == EXIT_USAGE


def test_extend_certificate(capsys, tmp_path):
    out = tmp_path / "cert.json"
    code, _ = run(capsys, "extend", "--mode", "certificate", "--out", str(out))
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["ok"] and data["vertex_tests"] == 12 and data["edge_tests"] == 66


def test_extend_full_needs_coloring(capsys):
    assert run(capsys, "extend", "--mode", "full")[0] == EXIT_USAGE


def test_extend_full_with_limit(capsys, cube_file, tmp_path):
    dot = tmp_path / "g.dot"
    code, data = run(capsys, "extend", "--mode", "full", "--coloring", cube_file, "--limit", "2", "--dot", str(dot))
    assert code == EXIT_OK
    assert len(data["vertices"]) == 2
    assert dot.read_text().startswith("graph extension {")


def test_verify_all_subset_is_reproducible(capsys):
    code, first = run(capsys, "verify-all", "--only", "dodeca.group,bounds.f-values")
    assert code == EXIT_OK
    assert first["summary"]["pass"] == 2 and first["summary"]["fail"] == 0
    _, second = run(capsys, "verify-all", "--only", "dodeca.group,bounds.f-values")
    assert first == second
    assert all("runtime" not in c for c in first["claims"])


def test_verify_all_unknown_claim(capsys):
    assert run(capsys, "verify-all", "--only", "nope")[0] == EXIT_USAGE


def test_argparse_errors_are_usage():
    assert main(["dodeca", "frobnicate"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fivedist", "bounds", "f", "--n", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lower"] == 2


def test_report_matches_shipped_schema(capsys):
    from pathlib import Path

    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((Path(__file__).parents[1] / "docs" / "report.schema.json").read_text())
    _, report = run(capsys, "verify-all", "--only", "dodeca.group,bounds.f-values", "--timings")
    jsonschema.validate(report, schema)
    report["claims"][0]["verdict"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(report, schema)
