"""End-to-end command line checks through real subprocesses."""

import json
import subprocess
import sys

import pytest

CMD = [sys.executable, "-m", "cliffilt.cli"]


def run(args, stdin=None):
    return subprocess.run(CMD + args, input=stdin, capture_output=True, text=True)


@pytest.fixture(scope="module")
def degree_doc():
    out = run(["example", "exterior4-degree"])
    assert out.returncode == 0
    return out.stdout


def test_examples_emit_valid_documents():
    for name in ("exterior4-degree", "exterior4-hodge", "cl5-irreducible", "cl1-trivial"):
        out = run(["example", name])
        assert out.returncode == 0
        doc = json.loads(out.stdout)
        assert doc["schema"] == "cliffilt/1"
        check = run(["check"], stdin=out.stdout)
        assert check.returncode == 0, name
        assert json.loads(check.stdout)["pass"] is True


def test_pipe_invariants_known_values(degree_doc):
    hodge = run(["example", "exterior4-hodge"]).stdout
    out = run(["invariants"], stdin=hodge)
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    assert rep["source_dims"] == [1, 0, 3, 0, 0]
    out = run(["invariants"], stdin=degree_doc)
    assert json.loads(out.stdout)["source_dims"] == [1, 0, 0, 0, 0]


def test_pipe_roundtrip_passes(degree_doc):
    out = run(["roundtrip"], stdin=degree_doc)
    assert out.returncode == 0
    assert json.loads(out.stdout)["pass"] is True


def test_deform_quotient_chain(degree_doc):
    rep = run(["deform"], stdin=degree_doc)
    assert rep.returncode == 0
    back = run(["quotient", "--k", "1"], stdin=rep.stdout)
    assert back.returncode == 0
    assert json.loads(back.stdout)["kind"] == "onshell_module"
    collapsed = run(["quotient", "--k", "0"], stdin=rep.stdout)
    assert json.loads(collapsed.stdout)["dims"] == [1, 4, 6, 4, 1]
    checked = run(["check"], stdin=back.stdout)
    assert checked.returncode == 0


def test_corrupted_document_fails_check(degree_doc):
    doc = json.loads(degree_doc)
    doc["even_flags"][1]["rows"][0][7] = "5"
    out = run(["check"], stdin=json.dumps(doc))
    assert out.returncode == 1
    cert = json.loads(out.stdout)
    assert cert["pass"] is False and cert["witness"] is not None


def test_malformed_inputs_exit_two():
    assert run(["check"], stdin="garbage").returncode == 2
    assert run(["check"], stdin='{"schema": "other"}').returncode == 2
    rep = run(["deform"], stdin=run(["example", "cl1-trivial"]).stdout)
    assert run(["quotient", "--k", "-2"], stdin=rep.stdout).returncode == 2
    assert run(["quotient", "--k", "x"], stdin=rep.stdout).returncode == 2


def test_decompose_emits_summands():
    hodge = run(["example", "exterior4-hodge"]).stdout
    out = run(["decompose"], stdin=hodge)
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert len(doc["summands"]) == 2
    assert all(s["status"] == "indecomposable (certified)" for s in doc["summands"])


def test_search_deterministic_and_valid():
    module = run(["example", "cl5-irreducible"]).stdout
    a = run(["search", "--target", "2,8,6", "--budget", "60", "--seed", "0"], stdin=module)
    b = run(["search", "--target", "2,8,6", "--budget", "60", "--seed", "0"], stdin=module)
    assert a.returncode == 0 and a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc["count"] >= 1
    for enc in doc["filtrations"]:
        validated = run(["check"], stdin=json.dumps(enc))
        assert validated.returncode == 0


def test_tensor_bideform_biquotient_chain(tmp_path, degree_doc):
    ext1 = run(["example", "cl1-trivial"]).stdout
    p_path = tmp_path / "p.json"
    q_path = tmp_path / "q.json"
    p_path.write_text(degree_doc)
    q_path.write_text(ext1)
    bf = run(["tensor", "--p", str(p_path), "--q", str(q_path)])
    assert bf.returncode == 0
    assert json.loads(bf.stdout)["kind"] == "bifiltered_module"
    rep = run(["bideform"], stdin=bf.stdout)
    assert rep.returncode == 0
    ver = run(["verify2d"], stdin=rep.stdout)
    assert ver.returncode == 0 and json.loads(ver.stdout)["pass"] is True
    back = run(["biquotient", "--shell-plus", "2", "--shell-minus", "1/3"], stdin=rep.stdout)
    assert back.returncode == 0
    assert run(["check"], stdin=back.stdout).returncode == 0


def test_export_dot(degree_doc, tmp_path):
    out = run(["export-dot"], stdin=degree_doc)
    assert out.returncode == 0
    assert out.stdout.startswith("digraph adinkra {")
    # non-adapted case exits 1 with a certificate
    hodge = run(["example", "exterior4-hodge"]).stdout
    bad = run(["export-dot"], stdin=hodge)
    assert bad.returncode == 1
    assert json.loads(bad.stdout)["pass"] is False

    path = tmp_path / "g.dot"
    saved = run(["export-dot", "-o", str(path)], stdin=degree_doc)
    assert saved.returncode == 0 and path.read_text().startswith("digraph")


def test_envcheck():
    out = run(["envcheck", "--n", "2", "--samples", "20"])
    assert out.returncode == 0
    cert = json.loads(out.stdout)
    assert cert["check"] == "enveloping_quotient" and cert["pass"] is True
    assert run(["envcheck", "--n", "1", "--max-degree", "2"]).returncode == 2


def test_output_file_flag(tmp_path, degree_doc):
    path = tmp_path / "out.json"
    out = run(["invariants", "-o", str(path)], stdin=degree_doc)
    assert out.returncode == 0 and out.stdout == ""
    assert json.loads(path.read_text())["gr_dims"] == [1, 4, 6, 4, 1]


def test_input_path_positional(tmp_path, degree_doc):
    path = tmp_path / "f.json"
    path.write_text(degree_doc)
    out = run(["check", str(path)])
    assert out.returncode == 0
