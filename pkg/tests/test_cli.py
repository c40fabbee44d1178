import json

import pytest

from gaugebrane import cli
from gaugebrane.complexes import random_brane, random_trivial_brane
from gaugebrane.gauge import CocycleError
from gaugebrane.io import DocumentError, brane_to_document, dumps, parse_document


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


CONSTANT = {"n": 2, "label": "constant",
            "terms": {"0": [0, 0], "1": [0]}, "diffs": {"0": [["1", "0"]]}}


def test_validate_constant_complex(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", write(tmp_path, "g.json", CONSTANT))
    assert code == 0
    assert out.strip() == "valid, in-range, all twists 0"


def test_gauge_on_twisted_line_bundle(tmp_path, capsys):
    path = write(tmp_path, "o.json", {"n": 2, "terms": {"0": [-1]}})
    code, out, _ = run(capsys, "gauge", path)
    assert code == 0
    assert "exists: false" in out.splitlines()


def test_ext_degree(tmp_path, capsys):
    a = write(tmp_path, "a.json", {"n": 2, "terms": {"0": [0]}})
    b = write(tmp_path, "b.json", {"n": 2, "terms": {"0": [-3]}})
    code, out, _ = run(capsys, "ext", a, b, "--i", "2")
    assert code == 0 and out.strip() == "dim: 1"


def test_json_report_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, "g.json", CONSTANT)
    _, first, _ = run(capsys, "cohom", path, "--json")
    _, second, _ = run(capsys, "cohom", path, "--json")
    assert first == second
    report = json.loads(first)
    assert set(report) == {"command", "input_digest", "dims", "truncation_used", "seed"}
    assert report["truncation_used"] >= 4


def test_digest_ignores_formatting(tmp_path, capsys):
    spaced = json.dumps(CONSTANT, indent=4)
    reordered = {"diffs": {"0": [["1", "0*x0"]]}, "terms": {"1": [0], "0": [0, 0]}, "n": 2}
    _, a, _ = run(capsys, "validate", "--json", write(tmp_path, "a.json", spaced))
    _, b, _ = run(capsys, "validate", "--json", write(tmp_path, "b.json", reordered))
    assert json.loads(a)["input_digest"] == json.loads(b)["input_digest"]


@pytest.mark.parametrize("doc, fragment", [
    ("{not json", "invalid JSON"),
    ({"n": 0, "terms": {}}, "n:"),
    ({"n": 1, "terms": {"x": [0]}}, "position 'x'"),
    ({"n": 1, "terms": {"0": [0.5]}}, "terms['0']"),
    ({"n": 1, "terms": {"-1": [-1], "0": [0]}, "diffs": {"-1": [["x0 + x1^2"]]}}, "diffs['-1'][0][0]"),
    ({"n": 1, "terms": {"-1": [-1], "0": [0]}, "diffs": {"-1": [["x0", "x1"]]}}, "expected 1x1"),
    ({"n": 1, "terms": {"-1": [0], "0": [0]}, "diffs": {"-1": [["x0"]]}}, "position -1 entry (0,0)"),
    ({"n": 1, "terms": {"0": [0], "1": [0], "2": [0]}, "diffs": {"0": [["1"]], "1": [["1"]]}}, "d^1 d^0"),
])
def test_rejects_bad_documents(tmp_path, capsys, doc, fragment):
    code, _, err = run(capsys, "validate", write(tmp_path, "bad.json", doc))
    assert code == 1
    assert fragment in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "cohom", "/nonexistent/brane.json")
    assert code == 1 and "error" in err


def test_truncation_below_bound(tmp_path, capsys):
    path = write(tmp_path, "o.json", {"n": 2, "terms": {"0": [0]}})
    assert run(capsys, "cohom", path, "--truncation", "3")[0] == 1
    code, out, _ = run(capsys, "cohom", path, "--truncation", "6", "--json")
    assert code == 0 and json.loads(out)["truncation_used"] == 6


def test_internal_error_exit_code(tmp_path, capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise CocycleError("sign bug")
    monkeypatch.setattr(cli, "gauge_exists", boom)
    code, _, err = run(capsys, "gauge", write(tmp_path, "g.json", CONSTANT))
    assert code == 2 and "sign bug" in err


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "--help")[0] == 0


def test_witness_file(tmp_path, capsys):
    target = tmp_path / "w.json"
    code, out, _ = run(capsys, "gauge", write(tmp_path, "g.json", CONSTANT), "--witness", str(target))
    assert code == 0 and "exists: true" in out
    data = json.loads(target.read_text())
    assert data["residual_zero"] is True and data["projection"] == "identity"


def test_generate_round_trip(capsys):
    code, out, _ = run(capsys, "generate", "--n", "2", "--depth", "2", "--seed", "3")
    assert code == 0
    assert parse_document(json.loads(out)) == random_brane(2, 2, 3)
    _, again, _ = run(capsys, "generate", "--n", "2", "--depth", "2", "--seed", "3")
    assert out == again
    _, rep, _ = run(capsys, "generate", "--n", "1", "--seed", "4", "--trivial", "--json")
    rep = json.loads(rep)
    assert rep["seed"] == 4
    assert parse_document(rep["brane"]) == random_trivial_brane(1, 4)


def test_serialization_round_trip():
    for n in (1, 2, 3):
        for seed in range(5):
            c = random_brane(n, 2, seed)
            doc = json.loads(dumps(c, label="x"))
            assert doc["label"] == "x"
            back = parse_document(doc)
            assert back == c
            assert brane_to_document(back) == brane_to_document(c)


def test_parse_document_type_errors():
    with pytest.raises(DocumentError):
        parse_document([1, 2])


def test_classify_audit_omega_bott(tmp_path, capsys):
    point = write(tmp_path, "p.json", {"n": 1, "terms": {"-1": [-1], "0": [0]}, "diffs": {"-1": [["x0"]]}})
    code, out, _ = run(capsys, "classify", point)
    assert code == 0 and "predicted: false" in out and "engine: false" in out
    code, out, _ = run(capsys, "audit", point, "--json")
    audit = json.loads(out)["audit"]
    assert audit["hom_derived"] == 1 and audit["naive_hom0"] == 0 and audit["discrepancy"] is True
    code, out, _ = run(capsys, "omega", "--n", "2", "--p", "1", "--k", "0", "--json")
    rep = json.loads(out)
    assert rep["dims"] == rep["bott"] == {"0": 0, "1": 1, "2": 0}
    assert run(capsys, "bott", "--n", "2", "--p", "1", "--k", "2", "--q", "0")[1].strip() == "dim: 3"
    assert run(capsys, "omega", "--n", "2", "--p", "3")[0] == 1
