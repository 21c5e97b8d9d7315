import io
import json
import subprocess
import sys

import pytest

from algcanon.canonical import default_profile
from algcanon.cli import parse_tensor, run_command, serialize_tensor, write_result
from algcanon.errors import ParseError, SymmetryViolation, UnsupportedField
from algcanon.exactla import GF, QQ
from algcanon.structure import act, random_basis_change, random_tensor

RUNNING = {"format_version": 1, "m": 2, "symmetry": "general", "field": "rational",
           "entries": [["1", "1", "0", "0"], ["0", "1", "1", "1"]]}


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, stdout=out, stderr=err)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), err.getvalue()


def dump(tmp_path, name, doc):
    path = tmp_path / name
    path.write_bytes(write_result(doc))
    return str(path)


def test_parse_running_example(running_example):
    A = parse_tensor(RUNNING)
    assert A.matrix == running_example.matrix
    assert write_result(serialize_tensor(A)) == write_result(RUNNING)


def test_parse_errors():
    bad = dict(RUNNING, entries=[["1", "1", "0"], ["0", "1", "1", "1"]])
    with pytest.raises(ParseError):
        parse_tensor(bad)
    with pytest.raises(ParseError) as exc:
        parse_tensor(dict(RUNNING, entries=[["1", "x", "0", "0"], ["0", "1", "1", "1"]]))
    assert exc.value.location == "entries[0][1]"
    with pytest.raises(ParseError):
        parse_tensor(dict(RUNNING, entries=[[1, 1, 0, 0], [0, 1, 1, 1]]))
    with pytest.raises(UnsupportedField):
        parse_tensor(dict(RUNNING, field="fp:2"))
    with pytest.raises(SymmetryViolation):
        parse_tensor(dict(RUNNING, symmetry="commutative"))
    with pytest.raises(ParseError):
        parse_tensor({"m": 2})


def test_rationals_in_lowest_terms():
    doc = dict(RUNNING, entries=[["2/4", "6/-4", "0", "0"], ["0", "1", "1", "1"]])
    out = serialize_tensor(parse_tensor(doc))
    assert out["entries"][0][:2] == ["1/2", "-3/2"]
    assert serialize_tensor(parse_tensor(out)) == out


def test_gen_canon_iso_roundtrip(tmp_path):
    code, doc, _ = run(["gen", "--m", "3", "--sym", "general", "--field", "rational", "--seed", "5"])
    assert code == 0
    a = dump(tmp_path, "a.json", doc)
    A = parse_tensor(doc)
    g = random_basis_change(3, QQ, 99)
    b = dump(tmp_path, "b.json", serialize_tensor(act(g, A)))
    code, res, _ = run(["iso", "--profile", "m3-general", a, b])
    assert code == 0 and res["equivalent"]
    assert res["witness"] == [[QQ.format(x) for x in row] for row in g.tolist()]
    code, cert, _ = run(["canon", "--profile", "m3-general", "--in", a])
    assert code == 0
    assert cert["profile_hash"] == default_profile(3, "general").profile_hash
    assert cert["certificate"]["canonical"] == res["certificates"][0]["canonical"]


def test_iso_not_equivalent_exit_one(tmp_path):
    a = dump(tmp_path, "a.json", RUNNING)
    other = dict(RUNNING, entries=[["2", "1", "0", "0"], ["0", "1", "1", "1"]])
    b = dump(tmp_path, "b.json", other)
    code, res, _ = run(["iso", "--profile", "m2-general", a, b])
    assert code == 1 and res["equivalent"] is False and res["witness"] is None


def test_non_generic_exit_two(tmp_path):
    zero = dict(RUNNING, entries=[["0"] * 4, ["0"] * 4])
    z = dump(tmp_path, "z.json", zero)
    code, res, _ = run(["canon", "--profile", "m2-general", "--in", z])
    assert code == 2 and res["error"] == "NonGenericInput"
    assert res["diagnostics"][0]["q_nonsingular"] is False
    a = dump(tmp_path, "a.json", RUNNING)
    assert run(["iso", "--profile", "m2-general", a, z])[0] == 2


def test_profile_hash_mismatch_is_usage_error(tmp_path):
    a = dump(tmp_path, "a.json", RUNNING)
    code, cert, _ = run(["canon", "--profile", "m2-general", "--in", a])
    c = dump(tmp_path, "cert.json", dict(cert, profile_hash="0" * 64))
    code, _, err = run(["iso", "--profile", "m2-general", a, c])
    assert code == 64 and "profile" in err
    good = dump(tmp_path, "good.json", cert)
    assert run(["iso", "--profile", "m2-general", a, good])[0] == 0


def test_usage_errors(tmp_path):
    assert run(["nosuch"])[0] == 64
    assert run(["gen", "--m", "2", "--sym", "weird"])[0] == 64
    assert run(["gen", "--m", "2", "--sym", "general", "--field", "fp:2"])[0] == 64
    assert run(["canon", "--profile", "m9-general", "--in", "x.json"])[0] == 64
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["canon", "--profile", "m2-general", "--in", str(bad)])[0] == 64
    prof = dump(tmp_path, "p.json", dict(default_profile(2, "general").to_json(), k=2))
    a = dump(tmp_path, "a.json", RUNNING)
    assert run(["canon", "--profile", prof, "--in", a])[0] == 64


def test_profile_command(tmp_path):
    out = tmp_path / "p.json"
    code, doc, _ = run(["profile", "--m", "3", "--sym", "general", "--seed", "0", "--out", str(out)])
    assert code == 0
    assert out.read_bytes() == write_result(default_profile(3, "general").to_json())
    code, doc, _ = run(["profile", "--m", "3", "--sym", "anticommutative", "--seed", "0"])
    assert code == 3 and doc["error"] == "AssumptionViolation"
    assert doc["report"]["stabilizer_dimension"] == 1


def test_rank_command():
    code, doc, _ = run(["rank", "--profile", "m2-commutative", "--map", "canonical", "--seeds", "0,1,2"])
    assert code == 0 and doc["rank"]["measured_rank"] == 2


def test_selftest_command():
    code, doc, _ = run(["selftest", "--configs", "m2-general", "--trials", "100", "--seed", "7"])
    assert code == 0 and doc["passed"]
    again = run(["selftest", "--configs", "m2-general", "--trials", "100", "--seed", "7"])
    assert again[1] == doc
    code, doc, _ = run(["selftest", "--configs", "m3-anticommutative", "--trials", "5"])
    assert code == 1 and not doc["passed"]
    assert run(["selftest", "--configs", "garbage"])[0] == 64


def test_module_entry_point_and_determinism(tmp_path):
    doc = serialize_tensor(random_tensor(2, "general", GF(2**31 - 1), 3))
    a = dump(tmp_path, "a.json", doc)
    cmd = [sys.executable, "-m", "algcanon", "canon", "--profile", "m2-general", "--in", a]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.endswith(b"\n") and b" " not in first
