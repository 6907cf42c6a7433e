from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from vxcalc.cli import UsageError, main, run_command
from vxcalc.report import Check, Report, emit_report

ROOT = Path(__file__).resolve().parents[1]
SCHEMAS = ROOT / "docs" / "schemas"
EXAMPLES = ROOT / "docs" / "examples"


def load_schema(name):
    return json.loads((SCHEMAS / name).read_text())


def validator(name):
    registry = Registry().with_resource("character.schema.json",
                                        Resource.from_contents(load_schema("character.schema.json")))
    return jsonschema.Draft202012Validator(load_schema(name), registry=registry)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_json(capsys):
    code, out, _ = run(["eval", "a[1](-1)|0> _(0) x1 |0>"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["data"]["state"] == "|0>"
    validator("report.schema.json").validate(doc)


def test_eval_syntax_error(capsys):
    code, _, err = run(["eval", "a[1](-1"], capsys)
    assert code == 2 and "column 7" in err


@pytest.mark.parametrize("argv", [
    ["glue", "--builtin", "p1-tcdo", "--weight", "2"],
    ["glue", "--builtin", "p1-cdo"],
    ["sing", "--chart", str(EXAMPLES / "c1.json"), "--weight", "4", "--degree", "4"],
    ["borcherds", "--chart", str(EXAMPLES / "c1.json"), "--samples", "20", "--seed", "7"],
    ["borcherds", "--builtin", "cn", "--module", "--samples", "10"],
    ["axioms", "--builtin", "cn", "-N", "2", "--degree", "2"],
    ["rewrite", "--builtin", "p1-tcdo", "--character", str(EXAMPLES / "tdo-theta3.json"), "--samples", "10"],
    ["rewrite", "--builtin", "cn", "a[1](-2) b[1](-1) x1|0>"],
    ["roundtrip", "--chart", str(EXAMPLES / "tdo-theta3.json")],
    ["roundtrip", "--chart", str(EXAMPLES / "connection.json"), "--weight", "2", "--degree", "2"],
    ["commutators", "--chart", str(EXAMPLES / "c3-alpha.json")],
])
def test_commands_pass_and_match_schema(argv, capsys):
    code, out, _ = run(argv, capsys)
    doc = json.loads(out)
    assert code == 0 and doc["ok"], out
    validator("report.schema.json").validate(doc)


def test_failing_report_exit_code_and_witness(capsys):
    code, out, _ = run(["glue", "--builtin", "p1-tcdo", "--variant", "omit"], capsys)
    doc = json.loads(out)
    assert code == 1 and not doc["ok"]
    assert all(c.get("witness") for c in doc["checks"] if not c["ok"])
    validator("report.schema.json").validate(doc)


def test_text_format(capsys):
    code, out, _ = run(["glue", "--builtin", "p1-cdo", "--variant", "sign", "--format", "text"], capsys)
    assert code == 1 and "[FAIL] homomorphism" in out and "witness:" in out


@pytest.mark.parametrize("argv,message", [
    (["sing", "--chart", "/nonexistent.json"], "cannot read"),
    (["sing", "--chart", str(EXAMPLES / "c1.json"), "--builtin", "cn"], "either --chart or --builtin"),
    (["glue", "--builtin", "cn"], "glue needs"),
])
def test_usage_errors(argv, message, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and message in err


def test_nonpositive_cutoff_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sing", "--weight", "0"])
    assert exc.value.code == 2
    assert "positive" in capsys.readouterr().err


def test_unknown_command():
    with pytest.raises(UsageError):
        run_command("frobnicate", [])
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_bad_chart_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"charts": [{"name": "U", "N": 3, "alpha": {"1,2,3": "x4"}}]}')
    code, _, err = run(["commutators", "--chart", str(bad)], capsys)
    assert code == 2 and "bad chart document" in err
    bad.write_text("{not json")
    code, _, err = run(["commutators", "--chart", str(bad)], capsys)
    assert code == 2 and "not valid JSON" in err


def test_rejected_character(tmp_path, capsys):
    ch = tmp_path / "chi.json"
    ch.write_text('{"theta": ["0"], "chi": {"1": ["1"]}}')
    validator("character.schema.json").validate(json.loads(ch.read_text()))
    code, _, err = run(["sing", "--builtin", "p1-tcdo", "--character", str(ch)], capsys)
    assert code == 2 and "no nonzero half-integrable module" in err


def test_example_documents_validate():
    v = validator("chart.schema.json")
    for path in sorted(EXAMPLES.glob("*.json")):
        v.validate(json.loads(path.read_text()))


def test_determinism_byte_identical():
    argv = ["borcherds", "--builtin", "cn", "-N", "2", "--samples", "15", "--seed", "3"]
    outs = [subprocess.run([sys.executable, "-m", "vxcalc", *argv], capture_output=True, check=True).stdout
            for _ in range(2)]
    assert outs[0] == outs[1]


def test_timing_only_on_request():
    r = run_command("glue", ["--builtin", "p1-cdo", "--timing"])
    assert r.timing is not None and "timing_seconds" in r.as_dict()
    assert "timing_seconds" not in run_command("glue", ["--builtin", "p1-cdo"]).as_dict()


def test_emit_report_formats():
    r = Report("demo", {"seed": 1}, [Check("a", True), Check("b", False, "detail")])
    assert json.loads(emit_report(r))["checks"][1]["witness"] == "detail"
    with pytest.raises(ValueError):
        emit_report(r, "xml")


@pytest.mark.parametrize("wrapped", [True, False])
def test_roundtrip_presentation_file(tmp_path, capsys, wrapped):
    pres = json.loads((EXAMPLES / "connection.json").read_text())
    path = tmp_path / "pres.json"
    path.write_text(json.dumps(pres if wrapped else pres["presentation"]))
    code, out, _ = run(["roundtrip", "-N", "2", "--presentation", str(path)], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["params"]["rank"] == 2
