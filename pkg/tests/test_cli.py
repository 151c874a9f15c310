import json
import shutil
import subprocess
import sys

import pytest

from pitkit.circuits import Circuit, ComposedCircuit, Depth4Circuit
from pitkit.cli import main
from pitkit.fields import FieldSpec
from pitkit.polynomials import SparsePoly, poly_from_text

from _gen import RATIONAL, cancelling_depth4

Q = RATIONAL
F101 = FieldSpec("prime", 101)

TIGHT_FAMILY = {
    "field": {"kind": "rational"},
    "nvars": 2,
    "polys": ["x1", "x2 - x1^2", "x2^2"],
}
PAIR_FAMILY = {"field": {"kind": "rational"}, "nvars": 1, "polys": ["x1", "x1^2"]}


def P(text, nvars, field=Q):
    return poly_from_text(text, field, nvars)


def zero_composition():
    f = P("x1^2 + 2*x1", 1)
    return ComposedCircuit(Circuit.from_poly(P("x2 - x1^2", 2)), [f, f * f])


def shared_factor_depth4():
    rows = [[P("x1", 3), P("x2", 3)], [P("x1", 3), P("x3", 3)]]
    return Depth4Circuit(Q, 3, 1, rows)


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_pit_zero_composition(tmp_path, capsys):
    path = dump(tmp_path, "zero.json", zero_composition().to_json_dict())
    code, out, _ = run(capsys, ["pit", path])
    report = json.loads(out)
    assert code == 0
    assert report["command"] == "pit"
    assert report["circuit_kind"] == "composed"
    assert report["verdict"]["outcome"] == "zero"
    assert report["config"]["mode"] == "adaptive"


def test_pit_nonzero_dag(tmp_path, capsys):
    dag = Circuit.from_poly(P("x1^2 - x2", 2, F101))
    path = dump(tmp_path, "dag.json", dag.to_json_dict())
    code, out, _ = run(capsys, ["pit", path])
    report = json.loads(out)
    assert code == 1
    assert report["circuit_kind"] == "dag"
    assert report["verdict"]["outcome"] == "nonzero"
    assert report["verdict"]["witness"] == [0, 1]
    assert report["verdict"]["points_checked"] == 2


def test_pit_budget_exit_code(tmp_path, capsys):
    path = dump(tmp_path, "zero.json", zero_composition().to_json_dict())
    code, out, _ = run(capsys, ["pit", path, "--max-points", "1"])
    assert code == 2
    assert json.loads(out)["verdict"]["outcome"] == "inconclusive"


def test_pit_constant_composition(tmp_path, capsys):
    outer = Circuit.from_poly(P("x1 + x2", 2))
    two = SparsePoly.constant(Q, 1, Q.from_int(2))
    minus_two = SparsePoly.constant(Q, 1, Q.from_int(-2))
    zpath = dump(tmp_path, "cz.json", ComposedCircuit(outer, [two, minus_two]).to_json_dict())
    code, out, _ = run(capsys, ["pit", zpath])
    report = json.loads(out)
    assert code == 0
    assert report["verdict"]["provenance"] == {"construction": "constant-composition"}
    npath = dump(tmp_path, "cn.json", ComposedCircuit(outer, [two, two]).to_json_dict())
    code, out, _ = run(capsys, ["pit", npath])
    assert code == 1
    assert json.loads(out)["verdict"]["value"] == "4"


def test_pit_depth4_circuit(tmp_path, capsys):
    C = cancelling_depth4(4)
    path = dump(tmp_path, "cancel.json", C.to_json_dict())
    code, out, _ = run(capsys, ["pit", path])
    assert code == 0
    assert json.loads(out)["circuit_kind"] == "depth4"


def test_trdeg_report(tmp_path, capsys):
    path = dump(tmp_path, "tight.json", TIGHT_FAMILY)
    code, out, _ = run(capsys, ["trdeg", path])
    report = json.loads(out)
    assert code == 0
    assert report["r"] == 2
    assert report["exact"] is True
    assert set(report["certificate"]) == {"basis", "mode", "r", "witness"}
    assert set(report["config"]) == {"mode", "seed", "budget_columns"}


def test_annihilator_found_and_absent(tmp_path, capsys):
    pair = dump(tmp_path, "pair.json", PAIR_FAMILY)
    code, out, _ = run(capsys, ["annihilator", pair, "--cap", "2"])
    report = json.loads(out)
    assert code == 0
    assert report["found"] is True
    assert report["annihilator"] == "x1^2 - x2"
    assert report["m"] == 2
    tight = dump(tmp_path, "tight.json", TIGHT_FAMILY)
    code, out, _ = run(capsys, ["annihilator", tight, "--cap", "3"])
    report = json.loads(out)
    assert report["found"] is False
    assert report["annihilator"] is None


def test_depth4_report(tmp_path, capsys):
    path = dump(tmp_path, "d4.json", shared_factor_depth4().to_json_dict())
    code, out, _ = run(capsys, ["depth4", path])
    report = json.loads(out)
    assert code == 0
    assert report["gcd"] == "x1"
    assert report["simple"] == [["x2"], ["x3"]]
    assert report["rank"] == 3
    assert report["minimal"] is True
    assert (report["delta"], report["k"], report["s"]) == (1, 2, 2)
    code, out, _ = run(capsys, ["depth4", path, "--skip-minimal"])
    assert json.loads(out)["minimal"] is None


def test_depth4_rejects_other_kinds(tmp_path, capsys):
    path = dump(tmp_path, "zero.json", zero_composition().to_json_dict())
    code, _, err = run(capsys, ["depth4", path])
    assert code == 3
    assert "depth4" in json.loads(err)["error"]


def test_faithful_report(tmp_path, capsys):
    pair = dump(tmp_path, "pair.json", PAIR_FAMILY)
    code, out, _ = run(capsys, ["faithful", pair, "--kind", "phi"])
    report = json.loads(out)
    assert code == 0
    result = report["result"]
    assert set(result) == {"map", "input_certificate", "image_certificate", "candidates_tried"}
    assert result["map"]["kind"] == "phi"
    assert result["map"]["I"] == [1]
    assert result["map"]["D"] == 5
    assert result["map"]["p"] == 2


def test_verify_accepts_own_reports(tmp_path, capsys):
    tight = dump(tmp_path, "tight.json", TIGHT_FAMILY)
    pair = dump(tmp_path, "pair.json", PAIR_FAMILY)
    d4 = dump(tmp_path, "d4.json", shared_factor_depth4().to_json_dict())
    dag = dump(tmp_path, "dag.json", Circuit.from_poly(P("x1^2 - x2", 2, F101)).to_json_dict())
    zero = dump(tmp_path, "zero.json", zero_composition().to_json_dict())
    cases = [
        (["trdeg", tight], tight),
        (["annihilator", pair, "--cap", "2"], pair),
        (["annihilator", tight, "--cap", "3"], tight),
        (["faithful", tight, "--kind", "psi"], tight),
        (["depth4", d4], d4),
        (["pit", dag], dag),
        (["pit", zero], zero),
    ]
    for i, (argv, against) in enumerate(cases):
        code, out, _ = run(capsys, argv)
        report = dump(tmp_path, "report%d.json" % i, out)
        code, out, _ = run(capsys, ["verify", report, "--against", against])
        verdict = json.loads(out)
        assert code == 0, argv
        assert verdict["verified"] is True, (argv, verdict)


def test_verify_rejects_tampered_reports(tmp_path, capsys):
    tight = dump(tmp_path, "tight.json", TIGHT_FAMILY)
    code, out, _ = run(capsys, ["trdeg", tight])
    report = json.loads(out)
    report["r"] = 1
    bad = dump(tmp_path, "bad.json", report)
    code, out, _ = run(capsys, ["verify", bad, "--against", tight])
    assert code == 4
    assert json.loads(out)["verified"] is False

    dag = dump(tmp_path, "dag.json", Circuit.from_poly(P("x1^2 - x2", 2, F101)).to_json_dict())
    code, out, _ = run(capsys, ["pit", dag])
    report = json.loads(out)
    report["verdict"]["value"] = 7
    bad = dump(tmp_path, "badpit.json", report)
    code, out, _ = run(capsys, ["verify", bad, "--against", dag])
    assert code == 4
    assert "witness value" in json.loads(out)["detail"]


def test_hitting_set_stream(capsys):
    argv = [
        "hitting-set", "--kind", "sparse-char0", "--n", "1", "--d", "3",
        "--r", "1", "--delta", "1", "--ell", "1", "--max-points", "5",
    ]
    code, out, _ = run(capsys, argv)
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 6
    header = json.loads(lines[0])
    assert header["command"] == "hitting-set"
    assert header["size_bound"] == 67600
    assert header["guarantee"] == "certified"
    assert header["arity"] == 1
    for line in lines[1:]:
        point = json.loads(line)["point"]
        assert len(point) == 1
    code, out2, _ = run(capsys, argv)
    assert out == out2


def test_hitting_set_over_prime_field(capsys):
    code, out, _ = run(capsys, [
        "hitting-set", "--kind", "depth4", "--n", "2", "--delta", "1",
        "--k", "2", "--s", "1", "--max-points", "3", "--field", "7",
    ])
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 4
    assert json.loads(lines[0])["guarantee"] == "certified"
    assert json.loads(lines[1])["point"] == [1, 1]


def test_malformed_inputs_exit_three(tmp_path, capsys):
    garbage = dump(tmp_path, "garbage.json", "{nope")
    assert run(capsys, ["pit", garbage])[0] == 3
    family = dump(tmp_path, "fam.json", PAIR_FAMILY)
    assert run(capsys, ["pit", family])[0] == 3
    assert run(capsys, [
        "hitting-set", "--kind", "any-char", "--n", "1", "--d", "2",
        "--r", "1", "--delta", "1", "--field", "4",
    ])[0] == 3
    badpoly = dump(tmp_path, "badpoly.json",
                   {"field": {"kind": "rational"}, "nvars": 1, "polys": ["x1 $"]})
    assert run(capsys, ["trdeg", badpoly])[0] == 3
    assert run(capsys, [
        "hitting-set", "--kind", "sparse-char0", "--n", "1", "--d", "2",
        "--r", "1", "--delta", "1",
    ])[0] == 3


def test_resource_errors_exit_four(tmp_path, capsys):
    pair = dump(tmp_path, "pair.json", PAIR_FAMILY)
    code, _, err = run(capsys, ["annihilator", pair, "--cap", "2", "--budget-columns", "1"])
    assert code == 4
    assert "budget" in json.loads(err)["error"]
    tight = dump(tmp_path, "tight.json", TIGHT_FAMILY)
    code, _, err = run(capsys, ["faithful", tight, "--kind", "psi", "--r", "1"])
    assert code == 4
    assert "below the input transcendence degree" in json.loads(err)["error"]


def test_reports_are_byte_identical_across_runs(tmp_path, capsys):
    path = dump(tmp_path, "zero.json", zero_composition().to_json_dict())
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, ["pit", path, "--seed", "0"])
        outs.append(out)
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pitkit.cli", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "pit" in proc.stdout


@pytest.mark.skipif(shutil.which("pitkit") is None, reason="console script not on PATH")
def test_console_script():
    proc = subprocess.run(["pitkit", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "hitting-set" in proc.stdout
