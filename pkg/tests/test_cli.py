import json
import math
import subprocess
import sys

import pytest

from jacobi_riesz.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kernel_single_entry(capsys):
    code, out, _ = run(["kernel", "riesz", "--alpha", "-0.5", "--beta", "-0.5", "--size", "1"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,n,value" and len(lines) == 2
    assert lines[1].startswith("0,0,9.0031631615710")


def test_quad_weights(capsys):
    code, out, _ = run(["quad", "--n", "4"], capsys)
    rows = [r.split(",") for r in out.strip().splitlines()[1:]]
    assert code == 0 and len(rows) == 4
    for _, _, w in rows:
        assert float(w) == pytest.approx(math.pi / 4, rel=1e-14)
        assert len(w.split("e")[0].replace("-", "").replace(".", "")) == 17


def test_quad_json(capsys):
    code, out, _ = run(["quad", "--alpha", "0", "--beta", "0", "--n", "2", "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["order"] == 2
    assert data["weights"] == pytest.approx([1.0, 1.0])


def test_kernel_sidecar(tmp_path):
    target = tmp_path / "k.csv"
    assert main(["kernel", "heat", "--t", "0.5", "--size", "3", "--output", str(target)]) == 0
    assert target.read_text().splitlines()[0] == "m,n,value"
    meta = json.loads((tmp_path / "k.csv.json").read_text())
    assert meta["kind"] == "heat" and meta["t"] == 0.5 and meta["N"] == 3


def test_transform_roundtrip(tmp_path):
    src = tmp_path / "f.json"
    src.write_text(json.dumps({"offset": 0, "values": [1.0]}))
    out = tmp_path / "r.csv"
    assert main(["transform", "riesz", "--input", str(src), "--n", "16", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,value" and len(lines) == 17
    assert float(lines[1].split(",")[1]) == pytest.approx(2 * math.sqrt(2) / math.pi, abs=1e-14)
    report = json.loads((tmp_path / "r.csv.json").read_text())
    assert report["truncation"] == 16 and report["tail_estimate"] >= 0
    assert set(report["norms"]) == {"l1", "l2", "linf"}


@pytest.mark.parametrize(
    "args",
    [
        ["kernel", "riesz", "--alpha", "-0.7", "--size", "2"],
        ["kernel", "frac", "--sigma", "0.6", "--size", "2"],
        ["kernel", "heat", "--size", "2"],
        ["kernel", "heat", "--t", "-1", "--size", "2"],
        ["quad", "--alpha", "-1.5", "--n", "3"],
        ["quad", "--n", "0"],
        ["transform", "riesz", "--n", "4"],
        ["quad", "--n", "3", "--threads", "zero"],
        ["verify", "nonsense"],
        ["bogus"],
    ],
)
def test_usage_errors(args, capsys):
    code, _, _ = run(args, capsys)
    assert code == 2


def test_missing_input_file(tmp_path, capsys):
    code, _, _ = run(["transform", "heat", "--t", "1", "--input", str(tmp_path / "nope.json"), "--n", "4"], capsys)
    assert code == 2


def test_verify_report_and_exit(capsys):
    code, out, _ = run(["verify", "ap", "--gamma", "0.3", "--n", "256"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["estimate_id"] == "ap"
    code, out, _ = run(["verify", "weighted-norm", "--gamma", "0.5", "--n", "128"], capsys)
    assert code == 1 and not json.loads(out)["pass"]


def test_verify_identities(capsys):
    for vid in ("orthonormality", "factorization", "intertwine"):
        code, out, _ = run(["verify", vid, "--alpha", "0.5", "--beta", "0"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["pass"]
        assert {"estimate_id", "params", "N", "sup", "argmax", "dyadic_history", "pass"} <= set(rep)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "jacobi_riesz", "kernel", "riesz", "--size", "1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert res.stdout.startswith("m,n,value\n0,0,")
