import csv
import json

from safrel.cli import main


def test_cli_homogeneous(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["homogeneous-transfer", "--suts", "5", "--seed", "4", "--episodes", "5", "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out / "per_sut.csv")))
    assert len(rows) == 5
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["seed"] == 4 and meta["epsilon"] == "fixed:0.2" and meta["population"] == "cpu"


def test_cli_heterogeneous_defaults_to_adaptive(tmp_path):
    out = tmp_path / "run"
    assert main(["heterogeneous-transfer", "--suts", "4", "--episodes", "3", "--out", str(out)]) == 0
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["epsilon"] == "adaptive" and meta["population"] == "mixed"


def test_cli_custom_catalog_and_membership(tmp_path):
    cat = tmp_path / "cat.csv"
    cat.write_text("name,sen_c,sen_m,sen_d\nalpha,0.9,0.1,0\nbeta,0.2,0.2,0.9\n")
    mem = tmp_path / "m.json"
    mem.write_text(json.dumps({"rt_low": 0.25, "rt_mid": 0.5, "rt_high": 0.75}))
    out = tmp_path / "run"
    args = ["heterogeneous-transfer", "--suts", "4", "--episodes", "2", "--catalog", str(cat),
            "--membership", str(mem), "--tie-break", "first", "--out", str(out)]
    assert main(args) == 0
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["membership"]["rt_low"] == 0.25 and meta["tie_break"] == "first"
    assert {r["program"] for r in csv.DictReader(open(out / "per_sut.csv"))} <= {"alpha", "beta"}


def test_cli_errors_exit_2(tmp_path):
    assert main(["homogeneous-transfer", "--suts", "0", "--out", str(tmp_path / "x")]) == 2
    assert main(["homogeneous-transfer", "--epsilon", "fixed:3", "--out", str(tmp_path / "x")]) == 2
    assert main(["homogeneous-transfer", "--catalog", str(tmp_path / "missing.csv")]) == 2
    assert main(["initial-convergence", "--epsilon", "adaptive", "--out", str(tmp_path / "x")]) == 2
