import json
import math
import subprocess
import sys

import pytest

from foboson import cli

GOLDEN = [
    ("contfrac_27_8.json", ["contfrac", "--n", "27", "--k", "8"]),
    ("dg_verify_2-3-2_t5_s7.json", ["dg-verify", "--dims", "2,3,2", "--trials", "5", "--seed", "7"]),
]


def run(argv, capsys):
    status = cli.main(argv)
    out = capsys.readouterr().out
    return status, json.loads(out), out


@pytest.mark.parametrize("name,argv", GOLDEN)
def test_golden_bytes(name, argv, golden_dir, tmp_path):
    target = tmp_path / name
    assert cli.main(["-o", str(target)] + argv) == 0
    assert target.read_bytes() == (golden_dir / name).read_bytes()


def test_stdout_and_file_agree(capsys, tmp_path):
    _, _, text = run(["contfrac", "--n", "27", "--k", "8"], capsys)
    target = tmp_path / "x.json"
    cli.main(["-o", str(target), "contfrac", "--n", "27", "--k", "8"])
    assert target.read_text() == text


def test_contfrac_report(capsys):
    status, rep, _ = run(["contfrac", "--n", "27", "--k", "8"], capsys)
    assert status == 0
    assert rep["schemaVersion"] == 1 and rep["command"] == "contfrac"
    assert rep["expansion"] == [4, 2, 3, 2]
    assert rep["tauBlocks"] == [[0], [1, 2], [3, 4]]
    assert rep["slopes"] == ["10/3", "10/3", "3/1", "3/1", "1/1"]
    assert rep["dimEnd"] == 27


def test_dim_end_degrees_image(capsys):
    status, rep, _ = run(["dim-end", "--n", "7", "--k", "3"], capsys)
    assert status == 0 and rep["dimEnd"] == 7 and rep["pass"]
    status, rep, _ = run(["degrees", "--n", "7", "--k", "3"], capsys)
    assert status == 0
    assert rep["lambdaDegrees"] == list(reversed(rep["expansion"]))
    status, rep, _ = run(["degrees", "--n", "5", "--k", "1"], capsys)
    assert rep["detLineDegrees"] == [5]
    status, rep, _ = run(["image", "--n", "27", "--k", "8"], capsys)
    assert rep["blockSizes"] == [1, 2, 2] and rep["ambientPower"] == 5 and rep["fiberDimension"] == 4


def test_domain_error_json(capsys):
    status, rep, _ = run(["contfrac", "--n", "4", "--k", "2"], capsys)
    assert status == 1
    assert rep == {"schemaVersion": 1, "error": "domain", "detail": "n=4 and k=2 are not coprime"}
    status, rep, _ = run(["bracket", "--n-points", "3", "--tau", "0.05i"], capsys)
    assert status == 1 and rep["error"] == "domain"
    status, rep, _ = run(["dg-verify", "--dims", "2,x"], capsys)
    assert status == 1 and rep["error"] == "domain"


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["contfrac", "--n", "4", "--bogus", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2


def test_deterministic(capsys):
    argv = ["jacobi", "--n-points", "3", "--tau", "0.3+1.1i", "--trials", "2", "--seed", "5"]
    _, _, a = run(argv, capsys)
    _, _, b = run(argv, capsys)
    assert a == b
    _, _, c = run(argv[:-1] + ["6"], capsys)
    assert a != c


def test_jacobi_two_points_is_exact(capsys):
    status, rep, _ = run(["jacobi", "--n-points", "2", "--tau", "i", "--trials", "3"], capsys)
    assert status == 0
    assert rep["checks"]["jacobiator"]["maxResidual"] == 0.0


def test_jacobi_and_prime_pass(capsys):
    status, rep, _ = run(["jacobi", "--n-points", "4", "--tau", "0.3+1.1i", "--trials", "2"], capsys)
    assert status == 0 and rep["checks"]["finiteDifference"]["tolerance"] == pytest.approx(1e-7)
    status, rep, _ = run(["prime-check", "--n-points", "4", "--tau", "2i", "--trials", "2"], capsys)
    assert status == 0 and len(rep["trials"]) == 2


def test_tolerance_env_and_flag(capsys, monkeypatch):
    monkeypatch.setenv("FOBOSON_TOL", "1e-30")
    status, rep, _ = run(["prime-check", "--n-points", "4", "--tau", "i", "--trials", "1"], capsys)
    assert rep["checks"]["logCanonical"]["tolerance"] == 1e-30
    assert status == (0 if rep["checks"]["logCanonical"]["pass"] else 1)
    status, rep, _ = run(["prime-check", "--n-points", "4", "--tau", "i", "--tol", "1e-6"], capsys)
    assert status == 0 and rep["checks"]["logCanonical"]["tolerance"] == 1e-6
    monkeypatch.setenv("FOBOSON_TOL", "abc")
    status, rep, _ = run(["prime-check", "--n-points", "3", "--tau", "i"], capsys)
    assert status == 1 and rep["error"] == "domain"


def test_bracket_emit_matrix(capsys):
    status, rep, _ = run(["bracket", "--n-points", "3", "--tau", "i", "--seed", "1", "--emit-matrix"], capsys)
    assert status == 0
    assert rep["bivector"]["coordinateOrder"] == ["u1", "u2", "u3", "v2", "v3"]
    assert len(rep["bivector"]["matrix"]) == 5
    assert all(c["pass"] for c in rep["checks"].values())
    status, rep, _ = run(["bracket", "--n-points", "3", "--tau", "i", "--seed", "1"], capsys)
    assert "bivector" not in rep


def test_dg_verify_report(capsys):
    status, rep, _ = run(["dg-verify", "--dims", "1,3,1", "--trials", "2", "--seed", "3"], capsys)
    assert status == 0 and rep["pass"]
    for trial in rep["trials"]:
        assert all(row["residual"] == "0" for row in trial["checks"])


def test_sweep(capsys):
    status, rep, _ = run(["sweep", "--max-n", "30"], capsys)
    assert status == 0 and rep["failures"] == []
    assert rep["pairs"] == sum(1 for n in range(2, 31) for k in range(1, n) if math.gcd(n, k) == 1)


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "foboson", "dim-end", "--n", "9", "--k", "2"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["dimEnd"] == 9
