import csv
import json

import pytest

from etadirac import cli


def _config(tmp_path, text):
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return str(path)


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_spectrum_constant_eta_matches_oracle(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = _config(tmp_path, "[eta]\nvalue = 0.0\n[numerics]\nk_max = 6.0\n")
    assert cli.run(["spectrum", "--config", cfg, "--out", str(out)]) == cli.EXIT_OK
    rows = _read_csv(out / "secular_oracle.csv")
    assert rows and all(r["match"] == "true" for r in rows)
    doc = json.loads((out / "spectrum.json").read_text())
    assert doc["checks"]["passed"] and doc["checks"]["secular_oracle_match"]
    assert doc["config"]["seed"] == 20240611
    for name in ("eigenvalues.csv", "sigma_min_plus.dat", "sigma_min_minus.dat"):
        assert (out / name).stat().st_size > 0
    assert "eigenpairs" in capsys.readouterr().out


def test_spectrum_is_deterministic(tmp_path):
    cfg = _config(tmp_path, "[eta]\nprofile = \"fourier\"\nsin = [0.3]\n[numerics]\nk_max = 4.0\n")
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        assert cli.run(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    for name in ("spectrum.json", "eigenvalues.csv", "sigma_min_plus.dat"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_zigzag_exit_code(tmp_path, capsys):
    cfg = _config(tmp_path, "[eta]\nvalue = 1.5707963267948966\n[numerics]\nk_max = 3.0\n")
    assert cli.run(["spectrum", "--config", cfg, "--out", str(tmp_path)]) == cli.EXIT_ZIGZAG
    assert "rejected" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["spectrum", "--seed", "-3"],
    ["verify", "nope"],
    ["frobnicate"],
    ["spectrum", "--bandwidth", "0"],
    [],
])
def test_usage_errors(argv, tmp_path):
    assert cli.run(argv + ["--out", str(tmp_path)] if argv else argv) == cli.EXIT_USAGE


def test_config_error_names_key(tmp_path, capsys):
    cfg = _config(tmp_path, "[eta]\nwobble = 1\n")
    assert cli.run(["spectrum", "--config", cfg, "--out", str(tmp_path)]) == cli.EXIT_USAGE
    assert "eta.wobble" in capsys.readouterr().err


def test_spectrum_rejects_curved_image(tmp_path):
    cfg = _config(tmp_path, '[domain]\nfamily = "conformal_image"\nmap = "quadratic"\na = 0.3\n')
    assert cli.run(["spectrum", "--config", cfg, "--out", str(tmp_path)]) == cli.EXIT_USAGE


def test_verify_writes_table(tmp_path):
    out = tmp_path / "v"
    assert cli.run(["verify", "pauli", "--out", str(out), "--seed", "0x10"]) == cli.EXIT_OK
    rows = _read_csv(out / "verify_pauli.csv")
    assert list(rows[0]) == ["identity", "parameter", "defect", "tolerance", "pass"]
    assert all(r["pass"] == "true" for r in rows)


def test_weyl_default_and_failure(tmp_path, capsys):
    out = tmp_path / "w"
    cfg = _config(tmp_path, "[numerics]\nn_max = 2\n")
    assert cli.run(["weyl", "--config", cfg, "--out", str(out)]) == cli.EXIT_OK
    doc = json.loads((out / "weyl.json").read_text())
    assert doc["certified"] and doc["mass_outside_decreasing"]
    assert len(doc["reports"]) == 2
    coarse = _config(tmp_path, "[numerics]\nn_max = 1\nweyl_order = 2\n")
    assert cli.run(["weyl", "--config", coarse, "--out", str(out)]) == cli.EXIT_NUMERIC
    assert "no convergence" in capsys.readouterr().err


def test_conformal_check(tmp_path):
    out = tmp_path / "c"
    assert cli.run(["conformal-check", "--out", str(out)]) == cli.EXIT_OK
    for tag in ("sm1", "s0", "s1"):
        assert len((out / f"u_condition_{tag}.dat").read_text().splitlines()) == 4
    assert all(r["pass"] == "true" for r in _read_csv(out / "conformal.csv"))


def test_main_exits(tmp_path):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "pauli", "--out", str(tmp_path)])
    assert info.value.code == 0
