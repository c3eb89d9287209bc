import json

import pytest

from hermgabor import bounds_from_json, certificate_from_json
from hermgabor.cli import main, merge_config, validate
from hermgabor.scan import SCAN_CSV_HEADER


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_prints_box_norm(capsys):
    code, out, _ = run(capsys, "norm", "--matrix", "1,0,0,1")
    assert code == 0
    assert out.strip() == "0.7071067811865476"


def test_norm_bad_matrix_exits_2(capsys):
    code, _, err = run(capsys, "norm", "--matrix", "1,2,3")
    assert code == 2 and err


def test_no_command_exits_2(capsys):
    assert main([]) == 2
    capsys.readouterr()


def test_hermite_json(capsys):
    code, out, _ = run(capsys, "hermite", "--n", "0", "--x", "0,1")
    assert code == 0
    rec = json.loads(out)
    assert rec["n"] == 0 and len(rec["h"]) == 2
    assert rec["h"][0] == pytest.approx(3.141592653589793 ** -0.25)


def test_bounds_json_file(tmp_path, capsys):
    out_file = tmp_path / "bounds.json"
    code, out, _ = run(capsys, "bounds", "--d", "0", "--matrix",
                       "0.5,0,0,0.5", "--K", "16", "--output", str(out_file))
    assert code == 0 and "A_est=" in out
    fb = bounds_from_json(out_file.read_text())
    assert 0 < fb.A_est <= fb.B_est
    assert fb.galerkin_dim == 16


def test_bounds_budget_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "bounds", "--d", "0", "--matrix",
                       "0.001,0,0,0.001", "--K", "16", "--budget", "1000")
    assert code == 3
    assert "budget" in err


def test_certify_json(tmp_path, capsys):
    out_file = tmp_path / "cert.json"
    code, out, _ = run(capsys, "certify", "--d", "0", "--matrix",
                       "0.1,0,0,0.1", "--output", str(out_file))
    assert code == 0
    cert = certificate_from_json(out_file.read_text())
    assert cert.valid


def test_scan_csv_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run(capsys, "scan", "--d", "0", "--matrix", "1,0,0,1",
                         "--t-list", "0.5,0.4", "--K", "16",
                         "--output", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == SCAN_CSV_HEADER


def test_glgrid_csv(capsys):
    code, out, _ = run(capsys, "glgrid", "--d", "1", "--det-max", "1.2",
                       "--steps", "24")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "det,threshold,is_frame_predicate"
    assert len(lines) == 25
    rows = [line.split(",") for line in lines[1:]]
    flips = [r[2] for r in rows]
    assert flips[0] == "true" and flips[-1] == "false"
    # predicate flips exactly where det crosses 1/(d+1) = 0.5
    for r in rows:
        assert (r[2] == "true") == (float(r[0]) < 0.5)


def test_covariance(capsys):
    code, out, _ = run(capsys, "covariance", "--d", "0", "--matrix",
                       "0.4,0,0,0.4", "--b", "2", "--K", "16")
    assert code == 0
    assert json.loads(out)["max_relative_deviation"] < 1e-6


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"matrix": "1,0,0,1", "K": 16, "d": 0}))
    code, out, _ = run(capsys, "norm", "--config", str(cfg))
    assert code == 0 and out.strip() == "0.7071067811865476"
    # flag overrides the file
    code, out, _ = run(capsys, "norm", "--config", str(cfg),
                       "--matrix", "2,0,0,2")
    assert code == 0 and out.strip() == "1.414213562373095"


def test_config_unknown_field(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"matrxi": "1,0,0,1"}))
    code, _, err = run(capsys, "norm", "--config", str(cfg))
    assert code == 2 and "unknown config fields" in err


def test_validate_only(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "0", "--matrix",
                       "0.5,0,0,0.5", "--validate-only")
    assert code == 0 and out.strip() == "ok"
    code, out, _ = run(capsys, "bounds", "--d", "0", "--matrix",
                       "0.5,0,0,0.5", "--K", "-4", "--validate-only")
    assert code == 2 and "K must be" in out


def test_validate_nyquist_diagnostic():
    diags = validate({"command": "bounds", "d": 10, "K": 64, "step": 1.0,
                      "matrix": "0.5,0,0,0.5"})
    assert any("Nyquist" in d for d in diags)


def test_validate_requires_matrix():
    assert any("requires --matrix" in d
               for d in validate({"command": "bounds", "d": 0}))


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "hermite", "--n", "1", "--x", "0.5",
                     "--format", "json", "--output", "h.json")
    assert code == 0
    assert (tmp_path / "h.json").exists()


def test_merge_config_seed_default():
    class Dummy:
        command = "norm"
        matrix = "1,0,0,1"
        config = None
    cfg = merge_config(Dummy())
    assert cfg["seed"] == 0
