import json
import subprocess
import sys

import numpy as np
import pytest

from xxquench import io
from xxquench.cli import main, parse_grid


def test_json_roundtrip_handles_numpy(tmp_path):
    obj = {"a": np.arange(3), "b": np.float64(0.5), "c": 1 + 2j}
    p = io.write_json(tmp_path / "x.json", obj)
    assert io.read_json(p) == {"a": [0, 1, 2], "b": 0.5, "c": [1.0, 2.0]}
    assert b"\r\n" not in p.read_bytes()


def test_csv_roundtrip_exact_floats(tmp_path):
    rows = [(0.1, 1 / 3), (np.float64(2.0), np.pi)]
    p = io.write_csv(tmp_path / "e.csv", "entropy", rows)
    header, body = io.read_csv(p)
    assert header == ["t", "S_block"]
    assert [[float(x) for x in r] for r in body] == [[0.1, 1 / 3], [2.0, np.pi]]
    assert b"\r\n" not in p.read_bytes()


def test_parse_grid():
    np.testing.assert_allclose(parse_grid("0:1:0.25"), [0, 0.25, 0.5, 0.75, 1.0])
    np.testing.assert_allclose(parse_grid("0:0.95:0.25"), [0, 0.25, 0.5, 0.75])
    np.testing.assert_allclose(parse_grid("3,1.5"), [3, 1.5])
    for bad in ("1:0:0.1", "0:1:0", "a,b"):
        with pytest.raises(Exception):
            parse_grid(bad)


def test_entropy_command(tmp_path):
    out = tmp_path / "s.csv"
    t_half = np.pi * 6 / 4
    assert main(["entropy", "--n", "6", "--profile", "pst", "--times", f"0,{t_half!r}", "--out", str(out)]) == 0
    _, rows = io.read_csv(out)
    assert float(rows[0][1]) == pytest.approx(0.0, abs=1e-12)
    assert float(rows[1][1]) == pytest.approx(3.0, abs=1e-9)
    man = io.read_json(str(out) + ".manifest.json")
    assert man["command"] == "entropy" and man["schema"] == "xxquench.entropy/1"
    assert man["parameters"]["n"] == 6 and man["outputs"] == [str(out)]


def test_fef_command_json(tmp_path):
    out = tmp_path / "f.json"
    assert main(["fef", "--n", "4", "--profile", "pst", "--times", f"0,{np.pi!r}",
                 "--format", "json", "--out", str(out)]) == 0
    data = io.read_json(out)
    assert data["schema"] == "xxquench.fef/1"
    assert data["rows"][1]["F_1N"] == pytest.approx(1.0, abs=1e-12)


def test_optimize_command(tmp_path):
    out = tmp_path / "o.csv"
    assert main(["optimize", "--n", "6,8", "--out", str(out)]) == 0
    header, rows = io.read_csv(out)
    assert header == ["N", "j_opt", "f_max", "t_star", "F"]
    assert [int(r[0]) for r in rows] == [6, 8]
    assert float(rows[0][1]) > float(rows[1][1])


def test_noise_command_seeded(tmp_path):
    args = ["noise", "--noise", "nmr", "--n", "3", "--profile", "pst", "--eps", "0,0.1",
            "--realizations", "3", "--seed", "2"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    _, rows = io.read_csv(a)
    assert len(rows) == 2  # one mirror pair per eps value for N = 3
    assert float(rows[0][4]) == pytest.approx(1.0, abs=1e-6)
    assert io.read_json(str(a) + ".manifest.json")["seed"] == 2


def test_verify_command(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--n", "4", "--out", str(out)]) == 0
    rep = io.read_json(out)
    assert rep["all_pass"] is True
    assert set(rep["checks"]) == {"transfer_identity", "wigner_mirror", "bell_fidelity", "fef_formula"}


def test_config_file_overridden_by_flags(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 4, "profile": "pst", "times": "0:1:0.5"}))
    out = tmp_path / "s.csv"
    assert main(["entropy", "--config", str(cfg), "--n", "6", "--out", str(out)]) == 0
    assert io.read_json(str(out) + ".manifest.json")["parameters"]["n"] == 6
    _, rows = io.read_csv(out)
    assert len(rows) == 3
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(SystemExit):
        main(["entropy", "--config", str(cfg)])


def test_invalid_arguments_exit_nonzero(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert main(["fef", "--n", "5", "--profile", "minimal", "--boundary", "1.5", "--out", str(out)]) == 2
    assert not out.exists()
    assert "error" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        main(["entropy", "--profile", "nonsense"])


def test_module_entry_point(tmp_path):
    out = tmp_path / "s.csv"
    r = subprocess.run([sys.executable, "-m", "xxquench", "entropy", "--n", "4", "--times", "0:1:0.5",
                        "--out", str(out)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert out.exists()
