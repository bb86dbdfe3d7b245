import json

import pytest

from mmrabi.cli import EXIT_OK, EXIT_USAGE, fmt, main


def run(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def test_fmt():
    assert fmt(True) == "1" and fmt(False) == "0"
    assert fmt(0.1) == "0.1"
    assert fmt(3) == "3"


def test_check_passes(tmp_path, capsys):
    code, out = run(tmp_path, "a", "check")
    assert code == EXIT_OK
    report = json.loads((out / "check.json").read_text())
    assert report["passed"] and report["command"] == "check"
    assert all(c["passed"] for c in report["checks"])
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("PASS ") for line in lines)


def test_unknown_command(tmp_path, capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "usage:" in err
    record = json.loads(err.strip().splitlines()[-1])
    assert record["exit_code"] == EXIT_USAGE and record["error"] == "usage"


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("cc_ff = -1\n")
    assert main(["cpb", "--config", str(cfg)]) == EXIT_USAGE
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["error"] == "config"
    assert "line 1: cc_ff" in record["message"]


def test_missing_config_file(tmp_path):
    assert main(["cpb", "--config", str(tmp_path / "nope.cfg")]) == EXIT_USAGE


def test_couplings(tmp_path):
    code, out = run(tmp_path, "c", "couplings", "--cj-ff", "5")
    assert code == EXIT_OK
    summary = json.loads((out / "couplings.json").read_text())
    assert summary["m_c"] == pytest.approx(35.0, abs=0.1)
    assert abs(summary["knee"] - 35) <= 3
    raw = (out / "couplings.csv").read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "m,g_ghz,mode_freq_ghz,low_asymptote_ghz"
    assert len(lines) == 301


def test_couplings_need_a_junction(tmp_path):
    code, _ = run(tmp_path, "c", "couplings")
    assert code == EXIT_USAGE


def test_modes_and_estimate(tmp_path):
    code, out = run(tmp_path, "m", "modes", "--modes", "20")
    assert code == EXIT_OK
    lines = (out / "modes.csv").read_text().splitlines()
    assert lines[0] == "m,bare_freq_ghz,normal_freq_ghz" and len(lines) == 21
    m, bare, normal = lines[3].split(",")
    assert float(bare) == pytest.approx(50.0, rel=1e-12) == float(normal)
    assert m == "2"

    code, out = run(tmp_path, "e", "estimate")
    assert code == EXIT_OK
    rows = [r.split(",") for r in (out / "estimate.csv").read_text().splitlines()]
    assert rows[0] == ["m", "mode_freq_ghz", "chi_mhz", "chi_standard_mhz", "dispersive_flag"]
    assert len(rows) == 7
    assert rows[1][-1] == "0" and rows[-1][-1] == "1"
    assert float(rows[-1][2]) < 0


def test_cpb_output(tmp_path):
    code, out = run(tmp_path, "p", "cpb")
    assert code == EXIT_OK
    summary = json.loads((out / "cpb.json").read_text())
    assert summary["e_c_ghz"] == pytest.approx(0.4646, rel=1e-3)
    assert summary["levels_ghz"][0] == 0.0
    assert summary["f_ge_ghz"] == pytest.approx(summary["levels_ghz"][1], rel=1e-12)
    assert summary["config"]["ej_ghz"] == 20.0
    assert "out_dir" not in summary["config"]


@pytest.mark.parametrize("command, files", [
    ("check", ["check.json"]),
    ("cpb", ["cpb.json"]),
    ("converge", ["converge.csv", "converge.json"]),
])
def test_byte_identical_reruns(tmp_path, command, files):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("m_max = 2\nbudget = 2000\n")
    for name in ("r1", "r2"):
        code = main([command, "--config", str(cfg), "--out", str(tmp_path / name)])
        assert code == EXIT_OK
    for f in files:
        assert (tmp_path / "r1" / f).read_bytes() == (tmp_path / "r2" / f).read_bytes()


def test_converge_small(tmp_path):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("m_max = 3\nbudget = 3000\n")
    assert main(["converge", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK
    lines = (tmp_path / "o" / "converge.csv").read_text().splitlines()
    assert lines[0] == "M,f_dressed_ghz,f_bare_ghz,e_c_ghz,g0_ghz,ambiguous_flag"
    assert [l.split(",")[0] for l in lines[1:]] == ["1", "2", "3"]
    summary = json.loads((tmp_path / "o" / "converge.json").read_text())
    assert summary["renormalized"] is True
    assert len(summary["steps_ghz"]) == 2
