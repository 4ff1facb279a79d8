import json
import re
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

import oracles

from mwphase.cli import main, run_algebra_check
from mwphase.plotting import curve_id

HEADER = "t,mean_n2,mean_cos,mean_sin,var_cos,var_sin,phase_fluct,sql,sigma_p,sigma_w,mean_w"
SVG_NS = "{http://www.w3.org/2000/svg}"


def test_algebra_check_pass(capsys):
    assert main(["algebra-check", "--n-max", "1"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_algebra_check_fifty():
    import io

    buf = io.StringIO()
    assert run_algebra_check(50, out=buf) == 0
    assert buf.getvalue().strip().splitlines()[-1].startswith("PASS: N = 1..50")


def test_algebra_check_usage_error(capsys):
    assert main(["algebra-check", "--n-max", "0"]) == 2
    assert "n_max" in capsys.readouterr().err


def test_unknown_flag_is_usage_error():
    assert main(["sweep", "--bogus", "1"]) == 2
    assert main(["sweep", "--format", "gif"]) == 2


def _svg_curve_ys(svg_path, n):
    root = ET.parse(svg_path).getroot()
    for g in root.iter(f"{SVG_NS}g"):
        if g.get("id") == curve_id(n):
            d = g.find(f"{SVG_NS}path").get("d")
            nums = [float(v) for v in re.findall(r"-?\d+(?:\.\d+)?", d)]
            return np.array(nums[1::2])
    raise AssertionError(f"no curve for N={n}")


def test_sweep_files(tmp_path):
    out = tmp_path / "run"
    rc = main(["sweep", "--n", "1,2,5,10,20", "--j", "1", "--out", str(out)])
    assert rc == 0
    csvs = sorted(p.name for p in out.glob("*.csv"))
    assert csvs == sorted(f"sweep_N{n}.csv" for n in (1, 2, 5, 10, 20))
    assert (out / "sweep.json").exists()
    assert (out / "sweep.svg").exists()
    for name in csvs:
        assert (out / name).read_text().splitlines()[0] == HEADER
    ys = _svg_curve_ys(out / "sweep.svg", 1)
    assert len(ys) > 10 and np.all(ys == ys[0])
    ys2 = _svg_curve_ys(out / "sweep.svg", 20)
    assert np.ptp(ys2) > 0


def test_sweep_rerun_is_byte_identical(tmp_path):
    args = ["sweep", "--n", "2,7", "--format", "csv,json,svg"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    for name in ("sweep_N2.csv", "sweep_N7.csv", "sweep.json", "sweep.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_png_and_timeavg(tmp_path):
    rc = main(["sweep", "--n", "3", "--averaging", "timeavg", "--format", "csv,png",
               "--out", str(tmp_path)])
    assert rc == 0
    header = (tmp_path / "sweep_N3.csv").read_text().splitlines()[0]
    assert header == HEADER + ",avg_mean_n2,avg_mean_sin"
    assert (tmp_path / "sweep.png").read_bytes()[:4] == b"\x89PNG"


def test_evolve_auto_stops_at_half_transfer(tmp_path, capsys):
    assert main(["evolve", "--n", "4", "--t-end", "auto", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "evolve_N4.json").read_text())
    assert doc["runs"][0]["t_end"] == pytest.approx(np.pi / 4, abs=1e-15)
    assert doc["runs"][0]["crossed"] is True
    rows = (tmp_path / "evolve_N4.csv").read_text().splitlines()
    assert len(rows) == 202
    assert float(rows[-1].split(",")[0]) == pytest.approx(np.pi / 4)
    assert (tmp_path / "evolve_N4.svg").exists()


def test_evolve_self_trapped_is_flagged(tmp_path, capsys, caplog):
    assert main(["evolve", "--n", "4", "--u", "50", "--t-end", "auto",
                 "--out", str(tmp_path)]) == 0
    captured = capsys.readouterr()
    assert "no crossing" in caplog.text
    assert "crossed false" in captured.out
    doc = json.loads((tmp_path / "evolve_N4.json").read_text())
    assert doc["runs"][0]["crossed"] is False


def test_evolve_fixed_t_end(tmp_path):
    assert main(["evolve", "--n", "3", "--t-end", "1.0", "--dt", "0.3", "--format", "csv",
                 "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "evolve_N3.csv").read_text().splitlines()
    assert len(rows) == 1 + 5


def test_evolve_validation():
    assert main(["evolve", "--n", "0"]) == 2
    assert main(["evolve", "--n", "3", "--j", "-1"]) == 2
    assert main(["evolve", "--n", "3", "--t-end", "soon"]) == 2


def test_fringes_gaussian(tmp_path):
    assert main(["fringes", "--phase", "0", "--visibility", "0", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "fringes.csv").read_text().splitlines()
    assert lines[0] == "x,density"
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    np.testing.assert_allclose(data[:, 1], np.exp(-data[:, 0] ** 2 / (2 * 3.0**2)), atol=1e-15)
    assert (tmp_path / "fringes.svg").exists()


def test_fringes_default_phase(tmp_path, capsys):
    assert main(["fringes", "--n", "10", "--format", "csv", "--out", str(tmp_path)]) == 0
    phase = float(capsys.readouterr().out.split()[1])
    mean = oracles.cyclic_mean_mp(10)
    assert phase == pytest.approx(np.arctan2(mean.imag, mean.real), abs=1e-10)


def test_config_file_mirrors_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": [2, 3], "samples": 10, "format": ["csv"]}))
    out = tmp_path / "o"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["sweep_N2.csv", "sweep_N3.csv"]
    assert len((out / "sweep_N2.csv").read_text().splitlines()) == 12
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mwphase", "algebra-check", "--n-max", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout
