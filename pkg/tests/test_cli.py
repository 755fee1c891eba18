import io
import math
import os
import subprocess
import sys

import pytest

from laguerre_unity.basins import read_ppm
from laguerre_unity.cli import main, parse_angle, parse_complex

from reference_cycles import FOUR_CYCLES


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def values(text):
    """``name = value`` lines of a report as a dict of floats."""
    out = {}
    for line in text.splitlines():
        if " = " in line:
            k, v = line.split(" = ", 1)
            out[k.strip()] = v.strip()
    return out


# literals -----------------------------------------------------------------

@pytest.mark.parametrize(
    "text, expected",
    [
        ("1.01", 1.01),
        ("0.1+0i", 0.1),
        ("-2-3i", -2 - 3j),
        ("2.5e-3+1e2i", 2.5e-3 + 100j),
        ("4i", 4j),
        ("1@0", 1),
        ("2@pi/2", 2j),
        ("1@-pi", -1),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("text", ["abc", "1+", "1@", "-1@0", "inf", "nan+1i", "1@pix"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


@pytest.mark.parametrize(
    "text, expected",
    [("0.3", 0.3), ("pi", math.pi), ("-pi/8", -math.pi / 8), ("3pi/4", 0.75 * math.pi),
     ("2*pi/5", 0.4 * math.pi), ("1/4", 0.25)],
)
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected, rel=1e-15)


# regions ------------------------------------------------------------------------

def test_regions_n16(tmp_path):
    img, csv = tmp_path / "r.ppm", tmp_path / "r.csv"
    code, out = run("regions", "--n", "16", "--out", str(img), "--csv", str(csv), "--pixels", "200")
    assert code == 0
    v = values(out)
    s0, r0 = float(v["s0"]), float(v["r0"])
    assert 0 < s0 < r0 < 1
    assert len(v["s0"].replace("0.", "", 1).lstrip("0")) >= 16
    raster = read_ppm(img)
    assert raster.shape == (200, 200, 3)
    # gray shading, black curves and red root markers are all present
    flat = {tuple(p) for p in raster.reshape(-1, 3)}
    assert (0, 0, 0) in flat and (200, 0, 0) in flat and (225, 225, 225) in flat
    data = csv.read_bytes()
    assert b"\r" not in data
    rows = data.decode().splitlines()
    assert rows[0] == "theta,r_D,r_E"
    th, rd, re_ = map(float, rows[1].split(","))
    assert th == 0 and rd == pytest.approx(r0, abs=1e-15) and rd * re_ == pytest.approx(1, abs=1e-15)


def test_regions_n5_bound(tmp_path):
    code, out = run("regions", "--n", "5", "--out", str(tmp_path / "a.ppm"),
                    "--csv", str(tmp_path / "a.csv"), "--pixels", "64", "--samples", "64")
    assert code == 0
    assert 1 / float(values(out)["s0"]) < 16


def test_regions_rejects_small_degree(capsys):
    code, _ = run("regions", "--n", "4")
    assert code == 1
    assert "n >= 5" in capsys.readouterr().err


# basins and zoom --------------------------------------------------------------------

def test_basins_degree_two(tmp_path):
    code, out = run("basins", "--n", "2", "--max-iter", "1", "--pixels", "32", "--out", str(tmp_path / "b.ppm"))
    assert code == 0
    assert "root: 1024 (100%)" in out
    assert "two-cycle: 0 (0%)" in out


def test_basins_all_flags(tmp_path):
    code, out = run(
        "basins", "--n", "8", "--frame", "3", "--center", "0.1+0.1i", "--pixels", "32",
        "--max-iter", "50", "--tol", "1e-8", "--formulation", "general", "--general-form", "gh",
        "--overlay", "--out", str(tmp_path / "b.ppm"), "--csv", str(tmp_path / "b.csv"),
    )
    assert code == 0
    assert read_ppm(tmp_path / "b.ppm").shape == (32, 32, 3)
    assert (tmp_path / "b.csv").read_text().startswith("i,j,kind,root_index,iterations\n")


def test_zoom_boundary_mixed(tmp_path):
    code, out = run("zoom", "--n", "128", "--center", "boundary@0.7pi/128", "--half-width", "0.01",
                    "--pixels", "64", "--out", str(tmp_path / "z.ppm"))
    assert code == 0
    assert "center = " in out
    counts = {line.split(":")[0]: int(line.split()[1]) for line in out.splitlines() if ": " in line}
    assert counts["root"] > 0 and counts["two-cycle"] > 0


def test_zoom_requires_center(capsys):
    code, _ = run("zoom", "--n", "8", "--half-width", "0.1")
    assert code == 1
    assert "usage" in capsys.readouterr().err


def test_basins_io_error(tmp_path, capsys):
    code, _ = run("basins", "--n", "5", "--pixels", "16", "--out", str(tmp_path / "no" / "b.ppm"))
    assert code == 3
    assert str(tmp_path / "no") in capsys.readouterr().err


def test_basins_small_pixels_rejected():
    assert run("basins", "--n", "5", "--pixels", "8")[0] == 1


# cycles --------------------------------------------------------------------------

def _csv_rows(text):
    lines = text.split("\n")
    assert lines[-1] == ""
    return lines[0], [line.split(",") for line in lines[1:-1]]


def test_cycles_n5(tmp_path):
    path = tmp_path / "c.csv"
    code, out = run("cycles", "--n", "5", "--period", "4", "--out", str(path))
    assert code == 0 and "2 cycles" in out
    header, rows = _csv_rows(path.read_bytes().decode())
    assert header == "period,n,re,im,residual"
    got = [complex(float(r[2]), float(r[3])) for r in rows]
    for ref in FOUR_CYCLES[5]:
        assert min(abs(g - ref) / abs(ref) for g in got) < 1e-12
    assert all(r[0] == "4" and r[1] == "5" for r in rows)


def test_cycles_n7_six():
    code, out = run("cycles", "--n", "7", "--period", "6")
    assert code == 0
    _, rows = _csv_rows(out)
    assert len(rows) == 12


def test_cycles_n8_two_none():
    code, out = run("cycles", "--n", "8", "--period", "2")
    assert code == 0
    header, rows = _csv_rows(out)
    assert header == "period,n,re,im,residual" and rows == []


def test_cycles_rejects_small_degree():
    assert run("cycles", "--n", "4", "--period", "4")[0] == 1


# orbit --------------------------------------------------------------------------

def _orbit_rows(out):
    lines = out.splitlines()
    assert lines[0] == "k,re,im,abs,root_error,region"
    return [line.split(",") for line in lines[1:-1]], lines[-1]


def test_orbit_cubic_decay():
    code, out = run("orbit", "--n", "5", "--z0", "1.01")
    assert code == 0
    rows, last = _orbit_rows(out)
    assert last == "outcome: Root(index=0, iterations=2)"
    e = [float(r[4]) for r in rows]
    # e1 ~ C e0**3 with C of order one
    assert e[1] < 10 * e[0] ** 3 and e[1] > 0.01 * e[0] ** 3


def test_orbit_two_cycle():
    code, out = run("orbit", "--n", "16", "--z0", "0.1+0i")
    assert code == 0
    assert _orbit_rows(out)[1].startswith("outcome: TwoCycle(")


def test_orbit_on_odd_ray_goes_clockwise():
    code, out = run("orbit", "--n", "8", "--z0", "1@pi/8")
    assert code == 0
    rows, last = _orbit_rows(out)
    assert last.startswith("outcome: Root(index=0,")
    assert all(r[5] == "UnitCircle" for r in rows)
    assert float(rows[1][2]) < float(rows[0][2])


def test_orbit_probe_points():
    for probe in ("s0-probe", "inv-s0-probe"):
        code, out = run("orbit", "--n", "8", "--z0", probe)
        assert code == 0 and "outcome:" in out
    assert run("orbit", "--n", "4", "--z0", "s0-probe")[0] == 1


def test_orbit_small_degree_has_no_regions():
    code, out = run("orbit", "--n", "3", "--z0", "0.5+0.5i", "--max-iter", "20", "--tol", "1e-10")
    assert code == 0
    rows, _ = _orbit_rows(out)
    assert rows[0][5] == "-"


def test_orbit_parse_error(capsys):
    assert run("orbit", "--n", "5", "--z0", "one")[0] == 1
    assert "usage" in capsys.readouterr().err


# verify --------------------------------------------------------------------------

def test_verify_passes(tmp_path):
    report = tmp_path / "rep.txt"
    code, out = run("verify", "--n", "5,8,16", "--seed", "42", "--report", str(report))
    assert code == 0
    assert report.read_text() == out
    assert "FAIL" not in out


def test_verify_small_degree_notice():
    code, out = run("verify", "--n", "3")
    assert code == 0
    assert "theorem checks skipped" in out
    assert "rotation symmetry [n=3]" in out
    assert "three positive zeros" not in out


def test_verify_deterministic():
    a = run("verify", "--n", "5", "--seed", "42")[1]
    b = run("verify", "--n", "5", "--seed", "42")[1]
    assert a == b


def test_verify_failure_exit_code(monkeypatch):
    from laguerre_unity import cli
    from laguerre_unity.verify import Check

    monkeypatch.setattr(cli, "run_suite", lambda ns, seed: ([Check("x", 5, False, "broken")], []))
    code, out = run("verify", "--n", "5")
    assert code == 2 and "FAIL  x" in out


# flags and entry points ----------------------------------------------------------

@pytest.mark.parametrize(
    "argv",
    [
        ["basins", "--n", "8", "--bogus"],
        ["frobnicate"],
        [],
        ["basins", "--n", "eight"],
        ["basins", "--n", "8", "--formulation", "exact"],
        ["cycles", "--n", "8"],
        ["verify", "--n", "1,2"],
        ["basins", "--n", "8", "--tol", "-1"],
    ],
)
def test_invalid_flags_exit_one(argv, capsys):
    assert run(*argv)[0] == 1
    assert "usage:" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run("--help")[0] == 0
    assert "regions" in capsys.readouterr().out


def test_console_entry_points(tmp_path):
    env = dict(os.environ, LAGUERRE_THREADS="2")
    r = subprocess.run([sys.executable, "-m", "laguerre_unity", "orbit", "--n", "5", "--z0", "1.01"],
                       capture_output=True, text=True, env=env, cwd=tmp_path)
    assert r.returncode == 0 and "Root(index=0" in r.stdout
    r = subprocess.run([sys.executable, "-m", "laguerre_unity", "regions", "--n", "3"],
                       capture_output=True, text=True, env=env, cwd=tmp_path)
    assert r.returncode == 1


def test_bad_thread_env(monkeypatch, tmp_path):
    monkeypatch.setenv("LAGUERRE_THREADS", "0")
    assert run("basins", "--n", "5", "--pixels", "16", "--out", str(tmp_path / "x.ppm"))[0] == 1


def test_threads_do_not_change_outputs(monkeypatch, tmp_path):
    outs = []
    for threads in ("1", "8"):
        monkeypatch.setenv("LAGUERRE_THREADS", threads)
        ppm = tmp_path / f"b{threads}.ppm"
        run("basins", "--n", "12", "--pixels", "64", "--overlay", "--out", str(ppm))
        code, text = run("cycles", "--n", "6", "--period", "4")
        outs.append((ppm.read_bytes(), text))
    assert outs[0] == outs[1]
