import math
import subprocess
import sys

import pytest

from lossyhom.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


def write(path, text):
    path.write_text(text)
    return path


def test_material_default(tmp_path):
    out = tmp_path / "m.csv"
    assert run("material", "-o", out) == 0
    header, rows = read_csv(out)
    assert header == ["theta_c", "branch", "T", "R", "A", "phi_rt"]
    A = [float(r[4]) for r in rows]
    assert A == pytest.approx([0.30, 0.41, 0.52], abs=0.01)
    assert b"\r\n" not in out.read_bytes()


def test_material_both_branches_and_calibration(tmp_path):
    out = tmp_path / "m.csv"
    assert run("material", "--branch", "both", "--thetas", "60,65", "-o", out) == 0
    _, rows = read_csv(out)
    assert [r[1] for r in rows] == ["heating", "heating", "cooling", "cooling"]
    write(tmp_path / "cal.csv", "theta,T,R,A\n20,.35,.35,.30\n90,.24,.24,.52\n")
    cfg = write(tmp_path / "run.ini", "[material]\ncalibration = cal.csv\nthetas = 55\n")
    assert run("material", "--config", cfg, "-o", out) == 0
    _, rows = read_csv(out)
    assert float(rows[0][4]) == pytest.approx(0.41)


def test_config_errors_exit_2(tmp_path, capsys):
    out = tmp_path / "m.csv"
    bad = write(tmp_path / "bad.ini", "[material]\nwidht = 3\n")
    assert run("material", "--config", bad, "-o", out) == 2
    assert "material.widht" in capsys.readouterr().err
    assert not out.exists()
    both = write(tmp_path / "both.ini", "[material]\ncalibration = x.csv\nwidth = 2\n")
    assert run("material", "--config", both, "-o", out) == 2
    nan = write(tmp_path / "nan.ini", "[material]\nwidth = abc\n")
    assert run("material", "--config", nan) == 2
    assert "material.width" in capsys.readouterr().err
    assert run("material", "--config", tmp_path / "missing.ini") == 2


def test_scan_dip_and_peak(tmp_path):
    cfg = write(tmp_path / "run.ini", "[source]\nsetting = symmetric_degenerate\n[scan]\ntau_min_ps = -3\ntau_max_ps = 3\nn_points = 61\n")
    for theta, sign in ((40, +1), (80, -1)):
        out = tmp_path / f"s{theta}.csv"
        assert run("scan", "--config", cfg, "--theta", theta, "-o", out) == 0
        header, rows = read_csv(out)
        assert header == ["tau_ps", "p11", "p20", "p02", "p_abs"]
        p11 = [float(r[1]) for r in rows]
        centre, edge = p11[30], p11[0]
        assert sign * (edge - centre) > 0
        assert not (tmp_path / f"s{theta}_counts.csv").exists()


def test_scan_unphysical_exit_3(tmp_path, capsys):
    cfg = write(tmp_path / "bad.ini", f"[splitter]\nt_mag = {math.sqrt(0.5)}\nr_mag = {math.sqrt(0.5)}\nphi_rt = 0\n")
    out = tmp_path / "s.csv"
    assert run("scan", "--config", cfg, "-o", out) == 3
    err = capsys.readouterr().err
    assert "bound" in err and "cos(phi_rt)" in err
    assert not out.exists()


def test_counts_alias_and_fit_round_trip(tmp_path, capsys):
    cfg = write(
        tmp_path / "run.ini",
        "[source]\nsetting = symmetric_degenerate\n"
        "[scan]\ntau_min_ps = -3\ntau_max_ps = 3\nn_points = 121\n"
        "[detector]\npair_rate = 4e6\n",
    )
    out = tmp_path / "s.csv"
    assert run("counts", "--config", cfg, "--theta", 25, "-o", out) == 0
    counts = tmp_path / "s_counts.csv"
    header, rows = read_csv(counts)
    assert header == ["pair", "tau_ps", "counts", "expected"]
    assert len(rows) == 6 * 121
    report = tmp_path / "fit.txt"
    assert run("fit", counts, "--config", cfg, "-o", report) == 0
    text = report.read_text()
    blocks = {b.splitlines()[0]: b for b in text.strip().split("\n\n")}
    assert set(blocks) == {f"[{p}]" for p in ("AB", "CD", "AC", "AD", "BC", "BD")}
    vis = float(next(line for line in blocks["[AC]"].splitlines() if line.startswith("visibility")).split("=")[1])
    # balanced film with a quarter-turn exchange phase: the dip reaches zero
    assert vis == pytest.approx(1.0, abs=0.02)


def test_fit_flags_flat_pair(tmp_path):
    lines = ["pair,tau_ps,counts,expected"]
    for i in range(41):
        tau = -4 + 0.2 * i
        lines.append(f"AC,{tau},{round(1000 * (1 - math.exp(-tau * tau)))},0")
        lines.append(f"BD,{tau},500,500")
    data = write(tmp_path / "c.csv", "\n".join(lines) + "\n")
    out = tmp_path / "fit.txt"
    assert run("fit", data, "-o", out) == 0
    text = out.read_text()
    assert "[AC]\nstatus = ok" in text
    assert "[BD]\nstatus = failed (DegenerateData)" in text


def test_fit_bad_inputs(tmp_path):
    assert run("fit", write(tmp_path / "e.csv", "")) == 2
    assert run("fit", tmp_path / "nope.csv") == 2
    assert run("fit", write(tmp_path / "h.csv", "a,b,c\n1,2,3\n")) == 2
    assert run("fit", write(tmp_path / "p.csv", "pair,tau_ps,counts\nXY,0,1\n")) == 2
    flat = "pair,tau_ps,counts\n" + "".join(f"AC,{i},5\n" for i in range(30))
    assert run("fit", write(tmp_path / "f.csv", flat)) == 1


def test_sweep_and_cooling(tmp_path):
    out = tmp_path / "g.csv"
    assert run("sweep", "--thetas", "30,68,95", "-o", out) == 0
    header, rows = read_csv(out)
    assert header == ["theta_c", "g2"]
    g2 = [float(r[1]) for r in rows]
    assert g2[0] < 1 < g2[2]
    cool = tmp_path / "c.csv"
    assert run("sweep", "--thetas", "24,62,89", "--branch", "cooling", "-o", cool) == 0
    assert [float(r[1]) for r in read_csv(cool)[1]] == pytest.approx(g2, abs=1e-9)
    assert run("sweep", "--thetas", "", "-o", out) == 2


def test_oracle_check_exit_codes(tmp_path, capsys):
    assert run("oracle-check", "--n", 3) == 0
    assert capsys.readouterr().out.strip().endswith("PASS")
    assert run("oracle-check", "--n", 3, "--tol", 0) == 1
    assert "FAIL" in capsys.readouterr().out
    assert run("oracle-check", "--n", 0) == 2


def test_demo_bundles(tmp_path):
    out = tmp_path / "fig3"
    assert run("demo", "fig3", "--outdir", out) == 0
    names = sorted(p.name for p in out.iterdir())
    assert len(names) == 10 and "manifest.txt" in names
    fig5 = tmp_path / "fig5"
    assert run("demo", "fig5_sweep", "--outdir", fig5) == 0
    assert sorted(p.name for p in fig5.iterdir()) == ["fig5_sweep.csv", "manifest.txt"]
    assert run("demo", "fig7", "--outdir", tmp_path / "x") == 2


def test_env_var_config(tmp_path, monkeypatch):
    cfg = write(tmp_path / "env.ini", "[material]\nthetas = 68\n")
    monkeypatch.setenv("LOSSYHOM_CONFIG", str(cfg))
    out = tmp_path / "m.csv"
    assert run("material", "-o", out) == 0
    assert len(read_csv(out)[1]) == 1


def test_seed_changes_counts(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("counts", "--seed", 1, "-o", a) == 0
    assert run("counts", "--seed", 2, "-o", b) == 0
    assert (tmp_path / "a_counts.csv").read_bytes() != (tmp_path / "b_counts.csv").read_bytes()
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lossyhom", "material", "--thetas", "25"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("theta_c,branch,T,R,A,phi_rt\n25,heating,")
