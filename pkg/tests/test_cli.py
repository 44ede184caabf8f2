import csv
import math

import pytest

from turnstab import cli
from turnstab.params import PhysicalParams, dump_params


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_lobes_fig4_csv(tmp_path):
    out = tmp_path / "lobes.csv"
    rc = cli.main(["lobes", "--preset", "fig4", "--samples", "16", "--out", str(out)])
    assert rc == 0
    rows = _read_csv(out)
    assert rows[0] == cli.LOBES_HEADER
    body = rows[1:]
    assert len(body) == 3 * 16
    assert {r[2] for r in body} == {"1", "2", "3"}
    assert all(r[0] == "delayed" and r[1] == "1" for r in body)
    assert all(float(r[4]) > 0.0 for r in body)  # delta column


def test_lobes_fig8_branches_and_svg(tmp_path):
    out = tmp_path / "lobes.csv"
    pic = tmp_path / "lobes.svg"
    rc = cli.main([
        "lobes", "--preset", "fig8", "--samples", "8",
        "--out", str(out), "--svg", str(pic),
    ])
    assert rc == 0
    body = _read_csv(out)[1:]
    assert {(r[1], r[2]) for r in body} == {("1", "1"), ("1", "2"), ("2", "1"), ("3", "1")}
    markup = pic.read_text()
    assert markup.startswith("<svg") and "polyline" in markup


def test_lobes_csv_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert cli.main(["lobes", "--preset", "fig6", "--samples", "16", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_classify_exit_codes(capsys):
    rc = cli.main([
        "classify", "--variant", "instant", "--xi", "1.62", "--q", "0.8",
        "--delta", "150", "--h", "0.05",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.startswith("stable unstable_count=0 margin=")

    rc = cli.main([
        "classify", "--variant", "instant", "--xi", "1.62", "--q", "0.8",
        "--delta", "150", "--h", "1.2",
    ])
    out = capsys.readouterr().out
    assert rc == 3
    assert out.startswith("unstable unstable_count=6")


def test_lobes_rejects_excluded_parameters(tmp_path, capsys):
    rc = cli.main([
        "lobes", "--variant", "delayed", "--xi", "1.6", "--q", "0.8",
        "--out", str(tmp_path / "l.csv"),
    ])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_classify_requires_a_point(capsys):
    rc = cli.main(["classify", "--variant", "delayed", "--xi", "0.2"])
    assert rc == 2
    assert "requires --delta and --h" in capsys.readouterr().err


def test_roots_reports_conjugate_pair(capsys):
    rc = cli.main([
        "roots", "--variant", "instant", "--xi", "1.62", "--q", "0.8",
        "--delta", "150", "--h", "0.05",
    ])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "unstable_count=0"
    assert len(lines) == 3
    roots = [complex(s.split("=", 1)[1]) for s in lines[1:]]
    assert roots[0] == roots[1].conjugate()
    assert abs(roots[0] - complex(-0.458, 11.704)) < 5e-3 or \
        abs(roots[0] - complex(-0.458, -11.704)) < 5e-3


def test_reduce_key_value_output(tmp_path, capsys):
    phys = PhysicalParams(
        m=10.0, c_x=32.0, c_y=32.0, k_x=3800.0, k_y=3800.0,
        K_x=2.0e8, K_y=2.0e8, omega_cut=1e-3,
    )
    path = tmp_path / "m.par"
    path.write_text(dump_params(phys))
    rc = cli.main(["reduce", "--params", str(path)])
    assert rc == 0
    pairs = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert set(pairs) == {
        "xi", "delta", "h1", "h2", "k_star", "K1", "k_r", "p", "c_gain", "q"
    }
    assert math.isclose(float(pairs["k_star"]), 2.0 * math.pi / 100.0, rel_tol=1e-10)
    assert math.isclose(float(pairs["k_r"]), 1.0, rel_tol=1e-12)


def test_reduce_missing_file_is_io_error(tmp_path, capsys):
    rc = cli.main(["reduce", "--params", str(tmp_path / "nope.par")])
    assert rc == 1


def test_simulate_linear_point(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    rc = cli.main([
        "simulate", "--variant", "delayed", "--xi", "0.2", "--q", "12",
        "--delta", "0.005", "--h", "0.005", "--amplitude", "1e-6",
        "--eta-end", "20", "--step", "0.0625", "--out", str(out),
    ])
    assert rc == 0
    rows = _read_csv(out)
    assert rows[0] == cli.TRAJECTORY_HEADER
    assert len(rows) == 1 + 20 * 16 + 1
    line = capsys.readouterr().out.strip()
    assert line.startswith("growth_rate=")
    assert float(line.split("=", 1)[1]) < 0.0  # decaying point


def test_simulate_nonlinear_zero_perturbation_is_constant(tmp_path, capsys):
    phys = PhysicalParams(
        m=10.0, c_x=32.0, c_y=32.0, k_x=3800.0, k_y=3800.0,
        K_x=2.0e8, K_y=2.0e8, omega_cut=1e-3,
    )
    par = tmp_path / "m.par"
    par.write_text(dump_params(phys))
    out = tmp_path / "traj.csv"
    rc = cli.main([
        "simulate", "--params", str(par), "--variant", "instant",
        "--eta-end", "4", "--step", "0.125", "--out", str(out),
    ])
    assert rc == 0
    body = _read_csv(out)[1:]
    x1 = [float(r[1]) for r in body]
    k = [float(r[5]) for r in body]
    assert max(x1) - min(x1) < 1e-12 * abs(x1[0])
    assert max(k) - min(k) < 1e-12 * k[0]


def test_simulate_params_needs_variant(tmp_path, capsys):
    par = tmp_path / "m.par"
    par.write_text("m=1\n")
    rc = cli.main(["simulate", "--params", str(par)])
    assert rc == 2
