import json
import subprocess
import sys
from pathlib import Path

import numpy as np

from statbundle.cli import main

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def run_cli(args):
    return subprocess.run(
        [sys.executable, "-m", "statbundle.cli", *args],
        capture_output=True,
        text=True,
    )


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_geodesic_single_time_row_is_initial(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.5]},
            "initial": [1.0, 1.0],
            "kind": "exponential",
            "u": [1.0, -1.0],
            "t_grid": [0.0],
        },
    )
    assert main(["geodesic", "--config", cfg]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "t,q_1,q_2,entropy,acceleration_residual"
    row = out[1].split(",")
    assert float(row[1]) == 1.0 and float(row[2]) == 1.0


def test_geodesic_acceleration_residual_column(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.25, 0.25]},
            "initial": [1.0, 1.0, 1.0],
            "kind": "exponential",
            "u": [1.0, -0.5, -1.5],
            "t_grid": [0.0, 0.5, 1.0],
        },
    )
    assert main(["geodesic", "--config", cfg]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert all(float(r.split(",")[-1]) <= 1e-8 for r in rows)


def test_geodesic_mixture_boundary_exits_3(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.5]},
            "initial": [1.0, 1.0],
            "kind": "mixture",
            "target": [1.5, 0.5],
            "t_grid": [0.0, 3.0],
        },
    )
    proc = run_cli(["geodesic", "--config", cfg])
    assert proc.returncode == 3
    assert "positive" in proc.stderr


def test_config_errors_exit_2(tmp_path):
    missing = run_cli(["geodesic", "--config", str(tmp_path / "nope.json")])
    assert missing.returncode == 2
    bad_density = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.5]},
            "initial": [1.0, -1.0],
            "kind": "exponential",
            "u": [1.0, -1.0],
            "t_grid": [0.0],
        },
    )
    assert run_cli(["geodesic", "--config", bad_density]).returncode == 2
    not_json = tmp_path / "broken.json"
    not_json.write_text("{oops")
    assert run_cli(["norm", "--config", str(not_json)]).returncode == 2


def test_entropy_flow_gap_column(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [1 / 3, 1 / 3, 1 / 3]},
            "initial": [2.4, 0.45, 0.15],
            "T": 0.5,
            "h": 0.001,
        },
    )
    assert main(["entropy-flow", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].endswith("closed_form_gap")
    gaps = [float(r.split(",")[-1]) for r in lines[1:]]
    assert max(gaps) < 1e-6
    residuals = [float(r.split(",")[-2]) for r in lines[1:]]
    assert max(residuals) <= 1e-9  # every emitted row renormalizes cleanly


def test_sir_beta_zero_constant_s(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [1 / 3, 1 / 3, 1 / 3]},
            "initial": [2.0, 0.5, 0.5],
            "beta": 0.0,
            "gamma": 0.4,
            "T": 1.0,
            "h": 0.001,
        },
    )
    assert main(["sir", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("t,S,I,R")
    s_vals = [float(r.split(",")[1]) for r in lines[1:]]
    assert max(abs(s - s_vals[0]) for s in s_vals) < 1e-9


def test_hamilton_energy_column(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.25, 0.25]},
            "initial": [1.2, 0.9, 0.7],
            "hamiltonian": "quadratic",
            "eta0": [0.6, -0.3, -0.9],
            "T": 0.2,
            "h": 0.001,
        },
    )
    assert main(["hamilton", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    energies = [float(r.split(",")[-2]) for r in lines[1:]]
    assert max(energies) - min(energies) < 1e-10


def test_maxent_output(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.5]},
            "initial": [1.0, 1.0],
            "f": [1.0, -1.0],
            "b": float(np.tanh(1.0)),
        },
    )
    assert main(["maxent", "--config", cfg]) == 0
    out = dict(line.split("=") for line in capsys.readouterr().out.strip().splitlines())
    assert abs(float(out["theta"]) - 1.0) < 1e-10
    assert float(out["constraint_residual"]) <= 1e-10


def test_norm_zero_vector_all_zero(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {"space": {"weights": [0.25, 0.25, 0.25, 0.25]}, "f": [0.0, 0.0, 0.0, 0.0]},
    )
    assert main(["norm", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()[1:]
    assert all(float(line.split(",")[1]) == 0.0 for line in lines)


def test_rerun_is_bit_identical(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.25, 0.25]},
            "initial": [1.2, 0.9, 0.7],
            "hamiltonian": "quadratic",
            "eta0": [0.6, -0.3, -0.9],
            "T": 0.1,
            "h": 0.001,
        },
    )
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["hamilton", "--config", cfg, "--out", str(out1), "--no-plot"]) == 0
    assert main(["hamilton", "--config", cfg, "--out", str(out2), "--no-plot"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_out_file_renders_figure(tmp_path):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [1 / 3, 1 / 3, 1 / 3]},
            "initial": [2.0, 0.5, 0.5],
            "beta": 0.9,
            "gamma": 0.4,
            "T": 0.2,
            "h": 0.01,
        },
    )
    out = tmp_path / "sir.csv"
    assert main(["sir", "--config", cfg, "--out", str(out)]) == 0
    figure = out.with_suffix(".png")
    assert figure.exists() and figure.stat().st_size > 0
    # and --no-plot suppresses it
    out2 = tmp_path / "sir2.csv"
    assert main(["sir", "--config", cfg, "--out", str(out2), "--no-plot"]) == 0
    assert not out2.with_suffix(".png").exists()


def test_float_format_roundtrips(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        {
            "space": {"weights": [0.5, 0.5]},
            "initial": [1.0, 1.0],
            "kind": "exponential",
            "u": [0.7, -0.7],
            "t_grid": [1.0 / 3.0],
        },
    )
    assert main(["geodesic", "--config", cfg]) == 0
    row = capsys.readouterr().out.strip().splitlines()[1].split(",")
    q1 = float(row[1])
    # 17 significant digits reproduce the double exactly
    from statbundle import Density, FiniteSpace, center, exp_geodesic

    space = FiniteSpace(np.array([0.5, 0.5]))
    p = Density(space, np.array([1.0, 1.0]))
    u = center(np.array([0.7, -0.7]), p)
    assert q1 == exp_geodesic(p, u, 1.0 / 3.0).values[0]


def test_bundled_configs_run():
    for name, command in [
        ("geodesic_exponential.json", "geodesic"),
        ("geodesic_mixture.json", "geodesic"),
        ("maxent.json", "maxent"),
        ("norm.json", "norm"),
    ]:
        proc = run_cli([command, "--config", str(CONFIG_DIR / name)])
        assert proc.returncode == 0, proc.stderr
