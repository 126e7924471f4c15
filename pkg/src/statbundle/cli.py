"""Command-line surface: run flows and solvers from a JSON config.

Commands
--------
``geodesic``      exponential or mixture geodesic over a time grid
``entropy-flow``  RK4 entropy gradient flow (ascent or descent)
``sir``           the SIR score equations on three states
``hamilton``      Hamilton equations for a named Hamiltonian
``maxent``        single-constraint maximum entropy solve
``norm``          Luxemburg norm table over the Young kinds
``check``         the full numbered property suite

Trajectory commands emit CSV with a one-line header and 17-significant-
digit floats (round-trip safe); ``maxent``, ``norm``, and ``check`` emit
line-oriented ``key=value`` text.  When ``--out`` names a file, the
trajectory commands also render a PNG figure next to it (suppress with
``--no-plot``).

Exit codes: 0 success, 2 config or validation problem, 3 numeric or
integration failure, 4 property-suite violation.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .calculus import e_acceleration, m_acceleration
from .charts import entropy
from .checks import run_all
from .dynamics import (
    FlowResult,
    conjugate_cumulant_hamiltonian,
    entropy_flow_closed,
    entropy_flow_descent_closed,
    entropy_flow_numeric,
    exp_geodesic_curve,
    hamilton_flow,
    mix_geodesic_curve,
    quadratic_hamiltonian,
    sir_flow,
)
from .errors import ConfigError, StatBundleError, ValidationError
from .gradients import constrained_max_entropy
from .measure import MIXTURE, Density, FiniteSpace, center, expectation
from .orlicz import luxemburg_norm, young

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VIOLATION = 4

_HAMILTONIANS: Dict[str, Callable] = {
    "quadratic": quadratic_hamiltonian,
    "conjugate_cumulant": conjugate_cumulant_hamiltonian,
}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        raise ConfigError("--config is required for this command")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"config is missing required field {key!r}")
    return cfg[key]


@contextlib.contextmanager
def _config_phase():
    """Re-tag failures while building run inputs as configuration errors."""
    try:
        yield
    except ConfigError:
        raise
    except StatBundleError as exc:
        raise ConfigError(str(exc)) from exc


def _space_from(cfg: dict) -> FiniteSpace:
    space_cfg = _require(cfg, "space")
    weights = _require(space_cfg, "weights") if isinstance(space_cfg, dict) else space_cfg
    return FiniteSpace(np.asarray(weights, dtype=float))


def _density_from(cfg: dict, space: FiniteSpace, key: str = "initial") -> Density:
    return Density(space, np.asarray(_require(cfg, key), dtype=float))


def _array_from(cfg: dict, key: str, n: int) -> np.ndarray:
    arr = np.asarray(_require(cfg, key), dtype=float)
    if arr.size != n:
        raise ConfigError(f"field {key!r} must have length {n}")
    return arr


class _Output:
    """Collects lines and writes them to a file or stdout at the end."""

    def __init__(self, out: Optional[str]):
        self.path = Path(out) if out else None
        self.lines: List[str] = []

    def add(self, line: str) -> None:
        self.lines.append(line)

    def flush(self) -> None:
        text = "\n".join(self.lines) + "\n"
        if self.path is None:
            sys.stdout.write(text)
        else:
            self.path.write_text(text, encoding="utf-8")

    def figure_path(self) -> Optional[Path]:
        return self.path.with_suffix(".png") if self.path is not None else None


def _write_csv(out: _Output, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    out.add(",".join(header))
    for row in rows:
        out.add(",".join(_fmt(x) for x in row))


def _maybe_plot(args, out: _Output, times, matrix, monitor_name, monitor, labels=None, title=""):
    path = out.figure_path()
    if path is None or args.no_plot:
        return
    from .plotting import render_flow_figure

    render_flow_figure(
        np.asarray(times),
        np.asarray(matrix),
        path,
        monitor_name=monitor_name,
        monitor=np.asarray(monitor) if monitor is not None else None,
        labels=labels,
        title=title,
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_geodesic(args, cfg: dict, out: _Output) -> int:
    with _config_phase():
        space = _space_from(cfg)
        p = _density_from(cfg, space)
        kind = _require(cfg, "kind")
        t_grid = np.asarray(_require(cfg, "t_grid"), dtype=float)
        if t_grid.size == 0:
            raise ConfigError("t_grid must be nonempty")
        lo, hi = float(np.min(t_grid)), float(np.max(t_grid))
        if kind == "exponential":
            u = center(_array_from(cfg, "u", space.n), p)
            curve = exp_geodesic_curve(p, u, domain=(min(lo, 0.0), max(hi, 1.0)))
            residual_at = lambda t: float(np.max(np.abs(e_acceleration(curve, t).values)))
        elif kind == "mixture":
            target = _density_from(cfg, space, key="target")
            curve = mix_geodesic_curve(p, target, domain=(min(lo, 0.0), max(hi, 1.0)))
            residual_at = lambda t: float(np.max(np.abs(m_acceleration(curve, t).values)))
        else:
            raise ConfigError("kind must be 'exponential' or 'mixture'")
    rows = []
    densities = []
    for t in t_grid:
        q = curve.eval(t)
        densities.append(q.values)
        rows.append([t, *q.values, entropy(q), residual_at(t)])
    header = ["t", *[f"q_{i + 1}" for i in range(space.n)], "entropy", "acceleration_residual"]
    _write_csv(out, header, rows)
    _maybe_plot(
        args, out, t_grid, np.stack(densities), "entropy",
        [r[-2] for r in rows], title=f"{kind} geodesic",
    )
    return EXIT_OK


def _flow_rows(flow: FlowResult, extra_names: Sequence[str], extra_cols: Sequence[Sequence[float]]):
    n = flow.densities[0].n
    header = ["t", *[f"q_{i + 1}" for i in range(n)], *extra_names]
    rows = []
    for k, (t, q) in enumerate(zip(flow.times, flow.densities)):
        rows.append([t, *q.values, *[col[k] for col in extra_cols]])
    return header, rows


def cmd_entropy_flow(args, cfg: dict, out: _Output) -> int:
    with _config_phase():
        space = _space_from(cfg)
        q0 = _density_from(cfg, space)
        T = float(_require(cfg, "T"))
        h = float(_require(cfg, "h"))
        ascent = bool(cfg.get("ascent", True))
    flow = entropy_flow_numeric(q0, T=T, h=h, ascent=ascent)
    closed = entropy_flow_closed if ascent else entropy_flow_descent_closed
    gaps = [
        float(np.max(np.abs(q.values - closed(q0, t).values)))
        for t, q in zip(flow.times, flow.densities)
    ]
    header, rows = _flow_rows(
        flow,
        ["entropy", "norm_residual", "closed_form_gap"],
        [flow.monitors["entropy"], flow.monitors["norm_residual"], gaps],
    )
    _write_csv(out, header, rows)
    _maybe_plot(
        args, out, flow.times, flow.density_matrix, "entropy",
        flow.monitors["entropy"], title="entropy flow " + ("ascent" if ascent else "descent"),
    )
    return EXIT_OK


def cmd_sir(args, cfg: dict, out: _Output) -> int:
    with _config_phase():
        space = _space_from(cfg)
        p0 = _density_from(cfg, space)
        beta = float(_require(cfg, "beta"))
        gamma = float(_require(cfg, "gamma"))
        T = float(_require(cfg, "T"))
        h = float(_require(cfg, "h"))
    flow = sir_flow(p0, beta=beta, gamma=gamma, T=T, h=h)
    header, rows = _flow_rows(flow, ["mass_residual"], [flow.monitors["mass_residual"]])
    header[1:4] = ["S", "I", "R"]
    _write_csv(out, header, rows)
    _maybe_plot(
        args, out, flow.times, flow.density_matrix, "mass residual",
        flow.monitors["mass_residual"], labels=["S", "I", "R"], title="SIR flow",
    )
    return EXIT_OK


def cmd_hamilton(args, cfg: dict, out: _Output) -> int:
    with _config_phase():
        space = _space_from(cfg)
        q0 = _density_from(cfg, space)
        name = _require(cfg, "hamiltonian")
        if name not in _HAMILTONIANS:
            raise ConfigError(f"hamiltonian must be one of {sorted(_HAMILTONIANS)}")
        eta0 = center(_array_from(cfg, "eta0", space.n), q0, MIXTURE)
        T = float(_require(cfg, "T"))
        h = float(_require(cfg, "h"))
    flow = hamilton_flow(_HAMILTONIANS[name](), q0, eta0, T=T, h=h)
    header, rows = _flow_rows(
        flow, ["energy", "norm_residual"],
        [flow.monitors["energy"], flow.monitors["norm_residual"]],
    )
    _write_csv(out, header, rows)
    _maybe_plot(
        args, out, flow.times, flow.density_matrix, "energy",
        flow.monitors["energy"], title=f"Hamilton flow ({name})",
    )
    return EXIT_OK


def cmd_maxent(args, cfg: dict, out: _Output) -> int:
    with _config_phase():
        space = _space_from(cfg)
        p = _density_from(cfg, space)
        f = _array_from(cfg, "f", space.n)
        b = float(_require(cfg, "b"))
    theta, q = constrained_max_entropy(f, b, p)
    out.add(f"theta={_fmt(theta)}")
    for i, v in enumerate(q.values):
        out.add(f"q_{i + 1}={_fmt(v)}")
    out.add(f"constraint_residual={_fmt(abs(expectation(f, q) - b))}")
    out.add(f"entropy={_fmt(entropy(q))}")
    return EXIT_OK


def cmd_norm(args, cfg: dict, out: _Output) -> int:
    with _config_phase():
        space = _space_from(cfg)
        f = _array_from(cfg, "f", space.n)
        alpha = float(cfg.get("alpha", 2.0))
    out.add("kind,luxemburg_norm")
    for kind in ("power", "exp2", "exp2_conj", "cosh2", "cosh2_conj", "gauss2", "gauss2_conj"):
        pair = young(kind, alpha=alpha) if kind == "power" else young(kind)
        label = f"power(alpha={alpha:g})" if kind == "power" else kind
        out.add(f"{label},{_fmt(luxemburg_norm(f, space, pair))}")
    return EXIT_OK


def cmd_check(args, cfg: dict, out: _Output) -> int:
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    results = run_all(seed=seed)
    failures = 0
    for res in results:
        out.add(res.line())
        for key, val in sorted(res.details.items()):
            if key == "seconds":  # timing would break bit-identical reruns
                continue
            out.add(f"criterion_{res.criterion:02d}.{key}={_fmt(val)}")
        if res.note:
            out.add(f"criterion_{res.criterion:02d}.note={res.note}")
        failures += 0 if res.passed else 1
    out.add(f"failures={failures}")
    out.add(f"seed={seed}")
    return EXIT_OK if failures == 0 else EXIT_VIOLATION


_COMMANDS = {
    "geodesic": (cmd_geodesic, True),
    "entropy-flow": (cmd_entropy_flow, True),
    "sir": (cmd_sir, True),
    "hamilton": (cmd_hamilton, True),
    "maxent": (cmd_maxent, True),
    "norm": (cmd_norm, True),
    "check": (cmd_check, False),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statbundle",
        description="Affine information geometry flows, solvers, and property audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="path to the JSON run configuration")
        cmd.add_argument("--out", help="output path (default: stdout)")
        cmd.add_argument("--seed", type=int, default=None, help="seed for random audits")
        cmd.add_argument(
            "--no-plot", action="store_true",
            help="skip the PNG figure next to --out for trajectory commands",
        )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    fn, needs_config = _COMMANDS[args.command]
    out = _Output(args.out)
    try:
        cfg = _load_config(args.config) if (needs_config or args.config) else {}
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code = fn(args, cfg, out)
    except (ConfigError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StatBundleError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out.flush()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
