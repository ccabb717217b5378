"""Command-line interface: experiment orchestration and file emission.

Subcommands: single, two-res, pseudomode, eigen, compare, convergence,
invert-test. Exit codes: 0 success, 1 tolerance failure, 2 configuration
error, 3 numerical failure. Output files are written once, at the end of a
run, and identical configs produce byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import SimulationConfig, load_config
from .eigen import biorthogonality_check, decompose, solve_by_expansion
from .errors import ConfigError, NumericalError
from .inversion import validate_method
from .kernel import build_system
from .pipeline import TimeSeries, run_dynamics
from .pseudomode import evolve
from .reservoir import Topology
from .solver import solve_complex
from .twores import TwoReservoirClosedForm

COMPARISON_TOL = 1e-2


# -- file emission -----------------------------------------------------------

def _fmt(value, precision: int) -> str:
    if value is None:
        return ""
    return f"{value:.{precision}g}"


def write_csv(path, series: TimeSeries, precision: int = 12) -> None:
    """Emit the canonical schema t,p2,p1,p0,b2_re,b2_im."""
    rows = ["t,p2,p1,p0,b2_re,b2_im"]
    for i, t in enumerate(series.t):
        cells = [
            _fmt(t, precision),
            _fmt(series.p2[i], precision),
            _fmt(None if series.p1 is None else series.p1[i], precision),
            _fmt(None if series.p0 is None else series.p0[i], precision),
            _fmt(None if series.b2 is None else series.b2[i].real, precision),
            _fmt(None if series.b2 is None else series.b2[i].imag, precision),
        ]
        rows.append(",".join(cells))
    Path(path).write_text("\n".join(rows) + "\n")


def read_csv(path) -> dict[str, np.ndarray]:
    """Parse a file written by ``write_csv`` back into column arrays."""
    lines = Path(path).read_text().strip().splitlines()
    names = lines[0].split(",")
    cols = {name: [] for name in names}
    for line in lines[1:]:
        for name, cell in zip(names, line.split(",")):
            cols[name].append(np.nan if cell == "" else float(cell))
    return {name: np.array(vals) for name, vals in cols.items()}


def render_svg(curves, xlabel: str, ylabel: str, title: str,
               width: int = 640, height: int = 420) -> str:
    """Minimal standalone SVG line plot: one polyline per labeled curve."""
    margin = 60
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"]
    xs = np.concatenate([np.asarray(c[1], dtype=float) for c in curves])
    ys = np.concatenate([np.asarray(c[2], dtype=float) for c in curves])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 16}" text-anchor="middle" font-size="13">{xlabel}</text>',
        f'<text x="18" y="{height / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {height / 2:.1f})">{ylabel}</text>',
    ]
    for k in range(5):
        xv = x0 + k * (x1 - x0) / 4
        yv = y0 + k * (y1 - y0) / 4
        parts.append(
            f'<text x="{sx(xv):.1f}" y="{height - margin + 18}" text-anchor="middle" '
            f'font-size="11">{xv:.3g}</text>'
        )
        parts.append(
            f'<text x="{margin - 8}" y="{sy(yv):.1f}" text-anchor="end" '
            f'font-size="11">{yv:.3g}</text>'
        )
    for idx, (label, x, y) in enumerate(curves):
        color = colors[idx % len(colors)]
        pts = " ".join(f"{sx(float(a)):.2f},{sy(float(b)):.2f}" for a, b in zip(x, y))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{width - margin - 4}" y="{margin + 16 * (idx + 1)}" text-anchor="end" '
            f'font-size="12" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def write_plot(path, curves, xlabel, ylabel, title) -> None:
    Path(path).write_text(render_svg(curves, xlabel, ylabel, title))


# -- experiment drivers -------------------------------------------------------

def run_single(config: SimulationConfig) -> TimeSeries:
    """Single-reservoir pipeline with populations."""
    spec = config.reservoir_spec()
    if spec.topology is not Topology.SINGLE:
        raise ConfigError("run_single requires reservoir.topology = single")
    return run_dynamics(spec, config.atom_params(), config.frequency_grid(),
                        config.inversion_config())


def run_two_res(config: SimulationConfig) -> tuple[TimeSeries, TimeSeries, float]:
    """Two-reservoir pipeline plus analytic curve; returns (numeric, analytic, max|dP2|)."""
    spec = config.reservoir_spec()
    if spec.topology is not Topology.TWO_RESERVOIRS:
        raise ConfigError("run_two_res requires reservoir.topology = two-res")
    numeric = run_dynamics(spec, config.atom_params(), config.frequency_grid(),
                           config.inversion_config())
    exact = TwoReservoirClosedForm(gamma=config.gamma, omega_big=config.omega_coupling)
    b2 = np.asarray(exact.b2(numeric.t), dtype=complex)
    analytic = TimeSeries(t=numeric.t, b2=b2, p2=np.abs(b2.real) ** 2)
    return numeric, analytic, numeric.max_p2_diff(analytic.p2)


def run_pseudomode(config: SimulationConfig):
    """Lindblad oracle on the configured time grid."""
    t = config.inversion_config().time_grid()
    return evolve(config.pseudomode_params(), t)


def run_compare(config: SimulationConfig) -> tuple[TimeSeries, np.ndarray, float]:
    """Matrix method vs pseudo-mode master equation for the single reservoir."""
    series = run_single(config)
    oracle = run_pseudomode(config)
    return series, oracle.p2, series.max_p2_diff(oracle.p2)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    max_error: float


def run_convergence(config: SimulationConfig, grid_sizes: list[int]) -> list[ConvergenceRow]:
    """Error against the topology's oracle for each grid size."""
    if len(grid_sizes) < 2:
        raise ConfigError("convergence study needs at least 2 grid sizes")
    spec = config.reservoir_spec()
    atom = config.atom_params()
    inv = config.inversion_config()
    if spec.topology is Topology.SINGLE:
        oracle_p2 = run_pseudomode(config).p2
    else:
        exact = TwoReservoirClosedForm(gamma=config.gamma, omega_big=config.omega_coupling)
        oracle_p2 = np.asarray(exact.p2(inv.time_grid()))
    rows = []
    for n in grid_sizes:
        series = run_dynamics(spec, atom, config.frequency_grid(n=n), inv, populations=False)
        rows.append(ConvergenceRow(n=n, max_error=series.max_p2_diff(oracle_p2)))
    return rows


@dataclass(frozen=True)
class EigenReport:
    n_eigenvalues: int
    n_flagged_nonzero: int
    biorthogonality_residual: float
    expansion_vs_direct: float
    top_eigenvalues: np.ndarray


def run_eigen(config: SimulationConfig, s: complex = 1.0) -> EigenReport:
    """Spectrum of the discretized kernel and expansion-vs-direct residual at one node."""
    spec = config.reservoir_spec()
    system = build_system(spec, config.atom_params(), s, config.frequency_grid())
    bio = decompose(system)
    direct = solve_complex(system)
    expansion = solve_by_expansion(system, bio)
    rel = np.abs(expansion.f_vals - direct.f_vals).max() / np.abs(direct.f_vals).max()
    scale = np.abs(bio.xi).max()
    flagged = int(np.sum(np.abs(bio.xi) > 1e-10 * max(scale, 1e-300)))
    top = bio.xi[np.argsort(-np.abs(bio.xi))[:5]]
    return EigenReport(
        n_eigenvalues=bio.n, n_flagged_nonzero=flagged,
        biorthogonality_residual=biorthogonality_check(bio),
        expansion_vs_direct=float(rel), top_eigenvalues=top,
    )


# -- argument parsing ---------------------------------------------------------

def _add_common(p):
    p.add_argument("--config", help="path to a key=value config file")
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="override a config key, e.g. grid.n=100")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--plot", help="SVG plot output path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmcascade",
        description="Non-Markovian decay of a three-level cascade atom in structured reservoirs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [
        ("single", "single-reservoir decay curve (kernel -> solve -> invert)"),
        ("two-res", "two-reservoir decay curve, checked against the closed form"),
        ("pseudomode", "pseudo-mode master equation populations"),
        ("compare", "overlay matrix method and pseudo-mode oracle"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name in ("two-res", "compare"):
            p.add_argument("--tol", type=float, default=COMPARISON_TOL,
                           help=f"max |dP2| allowed (default {COMPARISON_TOL})")
        if name == "two-res":
            p.add_argument("--analytic", action="store_true",
                           help="emit only the closed-form curve (no matrix pipeline)")

    p = sub.add_parser("convergence", help="grid-size error study against the oracle")
    _add_common(p)
    p.add_argument("--grids", default="50,100,150",
                   help="comma-separated grid sizes (default 50,100,150)")

    p = sub.add_parser("eigen", help="kernel spectrum and expansion-vs-direct residual")
    _add_common(p)
    p.add_argument("--node", type=float, default=1.0, help="real Laplace node s (default 1)")

    p = sub.add_parser("invert-test", help="run the inverse-Laplace transform-pair battery")
    _add_common(p)
    p.add_argument("--tol", type=float, default=None,
                   help="per-pair tolerance (default: method-appropriate)")
    return parser


# -- subcommand handlers -------------------------------------------------------

def _cmd_single(args, config) -> int:
    series = run_single(config)
    if args.out:
        write_csv(args.out, series, config.precision)
    if args.plot:
        write_plot(args.plot, [("P2", series.t, series.p2), ("P1", series.t, series.p1),
                               ("P0", series.t, series.p0)],
                   "t (units of 1/Gamma)", "population", "single reservoir")
    print(f"single: {len(series.t)} points, P2(end) = {series.p2[-1]:.6g}")
    return 0


def _cmd_two_res(args, config) -> int:
    if args.analytic:
        exact = TwoReservoirClosedForm(gamma=config.gamma, omega_big=config.omega_coupling)
        t = config.inversion_config().time_grid()
        b2 = np.asarray(exact.b2(t), dtype=complex)
        series = TimeSeries(t=t, b2=b2, p2=b2.real**2)
        if args.out:
            write_csv(args.out, series, config.precision)
        if args.plot:
            write_plot(args.plot, [("P2 exact", t, series.p2)],
                       "t (units of 1/Gamma)", "population", "two reservoirs (closed form)")
        print(f"two-res analytic: P2(end) = {series.p2[-1]:.6g}")
        return 0
    numeric, analytic, dev = run_two_res(config)
    if args.out:
        write_csv(args.out, numeric, config.precision)
        stem = Path(args.out)
        write_csv(stem.with_name(stem.stem + "_analytic" + stem.suffix), analytic, config.precision)
    if args.plot:
        write_plot(args.plot, [("P2 numeric", numeric.t, numeric.p2),
                               ("P2 exact", analytic.t, analytic.p2)],
                   "t (units of 1/Gamma)", "population", "two reservoirs")
    print(f"two-res: max |dP2| vs closed form = {dev:.3e} (tol {args.tol:g})")
    return 0 if dev <= args.tol else 1


def _cmd_pseudomode(args, config) -> int:
    result = run_pseudomode(config)
    series = TimeSeries(t=result.t, b2=None, p2=result.p2, p1=result.p1, p0=result.p0)
    if args.out:
        write_csv(args.out, series, config.precision)
    if args.plot:
        write_plot(args.plot, [("P2", result.t, result.p2), ("P1", result.t, result.p1),
                               ("P0", result.t, result.p0)],
                   "t (units of 1/Gamma)", "population", "pseudo-mode master equation")
    print(f"pseudomode: trace error {result.max_trace_error:.2e}, "
          f"P2(end) = {result.p2[-1]:.6g}")
    return 0


def _cmd_compare(args, config) -> int:
    series, oracle_p2, dev = run_compare(config)
    if args.out:
        rows = ["t,p2_matrix,p2_pseudomode,abs_diff"]
        for i, t in enumerate(series.t):
            rows.append(",".join([
                _fmt(t, config.precision), _fmt(series.p2[i], config.precision),
                _fmt(oracle_p2[i], config.precision),
                _fmt(abs(series.p2[i] - oracle_p2[i]), config.precision),
            ]))
        Path(args.out).write_text("\n".join(rows) + "\n")
    if args.plot:
        write_plot(args.plot, [("P2 matrix", series.t, series.p2),
                               ("P2 pseudo-mode", series.t, oracle_p2)],
                   "t (units of 1/Gamma)", "population", "matrix method vs pseudo-mode")
    print(f"compare: max |dP2| = {dev:.3e} (tol {args.tol:g})")
    return 0 if dev <= args.tol else 1


def _cmd_convergence(args, config) -> int:
    grids = [int(x) for x in args.grids.split(",") if x.strip()]
    rows = run_convergence(config, grids)
    if args.out:
        lines = ["n,max_abs_error"] + [
            f"{r.n},{_fmt(r.max_error, config.precision)}" for r in rows
        ]
        Path(args.out).write_text("\n".join(lines) + "\n")
    if args.plot:
        write_plot(args.plot, [("max error", [r.n for r in rows], [r.max_error for r in rows])],
                   "grid size N", "max |dP2|", "grid convergence")
    for r in rows:
        print(f"N = {r.n:5d}: max |dP2| vs oracle = {r.max_error:.3e}")
    ordered = all(rows[i].max_error > rows[i + 1].max_error for i in range(len(rows) - 1))
    print(f"convergence: errors {'strictly decrease' if ordered else 'NOT monotone'}")
    return 0 if ordered else 1


def _cmd_eigen(args, config) -> int:
    report = run_eigen(config, s=complex(args.node))
    if args.out:
        lines = ["xi_re,xi_im"] + [
            f"{_fmt(x.real, config.precision)},{_fmt(x.imag, config.precision)}"
            for x in report.top_eigenvalues
        ]
        Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"eigen: {report.n_eigenvalues} eigenvalues, "
          f"{report.n_flagged_nonzero} above the rank threshold")
    print(f"eigen: biorthogonality residual = {report.biorthogonality_residual:.3e}")
    print(f"eigen: expansion vs direct solve = {report.expansion_vs_direct:.3e}")
    ok = report.biorthogonality_residual <= 1e-8 and report.expansion_vs_direct <= 1e-6
    return 0 if ok else 1


def _cmd_invert_test(args, config) -> int:
    report = validate_method(config.inversion_config(), tol=args.tol)
    if args.out:
        lines = ["pair,max_error,tol,passed"] + [
            f"{r.name},{_fmt(r.max_error, config.precision)},{_fmt(r.tol, 3)},{int(r.passed)}"
            for r in report.results
        ]
        Path(args.out).write_text("\n".join(lines) + "\n")
    for r in report.results:
        note = " (oscillatory, outside real-node method scope)" if (
            r.oscillatory and report.method.value == "gaver-stehfest") else ""
        print(f"{r.name:>14s}: max error {r.max_error:.3e} "
              f"[{'pass' if r.passed else 'FAIL'}]{note}")
    return 0 if report.passed() else 1


_HANDLERS = {
    "single": _cmd_single,
    "two-res": _cmd_two_res,
    "pseudomode": _cmd_pseudomode,
    "compare": _cmd_compare,
    "convergence": _cmd_convergence,
    "eigen": _cmd_eigen,
    "invert-test": _cmd_invert_test,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.overrides)
        return _HANDLERS[args.command](args, config)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(json.dumps({"error": "numerical", "message": str(exc)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
