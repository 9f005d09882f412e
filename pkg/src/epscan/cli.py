"""Batch command-line front end.

Subcommands map one-to-one onto the library's top-level analyses:

    spectrum        full spectrum at one parameter point
    sweep           tracked levels along a g or gamma sweep (+ EP2 report)
    phase-diagram   spectral classification over a (g, gamma) grid
    ep3             locate the third-order exceptional point
    compare         triple energies: exact diagonalization vs both effective routes

All rates are entered in units of the qubit splitting Omega.  Give the qubit
either as --delta/--epsilon (absolute energies) or as --theta-frac N /
--theta-rad X (mixing angle, Omega = 1).  Artifacts are CSV (default) or JSON
with the resolved parameter set echoed in a header; runs are deterministic, so
identical invocations produce identical bytes.

Exit codes: 0 success, 1 usage error, 2 domain error (no EP found,
non-convergence, invalid parameter region).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cubic, model, spectra
from .errors import EpscanError
from .model import SystemParams

__all__ = ["main", "build_parser", "run"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; this front end reserves 2 for
    # domain errors, so route usage failures through exit code 1 instead
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="epscan",
        description="Exceptional-point scanner for a gain/loss two-qubit "
        "circuit-QED model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    qubit = common.add_argument_group("qubit parameters")
    qubit.add_argument("--delta", type=float, default=None,
                       help="qubit tunneling amplitude (absolute energy units)")
    qubit.add_argument("--epsilon", type=float, default=None,
                       help="qubit bias (absolute energy units)")
    qubit.add_argument("--theta-frac", type=float, default=None, metavar="N",
                       help="mixing angle pi/N with Omega = 1")
    qubit.add_argument("--theta-rad", type=float, default=None, metavar="X",
                       help="mixing angle in radians with Omega = 1")
    common.add_argument("--omega-r-ratio", type=float, default=None,
                        help="resonator frequency over Omega (default 1.07)")
    common.add_argument("--gamma-over-omega", type=float, default=None,
                        help="gain/loss rate over Omega (default 0)")
    common.add_argument("--g-over-omega", type=float, default=None,
                        help="coupling over Omega (default 0)")
    common.add_argument("--nmax", type=int, default=None,
                        help="Fock cutoff (default 7)")
    common.add_argument("--config", type=str, default=None,
                        help="JSON file with base parameters; flags override")
    common.add_argument("--output", type=str, default=None,
                        help="artifact path (default depends on the subcommand)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="artifact format (default csv)")
    common.add_argument("--jobs", type=int, default=1,
                        help="worker processes for grid scans (default 1)")

    p = sub.add_parser("spectrum", parents=[common],
                       help="full spectrum at one parameter point")

    p = sub.add_parser("sweep", parents=[common],
                       help="track levels along a parameter sweep")
    p.add_argument("--sweep-param", choices=("g", "gamma"), default="g")
    p.add_argument("--sweep-min", type=float, default=0.0,
                   help="sweep start over Omega (default 0)")
    p.add_argument("--sweep-max", type=float, default=0.4,
                   help="sweep end over Omega (default 0.4)")
    p.add_argument("--points", type=int, default=400,
                   help="sweep points (default 400)")
    p.add_argument("--detect-ep2", action="store_true",
                   help="bisect real<->complex transitions and write *_ep2.csv")

    p = sub.add_parser("phase-diagram", parents=[common],
                       help="classify the triple spectrum over a (g, gamma) grid")
    p.add_argument("--g-min", type=float, default=0.0)
    p.add_argument("--g-max", type=float, default=0.3)
    p.add_argument("--gamma-min", type=float, default=0.0)
    p.add_argument("--gamma-max", type=float, default=0.02)
    p.add_argument("--grid", type=str, default="121x81", metavar="NxM",
                   help="grid nodes as NxM (default 121x81)")
    p.add_argument("--use-full", action="store_true",
                   help="run on the exact effective matrix instead of the "
                        "parity-adapted approximation")

    p = sub.add_parser("ep3", parents=[common],
                       help="locate the third-order exceptional point")
    p.add_argument("--use-full", action="store_true")
    p.add_argument("--initial-g", type=float, default=None,
                   help="Newton seed g over Omega")
    p.add_argument("--initial-gamma", type=float, default=None,
                   help="Newton seed gamma over Omega")

    p = sub.add_parser("compare", parents=[common],
                       help="triple energies from ED vs both effective routes")
    p.add_argument("--g-max", type=float, default=0.4,
                   help="scan end over Omega (default 0.4)")
    p.add_argument("--g-points", type=int, default=81,
                   help="scan points (default 81)")

    return parser


def _resolve_params(args) -> SystemParams:
    mapping: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise _UsageError("config file must contain a JSON object")
        mapping.update(loaded)

    angular_flag = args.theta_frac is not None or args.theta_rad is not None
    cartesian_flag = args.delta is not None or args.epsilon is not None
    if angular_flag and cartesian_flag:
        raise _UsageError("give either --delta/--epsilon or --theta-*, not both")
    if args.theta_frac is not None and args.theta_rad is not None:
        raise _UsageError("--theta-frac and --theta-rad are mutually exclusive")
    if angular_flag:
        mapping.pop("delta", None)
        mapping.pop("epsilon", None)
        mapping["omega"] = 1.0
        mapping["theta"] = (
            np.pi / args.theta_frac if args.theta_frac is not None else args.theta_rad
        )
    if cartesian_flag:
        mapping.pop("omega", None)
        mapping.pop("theta", None)
        if args.delta is not None:
            mapping["delta"] = args.delta
        if args.epsilon is not None:
            mapping["epsilon"] = args.epsilon
    if not ({"delta", "epsilon"} <= set(mapping) or {"omega", "theta"} <= set(mapping)):
        # no qubit given anywhere: fall back to the standard working point
        mapping.setdefault("omega", 1.0)
        mapping.setdefault("theta", np.pi / 40.0)
    if args.nmax is not None:
        mapping["n_max"] = args.nmax
    params = model.params_from_mapping(mapping)

    omega = params.omega
    if args.omega_r_ratio is not None:
        params = params.replace(omega_r=args.omega_r_ratio * omega)
    elif "omega_r" not in mapping:
        params = params.replace(omega_r=1.07 * omega)
    if args.gamma_over_omega is not None:
        params = params.replace(gamma=args.gamma_over_omega * omega)
    if args.g_over_omega is not None:
        params = params.replace(g=args.g_over_omega * omega)
    return params


def _header_lines(params: SystemParams, extra: dict | None = None) -> list[str]:
    pairs = dict(params.as_dict())
    pairs["omega"] = params.omega
    pairs["theta"] = params.theta
    if extra:
        pairs.update(extra)
    return [f"# {key}={_fmt(value)}" for key, value in pairs.items()]


def _fmt(value) -> str:
    # repr(float) round-trips all 17 significant digits and gives identical
    # bytes on rerun; numpy scalars are unwrapped first so their verbose
    # repr never leaks into artifacts
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _write_rows(path, header_lines, columns, rows, fmt, params, extra=None):
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for line in header_lines:
                fh.write(line + "\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    else:
        payload = {
            "params": {**params.as_dict(), "omega": params.omega, "theta": params.theta},
            "columns": list(columns),
            "rows": [[v for v in row] for row in rows],
        }
        if extra:
            payload.update(extra)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
            fh.write("\n")


def _cmd_spectrum(args) -> int:
    params = _resolve_params(args)
    eig = spectra.full_spectrum(params)
    pv = spectra.parity_expectations(eig, model.parity_operator(params.n_max))
    omega = params.omega
    rows = []
    for i, e in enumerate(eig.values):
        is_real = abs(e.imag) < spectra.REALNESS_RTOL * omega
        definite = abs(pv[i]) > spectra.PARITY_TOL
        parity = int(np.sign(pv[i])) if (is_real and definite) else 0
        rows.append((params.g, i, float(e.real), float(e.imag), parity))
    groups = spectra.group_resonant_levels(eig, params)
    out = args.output or "spectrum.csv"
    _write_rows(
        out,
        _header_lines(params),
        ("sweep_value", "level_index", "re_e", "im_e", "parity_index"),
        rows,
        args.format,
        params,
    )
    sizes = ",".join(str(len(g)) for g in groups)
    print(f"spectrum: dim={params.dim} groups={sizes} wrote {out}")
    return 0


def _cmd_sweep(args) -> int:
    params = _resolve_params(args)
    omega = params.omega
    if not args.sweep_max > args.sweep_min:
        raise _UsageError("--sweep-max must exceed --sweep-min")
    if args.points < 2:
        raise _UsageError("--points must be at least 2")
    values = np.linspace(
        args.sweep_min * omega, args.sweep_max * omega, args.points
    )
    branches = spectra.track_levels(params, args.sweep_param, values)
    rows = []
    for branch in branches:
        for k in range(branch.n_steps):
            e = branch.energies[k]
            rows.append(
                (
                    float(branch.sweep_values[k] / omega),
                    branch.level,
                    float(e.real),
                    float(e.imag),
                    int(branch.parity_indices[k]),
                )
            )
    rows.sort(key=lambda r: (r[0], r[1]))
    out = args.output or "sweep.csv"
    extra = {"sweep_param": args.sweep_param}
    _write_rows(
        out,
        _header_lines(params, extra),
        ("sweep_value", "level_index", "re_e", "im_e", "parity_index"),
        rows,
        args.format,
        params,
        extra,
    )
    msg = (
        f"sweep: {args.sweep_param}/omega in [{args.sweep_min},{args.sweep_max}] "
        f"points={args.points} branches={len(branches)}"
    )
    if args.detect_ep2:
        crossings = spectra.detect_ep2_all(branches, params)
        ep2_rows = [
            (
                float(c.lo / omega),
                float(c.hi / omega),
                c.parity_a,
                c.parity_b,
            )
            for c in crossings
        ]
        ep2_out = (
            args.output.rsplit(".", 1)[0] + "_ep2.csv" if args.output else "sweep_ep2.csv"
        )
        _write_rows(
            ep2_out,
            _header_lines(params, extra),
            ("sweep_value_lo", "sweep_value_hi", "parity_a", "parity_b"),
            ep2_rows,
            "csv",
            params,
            extra,
        )
        msg += f" ep2={len(crossings)} wrote {out},{ep2_out}"
    else:
        msg += f" wrote {out}"
    print(msg)
    return 0


def _parse_grid(spec: str) -> tuple[int, int]:
    try:
        a, b = spec.lower().split("x")
        return int(a), int(b)
    except ValueError as exc:
        raise _UsageError(f"--grid expects NxM, got {spec!r}") from exc


def _cmd_phase_diagram(args) -> int:
    params = _resolve_params(args)
    omega = params.omega
    grid = _parse_grid(args.grid)
    diagram = cubic.phase_diagram(
        params,
        (args.g_min * omega, args.g_max * omega),
        (args.gamma_min * omega, args.gamma_max * omega),
        grid=grid,
        use_full=args.use_full,
        jobs=args.jobs,
    )
    rows = []
    for i, gval in enumerate(diagram.g_values):
        for j, gamval in enumerate(diagram.gamma_values):
            rows.append(
                (
                    float(gval / omega),
                    float(gamval / omega),
                    float(diagram.max_im[i, j]),
                    float(diagram.min_dist[i, j]),
                    diagram.tags[i, j],
                )
            )
    out = args.output or "phase_diagram.csv"
    extra = {"use_full": args.use_full, "grid": f"{grid[0]}x{grid[1]}"}
    _write_rows(
        out,
        _header_lines(params, extra),
        ("g_over_omega", "gamma_over_omega", "max_im_e", "min_level_dist", "class"),
        rows,
        args.format,
        params,
        extra,
    )
    print(
        f"phase-diagram: grid={grid[0]}x{grid[1]} "
        f"broken_fraction={diagram.broken_fraction():.4f} wrote {out}"
    )
    return 0


def _cmd_ep3(args) -> int:
    params = _resolve_params(args)
    omega = params.omega
    guess = None
    if args.initial_g is not None or args.initial_gamma is not None:
        if args.initial_g is None or args.initial_gamma is None:
            raise _UsageError("--initial-g and --initial-gamma go together")
        guess = (args.initial_g * omega, args.initial_gamma * omega)
    report = cubic.find_ep3(params, initial_guess=guess, use_full=args.use_full)
    payload = {
        "params": {**params.as_dict(), "omega": omega, "theta": params.theta},
        **report.as_dict(),
    }
    out = args.output or "ep3.json"
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(
        f"EP3: g_cr/omega={report.g_cr / omega:.6f} "
        f"gamma_cr/omega={report.gamma_cr / omega:.6e} "
        f"rank_ok={report.rank_ok} residual={report.residual:.3e} wrote {out}"
    )
    return 0


def _cmd_compare(args) -> int:
    params = _resolve_params(args)
    omega = params.omega
    if args.g_points < 2:
        raise _UsageError("--g-points must be at least 2")
    gvals = np.linspace(0.0, args.g_max * omega, args.g_points)
    table = spectra.compare_effective_vs_ed(params, gvals, params.gamma)
    rows = []
    for k, g in enumerate(table.g_values):
        for lev in range(3):
            rows.append(
                (
                    float(g / omega),
                    lev,
                    float(table.e_ed[k, lev].real),
                    float(table.e_ed[k, lev].imag),
                    float(table.e_full[k, lev].real),
                    float(table.e_full[k, lev].imag),
                    float(table.e_approx[k, lev].real),
                    float(table.e_approx[k, lev].imag),
                )
            )
    out = args.output or "compare.csv"
    _write_rows(
        out,
        _header_lines(params),
        (
            "g_over_omega",
            "level_index",
            "re_e_ed",
            "im_e_ed",
            "re_e_eff",
            "im_e_eff",
            "re_e_eff_approx",
            "im_e_eff_approx",
        ),
        rows,
        args.format,
        params,
    )
    dev = float(np.max(table.max_re_deviation("full")))
    print(
        f"compare: gamma/omega={params.gamma / omega:.6g} g/omega<={args.g_max} "
        f"points={args.g_points} max|dRe|={dev:.3e} wrote {out}"
    )
    return 0


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "phase-diagram": _cmd_phase_diagram,
    "ep3": _cmd_ep3,
    "compare": _cmd_compare,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (EpscanError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> None:
    sys.exit(run(argv))
