"""Command-line interface.

Subcommands: ``algebra-check``, ``evolve``, ``sweep`` and ``fringes``.
Exit codes: 0 success, 1 computation or check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import WellParams, evolve, half_transfer_time, hamiltonian, trajectory
from .experiment import (
    FringeParams,
    SweepConfig,
    export,
    format_number,
    fringe_profile,
    mandel_sweep,
    write_records_csv,
)
from .fock import DomainError, fock_state, make_basis
from .phase import (
    RECORD_FIELDS,
    commutator_residuals,
    phase_observables,
    phase_operators,
    spectrum_deviation,
)

log = logging.getLogger("mwphase")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ALGEBRA_TOL = 1e-12
SPECTRUM_TOL = 1e-10
FORMATS = {"csv", "json", "svg", "png"}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _formats(text: str) -> set[str]:
    fmts = {v.strip().lower() for v in str(text).split(",") if v.strip()}
    unknown = fmts - FORMATS
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown format(s) {sorted(unknown)}; choose from {sorted(FORMATS)}"
        )
    return fmts


def _t_end(text: str):
    if str(text) == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--t-end takes a number or 'auto', got {text!r}")
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError("--t-end must be finite and >= 0")
    return value


def _add_well_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--j", type=float, default=1.0, help="tunneling energy J (default 1)")
    p.add_argument("--u", type=float, default=0.0, help="on-site interaction U (default 0)")
    p.add_argument("--tilt", type=float, default=0.0, help="inter-well bias (default 0)")


def _add_output_flags(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--format", type=_formats, default=_formats(default),
                   help=f"comma-separated subset of {sorted(FORMATS)} (default {default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mwphase",
        description="Phase-difference operators and tunneling dynamics of bosons in a double well.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra-check", help="verify the phase-operator algebra for N = 1..n_max")
    p.add_argument("--config", type=Path, help="JSON file whose keys mirror the flags")
    p.add_argument("--n-max", "--n", dest="n_max", type=int, default=50)

    p = sub.add_parser("evolve", help="single-N trajectory from |N,0>")
    p.add_argument("--config", type=Path, help="JSON file whose keys mirror the flags")
    p.add_argument("--n", "--n-total", dest="n", type=int, required=True)
    _add_well_flags(p)
    p.add_argument("--dt", type=float, help="sampling step (default window/samples)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--t-end", type=_t_end, default="auto")
    p.add_argument("--horizon", type=float, help="search horizon for --t-end auto")
    _add_output_flags(p, "csv,json,svg")

    p = sub.add_parser("sweep", help="<S12> versus <N2> up to half transfer, several N")
    p.add_argument("--config", type=Path, help="JSON file whose keys mirror the flags")
    p.add_argument("--n", "--n-values", dest="n", type=_int_list, default=[1, 2, 5, 10, 20])
    _add_well_flags(p)
    p.add_argument("--samples", type=int, default=200, help="samples per half-transfer window")
    p.add_argument("--averaging", choices=["inst", "timeavg"], default="inst")
    p.add_argument("--horizon", type=float, help="search horizon when interactions are on")
    _add_output_flags(p, "csv,json,svg")

    p = sub.add_parser("fringes", help="interference density profile for a relative phase")
    p.add_argument("--config", type=Path, help="JSON file whose keys mirror the flags")
    p.add_argument("--phase", type=float,
                   help="relative phase in radians (default: mean phase at half transfer)")
    p.add_argument("--n", type=int, default=10, help="atom number for the default phase")
    _add_well_flags(p)
    p.add_argument("--visibility", type=float, default=1.0)
    p.add_argument("--wavenumber", type=float, default=2 * math.pi)
    p.add_argument("--width", type=float, default=3.0, help="envelope width")
    p.add_argument("--half-width", type=float, default=6.0, help="half extent of the x grid")
    p.add_argument("--samples", type=int, default=801)
    _add_output_flags(p, "csv,svg")
    return parser


def _config_argv(path: Path) -> list[str]:
    """Translate a JSON config into flag tokens."""
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    argv = []
    for key, value in cfg.items():
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        argv += ["--" + key.replace("_", "-"), str(value)]
    return argv


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is not None:
        try:
            extra = _config_argv(args.config)
        except UsageError as exc:
            parser.error(str(exc))
        i = argv.index(args.command) + 1
        # config values first so explicit flags win
        args = parser.parse_args(argv[:i] + extra + argv[i:])
    return args


def _well_params(args) -> WellParams:
    return WellParams(j=args.j, u=args.u, tilt=args.tilt)


def run_algebra_check(n_max: int, out=None) -> int:
    out = sys.stdout if out is None else out
    if n_max < 1:
        raise UsageError(f"n_max must be >= 1, got {n_max}")
    header = ("N", "herm_C", "herm_S", "unitary_E", "C2+S2-I",
              "[C,W]", "[S,W]", "[C,S]", "spectrum")
    print(" ".join(f"{h:>10}" for h in header), file=out)
    failures = []
    start = time.perf_counter()
    for n in range(1, n_max + 1):
        basis = make_basis(n)
        ops = phase_operators(basis)
        c, s = ops.bp_cos.matrix, ops.bp_sin.matrix
        checks = {
            "herm_C": ops.bp_cos.hermiticity_residual(),
            "herm_S": ops.bp_sin.hermiticity_residual(),
            "unitary_E": ops.exp_phase.unitarity_residual(),
            "C2+S2-I": float(np.max(np.abs(c @ c + s @ s - np.eye(basis.dim)))),
        }
        checks.update(zip(("[C,W]", "[S,W]", "[C,S]"), commutator_residuals(basis)))
        checks["spectrum"] = spectrum_deviation(basis)
        for name, value in checks.items():
            tol = SPECTRUM_TOL if name == "spectrum" else ALGEBRA_TOL
            if not value < tol:
                failures.append(f"N={n}: {name} residual {value:.3e} exceeds {tol:.0e}")
        print(f"{n:>10} " + " ".join(f"{v:>10.2e}" for v in checks.values()), file=out)
    elapsed = time.perf_counter() - start
    for msg in failures:
        print("FAIL " + msg, file=out)
    status = "PASS" if not failures else "FAIL"
    print(f"{status}: N = 1..{n_max} checked in {elapsed:.2f} s", file=out)
    return EXIT_OK if not failures else EXIT_FAIL


def run_sweep(args) -> int:
    config = SweepConfig(
        n_values=tuple(args.n),
        params=_well_params(args),
        samples_per_window=args.samples,
        averaging=args.averaging,
        horizon=args.horizon,
    )
    result = mandel_sweep(config)
    written = []
    for fmt in ("csv", "json"):
        if fmt in args.format:
            written += export(result, fmt, args.out)
    for fmt in ("svg", "png"):
        if fmt in args.format:
            from .plotting import plot_sweep

            written.append(plot_sweep(result, args.out / f"sweep.{fmt}"))
    for run in result.runs:
        end = run.records[-1]
        tag = "" if run.transfer.crossed else "  [no crossing before horizon]"
        log.info("N=%d  t_end=%s  <N2>=%s  <S12>=%s%s", run.n_total,
                 format_number(end.t), format_number(end.mean_n2),
                 format_number(end.mean_sin), tag)
    for path in written:
        print(path)
    return EXIT_OK


def run_evolve(args) -> int:
    params = _well_params(args)
    basis = make_basis(args.n)
    if args.samples < 2:
        raise DomainError("--samples must be >= 2")
    crossed = True
    if args.t_end == "auto":
        transfer = half_transfer_time(params, basis, horizon=args.horizon, samples=args.samples)
        t_end, crossed = transfer.t, transfer.crossed
        if not crossed:
            log.warning("no crossing: <N2> peaks at %s < N/2 = %s before t = %s",
                        format_number(transfer.max_n2), format_number(args.n / 2),
                        format_number(t_end))
    else:
        t_end = args.t_end
    window = t_end if crossed else params.rabi_half_time
    dt = args.dt if args.dt is not None else (window / args.samples if window > 0 else 1.0)
    points = trajectory(hamiltonian(basis, params), fock_state(basis, args.n), dt, t_end,
                        phase_operators(basis))
    records = [pt.record for pt in points]
    args.out.mkdir(parents=True, exist_ok=True)
    stem = f"evolve_N{args.n}"
    written = []
    if "csv" in args.format:
        written.append(write_records_csv(args.out / f"{stem}.csv", RECORD_FIELDS,
                                         (r.as_row() for r in records)))
    if "json" in args.format:
        doc = {
            "meta": {"j": params.j, "u": params.u, "tilt": params.tilt, "dt": dt,
                     "averaging": "inst", "version": __version__,
                     "columns": list(RECORD_FIELDS)},
            "runs": [{"n_total": args.n, "crossed": crossed, "t_end": t_end,
                      "rows": [list(r.as_row()) for r in records]}],
        }
        target = args.out / f"{stem}.json"
        target.write_text(json.dumps(doc, separators=(",", ":")) + "\n", encoding="ascii")
        written.append(target)
    for fmt in ("svg", "png"):
        if fmt in args.format:
            from .plotting import plot_trajectory

            written.append(plot_trajectory(records, args.n, args.out / f"{stem}.{fmt}"))
    print(f"t_end {format_number(t_end)} crossed {str(crossed).lower()}")
    for path in written:
        print(path)
    return EXIT_OK


def half_transfer_phase(n: int, params: WellParams) -> float:
    """arg(<C12> + i<S12>) in the state reached at half transfer from |N,0>."""
    basis = make_basis(n)
    t = half_transfer_time(params, basis).t
    psi = evolve(hamiltonian(basis, params), fock_state(basis, n), t)
    rec = phase_observables(psi, phase_operators(basis), t)
    return math.atan2(rec.mean_sin, rec.mean_cos)


def run_fringes(args) -> int:
    fp = FringeParams(visibility=args.visibility, wavenumber=args.wavenumber,
                      width=args.width, samples=args.samples, half_width=args.half_width)
    phase = args.phase
    if phase is None:
        phase = half_transfer_phase(args.n, _well_params(args))
        log.info("using half-transfer mean phase %s rad for N=%d", format_number(phase), args.n)
    x, intensity = fringe_profile(phase, fp)
    args.out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in args.format:
        written.append(write_records_csv(args.out / "fringes.csv", ("x", "density"),
                                         zip(x, intensity)))
    for fmt in ("svg", "png"):
        if fmt in args.format:
            from .plotting import plot_fringes

            written.append(plot_fringes(x, intensity, phase, args.out / f"fringes.{fmt}"))
    print(f"phase {format_number(phase)}")
    for path in written:
        print(path)
    return EXIT_OK


COMMANDS = {
    "algebra-check": lambda args: run_algebra_check(args.n_max),
    "evolve": run_evolve,
    "sweep": run_sweep,
    "fringes": run_fringes,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"mwphase {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, OSError, np.linalg.LinAlgError) as exc:
        print(f"mwphase {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
