"""Command-line front end.

Every subcommand is deterministic and writes plain text, CSV or flat JSON.
Exit codes: 0 success, 2 argument error, 3 domain or singular-parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import fock, sld
from .errors import DomainError
from .gaussian import ChannelParams, ProbeClass, make_probe
from .yields import (
    ALL_CLASSES,
    Param,
    WeightMatrix,
    high_energy_expansion,
    low_energy_expansion,
    qfi,
    weighted_cr_bound,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3

SWEEP_HEADER = ["n", "J_coherent", "J_thermal", "J_squeezed", "J_two_mode"]
SCATTER_HEADER = ["index", "kind", "n_a", "J_gamma", "entropy", "efficiency"]
CLASS_CHOICES = [c.value for c in ProbeClass]


def fmt(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _theta(args) -> ChannelParams:
    return ChannelParams(args.gamma, args.nbar)


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_record(record: dict, fmt_kind: str) -> None:
    if fmt_kind == "json":
        print(json.dumps(record))
    else:
        print(" ".join(f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in record.items()))


def cmd_yield(args) -> int:
    theta = _theta(args)
    j = qfi(args.param, args.probe_class, args.n, theta)
    rec = {"param": args.param, "class": args.probe_class, "n": args.n, "gamma": args.gamma, "nbar": args.nbar, "J": j}
    _print_record(rec, args.format)
    return EXIT_OK


def sweep_grid(n_min: float, n_max: float, points: int, log: bool) -> np.ndarray:
    if points < 2:
        raise DomainError("points must be >= 2")
    if not (0 <= n_min < n_max):
        raise DomainError("need 0 <= n-min < n-max")
    if log:
        if n_min <= 0:
            raise DomainError("log grid needs n-min > 0")
        return np.geomspace(n_min, n_max, points)
    return np.linspace(n_min, n_max, points)


def sweep_rows(param, theta: ChannelParams, grid) -> tuple:
    """Rows of (n, J per class); singular entries become nan. Returns (rows, failures)."""
    rows, failures = [], {}
    for n in grid:
        row = [float(n)]
        for c in ALL_CLASSES:
            try:
                row.append(qfi(param, c, float(n), theta))
            except DomainError as exc:
                failures.setdefault(c.value, str(exc))
                row.append(float("nan"))
        rows.append(row)
    return rows, failures


def cmd_sweep(args) -> int:
    theta = _theta(args)
    grid = sweep_grid(args.n_min, args.n_max, args.points, args.log)
    rows, failures = sweep_rows(args.param, theta, grid)
    for cls, msg in failures.items():
        print(f"warning: {cls} column set to nan: {msg}", file=sys.stderr)
    if args.format == "json":
        text = "".join(json.dumps(dict(zip(SWEEP_HEADER, r))) + "\n" for r in rows)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        text = buf.getvalue()
    _emit(text, args.output)
    return EXIT_OK


def cmd_expand(args) -> int:
    theta = _theta(args)
    fn = low_energy_expansion if args.regime == "low" else high_energy_expansion
    co = fn(args.param, args.probe_class, theta)
    if args.regime == "low":
        rec = {"J0": co.constant, "J1": co.slope}
    else:
        rec = {"J_minus1": co.slope, "J0": co.constant}
    _print_record(
        {"param": args.param, "class": args.probe_class, "regime": args.regime, "gamma": args.gamma, "nbar": args.nbar, **rec},
        args.format,
    )
    return EXIT_OK


def cmd_commute(args) -> int:
    theta = _theta(args)
    val = sld.commutator_expectation(make_probe(ProbeClass.TWO_MODE_SQUEEZED_VACUUM, args.n), theta)
    _print_record({"n": args.n, "gamma": args.gamma, "nbar": args.nbar, "real": val.real, "imag": val.imag}, args.format)
    return EXIT_OK


def cmd_qfi_matrix(args) -> int:
    theta = _theta(args)
    j = sld.qfi_matrix(make_probe(args.probe_class, args.n), theta)
    rec = {
        "class": args.probe_class,
        "n": args.n,
        "gamma": args.gamma,
        "nbar": args.nbar,
        "J_gg": j[0, 0],
        "J_gN": j[0, 1],
        "J_NN": j[1, 1],
        "bound_G_gamma": weighted_cr_bound(WeightMatrix.gamma_only(), j),
        "bound_G_nbar": weighted_cr_bound(WeightMatrix.nbar_only(), j),
        "bound_G_identity": weighted_cr_bound(WeightMatrix.identity(), j),
    }
    _print_record(rec, args.format)
    return EXIT_OK


def scatter_csv(result: fock.ScatterResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCATTER_HEADER)
    for r in result.all_rows():
        w.writerow([r.index, r.label, fmt(r.n_a), fmt(r.j_gamma), fmt(r.entropy), fmt(r.efficiency)])
    return buf.getvalue()


def _int_list(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def cmd_scatter(args) -> int:
    result = fock.scatter_experiment(
        args.samples,
        args.gamma,
        args.dim,
        args.dim,
        args.max_ent_dims,
        args.seed,
        reference_points=args.reference_points,
        workers=args.workers,
    )
    _emit(scatter_csv(result), args.output)
    return EXIT_OK


def fock_probe(kind: str, n: float, cutoff: int) -> tuple:
    if n < 0 or not math.isfinite(n):
        raise DomainError(f"n must be finite and >= 0, got {n!r}")
    if kind == "coherent":
        return fock.coherent_fock(n, cutoff)
    if kind == "squeezed":
        return fock.squeezed_fock(n, cutoff)
    if kind == "tmsv":
        return fock.tmsv_fock(n, cutoff)
    d = 2 * n + 1
    if abs(d - round(d)) > 1e-9:
        raise DomainError("max-ent probes need n = (d-1)/2 for an integer d")
    d = int(round(d))
    if d > cutoff:
        raise DomainError(f"max-ent dimension {d} exceeds cutoff {cutoff}")
    return fock.max_entangled(d).padded(cutoff, cutoff), 0.0


def cmd_fock_qfi(args) -> int:
    state, tail = fock_probe(args.state, args.n, args.cutoff)
    j = fock.qfi_gamma_fock(state, args.gamma)
    _print_record({"state": args.state, "n": args.n, "gamma": args.gamma, "cutoff": args.cutoff, "J": j, "tail_mass": tail}, args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="channelqfi", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def channel(sp, nbar_default=None):
        sp.add_argument("--gamma", type=float, required=True)
        if nbar_default is None:
            sp.add_argument("--nbar", type=float, required=True)
        else:
            sp.add_argument("--nbar", type=float, default=nbar_default)

    def output_format(sp):
        sp.add_argument("--format", choices=["text", "json"], default="text")

    sp = sub.add_parser("yield", help="closed-form yield for one class")
    sp.add_argument("--param", choices=["gamma", "nbar"], required=True)
    sp.add_argument("--class", dest="probe_class", choices=CLASS_CHOICES, required=True)
    sp.add_argument("--n", type=float, required=True)
    channel(sp)
    output_format(sp)
    sp.set_defaults(func=cmd_yield)

    sp = sub.add_parser("sweep", help="yields of all classes over an energy grid")
    sp.add_argument("--param", choices=["gamma", "nbar"], required=True)
    channel(sp)
    sp.add_argument("--n-min", type=float, required=True)
    sp.add_argument("--n-max", type=float, required=True)
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--log", action="store_true", help="geometric grid")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("expand", help="low- or high-energy expansion coefficients")
    sp.add_argument("--param", choices=["gamma", "nbar"], required=True)
    sp.add_argument("--regime", choices=["low", "high"], required=True)
    sp.add_argument("--class", dest="probe_class", choices=CLASS_CHOICES, required=True)
    channel(sp)
    output_format(sp)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("commute", help="tr[rho [L_gamma, L_N]] for a two-mode squeezed vacuum probe")
    sp.add_argument("--n", type=float, required=True)
    channel(sp)
    output_format(sp)
    sp.set_defaults(func=cmd_commute)

    sp = sub.add_parser("qfi-matrix", help="2x2 QFI matrix and weighted Cramer-Rao bounds")
    sp.add_argument("--class", dest="probe_class", choices=CLASS_CHOICES, required=True)
    sp.add_argument("--n", type=float, required=True)
    channel(sp)
    output_format(sp)
    sp.set_defaults(func=cmd_qfi_matrix)

    sp = sub.add_parser("scatter", help="random non-Gaussian probes at N = 0")
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--dim", type=int, default=4)
    sp.add_argument("--max-ent-dims", type=_int_list, default=[3, 4, 5, 6])
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--reference-points", type=int, default=50)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_scatter)

    sp = sub.add_parser("fock-qfi", help="J_gamma of a truncated Fock-space probe at N = 0")
    sp.add_argument("--state", choices=["coherent", "squeezed", "tmsv", "max-ent"], required=True)
    sp.add_argument("--n", type=float, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--cutoff", type=int, default=30)
    output_format(sp)
    sp.set_defaults(func=cmd_fock_qfi)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", RuntimeWarning)
            return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ArithmeticError, RuntimeWarning) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
