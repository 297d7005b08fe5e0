"""Command-line interface.

Exit status: 0 success, 2 usage or config error, 3 domain error (degenerate
simulation sample, empty composition window).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from eveinfo.bellcore import BellLabel
from eveinfo.bounds import (
    ENUMERATION_CAP,
    SIX_STATE_MAX_RATE,
    NoCompositionInWindow,
    asymptotic_log_omega_per_bit,
    i_ab,
    i_eve_bb84,
    i_eve_six_state,
    log_omega_exact,
)
from eveinfo.schemes import PLANE_UNIFORM_ZX, SPHERE_UNIFORM, Scheme, basis_average, detection_profile
from eveinfo.sim import ConfigError, DegenerateSample, SimConfig, run_protocol

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3

CURVE_HEADER = "d,i_eve_bb84,i_eve_six,i_ab"


def fmt(x: float) -> str:
    """12 significant digits, locale independent."""
    return format(x, ".12g")


def curve_grid(d_min: float, d_max: float, step: float) -> list[float]:
    count = math.floor((d_max - d_min) / step + 1e-9) + 1
    return [min(d_max, d_min + k * step) for k in range(count)]


def curve_rows(d_min: float, d_max: float, step: float) -> list[str]:
    rows = [CURVE_HEADER]
    for d in curve_grid(d_min, d_max, step):
        six = fmt(i_eve_six_state(d)) if d <= SIX_STATE_MAX_RATE else ""
        rows.append(",".join([fmt(d), fmt(i_eve_bb84(d)), six, fmt(i_ab(d))]))
    return rows


def cmd_curve(args) -> int:
    if not (0.0 <= args.min < args.max <= 1.0) or not args.step > 0:
        print("error: need 0 <= min < max <= 1 and step > 0", file=sys.stderr)
        return EXIT_USAGE
    text = "\n".join(curve_rows(args.min, args.max, args.step)) + "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="ascii", newline="\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
        config = SimConfig.from_json(text)
    except (OSError, ConfigError) as exc:
        print(f"error: bad config {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = run_protocol(config, workers=args.workers)
    except DegenerateSample as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(result.to_json())
    return EXIT_OK


def cmd_oracle(args) -> int:
    if not 1 <= args.n <= ENUMERATION_CAP:
        print(f"error: n must be in [1, {ENUMERATION_CAP}]", file=sys.stderr)
        return EXIT_USAGE
    tol = 1.0 / (2 * args.n) if args.tol is None else args.tol
    try:
        exact = log_omega_exact(args.n, detection_profile(args.scheme), args.d, tol) / (2 * args.n)
        asymptotic = asymptotic_log_omega_per_bit(args.scheme, args.d)
    except NoCompositionInWindow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"scheme: {args.scheme}")
    print(f"n: {args.n}")
    print(f"d: {fmt(args.d)}")
    print(f"tolerance: {fmt(tol)}")
    print(f"exact_per_bit: {fmt(exact)}")
    print(f"asymptotic_per_bit: {fmt(asymptotic)}")
    print(f"gap: {fmt(asymptotic - exact)}")
    return EXIT_OK


def cmd_basis_average(args) -> int:
    ensemble = {"sphere": SPHERE_UNIFORM, "plane": PLANE_UNIFORM_ZX}[args.ensemble]
    if args.method == "quadrature":
        est = basis_average(args.state, ensemble, "quadrature", nodes=args.nodes)
    else:
        est = basis_average(args.state, ensemble, "monte_carlo", samples=args.samples, seed=args.seed)
    print(f"{fmt(est.value)} +/- {format(est.error, '.3g')}")
    return EXIT_OK


def _label(text: str) -> BellLabel:
    try:
        return BellLabel.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _scheme(text: str) -> Scheme:
    try:
        return Scheme.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eveinfo", description="Eve's optimal information bounds for BB84-family QKD.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="write I_Eve / I_AB curves as CSV")
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=0.5)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("simulate", help="run the protocol simulator on a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="exact finite-n log(Omega) vs the asymptotic bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--scheme", type=_scheme, default=Scheme.parse("bb84"))
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--tol", type=float, default=None, help="rate window half-width (default 1/(2n))")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("basis-average", help="average parallel probability over a basis ensemble")
    p.add_argument("--state", type=_label, required=True)
    p.add_argument("--ensemble", choices=["sphere", "plane"], default="sphere")
    p.add_argument("--method", choices=["quadrature", "mc"], default="quadrature")
    p.add_argument("--nodes", type=int, default=32)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_basis_average)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
