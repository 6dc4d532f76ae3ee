"""lnaswarm command line.

Exit status: 0 success (design feasible), 2 design finished but infeasible,
1 bad input of any kind.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .amplifier import noise_circle
from .design import DesignSpec, DesignTargets, default_swarm, design_amplifier, evaluate_fixed, sweep
from .errors import LnaSwarmError
from .network import DesignVector, source_reflection
from .reference import (
    DEFAULT_FIXTURE_FREQUENCY,
    REFERENCE_TRIALS,
    compare_reference,
    load_fixture,
)
from .report import (
    build_run_report,
    circle_csv,
    dump_report,
    format_metrics,
    parse_frequency,
    parse_gamma,
    parse_length,
    sweep_csv,
    write_atomic,
)
from .touchstone import device_at, load_device

SEED_ENV = "LNASWARM_SEED"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (1); 2 is reserved for infeasible designs
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _freq(text):
    try:
        return parse_frequency(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _length(text):
    try:
        return parse_length(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _gamma(text):
    try:
        return parse_gamma(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad reflection coefficient {text!r}") from exc


def _add_device(p, required=True):
    p.add_argument("--device", required=required, help="two-port Touchstone file (.s2p)")
    p.add_argument("--freq", type=_freq, required=required, help="design frequency (Hz, or with GHz/MHz suffix)")


def _add_lengths(p):
    for name in ("d1", "l1", "d2", "l2"):
        p.add_argument(f"--{name}", type=_length, required=True, help="length, e.g. 41.16deg or 0.1143lam")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lnaswarm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("design", help="search matching lengths with the particle swarm")
    _add_device(p)
    p.add_argument("--gain-db", type=float, default=20.0)
    p.add_argument("--nf-max-db", type=float, default=1.0)
    p.add_argument("--reflection-max", type=float, default=0.99)
    p.add_argument("--gain-tol-db", type=float, default=0.05)
    p.add_argument("--particles", type=int, default=15)
    p.add_argument("--iters", type=int, default=3000)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    p.add_argument("--workers", type=int, default=None, help="evaluate the swarm on N threads")
    p.add_argument("--early-stop", action="store_true", help="stop once every particle has converged")
    p.add_argument("--out", help="write the JSON run report here (default: stdout)")
    p.add_argument("--trace", help="write the per-iteration convergence CSV here")

    p = sub.add_parser("eval", help="evaluate a fixed design")
    _add_device(p)
    _add_lengths(p)

    p = sub.add_parser("sweep", help="frequency response of a fixed layout")
    _add_device(p)
    _add_lengths(p)
    p.add_argument("--from", dest="f_from", type=_freq, required=True)
    p.add_argument("--to", dest="f_to", type=_freq, required=True)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--out", help="CSV path (default: stdout)")

    p = sub.add_parser("circles", help="noise-figure circle points for a Smith chart")
    _add_device(p)
    p.add_argument("--nf-db", type=float, required=True, help="circle noise figure in dB")
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--gamma", type=_gamma, action="append", default=[],
                   help="overlay point, MAG@DEG or RE+IMj (repeatable)")
    p.add_argument("--reference-trials", action="store_true",
                   help="overlay the source reflections of the bundled reference designs")
    p.add_argument("--out", help="CSV path (default: stdout)")

    p = sub.add_parser("reference", help="compare the reference FHX35X designs against a device file")
    p.add_argument("--device", help="device file (default: bundled approximate FHX35X data)")
    p.add_argument("--freq", type=_freq, default=DEFAULT_FIXTURE_FREQUENCY)
    return parser


def _load(args):
    device = load_fixture() if args.device is None else load_device(args.device)
    return device


def _emit(text: str, path: str | None):
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"${SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def cmd_design(args) -> int:
    device = _load(args)
    targets = DesignTargets(args.gain_db, args.nf_max_db, args.reflection_max, args.gain_tol_db)
    swarm = default_swarm(_seed(args), n_particles=args.particles, max_iterations=args.iters,
                          early_stop=args.early_stop)
    spec = DesignSpec(device, args.freq, targets, swarm)
    t0 = time.perf_counter()
    result = design_amplifier(spec, workers=args.workers)
    elapsed = time.perf_counter() - t0
    effective = replace(swarm, convergence_epsilon=targets.gain_tolerance_db)
    report = build_run_report(spec, result, device_path=args.device,
                              timing={"elapsed_s": elapsed}, swarm=effective)
    _emit(dump_report(report), args.out)
    if args.trace:
        write_atomic(args.trace, result.trace.to_csv())
    if not result.feasible:
        print("best design is infeasible", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _vector(args) -> DesignVector:
    return DesignVector(args.d1, args.l1, args.d2, args.l2)


def cmd_eval(args) -> int:
    spec = DesignSpec(_load(args), args.freq)
    v = _vector(args)
    sys.stdout.write(format_metrics(evaluate_fixed(spec, v), v))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.points < 2:
        raise ValueError("--points must be >= 2")
    if not args.f_to > args.f_from:
        raise ValueError("--to must exceed --from")
    spec = DesignSpec(_load(args), args.freq)
    freqs = np.linspace(args.f_from, args.f_to, args.points)
    _emit(sweep_csv(sweep(spec, _vector(args), freqs)), args.out)
    return EXIT_OK


def cmd_circles(args) -> int:
    if args.samples < 1:
        raise ValueError("--samples must be >= 1")
    device = _load(args)
    _, noise = device_at(device, args.freq, require_noise=True)
    circle = noise_circle(noise, args.nf_db, device.reference_impedance)
    overlays = list(args.gamma)
    if args.reference_trials:
        overlays += [source_reflection(t.vector.d1, t.vector.l1) for t in REFERENCE_TRIALS]
    _emit(circle_csv(circle, args.samples, overlays), args.out)
    return EXIT_OK


def cmd_reference(args) -> int:
    device = _load(args)
    sys.stdout.write(compare_reference(device, args.freq).format() + "\n")
    return EXIT_OK


COMMANDS = {
    "design": cmd_design,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "circles": cmd_circles,
    "reference": cmd_reference,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (LnaSwarmError, ValueError, OSError) as exc:
        print(f"lnaswarm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
