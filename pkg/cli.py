#!/usr/bin/env python3
"""
Command-line front end.

Subcommands: sweep-q, sweep-nu, surface, frozen-scan, sudden-death, reproduce, physical.

Exit codes: 0 success, 1 usage or validation error, 2 numeric failure
(non-convergence, degenerate channel, or a frozen scan that disagrees with the
prediction), 3 I/O error.
"""

import argparse
import json
import math
import re
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from config import Config
from errors import ConvergenceError, DatasetError, DegenerateChannelError, DomainError
from model import PhysicalParams
from simulator import UnruhCoherenceSimulator, status
from sweeps import render, write_dataset

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*(?:pi|π)\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_angle(text: str) -> float:
    """Radians from "0.5", "pi", "pi/4", "3pi/8" or "3*pi/8"."""
    match = _ANGLE.match(str(text))
    if match:
        factor, divisor = match.groups()
        if factor in (None, "", "+"):
            factor = "1"
        elif factor == "-":
            factor = "-1"
        denominator = float(divisor) if divisor else 1.0
        if denominator == 0.0:
            raise argparse.ArgumentTypeError(f"zero divisor in angle: {text!r}")
        return math.pi * float(factor) / denominator
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")


def _add_output(parser):
    parser.add_argument("--out", help="output file (stdout when omitted)")
    parser.add_argument("--format", choices=["csv", "json"], default=None,
                        help="dataset format (default from UNRUH_FORMAT)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unruh-coherence",
                     description="Coherence and entanglement of a detector pair with one accelerated detector")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("sweep-q", help="measures as a function of the acceleration parameter q")
    p.add_argument("--theta", type=parse_angle, default=math.pi / 4)
    p.add_argument("--nu2", type=float, default=0.01)
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=None)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--allow-q1", action="store_true")
    _add_output(p)

    p = sub.add_parser("sweep-nu", help="measures as a function of the coupling nu")
    p.add_argument("--theta", type=parse_angle, default=math.pi / 4)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--min", type=float, default=0.0)
    p.add_argument("--max", type=float, default=0.05)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--allow-q1", action="store_true")
    _add_output(p)

    p = sub.add_parser("surface", help="measures over a theta x nu grid")
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--theta-min", type=parse_angle, default=0.0)
    p.add_argument("--theta-max", type=parse_angle, default=math.pi / 2)
    p.add_argument("--theta-steps", type=int, default=50)
    p.add_argument("--min", type=float, default=0.0, help="smallest nu")
    p.add_argument("--max", type=float, default=0.05, help="largest nu")
    p.add_argument("--steps", type=int, default=50, help="nu steps")
    p.add_argument("--allow-q1", action="store_true")
    _add_output(p)

    p = sub.add_parser("frozen-scan", help="find (theta, nu2) points with q-invariant coherence")
    p.add_argument("--theta-min", type=parse_angle, default=0.0)
    p.add_argument("--theta-max", type=parse_angle, default=math.pi / 2)
    p.add_argument("--theta-steps", type=int, default=25)
    p.add_argument("--nu2-min", type=float, default=0.0)
    p.add_argument("--nu2-max", type=float, default=0.1)
    p.add_argument("--nu2-steps", type=int, default=25)
    p.add_argument("--q-samples", type=int, default=101)
    p.add_argument("--out", help="JSON report file (stdout when omitted)")

    p = sub.add_parser("sudden-death", help="entanglement sudden death threshold")
    p.add_argument("--theta", type=parse_angle, default=math.pi / 4)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--nu2", type=float, help="find q* at this coupling")
    group.add_argument("--q", type=float, help="find nu* at this acceleration")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("reproduce", help="write the figure datasets")
    p.add_argument("figure", choices=["fig1", "fig2", "all"])
    p.add_argument("--out", help="output directory (default UNRUH_OUTPUT_DIR)")
    p.add_argument("--format", choices=["csv", "json"], default=None)

    p = sub.add_parser("physical", help="measures for detector physics (epsilon, Omega, Delta, kappa, a)")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--Omega", type=float, required=True)
    p.add_argument("--Delta", type=float, required=True)
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--a", type=float, required=True, help="proper acceleration")
    p.add_argument("--theta", type=parse_angle, default=math.pi / 4)
    p.add_argument("--json", action="store_true")

    return parser


def _emit(records, with_nu, args, simulator) -> None:
    fmt = args.format or Config.FORMAT
    if args.out:
        path = write_dataset(records, args.out, fmt, with_nu, simulator.digits)
        status(f"✅ Wrote {len(records)} records to {path}")
    else:
        sys.stdout.write(render(records, fmt, with_nu, simulator.digits))


def _linspace(start: float, stop: float, steps: int) -> List[float]:
    if not start < stop or steps < 2:
        raise DomainError(f"range needs min < max and steps >= 2, got [{start}, {stop}] x {steps}")
    return [float(x) for x in np.linspace(start, stop, steps)]


def _run(args) -> int:
    simulator = UnruhCoherenceSimulator()

    if args.command == "sweep-q":
        records, _ = simulator.sweep_q(args.theta, args.nu2, args.min, args.max, args.steps,
                                       allow_q1=args.allow_q1)
        _emit(records, False, args, simulator)

    elif args.command == "sweep-nu":
        records, _ = simulator.sweep_nu(args.theta, args.q, args.min, args.max, args.steps,
                                        allow_q1=args.allow_q1)
        _emit(records, True, args, simulator)

    elif args.command == "surface":
        records, _ = simulator.surface(args.q, (args.theta_min, args.theta_max, args.theta_steps),
                                       args.min, args.max, args.steps, allow_q1=args.allow_q1)
        _emit(records, True, args, simulator)

    elif args.command == "frozen-scan":
        result = simulator.frozen_scan(
            _linspace(args.theta_min, args.theta_max, args.theta_steps),
            _linspace(args.nu2_min, args.nu2_max, args.nu2_steps),
            _linspace(0.0, 0.99, args.q_samples),
        )
        text = json.dumps(result.to_dict(), indent=2) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            status(f"✅ Wrote frozen-scan report to {args.out}")
        else:
            sys.stdout.write(text)
        return EXIT_OK if result.matches_prediction else EXIT_NUMERIC

    elif args.command == "sudden-death":
        result = simulator.sudden_death(args.theta, nu2=args.nu2, q=args.q)
        if args.json:
            sys.stdout.write(json.dumps(result.to_dict(), indent=2) + "\n")
        elif not result.has_death:
            print("no finite sudden death")
        else:
            name = "q*" if result.kind == "q" else "nu*"
            lo, hi = result.bracket
            print(f"{name} = {result.threshold:.10g}  bracket [{lo:.12g}, {hi:.12g}]  "
                  f"iterations {result.iterations}")

    elif args.command == "reproduce":
        if args.out:
            simulator.output_dir = Path(args.out)
        paths = simulator.reproduce(args.figure, args.format or Config.FORMAT)
        for path in paths:
            print(path)

    elif args.command == "physical":
        params = PhysicalParams(epsilon=args.epsilon, Omega=args.Omega, Delta=args.Delta,
                                kappa=args.kappa, a=args.a)
        info = simulator.physical(params, args.theta)
        if args.json:
            sys.stdout.write(json.dumps(info, indent=2) + "\n")
        else:
            for key, value in info.items():
                print(f"{key}: {value}")

    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        return _run(args)
    except UsageError as e:
        status(f"❌ Usage error: {e}")
        return EXIT_USAGE
    except (DomainError, DatasetError, ValueError) as e:
        status(f"❌ Invalid input: {e}")
        return EXIT_USAGE
    except (ConvergenceError, DegenerateChannelError) as e:
        status(f"❌ Numeric failure: {e}")
        return EXIT_NUMERIC
    except OSError as e:
        status(f"❌ I/O error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
