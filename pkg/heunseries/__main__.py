"""heunseries entry point: run as `python -m heunseries` or `heunseries`."""

from __future__ import annotations

import argparse
import logging
import sys

from . import commands
from .config import load_config
from .errors import HeunError, UsageError
from .output import emit_json
from .transforms import get_all_builtins


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _add_params(p: argparse.ArgumentParser) -> None:
    for name in ("a", "q", "alpha", "beta", "gamma", "delta"):
        p.add_argument(f"--{name}", type=float, default=None, help=f"Heun parameter {name}")
    p.add_argument("--epsilon", default=None, help=argparse.SUPPRESS)
    p.add_argument("--branch", choices=["first", "second"], default="first",
                   help="local solution at x=0 (default: first)")


def _add_control(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="relative truncation tolerance")
    p.add_argument("--n-max", type=int, default=None, help="term / sub-series cap")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="heunseries",
        description="Local Frobenius and 3TRF series solutions of the general Heun equation",
    )
    parser.add_argument(
        "--config", type=str, default=None,
        help="Path to config JSON file (default: ~/.heunseries/config.json)",
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true",
        help="Enable debug logging",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one local solution at x")
    _add_params(p)
    _add_control(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--method", choices=["frobenius", "trf", "rk"], default="trf")
    p.set_defaults(handler=commands.cmd_eval)

    p = sub.add_parser("coeffs", help="print series coefficients c_0..c_M as CSV")
    _add_params(p)
    _add_control(p)
    p.add_argument("--order", type=int, required=True, help="highest coefficient index M")
    p.add_argument("--method", choices=["frobenius", "trf"], default="frobenius")
    p.add_argument("--out", default=None, help="write CSV to a file instead of stdout")
    p.set_defaults(handler=commands.cmd_coeffs)

    p = sub.add_parser("compare", help="cross-check methods at several points")
    _add_params(p)
    _add_control(p)
    p.add_argument("--xs", default="", help="comma-separated points")
    p.add_argument("--methods", default="frobenius,trf,rk", help="comma-separated methods")
    p.set_defaults(handler=commands.cmd_compare)

    p = sub.add_parser("transform", help="evaluate a transformed local solution")
    _add_params(p)
    _add_control(p)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--table", default=None, help="JSON table file or http(s) URL")
    source.add_argument("--builtin", choices=sorted(get_all_builtins()), default=None)
    p.add_argument("--record", default=None, help="record name within --table")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--method", choices=["frobenius", "trf"], default="trf",
                   help="evaluator for the inner Heun function")
    p.set_defaults(handler=commands.cmd_transform)

    p = sub.add_parser("sweep", help="tabulate the solution over a parameter grid")
    _add_params(p)
    _add_control(p)
    p.add_argument("--sweep", required=True, help="sym:lo:hi:n, sym in a,q,alpha,beta,gamma,delta,x")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--method", choices=["frobenius", "trf", "rk"], default="trf")
    p.add_argument("--out", default=None, help="write CSV to a file instead of stdout")
    p.set_defaults(handler=commands.cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)

        level = logging.DEBUG if args.verbose else logging.WARNING
        logging.basicConfig(
            level=level,
            format="%(asctime)s [%(name)s] %(levelname)s: %(message)s",
            datefmt="%H:%M:%S",
        )

        if args.epsilon is not None:
            raise UsageError(
                "epsilon is not a free parameter: epsilon = alpha + beta - gamma - delta + 1"
            )
        config = load_config(args.config).with_overrides(
            tol=args.tol, n_max=args.n_max, method=getattr(args, "method", None),
        )
        return args.handler(args, config)
    except HeunError as e:
        emit_json(
            {"error": {"type": type(e).__name__, "message": str(e), "exit_code": e.exit_code}},
            sys.stdout,
        )
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
