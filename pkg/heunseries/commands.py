"""Subcommand handlers. Each takes the parsed arguments and the loaded config and returns an exit code."""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict, replace
from typing import Iterator, TextIO

import numpy as np

from .config import Config
from .core import PARAM_NAMES, HeunParams, make_branch, validate_params
from .errors import HeunError, UsageError
from .output import OutputRecord, emit_json, format_number, write_csv
from .recurrence import frobenius_coeffs
from .transforms import get_builtin
from .transforms.records import transformed_eval
from .transforms.table import load_transformation_table
from .trf import trf_extract_coeffs
from .verify import compare_methods, evaluate

log = logging.getLogger("heunseries.commands")

SWEEPABLE = (*PARAM_NAMES, "x")


def params_from_args(args: argparse.Namespace, overrides: dict[str, float] | None = None) -> HeunParams:
    values = {name: getattr(args, name) for name in PARAM_NAMES}
    values.update(overrides or {})
    missing = [name for name, v in values.items() if v is None]
    if missing:
        raise UsageError(f"missing required parameter(s): {', '.join('--' + m for m in missing)}")
    return validate_params(**values)


@contextmanager
def _csv_target(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            yield f
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e}") from e


def _record(params, branch, method, x, result, transformation=None) -> OutputRecord:
    rec = OutputRecord.from_series(params, branch, method, x, result, transformation)
    if method == "rk":
        rec = replace(rec, d1=None, d2=None, error_estimate=None, terms_used=None)
    return rec


def cmd_eval(args: argparse.Namespace, cfg: Config) -> int:
    params = params_from_args(args)
    branch = make_branch(args.branch, params)
    result = evaluate(args.method, params, branch, args.x, cfg)
    emit_json(_record(params, branch, args.method, args.x, result), sys.stdout)
    return 0


def cmd_coeffs(args: argparse.Namespace, cfg: Config) -> int:
    if args.order < 0:
        raise UsageError(f"--order must be >= 0, got {args.order}")
    params = params_from_args(args)
    branch = make_branch(args.branch, params)
    if args.method == "frobenius":
        coeffs = frobenius_coeffs(params, branch, args.order).c
    else:
        coeffs = trf_extract_coeffs(params, branch, cfg.trf, args.order)
    digits = cfg.output.csv_digits
    with _csv_target(args.out) as out:
        write_csv(["k", "c_k"], ([str(k), format_number(c, digits)] for k, c in enumerate(coeffs)), out)
    return 0


def _split_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def cmd_compare(args: argparse.Namespace, cfg: Config) -> int:
    params = params_from_args(args)
    branch = make_branch(args.branch, params)
    try:
        xs = [float(v) for v in _split_list(args.xs)]
    except ValueError as e:
        raise UsageError(f"--xs must be a comma-separated list of numbers: {e}") from e
    report = compare_methods(params, branch, xs, _split_list(args.methods), cfg)
    emit_json({
        "params": params.as_dict(),
        "branch": branch.kind.value,
        "points": [asdict(p) for p in report.points],
        "max_rel_discrepancy": report.max_rel_discrepancy,
        "per_method_error_estimates": report.per_method_error_estimates,
    }, sys.stdout)
    return 0


def cmd_transform(args: argparse.Namespace, cfg: Config) -> int:
    params = params_from_args(args)
    if args.table:
        records = {r.name: r for r in load_transformation_table(args.table)}
        if not args.record:
            raise UsageError("--record is required with --table")
        if args.record not in records:
            raise UsageError(f"no record '{args.record}' in {args.table}")
        rec = records[args.record]
    else:
        rec = get_builtin(args.builtin)
    branch = make_branch(args.branch, params)
    result = transformed_eval(rec, params, branch, args.x, cfg.trf, args.method, cfg.series)
    emit_json(_record(params, branch, args.method, args.x, result, transformation=rec.name), sys.stdout)
    return 0


def parse_sweep(text: str) -> tuple[str, np.ndarray]:
    """'sym:lo:hi:n' -> (sym, inclusive uniform grid)."""
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"--sweep expects sym:lo:hi:n, got '{text}'")
    sym, lo, hi, n = parts
    if sym not in SWEEPABLE:
        raise UsageError(f"cannot sweep '{sym}'; choose from {', '.join(SWEEPABLE)}")
    try:
        lo_v, hi_v, n_v = float(lo), float(hi), int(n)
    except ValueError as e:
        raise UsageError(f"bad --sweep bounds in '{text}': {e}") from e
    if n_v < 2:
        raise UsageError(f"--sweep needs n >= 2, got {n_v}")
    if lo_v == hi_v:
        raise UsageError(f"degenerate sweep range {lo_v:g}:{hi_v:g}")
    return sym, np.linspace(lo_v, hi_v, n_v)


def cmd_sweep(args: argparse.Namespace, cfg: Config) -> int:
    sym, grid = parse_sweep(args.sweep)
    if sym != "x" and args.x is None:
        raise UsageError("missing required parameter: --x")
    digits = cfg.output.csv_digits
    rows = []
    for v in grid:
        v = float(v)
        try:
            if sym == "x":
                params, x = params_from_args(args), v
            else:
                params, x = params_from_args(args, {sym: v}), args.x
            branch = make_branch(args.branch, params)
            result = evaluate(args.method, params, branch, x, cfg)
        except UsageError:
            raise
        except HeunError as e:
            log.info("sweep %s=%g failed: %s", sym, v, e)
            rows.append([format_number(v, digits), "nan", "nan", str(e)])
            continue
        rows.append([
            format_number(v, digits),
            format_number(result.value, digits),
            format_number(result.error_estimate, digits),
            "",
        ])
    with _csv_target(args.out) as out:
        write_csv([sym, "value", "error_estimate", "error"], rows, out)
    return 0
