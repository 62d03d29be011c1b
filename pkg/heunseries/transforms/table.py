"""Load transformation records from a JSON table (file path or http(s) URL)."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import httpx

from ..core import PARAM_NAMES, HeunParams
from ..errors import DomainError, ExpressionError, TableError
from .expr import ParamExpr, parse_param_expr
from .records import MobiusMap, PrefactorBase, PrefactorTerm, TransformationRecord

log = logging.getLogger("heunseries.transforms.table")

# generic parameter set used to probe Möbius determinants
DEFAULT_PROBE = HeunParams(a=3.0, q=0.5, alpha=1.0, beta=1.5, gamma=0.8, delta=0.4)

_RECORD_KEYS = {"name", "prefactor", "arg_map", "params"}


def _read_source(source: str, client: httpx.Client | None) -> str:
    if source.startswith(("http://", "https://")):
        log.info("fetching transformation table from %s", source)
        try:
            if client is None:
                with httpx.Client(timeout=10.0, follow_redirects=True) as c:
                    resp = c.get(source)
            else:
                resp = client.get(source)
            resp.raise_for_status()
        except httpx.TimeoutException:
            raise TableError(f"timeout fetching table {source}") from None
        except httpx.HTTPError as e:
            raise TableError(f"cannot fetch table {source}: {e}") from e
        return resp.text
    try:
        return Path(source).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise TableError(f"table file not found: {source}") from None
    except (OSError, UnicodeDecodeError) as e:
        raise TableError(f"cannot read table {source}: {e}") from e


def _expr(raw: Any, index: int, field: str) -> ParamExpr:
    if not isinstance(raw, str):
        raise TableError("expression must be a string", index, field)
    try:
        return parse_param_expr(raw)
    except ExpressionError as e:
        raise TableError(str(e), index, field) from e


def _object(raw: Any, index: int, field: str) -> dict:
    if not isinstance(raw, dict):
        raise TableError("expected a JSON object", index, field)
    return raw


def _record(raw: Any, index: int, probe: HeunParams) -> TransformationRecord:
    raw = _object(raw, index, "record")
    missing = _RECORD_KEYS - set(raw)
    if missing:
        raise TableError("missing key", index, sorted(missing)[0])
    extra = set(raw) - _RECORD_KEYS
    if extra:
        raise TableError("unexpected key", index, sorted(extra)[0])

    name = raw["name"]
    if not isinstance(name, str) or not name:
        raise TableError("name must be a non-empty string", index, "name")

    if not isinstance(raw["prefactor"], list):
        raise TableError("prefactor must be a list", index, "prefactor")
    terms = []
    for k, item in enumerate(raw["prefactor"]):
        where = f"prefactor[{k}]"
        item = _object(item, index, where)
        try:
            base = PrefactorBase(item.get("base"))
        except ValueError:
            raise TableError(
                f"base must be one of {', '.join(b.value for b in PrefactorBase)}", index, f"{where}.base",
            ) from None
        terms.append(PrefactorTerm(base, _expr(item.get("exponent"), index, f"{where}.exponent")))

    arg = _object(raw["arg_map"], index, "arg_map")
    coeffs = [_expr(arg.get(k), index, f"arg_map.{k}") for k in ("p", "r", "s", "t")]

    params = _object(raw["params"], index, "params")
    if "epsilon" in params:
        raise TableError("epsilon is derived from the constraint and cannot be mapped", index, "params.epsilon")
    for key in params:
        if key not in PARAM_NAMES:
            raise TableError("unknown parameter", index, f"params.{key}")
    new_params = tuple(_expr(params.get(k), index, f"params.{k}") for k in PARAM_NAMES)

    warnings = []
    p, r, s, t = coeffs
    try:
        b = probe.binding()
        det = p.evaluate(b) * t.evaluate(b) - r.evaluate(b) * s.evaluate(b)
    except DomainError as e:
        det = None
        warnings.append(f"argument map not evaluable at probe parameters: {e}")
    if det == 0:
        warnings.append("argument map determinant p*t - r*s vanishes at probe parameters")
    for w in warnings:
        log.warning("record %d (%s): %s", index, name, w)

    return TransformationRecord(
        name=name,
        prefactor=tuple(terms),
        arg_map=MobiusMap(p, r, s, t),
        new_params=new_params,
        warnings=tuple(warnings),
    )


def load_transformation_table(
    source: str,
    probe: HeunParams | None = None,
    client: httpx.Client | None = None,
) -> list[TransformationRecord]:
    """Parse and validate every record; duplicate names are rejected."""
    text = _read_source(source, client)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise TableError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, list):
        raise TableError("table must be a JSON array of records")

    records: list[TransformationRecord] = []
    seen: set[str] = set()
    for index, raw in enumerate(data):
        rec = _record(raw, index, probe or DEFAULT_PROBE)
        if rec.name in seen:
            raise TableError(f"duplicate record name '{rec.name}'", index, "name")
        seen.add(rec.name)
        records.append(rec)
    log.debug("loaded %d transformation records from %s", len(records), source)
    return records
