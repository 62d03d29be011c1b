"""JSON and CSV emitters for the command line."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from typing import Any, Iterable, Sequence, TextIO

from .core import Branch, HeunParams, SeriesValue


@dataclass
class OutputRecord:
    """One evaluated point. Every key is always present; missing quantities are null."""
    params: dict[str, float]
    branch: str
    method: str
    x: float
    value: float | None
    d1: float | None = None
    d2: float | None = None
    error_estimate: float | None = None
    terms_used: int | None = None
    transformation: str | None = None

    @classmethod
    def from_series(
        cls,
        params: HeunParams,
        branch: Branch,
        method: str,
        x: float,
        result: SeriesValue,
        transformation: str | None = None,
    ) -> OutputRecord:
        return cls(
            params=params.as_dict(),
            branch=branch.kind.value,
            method=method,
            x=x,
            value=result.value,
            d1=result.d1,
            d2=result.d2,
            error_estimate=result.error_estimate,
            terms_used=result.terms_used,
            transformation=transformation,
        )


def jsonable(obj: Any) -> Any:
    """Replace NaN/inf with None and normalize numpy scalars, recursively."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if hasattr(obj, "item"):
        obj = obj.item()
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    return obj


def emit_json(obj: Any, stream: TextIO) -> None:
    if hasattr(obj, "__dataclass_fields__"):
        obj = asdict(obj)
    # float repr is the shortest string that reparses to the same double
    stream.write(json.dumps(jsonable(obj), allow_nan=False) + "\n")


def format_number(v: float | None, digits: int = 15) -> str:
    if v is None or math.isnan(v):
        return "nan"
    if v == 0:
        return "0"
    return f"{v:.{digits}g}"


def write_csv(header: Sequence[str], rows: Iterable[Sequence[str]], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
