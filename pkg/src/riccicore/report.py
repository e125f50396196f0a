"""Deterministic CSV/JSON writers.

Every file carries the tool name, version and the full resolved
configuration.  CSV files start with two ``#`` comment lines holding these;
undefined values are written as ``NA``.  Floats use Python's shortest
round-trip representation so identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass
from os import PathLike
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__

TOOL = "riccicore"


def _clean(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        return _clean(asdict(value))
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return _clean(value.item())
    if isinstance(value, PathLike):
        return str(value)
    return value


def header(config: dict) -> dict:
    return {"tool": TOOL, "version": __version__, "config": _clean(config)}


def dumps_json(payload: dict, config: dict) -> str:
    doc = header(config)
    doc.update(_clean(payload))
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_json(path: str | PathLike, payload: dict, config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(payload, config))
    return path


def _cell(v: Any) -> str:
    if v is None:
        return "NA"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "NA" if math.isnan(v) else repr(v)
    if hasattr(v, "item"):
        return _cell(v.item())
    return str(v)


def dumps_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]], config: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# {TOOL} {__version__}\n")
    buf.write("# config: " + json.dumps(_clean(config), sort_keys=True, allow_nan=False) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path: str | PathLike, columns: Sequence[str], rows: Iterable[Sequence[Any]],
              config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_csv(columns, rows, config))
    return path


def write_rows(path: str | PathLike, records: Sequence[Any], config: dict) -> Path:
    """Write a list of flat dataclass records, one column per field."""
    dicts = [asdict(r) for r in records]
    columns = list(dicts[0]) if dicts else []
    return write_csv(path, columns, ([d[c] for c in columns] for d in dicts), config)


def read_csv(path: str | PathLike) -> list[dict[str, str]]:
    """Read a CSV written by :func:`write_csv`, skipping the comment header."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))
