"""Delimited and JSON table output with reproducible metadata headers.

Floats are rendered with repr-faithful precision (17 significant digits)
so written tables round-trip exactly; metadata carries the tool version,
the invoking command, and a canonical JSON dump of the effective
configuration, and never a timestamp, so identical runs produce identical
bytes.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass


def fmt_float(v: float) -> str:
    return format(float(v), ".17g")


def config_json(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def _cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, int):
        return str(v)
    s = str(v)
    if "," in s or "\n" in s or "#" in s:
        raise ValueError(f"cell value {s!r} would corrupt the table")
    return s


def render_csv(columns, rows, meta=(), notes=()) -> str:
    """Comma-delimited table with '#'-prefixed metadata lines on top."""
    out = io.StringIO()
    for key, value in meta:
        out.write(f"# {key}: {value}\n")
    for note in notes:
        out.write(f"# note: {note}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_cell(v) for v in row) + "\n")
    return out.getvalue()


@dataclass(frozen=True)
class CsvDoc:
    meta: tuple[tuple[str, str], ...]
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def meta_get(self, key: str) -> str | None:
        for k, v in self.meta:
            if k == key:
                return v
        return None


def _parse_cell(s: str):
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def parse_csv(text: str) -> CsvDoc:
    meta: list[tuple[str, str]] = []
    columns: tuple[str, ...] | None = None
    rows: list[tuple] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, value = body.partition(":")
            meta.append((key.strip(), value.strip()))
            continue
        if columns is None:
            columns = tuple(line.split(","))
            continue
        rows.append(tuple(_parse_cell(c) for c in line.split(",")))
    if columns is None:
        raise ValueError("no header row found")
    return CsvDoc(tuple(meta), columns, tuple(rows))


def render_json(columns, rows, meta=(), notes=()) -> str:
    """The same table as a canonical JSON document (sorted keys, indented,
    trailing newline)."""
    payload = {
        "meta": {**dict(meta), "notes": list(notes)},
        "columns": list(columns),
        "rows": [list(row) for row in rows],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_json(text: str) -> dict:
    return json.loads(text)


def render_record(record: dict) -> str:
    """A non-tabular result as canonical JSON."""
    return json.dumps(record, sort_keys=True, indent=2) + "\n"
