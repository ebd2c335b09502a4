"""Serialization of classification results: JSON documents, CSV and plain tables."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .catalog import Catalog
from .classify import Classification, SurfaceRecord
from .constructors import element_words, format_word
from .signatures import format_periods
from .vectors import GeneratingVector

SCHEMA_VERSION = 1

TABLE_COLUMNS = ("g_F", "g_C", "G", "G°", "type", "m", "n", "D", "N")


def _word_formatter(G):
    gens = G.generator_hint if G.generator_hint is not None else G.small_generating_set
    words = element_words(G, gens)
    names = [f"g{k + 1}" for k in range(len(gens))]
    return lambda x: format_word(words[x], names)


def witness_to_dict(V: GeneratingVector, role: str, fmt) -> dict[str, Any]:
    return {
        "role": role,
        "signature": str(V.signature),
        "branch": [fmt(x) for x in V.branch],
        "handles": [fmt(x) for x in V.handles],
    }


def record_to_dict(rec: SurfaceRecord, catalog: Catalog) -> dict[str, Any]:
    """Every record field; witnesses become words in the catalog entry's generators."""
    G = catalog.group(*rec.group_id)
    fmt = _word_formatter(G)
    roles = ("V", "W") if rec.kind == "unmixed" else ("V",)
    return {
        "kind": rec.kind,
        "g_F": rec.g_F,
        "g_C": rec.g_C,
        "group_id": list(rec.group_id),
        "subgroup_id": list(rec.subgroup_id) if rec.subgroup_id else None,
        "m": list(rec.m.periods) if rec.m is not None else None,
        "n": list(rec.n.periods),
        "chi": rec.chi,
        "K2": rec.K2,
        "g_alb": rec.g_alb,
        "dimension": rec.dimension,
        "components": rec.components,
        "witness": [witness_to_dict(V, role, fmt) for V, role in zip(rec.witness, roles)],
        "notes": list(rec.notes),
    }


def build_document(
    command: Sequence[str],
    result: Classification,
    catalog: Catalog,
    timing: Optional[float] = None,
) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": list(command),
        "catalog_hash": catalog.content_hash,
        "coverage": {
            "status": result.status,
            "complete_orders": list(result.complete_orders),
            "incomplete_orders": list(result.incomplete_orders),
        },
        "records": [record_to_dict(r, catalog) for r in result.records],
        "timing_seconds": None if timing is None else round(timing, 3),
    }


def to_json(doc: dict[str, Any]) -> str:
    """Canonical form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _gid(x) -> str:
    return f"G({x[0]},{x[1]})" if x else ""


def _row(rec: dict[str, Any]) -> list:
    comp = rec["components"]
    return [
        rec["g_F"],
        rec["g_C"],
        _gid(rec["group_id"]),
        _gid(rec["subgroup_id"]),
        rec["kind"],
        format_periods(rec["m"], compact=False) if rec["m"] else "",
        format_periods(rec["n"], compact=False),
        rec["dimension"],
        "" if comp is None else comp,
    ]


def to_csv(doc: dict[str, Any]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for rec in doc["records"]:
        w.writerow(_row(rec))
    return buf.getvalue()


def to_table(doc: dict[str, Any]) -> str:
    rows = [list(TABLE_COLUMNS)]
    for rec in doc["records"]:
        row = _row(rec)
        row[5] = format_periods(rec["m"]) if rec["m"] else "-"
        row[6] = format_periods(rec["n"])
        row[3] = row[3] or "-"
        rows.append([str(c) for c in row])
    widths = [max(len(r[k]) for r in rows) for k in range(len(TABLE_COLUMNS))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    cov = doc["coverage"]
    lines.append("")
    lines.append(f"{len(doc['records'])} records, coverage {cov['status']}")
    if cov["incomplete_orders"]:
        lines.append("incomplete orders: " + ", ".join(map(str, cov["incomplete_orders"])))
    return "\n".join(lines) + "\n"


def render(doc: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(doc)
    if fmt == "csv":
        return to_csv(doc)
    if fmt == "table":
        return to_table(doc)
    raise ValueError(f"unknown format {fmt!r}")


# -- result cache -----------------------------------------------------------------


def cache_key(command: Sequence[str], catalog_hash: str) -> str:
    payload = json.dumps({"schema": SCHEMA_VERSION, "catalog": catalog_hash, "command": list(command)})
    return hashlib.sha256(payload.encode()).hexdigest()


def cache_load(cache_dir: Path, key: str) -> Optional[dict[str, Any]]:
    path = Path(cache_dir) / f"{key}.json"
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        return None


def cache_store(cache_dir: Path, key: str, doc: dict[str, Any]) -> None:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    tmp = cache_dir / f"{key}.json.tmp"
    tmp.write_text(to_json(doc), encoding="utf-8")
    tmp.replace(cache_dir / f"{key}.json")
