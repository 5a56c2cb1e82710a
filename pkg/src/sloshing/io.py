"""Deterministic CSV/JSON writers shared by the library and the CLI."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

VERSION = "0.1.0"


def fmt(v) -> str:
    """Shortest round-trip representation of a float."""
    return repr(float(v))


def config_hash(config: dict) -> str:
    """SHA-256 of the canonical JSON form of a config mapping."""
    text = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def comment_line(chash: str | None = None) -> str:
    return f"# sloshing {VERSION} config_sha256={chash or 'none'}"


def write_table(path, header, rows, chash: str | None = None) -> Path:
    """Write a CSV with a provenance comment line and a header row."""
    path = Path(path)
    lines = [comment_line(chash), ",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, (int, np.integer)) else fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_table(path):
    """Read a table written by :func:`write_table`; returns (header, float array)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]], dtype=float)
    return header, data.reshape(len(lines) - 1, len(header))


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj) + "\n")
    return path
