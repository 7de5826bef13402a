"""Writers for the files the CLI emits."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__


def fmt(x: float) -> str:
    # 17 significant digits round-trip any double exactly
    return format(float(x), ".17g")


def write_csv(path: Path, columns: dict[str, np.ndarray]) -> None:
    names = list(columns)
    cols = [np.asarray(columns[n], dtype=float) for n in names]
    lines = [",".join(names)]
    lines.extend(",".join(fmt(v) for v in row) for row in zip(*cols))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def field_map_columns(fmap) -> dict[str, np.ndarray]:
    """Long-format table ``(y, t, value)`` of a FieldMap, rows in y-major order."""
    y = fmap.y_axis.coordinates()
    t = fmap.x_axis.physical()
    return {
        fmap.y_name: np.repeat(y, t.size),
        "t": np.tile(t, y.size),
        fmap.observable: fmap.values.ravel(),
    }


def pgm_bytes(gray: np.ndarray) -> bytes:
    """Binary P5 image; row 0 of ``gray`` (lowest y) ends up at the bottom."""
    gray = np.asarray(gray, dtype=np.uint8)
    h, w = gray.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(gray[::-1]).tobytes()


def write_pgm(path: Path, gray: np.ndarray) -> None:
    Path(path).write_bytes(pgm_bytes(gray))


def read_pgm(path: Path) -> np.ndarray:
    """Inverse of :func:`write_pgm` (rows returned with lowest y first)."""
    data = Path(path).read_bytes()
    magic, dims, maxval, rest = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ValueError("not an 8-bit binary PGM")
    w, h = map(int, dims.split())
    return np.frombuffer(rest, dtype=np.uint8).reshape(h, w)[::-1]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def dumps(meta: dict) -> str:
    meta = {**_jsonable(meta), "software_version": __version__}
    # json uses repr() for floats: shortest round-trip form
    return json.dumps(meta, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_json(path: Path, meta: dict) -> None:
    Path(path).write_text(dumps(meta), encoding="utf-8", newline="\n")
