"""On-disk formats: feature CSV + JSON sidecar, centrality CSV, PPM colour maps.

Floats are written with ``repr`` so every reload is bit-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .matrix import NdfMatrix


def sidecar_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.name + ".json")


def write_features(path, table: np.ndarray, labels, meta: dict) -> None:
    """Write one row per node: ``node,label,f0,f1,...`` plus a ``.json`` sidecar.

    ``table`` is ``(n, f)`` or ``(n, rows, m)``; the sidecar records the shape
    so the reader can restore it.
    """
    table = np.asarray(table)
    n = table.shape[0]
    flat = table.reshape(n, -1)
    integral = np.issubdtype(flat.dtype, np.integer)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "label", *(f"f{j}" for j in range(flat.shape[1]))])
        for i in range(n):
            vals = flat[i].tolist() if integral else [repr(float(x)) for x in flat[i]]
            w.writerow([i, labels[i], *vals])
    side = dict(meta)
    side.update({"shape": list(table.shape), "dtype": "int64" if integral else "float64"})
    sidecar_path(path).write_text(json.dumps(side, indent=2, sort_keys=True))


def read_features(path) -> tuple[np.ndarray, list[str], dict]:
    """Inverse of :func:`write_features`: ``(table, labels, meta)``."""
    meta = json.loads(sidecar_path(path).read_text())
    dtype = np.int64 if meta.get("dtype") == "int64" else np.float64
    labels: list[str] = []
    rows: list[list[str]] = []
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        next(r)
        for row in r:
            labels.append(row[1])
            rows.append(row[2:])
    if dtype is np.int64:
        flat = np.array([[int(x) for x in row] for row in rows], dtype=np.int64)
    else:
        flat = np.array([[float(x) for x in row] for row in rows], dtype=np.float64)
    shape = tuple(meta["shape"])
    if not rows:
        return np.zeros(shape, dtype=dtype), labels, meta
    return flat.reshape(shape), labels, meta


def write_values(path_or_stream, values, labels, column: str = "value") -> None:
    """``node,label,<column>`` CSV; ``path_or_stream`` may be an open text stream."""
    own = not hasattr(path_or_stream, "write")
    fh = open(path_or_stream, "w", newline="") if own else path_or_stream
    try:
        w = csv.writer(fh)
        w.writerow(["node", "label", column])
        for i, v in enumerate(np.asarray(values, dtype=np.float64)):
            w.writerow([i, labels[i], repr(float(v))])
    finally:
        if own:
            fh.close()


def read_values(path) -> tuple[np.ndarray, list[str]]:
    """Read the last column of a :func:`write_values` CSV."""
    labels, vals = [], []
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        next(r)
        for row in r:
            labels.append(row[1])
            vals.append(float(row[-1]))
    return np.asarray(vals, dtype=np.float64), labels


def colormap_pixels(M, block: int = 16) -> np.ndarray:
    """``(rows*block, cols*block)`` uint8 grey levels of ``255 * value / max``."""
    values = np.asarray(M.values if isinstance(M, NdfMatrix) else M, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("colour maps need a 2-D matrix")
    if block < 1:
        raise ValueError("block size must be positive")
    top = values.max() if values.size else 0.0
    if top > 0:
        grey = np.rint(255.0 * np.clip(values, 0.0, None) / top).astype(np.uint8)
    else:
        grey = np.zeros(values.shape, dtype=np.uint8)
    return np.kron(grey, np.ones((block, block), dtype=np.uint8))


def emit_colormap(M, path, block: int = 16) -> None:
    """Binary greyscale PPM (P6), one ``block x block`` cell per matrix entry."""
    px = colormap_pixels(M, block)
    h, w = px.shape
    rgb = np.repeat(px[:, :, None], 3, axis=2)
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(rgb.tobytes())


def read_ppm(path) -> np.ndarray:
    """``(h, w, 3)`` uint8 pixels of a P6 file written by :func:`emit_colormap`."""
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM file")
    w, h = (int(x) for x in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)
