"""File artifacts: CSV/JSON readers and writers with atomic output.

Every writer goes through a temp file + rename so a crashed run never
leaves a half-written artifact, and identical inputs produce
byte-identical files (no timestamps, stable float repr).
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .channel import Dataset, DatasetMeta


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2) + "\n")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_dataset(dataset: Dataset, csv_path, meta_path=None) -> None:
    """Dataset CSV with header x,y plus the JSON metadata sidecar."""
    write_csv(csv_path, ["x", "y"],
              ((int(x), int(y)) for x, y in zip(dataset.xs, dataset.ys)))
    if meta_path is None:
        meta_path = str(csv_path) + ".meta.json"
    if dataset.meta is not None:
        obj = dataset.meta.to_json_obj()
        obj["modulus"] = dataset.modulus
        write_json(meta_path, obj)


def read_dataset(csv_path, meta_path=None) -> Dataset:
    if meta_path is None:
        meta_path = str(csv_path) + ".meta.json"
    meta_obj = read_json(meta_path)
    meta = DatasetMeta.from_json_obj(meta_obj)
    modulus = int(meta_obj["modulus"])
    xs, ys = [], []
    with open(csv_path) as fh:
        header = fh.readline()
        if header.strip() != "x,y":
            raise ValueError("dataset CSV must start with header 'x,y'")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            xstr, ystr = line.split(",")
            xs.append(int(xstr))
            ys.append(int(ystr))
    big = any(abs(x) >= 2**62 for x in xs)
    xs_arr = xs if big else np.asarray(xs, dtype=np.int64)
    return Dataset(xs=xs_arr, ys=np.asarray(ys, dtype=np.int64),
                   modulus=modulus, meta=meta)


def write_error_table(oracle, path) -> None:
    write_csv(path, ["x", "e"],
              ((r, int(e)) for r, e in enumerate(oracle.table)))


def write_histogram(values, path) -> None:
    """Integer histogram with bin width 1, rows sorted by bin."""
    v = np.asarray(values, dtype=np.int64)
    lo, hi = int(v.min()), int(v.max())
    counts = np.bincount(v - lo, minlength=hi - lo + 1)
    write_csv(path, ["error", "count"],
              ((lo + i, int(c)) for i, c in enumerate(counts)))
