"""Binary field dumps and CSV time series.

Field dump layout (little-endian)::

    b"SN2B"  magic
    uint8    version (1: N x N field, x1-major; 2: length-N profile)
    uint32   N
    float64  L
    float64  t
    complex  payload as interleaved (re, im) float64 pairs
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path

import numpy as np

MAGIC = b"SN2B"
_HEADER = struct.Struct("<4sBIdd")
VERSION_FIELD = 1
VERSION_PROFILE = 2


def write_field(path, data: np.ndarray, L: float, t: float = 0.0) -> None:
    data = np.asarray(data)
    if data.ndim == 2 and data.shape[0] == data.shape[1]:
        version = VERSION_FIELD
    elif data.ndim == 1:
        version = VERSION_PROFILE
    else:
        raise ValueError(f"expected an N x N field or a length-N profile, got shape {data.shape}")
    n = data.shape[0]
    payload = np.ascontiguousarray(data, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, version, n, float(L), float(t)))
        fh.write(payload)


def read_field(path) -> tuple[np.ndarray, float, float]:
    """Return (array, L, t)."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, n, L, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version not in (VERSION_FIELD, VERSION_PROFILE):
        raise ValueError(f"{path}: unsupported version {version}")
    shape = (n, n) if version == VERSION_FIELD else (n,)
    count = int(np.prod(shape))
    body = raw[_HEADER.size:]
    if len(body) != 16 * count:
        raise ValueError(f"{path}: expected {16 * count} payload bytes, found {len(body)}")
    arr = np.frombuffer(body, dtype="<c16").reshape(shape).astype(complex)
    return arr, L, t


def write_csv(path, rows: list[dict], header: list[str] | tuple[str, ...]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(header), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _fmt(row[k]) for k in header})


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return {}
    out = {}
    for key in rows[0]:
        vals = [r[key] for r in rows]
        try:
            out[key] = np.array([float(v) if v != "" else np.nan for v in vals])
        except ValueError:
            out[key] = np.array(vals)
    return out


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v
