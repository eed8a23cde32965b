"""TFF1 lattice field files.

Layout: one line of JSON header terminated by ``\\n``, followed by raw
little-endian float64 data, component-major then row-major sites::

    {"magic": "TFF1", "dim": 3, "shape": [..], "spacing": [..],
     "boundary": "open", "components": 4, "dtype": "f64-le"}

An ``origin`` key is written only when the grid does not start at zero.
"""
import json

import numpy as np

from .lattice import GridSpec

MAGIC = "TFF1"
DTYPE = "f64-le"


class TFFError(ValueError):
    pass


def header_for(grid, components):
    h = {"magic": MAGIC}
    h.update(grid.header())
    h["components"] = int(components)
    h["dtype"] = DTYPE
    return h


def dumps(grid, data):
    """Serialize ``data`` of shape ``(components, *grid.shape)`` to bytes."""
    data = np.asarray(data, dtype=np.float64)
    if data.shape[1:] != grid.shape:
        raise TFFError(f"data shape {data.shape} does not match grid {grid.shape}")
    head = json.dumps(header_for(grid, data.shape[0]), separators=(",", ":"))
    return head.encode("ascii") + b"\n" + np.ascontiguousarray(data).astype("<f8").tobytes()


def loads(blob):
    """Parse TFF1 bytes into ``(grid, data)``."""
    nl = blob.find(b"\n")
    if nl < 0:
        raise TFFError("missing header line")
    try:
        head = json.loads(blob[:nl].decode("ascii"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise TFFError(f"bad header: {exc}") from None
    if head.get("magic") != MAGIC:
        raise TFFError(f"not a TFF1 file (magic={head.get('magic')!r})")
    if head.get("dtype") != DTYPE:
        raise TFFError(f"unsupported dtype {head.get('dtype')!r}")
    grid = GridSpec(head["dim"], head["shape"], head["spacing"], head["boundary"],
                    head.get("origin"))
    ncomp = int(head["components"])
    payload = blob[nl + 1:]
    expected = ncomp * grid.size * 8
    if len(payload) != expected:
        raise TFFError(f"payload has {len(payload)} bytes, expected {expected}")
    data = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape((ncomp,) + grid.shape)
    return grid, data


def write(path, grid, data):
    with open(path, "wb") as fh:
        fh.write(dumps(grid, data))


def read(path):
    with open(path, "rb") as fh:
        return loads(fh.read())
