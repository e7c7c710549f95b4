"""CSV and JSON writers shared by the command-line tasks.

Every artifact starts with a provenance block of ``#`` comment lines: the
full run configuration as one JSON line, the package version and a hash of
the time grid.  Floats are written with ``repr`` so they round-trip.
"""
import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__

TRAJECTORY_COLUMNS = ("t", "rho00", "rho11", "rho22",
                      "re_rho01", "im_rho01", "re_rho02", "im_rho02", "re_rho12", "im_rho12")


def fmt(x):
    return repr(float(x) + 0.0)  # folds -0.0 into 0.0


def grid_hash(times):
    arr = np.ascontiguousarray(np.asarray(times, dtype="<f8"))
    return hashlib.sha256(arr.tobytes()).hexdigest()[:16]


def provenance(config, times=None):
    lines = [f"# config: {json.dumps(config, sort_keys=True)}", f"# version: {__version__}"]
    if times is not None:
        lines.append(f"# grid_sha256: {grid_hash(times)}")
    return lines


def read_provenance(path):
    """Parse the ``# key: value`` header of an artifact; the config is decoded from JSON."""
    meta = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].rstrip("\n").partition(": ")
            meta[key] = json.loads(value) if key == "config" else value
    return meta


def _write_csv(path, header_lines, columns, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(x) if isinstance(x, (float, np.floating, int, np.integer)) else x for x in row])
    return path


def trajectory_rows(traj):
    s = traj.states
    for i, t in enumerate(traj.times):
        r = s[i]
        yield (t, r[0, 0].real, r[1, 1].real, r[2, 2].real,
               r[0, 1].real, r[0, 1].imag, r[0, 2].real, r[0, 2].imag, r[1, 2].real, r[1, 2].imag)


def write_trajectory_csv(path, traj, config):
    head = provenance(config, traj.times) + [f"# picture: {traj.picture}"]
    return _write_csv(path, head, TRAJECTORY_COLUMNS, trajectory_rows(traj))


def read_trajectory_csv(path):
    """Inverse of :func:`write_trajectory_csv`; returns (times, states, picture)."""
    meta = read_provenance(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    body = np.array(rows[1:], dtype=float).reshape(-1, len(TRAJECTORY_COLUMNS))
    n = body.shape[0]
    states = np.zeros((n, 3, 3), dtype=complex)
    states[:, 0, 0], states[:, 1, 1], states[:, 2, 2] = body[:, 1], body[:, 2], body[:, 3]
    for col, (j, k) in zip((4, 6, 8), ((0, 1), (0, 2), (1, 2))):
        states[:, j, k] = body[:, col] + 1j * body[:, col + 1]
        states[:, k, j] = np.conj(states[:, j, k])
    return body[:, 0], states, meta.get("picture", "interaction")


def write_table_csv(path, columns, rows, config, times=None):
    return _write_csv(path, provenance(config, times), columns, rows)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def write_json(path, record, config, times=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"config": config, "version": __version__}
    if times is not None:
        doc["grid_sha256"] = grid_hash(times)
    doc.update(_jsonable(record))
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
