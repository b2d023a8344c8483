"""CSV time series and legacy-VTK field snapshots."""

from __future__ import annotations

import csv
import os

import numpy as np

CSV_HEADER = ("t", "K_left", "v_left", "da_left", "K_right", "v_right", "da_right")
SIDES = ("left", "right")


def _fmt(x: float) -> str:
    # repr of a float is the shortest round-tripping form, so output is stable
    return repr(float(x))


def record_row(rec) -> list[str]:
    row = [_fmt(rec.t)]
    for side in SIDES:
        vals = rec.tips.get(side)
        row.extend([""] * 3 if vals is None else [_fmt(v) for v in vals])
    return row


def write_csv(path, series) -> None:
    """Write time series records; tips that do not exist leave empty fields."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in series:
            writer.writerow(record_row(rec))


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [{k: (float(v) if v != "" else None) for k, v in row.items()} for row in rows]


class CsvSink:
    """Streams records to disk as they arrive."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="")
        self._writer = csv.writer(self._fh, lineterminator="\n")
        self._writer.writerow(CSV_HEADER)

    def __call__(self, rec, sim=None):
        self._writer.writerow(record_row(rec))

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_vtk(path, w: np.ndarray, spec, live=None, title="w", t: float | None = None) -> None:
    """Legacy ASCII STRUCTURED_POINTS file with ``w`` as point scalars.

    Dead sites (outside the domain) are written as 0 and, when ``live`` is
    given, an extra ``live`` scalar marks them.
    """
    w = np.asarray(w, dtype=float).reshape(spec.ny, spec.nx)
    header = title if t is None else f"{title} t={t!r}"
    lines = [
        "# vtk DataFile Version 3.0",
        header[:255],
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {spec.nx} {spec.ny} 1",
        f"ORIGIN {spec.x0!r} {spec.y0!r} 0.0",
        f"SPACING {spec.dh!r} {spec.dh!r} 1.0",
        f"POINT_DATA {spec.nx * spec.ny}",
        "SCALARS w double 1",
        "LOOKUP_TABLE default",
    ]
    vals = np.where(live, w, 0.0) if live is not None else w
    lines.extend(" ".join(f"{v:.10g}" for v in row) for row in vals)
    if live is not None:
        lines += ["SCALARS live int 1", "LOOKUP_TABLE default"]
        lines.extend(" ".join("1" if v else "0" for v in row) for row in np.asarray(live))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_vtk_scalars(path) -> tuple[tuple[int, int], np.ndarray]:
    """Minimal reader for files written by :func:`write_vtk` (first scalar only)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    dims = next(ln for ln in lines if ln.startswith("DIMENSIONS")).split()[1:3]
    nx, ny = int(dims[0]), int(dims[1])
    start = lines.index("LOOKUP_TABLE default") + 1
    vals = np.array([float(v) for ln in lines[start:start + ny] for v in ln.split()])
    return (nx, ny), vals.reshape(ny, nx)


class SnapshotWriter:
    """Writes ``w`` every ``every`` steps as ``<prefix>_<step>.vtk``."""

    def __init__(self, directory, every: int, prefix="w"):
        self.directory = directory
        self.every = int(every)
        self.prefix = prefix
        self.written: list[str] = []
        os.makedirs(directory, exist_ok=True)

    def __call__(self, stage, sim):
        if stage != "crack" or self.every <= 0 or sim.n_step % self.every:
            return
        path = os.path.join(self.directory, f"{self.prefix}_{sim.n_step:07d}.vtk")
        write_vtk(path, sim.state.w, sim.spec, live=sim.state.live, t=sim.t)
        self.written.append(path)
