"""
Solution snapshots.

The columnar text format has one row per solution point, ordered by global
element id then point index ``(i, j)`` with ``j`` fastest::

    # slidefr snapshot t=<t> elements=<E> n=<N>
    # x y rho u v p
    <x> <y> <rho> <u> <v> <p>

Floats use 17 significant digits, so reading a snapshot back reproduces the
written values exactly. An optional legacy VTK file stores the same points
with the ``(N - 1)^2`` sub-cells of every element.
"""

from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np

from ..exceptions import SnapshotError
from ..solver.gas import FluidModel, primitive

__all__ = ["COLUMNS", "Snapshot", "snapshot_table", "write_snapshot", "read_snapshot", "write_vtk"]

logger = logging.getLogger(__name__)

COLUMNS = ("x", "y", "rho", "u", "v", "p")

_FMT = "%.17g"
_VTK_QUAD = 9


class Snapshot(NamedTuple):
    t: float
    elements: int
    n: int
    #: ``(E * N * N, 6)`` in :data:`COLUMNS` order
    table: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.table[:, COLUMNS.index(name)]


def snapshot_table(x: np.ndarray, y: np.ndarray, q: np.ndarray, model: FluidModel) -> np.ndarray:
    """
    Rows of :data:`COLUMNS` for fields shaped ``(E, N, N)`` and ``(E, N, N, 4)``.
    """
    rho, u, v, p = primitive(q, model)
    return np.stack([np.ravel(a) for a in (x, y, rho, u, v, p)], axis=-1)


def write_snapshot(
    path: Union[str, os.PathLike], x: np.ndarray, y: np.ndarray, q: np.ndarray, model: FluidModel, t: float
) -> Path:
    """
    Write the columnar text snapshot.

    :param path: Output file
    :param x: Solution point coordinates ``(E, N, N)``
    :param y: Solution point coordinates ``(E, N, N)``
    :param q: Physical conservative state ``(E, N, N, 4)``
    :param model: Gas model for the primitive conversion
    :param t: Time of the state
    :raises SnapshotError: If the file cannot be written
    """
    path = Path(path)
    e, n = q.shape[0], q.shape[1]
    table = snapshot_table(x, y, q, model)
    header = f"slidefr snapshot t={t!r} elements={e} n={n}\n{' '.join(COLUMNS)}"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, table, fmt=_FMT, header=header, comments="# ")
    except OSError as exc:
        raise SnapshotError(f"Cannot write snapshot: {exc}", path=str(path))
    logger.debug(f"Snapshot written: {path}")
    return path


def read_snapshot(path: Union[str, os.PathLike]) -> Snapshot:
    """
    :raises SnapshotError: If the file is unreadable or not a snapshot
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fp:
            first = fp.readline()
        fields = dict(item.split("=", 1) for item in first.split()[3:] if "=" in item)
        t = float(fields["t"])
        e, n = int(fields["elements"]), int(fields["n"])
    except OSError as exc:
        raise SnapshotError(f"Cannot read snapshot: {exc}", path=str(path))
    except (KeyError, ValueError):
        raise SnapshotError("Missing or malformed snapshot header", path=str(path))
    try:
        table = np.loadtxt(path, comments="#", ndmin=2)
    except ValueError as exc:
        raise SnapshotError(f"Malformed snapshot rows: {exc}", path=str(path))
    if table.shape != (e * n * n, len(COLUMNS)):
        raise SnapshotError(f"Expected {e * n * n} rows of {len(COLUMNS)} columns, got {table.shape}", path=str(path))
    return Snapshot(t, e, n, table)


def write_vtk(
    path: Union[str, os.PathLike], x: np.ndarray, y: np.ndarray, q: np.ndarray, model: FluidModel, t: float
) -> Path:
    """
    Legacy ASCII VTK unstructured grid of solution-point sub-cells.

    :raises SnapshotError: If the file cannot be written
    """
    path = Path(path)
    e, n = q.shape[0], q.shape[1]
    table = snapshot_table(x, y, q, model)
    ids = np.arange(e * n * n).reshape(e, n, n)
    quads = np.stack(
        [ids[:, :-1, :-1], ids[:, 1:, :-1], ids[:, 1:, 1:], ids[:, :-1, 1:]], axis=-1
    ).reshape(-1, 4)

    lines = [
        "# vtk DataFile Version 3.0",
        f"slidefr t={t!r}",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {len(table)} double",
    ]
    lines += [f"{_FMT % a} {_FMT % b} 0" for a, b in table[:, :2]]
    lines.append(f"CELLS {len(quads)} {5 * len(quads)}")
    lines += [f"4 {a} {b} {c} {d}" for a, b, c, d in quads]
    lines.append(f"CELL_TYPES {len(quads)}")
    lines += [str(_VTK_QUAD)] * len(quads)
    lines.append(f"POINT_DATA {len(table)}")
    for k, name in enumerate(COLUMNS[2:], start=2):
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
        lines += [_FMT % value for value in table[:, k]]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise SnapshotError(f"Cannot write VTK file: {exc}", path=str(path))
    return path
