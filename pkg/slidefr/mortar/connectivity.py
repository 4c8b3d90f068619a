"""
Face and mortar connectivity of one sliding interface.

The interface is walked counterclockwise; every face vertex met on either side
opens a new mortar, so the number of mortars always equals the total number
of faces. Left faces are indexed ``0..nfl-1`` and right faces
``nfl..nf-1``; all arrays are zero-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import InterfaceError, InterfaceMisalignmentError

__all__ = [
    "ANGLE_TOLERANCE",
    "MortarConnectivity",
    "update_connectivity",
    "scaling_offset",
    "lies_between",
    "wrapped_sweep",
]

#: vertices closer than this (radians) are treated as coincident
ANGLE_TOLERANCE = 1e-12

TWO_PI = 2.0 * math.pi


def lies_between(alpha: float, start: float, sweep: float, eps: float = ANGLE_TOLERANCE) -> bool:
    """
    Whether angle ``alpha`` lies on the counterclockwise arc ``[start, start + sweep]``.

    Both ends are inclusive within ``eps``.
    """
    d = (alpha - start) % TWO_PI
    return d <= sweep + eps or d >= TWO_PI - eps


def wrapped_sweep(start: np.ndarray | float, end: np.ndarray | float) -> np.ndarray:
    """Counterclockwise angle from ``start`` to ``end`` in ``[-pi, pi)``, clipped at zero."""
    d = (np.asarray(end, dtype=float) - np.asarray(start, dtype=float) + math.pi) % TWO_PI - math.pi
    return np.maximum(d, 0.0)


@dataclass(frozen=True)
class MortarConnectivity:
    """
    Connectivity arrays of one interface at one time.

    :param nfl: Number of left (inner) faces
    :param nfr: Number of right (outer) faces
    :param mof: ``mof[f] = (first mortar, mortar count)`` per face
    :param fom: ``fom[m] = (left face, right face)`` per mortar
    :param vom: ``vom[m] = (start vertex, end vertex)`` per mortar
    :param mortar_angles: ``(nm, 2)`` start angle and counterclockwise sweep
    :param face_angles: ``(nf, 2)`` start angle and counterclockwise sweep
    :param scaling: ``(nm, 2)`` scaling of each mortar against its left/right face
    :param offset: ``(nm, 2)`` offset of each mortar within its left/right face
    """

    nfl: int
    nfr: int
    mof: np.ndarray
    fom: np.ndarray
    vom: np.ndarray
    mortar_angles: np.ndarray
    face_angles: np.ndarray
    scaling: np.ndarray
    offset: np.ndarray

    @property
    def nf(self) -> int:
        return self.nfl + self.nfr

    @property
    def nm(self) -> int:
        return len(self.fom)

    def mortars_of(self, face: int) -> List[int]:
        """Mortars of a face in counterclockwise order."""
        first, count = self.mof[face]
        return [(int(first) + k) % self.nm for k in range(int(count))]

    def signature(self) -> Tuple[Tuple[int, int], ...]:
        """Mortar-to-face pairs rotated so the smallest pair comes first."""
        pairs = [tuple(int(v) for v in row) for row in self.fom]
        k = pairs.index(min(pairs))
        return tuple(pairs[k:] + pairs[:k])


def update_connectivity(
    left_start: np.ndarray,
    left_sweep: np.ndarray,
    right_start: np.ndarray,
    right_sweep: np.ndarray,
    left_vertices: Optional[np.ndarray] = None,
    right_vertices: Optional[np.ndarray] = None,
    interface: Optional[int] = None,
) -> MortarConnectivity:
    """
    Build mortars by walking both sides of an interface counterclockwise.

    Face ``f`` of a side starts at angle ``start[f]`` and spans ``sweep[f]``
    radians counterclockwise; consecutive faces of one side are chained.

    :param left_start: Start angles of the left faces at the current time
    :param left_sweep: Counterclockwise sweeps of the left faces
    :param right_start: Start angles of the right faces
    :param right_sweep: Counterclockwise sweeps of the right faces
    :param left_vertices: Start vertex ids of the left faces (for ``vom``)
    :param right_vertices: Start vertex ids of the right faces
    :param interface: Interface id used in error messages
    :return: Connectivity with scalings and offsets
    :raises InterfaceMisalignmentError: If no right face contains the first left vertex
    :raises InterfaceError: If the walk overruns either side
    """
    nfl, nfr = len(left_start), len(right_start)
    nf = nm = nfl + nfr
    start = np.concatenate([left_start, right_start]) % TWO_PI
    sweep = np.concatenate([left_sweep, right_sweep])
    end = (start + sweep) % TWO_PI
    if left_vertices is None:
        left_vertices = np.arange(nfl)
    if right_vertices is None:
        right_vertices = nfl + np.arange(nfr)
    vertex = np.concatenate([left_vertices, right_vertices]).astype(np.int64)

    mof = np.zeros((nf, 2), dtype=np.int64)
    fom = np.zeros((nm, 2), dtype=np.int64)
    vom = np.zeros((nm, 2), dtype=np.int64)
    mortar_start = np.zeros(nm)

    ifl = 0
    for ifr in range(nfl, nf):
        if lies_between(start[ifl], start[ifr], sweep[ifr]):
            break
    else:
        raise InterfaceMisalignmentError(
            "No right face contains the first left vertex", interface=interface
        )

    mof[ifl, 0] = 0
    mof[ifr, 0] = 0
    mof[ifl, 1] += 1
    mof[ifr, 1] += 1
    fom[0] = (ifl, ifr)
    vom[0, 0] = vertex[ifl]
    mortar_start[0] = start[ifl]

    wraps = 0
    for im in range(1, nm):
        if ifl < nfl - 1 and lies_between(end[ifl], start[ifr], sweep[ifr]):
            ifl += 1
            ifa = ifl
        else:
            ifr += 1
            if ifr >= nf:
                ifr -= nfr
                wraps += 1
            ifa = ifr
        mof[ifa, 0] = im
        mof[ifl, 1] += 1
        mof[ifr, 1] += 1
        fom[im] = (ifl, ifr)
        vom[im, 0] = vertex[ifa]
        vom[im - 1, 1] = vertex[ifa]
        mortar_start[im] = start[ifa]
    vom[nm - 1, 1] = vom[0, 0]

    if ifl != nfl - 1 or wraps > 1:
        raise InterfaceError(
            f"Connectivity walk ended at left face {ifl} of {nfl} after {wraps} wrap(s)",
            interface=interface,
        )

    mortar_end = np.roll(mortar_start, -1)
    mortar_sweep = wrapped_sweep(mortar_start, mortar_end)

    scaling = np.zeros((nm, 2))
    offset = np.zeros((nm, 2))
    for f in range(nf):
        column = 0 if f < nfl else 1
        acc = 0.0
        first, count = mof[f]
        for k in range(int(count)):
            m = (int(first) + k) % nm
            if fom[m, column] != f:
                raise InterfaceError(
                    f"Mortar {m} is listed under face {f} but belongs to face {fom[m, column]}",
                    interface=interface,
                )
            s = mortar_sweep[m] / sweep[f]
            scaling[m, column] = s
            offset[m, column] = acc
            acc += s
        if abs(acc - 1.0) > 1e-10:
            raise InterfaceError(
                f"Mortars of face {f} cover {acc:.15f} of it", interface=interface
            )

    return MortarConnectivity(
        nfl=nfl,
        nfr=nfr,
        mof=mof,
        fom=fom,
        vom=vom,
        mortar_angles=np.stack([mortar_start, mortar_sweep], axis=1),
        face_angles=np.stack([start, sweep], axis=1),
        scaling=scaling,
        offset=offset,
    )


def scaling_offset(connectivity: MortarConnectivity, face: int, mortar: int) -> Tuple[float, float]:
    """
    Scaling and offset of a mortar within one of its faces.

    ``xi = o + s z`` maps the mortar parameter ``z`` to the face parameter.

    :raises InterfaceError: If the mortar does not belong to the face
    """
    column = 0 if face < connectivity.nfl else 1
    if connectivity.fom[mortar, column] != face:
        raise InterfaceError(f"Mortar {mortar} does not lie on face {face}")
    s = float(connectivity.scaling[mortar, column])
    o = float(connectivity.offset[mortar, column])
    if o < -1e-12 or o + s > 1.0 + 1e-12:
        raise InterfaceError(f"Mortar {mortar} extends outside face {face}")
    return s, o
