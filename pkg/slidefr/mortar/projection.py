"""
L2 projections between cell faces and mortars.

A mortar ``k`` covers ``xi = o_k + s_k z`` of its face. With Gauss points the
face-to-mortar projection reduces to interpolation, ``H[j, i] = h_i(o + s X_j)``,
and the backward projectors are ``s diag(1/w) H^T diag(w)`` (applied to
physical values) or ``diag(1/w) H^T diag(w)`` (applied to values already
scaled by the mortar length).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..basis import BasisSet
from .connectivity import MortarConnectivity

__all__ = [
    "BackProjection",
    "ProjectionCache",
    "build_projection_cache",
    "project_to_mortar",
    "project_back",
    "mortar_common_solution",
    "check_interface_conservation",
    "outflow_residual",
]


class BackProjection(enum.IntEnum):
    """Mortar-to-face projection variants."""

    #: ``sum_k s_k M^-1 S^T phi_k`` for values per unit length
    SCALED = 1
    #: ``sum_k M^-1 S^T phi_k`` for values already multiplied by the mortar length
    UNSCALED = 2


@dataclass(frozen=True)
class ProjectionCache:
    """
    Projection matrices of one interface at one connectivity state.

    ``forward[c][m]`` interpolates face data of mortar ``m``'s left (``c = 0``)
    or right (``c = 1``) face to the mortar points; ``backward[c][m]`` is the
    unscaled backward projector of the same pair.
    """

    basis: BasisSet
    connectivity: MortarConnectivity
    forward: np.ndarray
    backward: np.ndarray

    @property
    def mass(self) -> np.ndarray:
        return np.diag(self.basis.weights)


def build_projection_cache(basis: BasisSet, connectivity: MortarConnectivity) -> ProjectionCache:
    """
    Assemble forward and backward projectors for every (face, mortar) pair.

    :param basis: Face basis
    :param connectivity: Current connectivity
    :return: Cache with arrays of shape ``(2, nm, N, N)``
    """
    x = basis.points
    w = basis.weights
    nm = connectivity.nm
    forward = np.empty((2, nm, basis.n, basis.n))
    for column in (0, 1):
        for m in range(nm):
            s = connectivity.scaling[m, column]
            o = connectivity.offset[m, column]
            forward[column, m] = basis.interpolation_matrix(o + s * x)
    backward = (1.0 / w)[None, None, :, None] * np.swapaxes(forward, 2, 3) * w[None, None, None, :]
    forward.setflags(write=False)
    backward.setflags(write=False)
    return ProjectionCache(basis=basis, connectivity=connectivity, forward=forward, backward=backward)


def _column(side: int) -> int:
    if side not in (0, 1):
        raise ValueError(f"side must be 0 (left) or 1 (right), got {side}")
    return side


def project_to_mortar(cache: ProjectionCache, side: int, face_values: np.ndarray, scaled: bool = False) -> np.ndarray:
    """
    Project face data of one side onto every mortar.

    :param cache: Projection cache
    :param side: 0 for left faces, 1 for right faces
    :param face_values: ``(n_side_faces, ..., N)`` in counterclockwise point order
    :param scaled: Multiply by the mortar scaling (for computational-space fluxes)
    :return: ``(nm, ..., N)``
    """
    c = _column(side)
    conn = cache.connectivity
    local = conn.fom[:, c] - (0 if c == 0 else conn.nfl)
    data = np.asarray(face_values)[local]
    out = np.einsum("mji,m...i->m...j", cache.forward[c], data)
    if scaled:
        out = out * conn.scaling[:, c].reshape((-1,) + (1,) * (out.ndim - 1))
    return out


def project_back(
    cache: ProjectionCache,
    side: int,
    mortar_values: np.ndarray,
    method: BackProjection = BackProjection.SCALED,
) -> np.ndarray:
    """
    Reconstruct face data of one side from values on its mortars.

    Mortars with zero scaling contribute nothing under ``SCALED``; under
    ``UNSCALED`` their values are expected to be zero already.

    :param cache: Projection cache
    :param side: 0 for left faces, 1 for right faces
    :param mortar_values: ``(nm, ..., N)``
    :param method: Back-projection variant
    :return: ``(n_side_faces, ..., N)``
    """
    c = _column(side)
    conn = cache.connectivity
    values = np.asarray(mortar_values)
    contributions = np.einsum("mij,m...j->m...i", cache.backward[c], values)
    if method is BackProjection.SCALED:
        contributions = contributions * conn.scaling[:, c].reshape(
            (-1,) + (1,) * (contributions.ndim - 1)
        )
    n_faces = conn.nfl if c == 0 else conn.nfr
    local = conn.fom[:, c] - (0 if c == 0 else conn.nfl)
    out = np.zeros((n_faces,) + values.shape[1:])
    # serial accumulation keeps the summation order fixed
    np.add.at(out, local, contributions)
    return out


def mortar_common_solution(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Pointwise average of the two projected states."""
    return 0.5 * (np.asarray(left) + np.asarray(right))


def check_interface_conservation(
    cache: ProjectionCache, side: int, face_fluxes: np.ndarray, mortar_fluxes: np.ndarray
) -> float:
    """
    Largest per-face mismatch between a face's integrated flux and its mortars'.

    :param cache: Projection cache
    :param side: Side the face fluxes belong to
    :param face_fluxes: Computational-space face fluxes ``(n_side_faces, ..., N)``
    :param mortar_fluxes: Mortar fluxes scaled by mortar length ``(nm, ..., N)``
    :return: ``max_f |int F_f - sum_k int F_k|``
    """
    c = _column(side)
    conn = cache.connectivity
    w = cache.basis.weights
    face_total = np.tensordot(np.asarray(face_fluxes), w, axes=([-1], [0]))
    mortar_total = np.tensordot(np.asarray(mortar_fluxes), w, axes=([-1], [0]))
    local = conn.fom[:, c] - (0 if c == 0 else conn.nfl)
    per_face = np.zeros_like(face_total)
    np.add.at(per_face, local, mortar_total)
    if face_total.size == 0:
        return 0.0
    return float(np.max(np.abs(face_total - per_face)))


def outflow_residual(cache: ProjectionCache) -> float:
    """
    Max-norm of ``sum_k P_back P_fwd - I`` over all faces of both sides.

    Projecting to the mortars and straight back must be the identity.
    """
    conn = cache.connectivity
    n = cache.basis.n
    worst = 0.0
    for c in (0, 1):
        n_faces = conn.nfl if c == 0 else conn.nfr
        products = np.einsum("mij,mjk->mik", cache.backward[c], cache.forward[c])
        products *= conn.scaling[:, c][:, None, None]
        total = np.zeros((n_faces, n, n))
        np.add.at(total, conn.fom[:, c] - (0 if c == 0 else conn.nfl), products)
        worst = max(worst, float(np.max(np.abs(total - np.eye(n)[None]))))
    return worst
