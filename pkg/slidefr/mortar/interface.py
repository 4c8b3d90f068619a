"""
Sliding interface exchange.

A :class:`SlidingInterface` owns the static description of one interface and
rebuilds connectivity and projectors whenever it is asked for a new time. All
face data handed to it is in counterclockwise point order with shape
``(n_faces, N, 4)`` (gradients ``(n_faces, N, 4, 2)``); the left side is the
inner (disk) side, whose outward normal points radially outward.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..basis import BasisSet
from ..exceptions import GeometryError, InterfaceError
from ..geometry import RigidRotation
from ..mesh.assembly import AssembledMesh, InterfaceTopology
from ..solver.gas import FluidModel, SoundSpeedPolicy, check_admissible, normal_viscous_flux, rusanov_flux
from .connectivity import MortarConnectivity, update_connectivity, wrapped_sweep
from .projection import (
    BackProjection,
    ProjectionCache,
    build_projection_cache,
    check_interface_conservation,
    mortar_common_solution,
    outflow_residual,
    project_back,
    project_to_mortar,
)

__all__ = ["ViscousMethod", "InterfaceExchange", "SlidingInterface"]

CENTER_TOLERANCE = 1e-12


class ViscousMethod(enum.IntEnum):
    """How common viscous fluxes are formed on mortars."""

    #: project gradients to the mortars and evaluate the flux there
    GRADIENTS = 1
    #: project face viscous fluxes with the scaled projector and average
    FLUXES = 2


def _points_last(values: np.ndarray) -> np.ndarray:
    return np.moveaxis(values, 1, -1)


def _points_second(values: np.ndarray) -> np.ndarray:
    return np.moveaxis(values, -1, 1)


@dataclass
class InterfaceExchange:
    """
    State exchanged across an interface during one residual evaluation.

    Mortar arrays have shape ``(nm, N, 4)``; face arrays ``(n_side_faces, N, 4)``.
    """

    t: float
    cache: ProjectionCache
    mortar_left: np.ndarray
    mortar_right: np.ndarray
    mortar_common: np.ndarray
    face_common_left: np.ndarray
    face_common_right: np.ndarray
    mortar_flux: Optional[np.ndarray] = None
    face_flux_left: Optional[np.ndarray] = None
    face_flux_right: Optional[np.ndarray] = None


class SlidingInterface:
    """
    Dynamic mortars of one circular interface.

    :param topology: Ordered interface faces from the assembled mesh
    :param mesh: Assembled mesh (for vertex positions and subdomain rotations)
    :param basis: Face basis
    :param model: Fluid model
    :param motions: Motion of each subdomain, ``None`` for static ones
    :param viscous_method: Viscous exchange variant
    :param policy: Sound-speed policy of the mortar Riemann solver
    :param logger: Optional logger
    """

    def __init__(
        self,
        topology: InterfaceTopology,
        mesh: AssembledMesh,
        basis: BasisSet,
        model: FluidModel,
        motions: Sequence[Optional[object]] = (),
        viscous_method: ViscousMethod = ViscousMethod.FLUXES,
        policy: SoundSpeedPolicy = SoundSpeedPolicy.AVERAGE,
        logger: Optional[logging.Logger] = None,
    ) -> None:
        self.topology = topology
        self.id = topology.id
        self.basis = basis
        self.model = model
        self.viscous_method = viscous_method
        self.policy = policy
        self.logger = logger or logging.getLogger(__name__)
        self.center = np.asarray(topology.center, dtype=float)

        first = mesh.vertices[topology.inner.vof[0, 0]] - self.center
        self.radius = float(np.hypot(*first))

        self._sides = (topology.inner, topology.outer)
        self._rotations = tuple(self._side_rotation(mesh, side.subdomain, motions) for side in self._sides)
        self._start = []
        self._sweep = []
        for side in self._sides:
            p0 = mesh.vertices[side.vof[:, 0]] - self.center
            p1 = mesh.vertices[side.vof[:, 1]] - self.center
            a0 = np.arctan2(p0[:, 1], p0[:, 0])
            a1 = np.arctan2(p1[:, 1], p1[:, 0])
            sweep = wrapped_sweep(a0, a1)
            if np.any(sweep <= 0.0):
                raise GeometryError(f"Interface {self.id} has a face with zero sweep")
            self._start.append(a0)
            self._sweep.append(sweep)

        self._t: Optional[float] = None
        self._cache: Optional[ProjectionCache] = None

    def _side_rotation(self, mesh: AssembledMesh, subdomain: int, motions) -> Optional[RigidRotation]:
        motion = motions[subdomain] if subdomain < len(motions) else None
        if motion is None:
            return None
        if not isinstance(motion, RigidRotation):
            raise GeometryError(
                f"Subdomain {subdomain} on interface {self.id} must move rigidly"
            )
        if motion.omega != 0.0 and np.max(np.abs(np.asarray(motion.center) - self.center)) > CENTER_TOLERANCE:
            raise InterfaceError(
                "Rotation center differs from the interface center", interface=self.id
            )
        return motion

    @property
    def n_left(self) -> int:
        return self._sides[0].n_faces

    @property
    def n_right(self) -> int:
        return self._sides[1].n_faces

    def side_angle(self, side: int, t: float) -> float:
        rotation = self._rotations[side]
        return 0.0 if rotation is None else rotation.angle(t)

    def face_start_angles(self, side: int, t: float) -> np.ndarray:
        return self._start[side] + self.side_angle(side, t)

    def face_lengths(self, side: int) -> np.ndarray:
        return self.radius * self._sweep[side]

    # ------------------------------------------------------------------
    # connectivity

    def update(self, t: float) -> ProjectionCache:
        """
        Connectivity and projectors at time ``t``; rebuilt only when ``t`` changes.

        :raises InterfaceMisalignmentError: If the sides cannot be matched
        """
        if self._cache is not None and self._t == t:
            return self._cache
        conn = update_connectivity(
            self.face_start_angles(0, t),
            self._sweep[0],
            self.face_start_angles(1, t),
            self._sweep[1],
            left_vertices=self._sides[0].vof[:, 0],
            right_vertices=self._sides[1].vof[:, 0],
            interface=self.id,
        )
        self._cache = build_projection_cache(self.basis, conn)
        self._t = t
        self.logger.debug(f"Interface {self.id} at t={t:.6g}: {conn.nm} mortars")
        return self._cache

    @property
    def connectivity(self) -> Optional[MortarConnectivity]:
        return None if self._cache is None else self._cache.connectivity

    def mortar_geometry(self, cache: ProjectionCache):
        """Mortar points ``(nm, N, 2)``, unit radial normals ``(nm, N, 2)`` and lengths ``(nm,)``."""
        angles = cache.connectivity.mortar_angles
        theta = angles[:, 0:1] + angles[:, 1:2] * self.basis.points[None, :]
        normal = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        points = self.center + self.radius * normal
        return points, normal, self.radius * angles[:, 1]

    def face_normals(self, side: int, t: float) -> np.ndarray:
        """Unit radial normals at the face points of one side, ``(n_faces, N, 2)``."""
        theta = self.face_start_angles(side, t)[:, None] + self._sweep[side][:, None] * self.basis.points[None, :]
        return np.stack([np.cos(theta), np.sin(theta)], axis=-1)

    def face_scaled_normals(self, side: int, t: float) -> np.ndarray:
        """Face normals multiplied by the face length, ``(n_faces, N, 2)``."""
        return self.face_normals(side, t) * self.face_lengths(side)[:, None, None]

    def mortar_scaled_normals(self, cache: ProjectionCache, t: float) -> np.ndarray:
        """
        Length-scaled mortar normals ``(nm, N, 2)`` projected from both sides.

        These are the normals the scaled flux projection sees, so a viscous
        flux evaluated on the mortars with them matches one projected from
        the faces whenever the flux itself is a polynomial on the face.
        """
        sides = [
            _points_second(project_to_mortar(cache, side, _points_last(self.face_scaled_normals(side, t)), scaled=True))
            for side in (0, 1)
        ]
        return 0.5 * (sides[0] + sides[1])

    # ------------------------------------------------------------------
    # exchange

    def common_solution(self, t: float, q_left: np.ndarray, q_right: np.ndarray) -> InterfaceExchange:
        """
        Project both traces to the mortars, average, and project back.

        :param t: Stage time
        :param q_left: Left-face traces ``(nfl, N, 4)``
        :param q_right: Right-face traces ``(nfr, N, 4)``
        :return: Exchange record with mortar and face common solutions
        """
        cache = self.update(t)
        ml = _points_second(project_to_mortar(cache, 0, _points_last(q_left)))
        mr = _points_second(project_to_mortar(cache, 1, _points_last(q_right)))
        common = mortar_common_solution(ml, mr)
        fl = _points_second(project_back(cache, 0, _points_last(common), BackProjection.SCALED))
        fr = _points_second(project_back(cache, 1, _points_last(common), BackProjection.SCALED))
        return InterfaceExchange(t, cache, ml, mr, common, fl, fr)

    def inviscid_flux(self, exchange: InterfaceExchange) -> InterfaceExchange:
        """
        Riemann fluxes on the mortars, projected back to both sides.

        Face fluxes are outward and multiplied by the face length.

        :raises AdmissibilityError: Naming the mortar with a non-physical state
        """
        cache = exchange.cache
        for values in (exchange.mortar_left, exchange.mortar_right):
            check_admissible(values, self.model, where=f"interface {self.id}", leading="mortar")
        _, normal, length = self.mortar_geometry(cache)
        flux = rusanov_flux(exchange.mortar_left, exchange.mortar_right, normal, 0.0, self.model, self.policy)
        flux = flux * length[:, None, None]
        exchange.mortar_flux = flux
        back = project_back(cache, 0, _points_last(flux), BackProjection.UNSCALED)
        exchange.face_flux_left = _points_second(back)
        exchange.face_flux_right = -_points_second(
            project_back(cache, 1, _points_last(flux), BackProjection.UNSCALED)
        )
        return exchange

    def viscous_flux(
        self,
        exchange: InterfaceExchange,
        grad_left: np.ndarray,
        grad_right: np.ndarray,
        method: Optional[ViscousMethod] = None,
    ):
        """
        Common viscous normal fluxes on both sides, outward and length-scaled.

        :param exchange: Record from :meth:`common_solution`
        :param grad_left: Left-face gradient traces ``(nfl, N, 4, 2)``
        :param grad_right: Right-face gradient traces ``(nfr, N, 4, 2)``
        :param method: Override of the configured variant
        :return: ``(left, right)`` face fluxes ``(n_faces, N, 4)``
        """
        method = self.viscous_method if method is None else ViscousMethod(method)
        cache = exchange.cache
        if method is ViscousMethod.FLUXES:
            mortar = []
            for side, q, grad in ((0, exchange.face_common_left, grad_left), (1, exchange.face_common_right, grad_right)):
                face = normal_viscous_flux(q, grad, self.face_scaled_normals(side, exchange.t), self.model)
                mortar.append(_points_second(project_to_mortar(cache, side, _points_last(face), scaled=True)))
            flux = 0.5 * (mortar[0] + mortar[1])
        else:
            grads = []
            for side, grad in ((0, grad_left), (1, grad_right)):
                moved = np.moveaxis(grad, 1, -1)
                grads.append(np.moveaxis(project_to_mortar(cache, side, moved), -1, 1))
            normal = self.mortar_scaled_normals(cache, exchange.t)
            flux = normal_viscous_flux(exchange.mortar_common, 0.5 * (grads[0] + grads[1]), normal, self.model)
        left = _points_second(project_back(cache, 0, _points_last(flux), BackProjection.UNSCALED))
        right = -_points_second(project_back(cache, 1, _points_last(flux), BackProjection.UNSCALED))
        return left, right

    # ------------------------------------------------------------------
    # diagnostics

    def conservation_defect(self, exchange: InterfaceExchange) -> float:
        """Largest mismatch between integrated face and mortar inviscid fluxes."""
        if exchange.mortar_flux is None:
            raise InterfaceError("Inviscid fluxes have not been computed", interface=self.id)
        cache = exchange.cache
        mortar = _points_last(exchange.mortar_flux)
        return max(
            check_interface_conservation(cache, 0, _points_last(exchange.face_flux_left), mortar),
            check_interface_conservation(cache, 1, _points_last(exchange.face_flux_right), -mortar),
        )

    def outflow_residual(self, t: float) -> float:
        return outflow_residual(self.update(t))

    def diagnostic_rows(self, t: float) -> List[Dict[str, float]]:
        """One row per mortar: faces, scalings and offsets at time ``t``."""
        conn = self.update(t).connectivity
        rows = []
        for m in range(conn.nm):
            rows.append(
                {
                    "t": t,
                    "interface": self.id,
                    "nm": conn.nm,
                    "mortar": m,
                    "left_face": int(conn.fom[m, 0]),
                    "right_face": int(conn.fom[m, 1] - conn.nfl),
                    "s_left": float(conn.scaling[m, 0]),
                    "o_left": float(conn.offset[m, 0]),
                    "s_right": float(conn.scaling[m, 1]),
                    "o_right": float(conn.offset[m, 1]),
                }
            )
        return rows

