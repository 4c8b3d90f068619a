"""
Flux reconstruction residual on moving quadrilateral meshes.

Solution arrays are laid out ``(element, i, j, variable)`` where ``i`` runs
along ``xi`` and ``j`` along ``eta``. Face arrays are ``(element, face, k,
variable)`` with ``k`` following the face's natural parameter. The evolved
state carries five variables per point: the four components of ``|J| Q`` and
the geometric-conservation Jacobian ``|J|_num``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..basis import BasisSet, basis_for
from ..exceptions import ConfigurationError, GeometryError, InvertedElementError
from ..geometry import (
    MetricState,
    RigidRotation,
    VertexOscillation,
    face_scaled_normal,
    serendipity_shape,
)
from ..mesh.assembly import AssembledMesh
from ..mortar.interface import InterfaceExchange, SlidingInterface, ViscousMethod
from .boundary import BoundaryCondition, FarfieldMonitor, apply_boundary_condition
from .gas import (
    FluidModel,
    SoundSpeedPolicy,
    check_admissible,
    inviscid_flux,
    normal_viscous_flux,
    rusanov_flux,
    viscous_flux,
)

__all__ = [
    "N_VARS",
    "Geometry",
    "Discretization",
    "compute_transformed_fluxes",
    "face_traces",
    "outward_traces",
    "correct_flux",
    "compute_gradients",
    "gcl_rhs",
    "conservation_defect",
]

N_VARS = 4

Motion = Optional[object]


# ---------------------------------------------------------------------------
# element kernels


def face_traces(basis: BasisSet, values: np.ndarray) -> np.ndarray:
    """
    Interpolate solution-point data to the four faces.

    :param values: ``(E, N, N, ...)``
    :return: ``(E, 4, N, ...)`` in natural face order
    """
    left, right = basis.left_row, basis.right_row
    return np.stack(
        [
            np.einsum("j,eij...->ei...", left, values),
            np.einsum("i,eij...->ej...", right, values),
            np.einsum("j,eij...->ei...", right, values),
            np.einsum("i,eij...->ej...", left, values),
        ],
        axis=1,
    )


def outward_traces(basis: BasisSet, f_tilde: np.ndarray, g_tilde: np.ndarray) -> np.ndarray:
    """Outward computational fluxes at the faces from solution-point fluxes."""
    left, right = basis.left_row, basis.right_row
    return np.stack(
        [
            -np.einsum("j,eij...->ei...", left, g_tilde),
            np.einsum("i,eij...->ej...", right, f_tilde),
            np.einsum("j,eij...->ei...", right, g_tilde),
            -np.einsum("i,eij...->ej...", left, f_tilde),
        ],
        axis=1,
    )


def compute_transformed_fluxes(
    q: np.ndarray, f: np.ndarray, g: np.ndarray, metrics: MetricState
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Computational-space fluxes on a moving element.

    ``F~ = (-x_t y_eta + y_t x_eta) Q + y_eta F - x_eta G`` and
    ``G~ = (x_t y_xi - y_t x_xi) Q - y_xi F + x_xi G``.

    :param q: Physical state ``(..., 4)``
    :param f: Physical x-flux ``(..., 4)``
    :param g: Physical y-flux ``(..., 4)``
    :param metrics: Metrics with the leading shape of ``q``
    """
    m = metrics
    a = (-m.x_t * m.y_eta + m.y_t * m.x_eta)[..., None]
    b = (m.x_t * m.y_xi - m.y_t * m.x_xi)[..., None]
    f_tilde = a * q + m.y_eta[..., None] * f - m.x_eta[..., None] * g
    g_tilde = b * q - m.y_xi[..., None] * f + m.x_xi[..., None] * g
    return f_tilde, g_tilde


def correct_flux(
    basis: BasisSet,
    f_tilde: np.ndarray,
    g_tilde: np.ndarray,
    common: np.ndarray,
    trace: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Divergence of the corrected flux at the solution points.

    :param basis: Element basis
    :param f_tilde: ``(E, N, N, ...)``
    :param g_tilde: ``(E, N, N, ...)``
    :param common: Outward common fluxes times face length, ``(E, 4, N, ...)``
    :param trace: Outward interpolated fluxes; computed when omitted
    :return: ``dF^/dxi + dG^/deta``, ``(E, N, N, ...)``
    """
    if trace is None:
        trace = outward_traces(basis, f_tilde, g_tilde)
    d = basis.derivative
    gl, gr = basis.gl_prime, basis.gr_prime
    jump = common - trace
    extra = (None,) * (f_tilde.ndim - 3)
    div = np.einsum("ai,eij...->eaj...", d, f_tilde) + np.einsum("bj,eij...->eib...", d, g_tilde)
    div = div + gr[(None, slice(None), None) + extra] * jump[:, 1][:, None]
    div = div - gl[(None, slice(None), None) + extra] * jump[:, 3][:, None]
    div = div + gr[(None, None, slice(None)) + extra] * jump[:, 2][:, :, None]
    div = div - gl[(None, None, slice(None)) + extra] * jump[:, 0][:, :, None]
    return div


def compute_gradients(
    basis: BasisSet,
    q: np.ndarray,
    common: np.ndarray,
    metrics: MetricState,
    trace: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Corrected physical gradients of the solution.

    :param basis: Element basis
    :param q: Physical state ``(E, N, N, 4)``
    :param common: Common face solutions in natural order ``(E, 4, N, 4)``
    :param metrics: Solution-point metrics ``(E, N, N)``
    :param trace: Face traces of ``q``; computed when omitted
    :return: ``(E, N, N, 4, 2)``
    """
    if trace is None:
        trace = face_traces(basis, q)
    d = basis.derivative
    gl, gr = basis.gl_prime, basis.gr_prime
    jump = common - trace
    q_xi = np.einsum("ai,eijv->eajv", d, q)
    q_xi = q_xi + gl[None, :, None, None] * jump[:, 3][:, None] + gr[None, :, None, None] * jump[:, 1][:, None]
    q_eta = np.einsum("bj,eijv->eibv", d, q)
    q_eta = q_eta + gl[None, None, :, None] * jump[:, 0][:, :, None] + gr[None, None, :, None] * jump[:, 2][:, :, None]
    m = metrics
    jac = m.jacobian[..., None]
    q_x = (m.y_eta[..., None] * q_xi - m.y_xi[..., None] * q_eta) / jac
    q_y = (-m.x_eta[..., None] * q_xi + m.x_xi[..., None] * q_eta) / jac
    return np.stack([q_x, q_y], axis=-1)


def gcl_rhs(basis: BasisSet, volume: MetricState, faces: MetricState, normals: np.ndarray) -> np.ndarray:
    """
    Time derivative of the geometric-conservation Jacobian.

    The grid-motion flux is discretized with the same operators as the flow
    fluxes; its common face value is ``-(v_g . N)``.

    :param volume: Solution-point metrics ``(E, N, N)``
    :param faces: Face-point metrics ``(E, 4, N)``
    :param normals: Outward scaled normals ``(E, 4, N, 2)``
    :return: ``(E, N, N)``
    """
    m = volume
    f = (-m.x_t * m.y_eta + m.y_t * m.x_eta)[..., None]
    g = (m.x_t * m.y_xi - m.y_t * m.x_xi)[..., None]
    common = -(faces.x_t * normals[..., 0] + faces.y_t * normals[..., 1])[..., None]
    return -correct_flux(basis, f, g, common)[..., 0]


def conservation_defect(basis: BasisSet, residual: np.ndarray, boundary_flux: np.ndarray) -> np.ndarray:
    """
    Discrete global conservation error of one residual evaluation.

    ``E = sum_e sum_ab w_a w_b R_eab + sum_boundary sum_k w_k F_k``; zero to
    round-off for a conservative scheme.

    :param residual: ``d(|J| Q)/dt`` at solution points ``(E, N, N, 4)``
    :param boundary_flux: Outward common fluxes on boundary faces ``(B, N, 4)``
    :return: Four components
    """
    w = basis.weights
    volume = np.einsum("a,b,eabv->v", w, w, residual)
    surface = np.einsum("k,bkv->v", w, boundary_flux) if len(boundary_flux) else 0.0
    return volume + surface


# ---------------------------------------------------------------------------
# geometry


@dataclass(frozen=True)
class Geometry:
    """Metrics of every element at one time."""

    t: float
    volume: MetricState
    faces: MetricState
    normals: np.ndarray

    @property
    def jacobian(self) -> np.ndarray:
        return self.volume.jacobian


def _reference_points(basis: BasisSet) -> Tuple[np.ndarray, np.ndarray]:
    x = basis.points
    n = basis.n
    zeros, ones = np.zeros(n), np.ones(n)
    xi_v, eta_v = np.meshgrid(x, x, indexing="ij")
    xi_f = np.concatenate([x, ones, x, zeros])
    eta_f = np.concatenate([zeros, x, ones, x])
    return np.concatenate([xi_v.ravel(), xi_f]), np.concatenate([eta_v.ravel(), eta_f])


def default_motions(mesh: AssembledMesh) -> List[Motion]:
    """Rigid rotation for every subdomain with a non-zero angular speed."""
    return [
        RigidRotation(tuple(r.center), r.omega) if r.omega != 0.0 else None for r in mesh.rotations
    ]


# ---------------------------------------------------------------------------
# discretization


class Discretization:
    """
    Spatial discretization of the compressible Navier-Stokes equations.

    :param mesh: Prepared (reordered, radius-corrected) mesh
    :param n_points: Solution points per direction (polynomial degree + 1)
    :param model: Fluid model
    :param boundaries: Boundary condition per face tag
    :param motions: Motion per subdomain; defaults to the mesh rotations
    :param viscous_method: Sliding-interface viscous exchange
    :param policy: Sound-speed policy of every Riemann solver
    :param gcl: Co-integrate ``|J|`` instead of using the analytic value
    :param boundary_nodes: Iso-parametric node count for curved non-sliding faces
    :param workers: Threads for element-local kernels
    :param logger: Optional logger
    """

    def __init__(
        self,
        mesh: AssembledMesh,
        n_points: int,
        model: FluidModel,
        boundaries: Mapping[str, BoundaryCondition],
        motions: Optional[Sequence[Motion]] = None,
        viscous_method: ViscousMethod = ViscousMethod.FLUXES,
        policy: SoundSpeedPolicy = SoundSpeedPolicy.AVERAGE,
        gcl: bool = True,
        boundary_nodes: Optional[int] = None,
        workers: int = 1,
        logger: Optional[logging.Logger] = None,
    ) -> None:
        self.mesh = mesh
        self.basis = basis_for(n_points)
        self.model = model
        self.boundaries = dict(boundaries)
        self.motions = list(motions) if motions is not None else default_motions(mesh)
        self.policy = SoundSpeedPolicy(policy)
        self.gcl = gcl
        self.workers = max(1, int(workers))
        self.logger = logger or logging.getLogger(__name__)
        if len(self.motions) != mesh.n_subdomains:
            raise ConfigurationError(
                f"Expected {mesh.n_subdomains} subdomain motions, got {len(self.motions)}", key="rotation"
            )

        missing = sorted(set(mesh.boundary_tags) - set(self.boundaries))
        if missing:
            raise ConfigurationError(f"No boundary condition for tag(s) {missing}", key="boundary")

        self._build_reference(boundary_nodes)
        self._build_faces()
        self.interfaces = [
            SlidingInterface(
                item, mesh, self.basis, model, self.motions, viscous_method, self.policy, logger=self.logger
            )
            for item in mesh.interfaces
        ]
        self._geometry: Optional[Geometry] = None
        self.last_exchanges: List[InterfaceExchange] = []
        self.last_boundary_flux = np.zeros((0, self.n, N_VARS))
        self.farfield_monitor = FarfieldMonitor()
        self.logger.info(
            f"Discretization ready: {self.n_elements} elements, N={self.n}, "
            f"{len(self.interfaces)} sliding interface(s), gcl={'on' if gcl else 'off'}"
        )

    # ------------------------------------------------------------------
    # setup

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def n_elements(self) -> int:
        return self.mesh.n_cells

    @property
    def n_dof(self) -> int:
        return self.n_elements * self.n * self.n

    def _build_reference(self, boundary_nodes: Optional[int]) -> None:
        xi, eta = _reference_points(self.basis)
        fields = []
        straight = np.zeros(self.n_elements, dtype=bool)
        for cell in range(self.n_elements):
            el = self.mesh.element_map(cell, boundary_nodes)
            straight[cell] = el.straight
            fields.append(el.evaluate(xi, eta))
        arrays = [np.array([f[k] for f in fields]) for k in range(6)]
        self._reference = MetricState.static(*arrays)
        if np.any(self._reference.jacobian <= 0.0):
            bad = int(np.argwhere(self._reference.jacobian <= 0.0)[0][0])
            raise InvertedElementError("Non-positive Jacobian in the reference mesh", element=bad)
        self._straight = straight
        self._corners = self.mesh.vertices[self.mesh.cells]
        self._shapes = serendipity_shape(4, xi, eta)
        self._subdomain_cells = [
            np.flatnonzero(self.mesh.cell_subdomain == s) for s in range(self.mesh.n_subdomains)
        ]
        for s, motion in enumerate(self.motions):
            if isinstance(motion, VertexOscillation) and not np.all(self._straight[self._subdomain_cells[s]]):
                raise GeometryError(f"Vertex motion of subdomain {s} requires straight-sided elements")

    def _build_faces(self) -> None:
        interior = self.mesh.interior_faces
        self._int_l = (interior[:, 0], interior[:, 1])
        self._int_r = (interior[:, 2], interior[:, 3])
        fl, fr = interior[:, 1], interior[:, 3]
        self._int_reverse = (fl <= 1) == (fr <= 1)

        self._bnd_cells = self.mesh.boundary_faces[:, 0]
        self._bnd_faces = self.mesh.boundary_faces[:, 1]
        tags = np.array(self.mesh.boundary_tags, dtype=object)
        self._bnd_groups = {tag: np.flatnonzero(tags == tag) for tag in sorted(set(self.mesh.boundary_tags))}

    # ------------------------------------------------------------------
    # geometry

    def geometry_at(self, t: float) -> Geometry:
        """
        Metrics of every element at time ``t``; cached for the last ``t``.

        :raises InvertedElementError: If the moved mesh has ``|J| <= 0``
        """
        if self._geometry is not None and self._geometry.t == t:
            return self._geometry
        state = self._reference
        if any(m is not None for m in self.motions):
            fields = {name: getattr(state, name).copy() for name in _FIELDS}
            for s, motion in enumerate(self.motions):
                if motion is None:
                    continue
                cells = self._subdomain_cells[s]
                sub = state.take(cells)
                if isinstance(motion, VertexOscillation):
                    moved = motion.apply(sub, t, corners=self._corners[cells], shapes=self._shapes)
                else:
                    moved = motion.apply(sub, t)
                for name in _FIELDS:
                    fields[name][cells] = getattr(moved, name)
            state = MetricState(**fields)

        n, nn = self.n, self.n * self.n
        e = self.n_elements
        volume = MetricState(*(getattr(state, f)[:, :nn].reshape(e, n, n) for f in _FIELDS))
        faces = MetricState(*(getattr(state, f)[:, nn:].reshape(e, 4, n) for f in _FIELDS))
        if np.any(volume.jacobian <= 0.0):
            bad = int(np.argwhere(volume.jacobian <= 0.0)[0][0])
            raise InvertedElementError(f"Non-positive Jacobian at t={t}", element=bad)
        normals = np.stack([face_scaled_normal(faces.take((slice(None), f)), f) for f in range(4)], axis=1)
        self._geometry = Geometry(t, volume, faces, normals)
        return self._geometry

    # ------------------------------------------------------------------
    # state helpers

    def initial_state(self, q_of: Callable[[np.ndarray, np.ndarray], np.ndarray], t: float = 0.0) -> np.ndarray:
        """
        Evolved state from a physical field ``q_of(x, y) -> (..., 4)``.

        :return: ``(E, N, N, 5)`` with ``|J| Q`` and ``|J|``
        """
        geo = self.geometry_at(t)
        q = np.asarray(q_of(geo.volume.x, geo.volume.y), dtype=float)
        jac = geo.jacobian
        return np.concatenate([q * jac[..., None], jac[..., None]], axis=-1)

    def physical_state(self, u: np.ndarray, t: float) -> np.ndarray:
        """Physical conservative variables ``(E, N, N, 4)`` from the evolved state."""
        jac = u[..., 4] if self.gcl else self.geometry_at(t).jacobian
        return u[..., :4] / jac[..., None]

    def _chunks(self) -> List[slice]:
        e = self.n_elements
        if self.workers == 1 or e < 2 * self.workers:
            return [slice(0, e)]
        bounds = np.linspace(0, e, self.workers + 1).astype(int)
        return [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    def _map_elements(self, fn: Callable[[slice], np.ndarray]) -> np.ndarray:
        chunks = self._chunks()
        if len(chunks) == 1:
            return fn(chunks[0])
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            parts = list(pool.map(fn, chunks))
        return np.concatenate(parts, axis=0)

    # ------------------------------------------------------------------
    # residual

    def residual(self, t: float, u: np.ndarray) -> np.ndarray:
        """
        Time derivative of the evolved state.

        :param t: Stage time
        :param u: Evolved state ``(E, N, N, 5)``
        :return: ``(E, N, N, 5)``
        :raises AdmissibilityError: For non-physical states
        """
        basis, model = self.basis, self.model
        geo = self.geometry_at(t)
        q = self.physical_state(u, t)
        check_admissible(q, model, where="solution points")

        q_face = face_traces(basis, q)
        q_common, f_common = self._common_solution_and_flux(t, geo, q_face)

        viscous = model.viscous
        if viscous:
            grad = compute_gradients(basis, q, q_common, geo.volume, trace=q_face)
            grad_face = face_traces(basis, grad)
            f_common = f_common - self._common_viscous_flux(geo, q_common, grad_face)

        def volume_kernel(chunk: slice) -> np.ndarray:
            qc = q[chunk]
            f, g = inviscid_flux(qc, model)
            if viscous:
                fv, gv = viscous_flux(qc, grad[chunk], model)
                f, g = f - fv, g - gv
            ft, gt = compute_transformed_fluxes(qc, f, g, geo.volume.take(chunk))
            return -correct_flux(basis, ft, gt, f_common[chunk])

        rhs = np.empty_like(u)
        rhs[..., :4] = self._map_elements(volume_kernel)
        if self.gcl:
            rhs[..., 4] = gcl_rhs(basis, geo.volume, geo.faces, geo.normals)
        else:
            rhs[..., 4] = 0.0
        self.last_boundary_flux = f_common[self._bnd_cells, self._bnd_faces]
        return rhs

    def _face_frame(self, geo: Geometry, cells, faces):
        normal = geo.normals[cells, faces]
        length = np.linalg.norm(normal, axis=-1)
        unit = normal / length[..., None]
        vg = np.stack([geo.faces.x_t[cells, faces], geo.faces.y_t[cells, faces]], axis=-1)
        return normal, length, unit, vg

    def _common_solution_and_flux(self, t: float, geo: Geometry, q_face: np.ndarray):
        model, policy = self.model, self.policy
        q_common = np.zeros_like(q_face)
        f_common = np.zeros_like(q_face)

        # conforming interior faces
        cl, fl = self._int_l
        cr, fr = self._int_r
        if len(cl):
            rev = self._int_reverse
            ql = q_face[cl, fl]
            qr = q_face[cr, fr]
            qr = np.where(rev[:, None, None], qr[:, ::-1], qr)
            _, length, unit, vg = self._face_frame(geo, cl, fl)
            vgn = np.einsum("fkd,fkd->fk", vg, unit)
            flux = rusanov_flux(ql, qr, unit, vgn, model, policy) * length[..., None]
            qc = 0.5 * (ql + qr)
            q_common[cl, fl] = qc
            f_common[cl, fl] = flux
            q_common[cr, fr] = np.where(rev[:, None, None], qc[:, ::-1], qc)
            f_common[cr, fr] = np.where(rev[:, None, None], -flux[:, ::-1], -flux)

        # boundary faces
        for tag, index in self._bnd_groups.items():
            bc = self.boundaries[tag]
            cells, faces = self._bnd_cells[index], self._bnd_faces[index]
            qi = q_face[cells, faces]
            _, length, unit, vg = self._face_frame(geo, cells, faces)
            x, y = geo.faces.x[cells, faces], geo.faces.y[cells, faces]
            ghost = apply_boundary_condition(bc, qi, x, y, t, unit, vg, model, self.farfield_monitor, tag)
            check_admissible(ghost, model, where=f"boundary {tag!r}")
            vgn = np.einsum("fkd,fkd->fk", vg, unit)
            q_common[cells, faces] = 0.5 * (qi + ghost)
            f_common[cells, faces] = rusanov_flux(qi, ghost, unit, vgn, model, policy) * length[..., None]

        # sliding interfaces
        self.last_exchanges = []
        for iface in self.interfaces:
            sides = (iface.topology.inner, iface.topology.outer)
            traces = [
                _to_ccw(q_face[side.cells, side.faces], side.flip) for side in sides
            ]
            exchange = iface.inviscid_flux(iface.common_solution(t, traces[0], traces[1]))
            for side, qc, flux in zip(
                sides,
                (exchange.face_common_left, exchange.face_common_right),
                (exchange.face_flux_left, exchange.face_flux_right),
            ):
                q_common[side.cells, side.faces] = _to_ccw(qc, side.flip)
                f_common[side.cells, side.faces] = _to_ccw(flux, side.flip)
            self.last_exchanges.append(exchange)
        return q_common, f_common

    def _common_viscous_flux(self, geo: Geometry, q_common: np.ndarray, grad_face: np.ndarray) -> np.ndarray:
        model = self.model
        out = np.zeros_like(q_common)

        cl, fl = self._int_l
        cr, fr = self._int_r
        if len(cl):
            rev = self._int_reverse
            gl = grad_face[cl, fl]
            gr = grad_face[cr, fr]
            gr = np.where(rev[:, None, None, None], gr[:, ::-1], gr)
            normal = geo.normals[cl, fl]
            flux = normal_viscous_flux(q_common[cl, fl], 0.5 * (gl + gr), normal, model)
            out[cl, fl] = flux
            out[cr, fr] = np.where(rev[:, None, None], -flux[:, ::-1], -flux)

        for tag, index in self._bnd_groups.items():
            bc = self.boundaries[tag]
            cells, faces = self._bnd_cells[index], self._bnd_faces[index]
            out[cells, faces] = normal_viscous_flux(
                q_common[cells, faces], grad_face[cells, faces], geo.normals[cells, faces], model, bc.heat_flux
            )

        for iface, exchange in zip(self.interfaces, self.last_exchanges):
            sides = (iface.topology.inner, iface.topology.outer)
            grads = [_to_ccw(grad_face[s.cells, s.faces], s.flip) for s in sides]
            left, right = iface.viscous_flux(exchange, grads[0], grads[1])
            for side, flux in zip(sides, (left, right)):
                out[side.cells, side.faces] = _to_ccw(flux, side.flip)
        return out

    def face_state(self, t: float, u: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """
        Face traces of the solution and of its corrected gradient.

        :return: ``(q_face (E, 4, N, 4), grad_face (E, 4, N, 4, 2))``; the
            gradient is ``None`` for inviscid models
        """
        geo = self.geometry_at(t)
        q = self.physical_state(u, t)
        q_face = face_traces(self.basis, q)
        if not self.model.viscous:
            return q_face, None
        q_common, _ = self._common_solution_and_flux(t, geo, q_face)
        grad = compute_gradients(self.basis, q, q_common, geo.volume, trace=q_face)
        return q_face, face_traces(self.basis, grad)

    # ------------------------------------------------------------------
    # diagnostics

    def conservation_defect(self, rhs: np.ndarray) -> np.ndarray:
        """Global conservation error of the last residual evaluation."""
        return conservation_defect(self.basis, rhs[..., :4], self.last_boundary_flux)

    def interface_defect(self) -> float:
        """Largest face/mortar flux mismatch over the last exchanges."""
        return max(
            (iface.conservation_defect(ex) for iface, ex in zip(self.interfaces, self.last_exchanges)),
            default=0.0,
        )

    def wall_faces(self, tags: Sequence[str]) -> np.ndarray:
        """Indices into the boundary-face list for the given tags."""
        index = [self._bnd_groups[tag] for tag in tags if tag in self._bnd_groups]
        return np.concatenate(index) if index else np.zeros(0, dtype=np.int64)

    def boundary_face(self, index: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self._bnd_cells[index], self._bnd_faces[index]


_FIELDS = ("x", "y", "x_xi", "x_eta", "y_xi", "y_eta", "x_t", "y_t")


def _to_ccw(values: np.ndarray, flip: np.ndarray) -> np.ndarray:
    """Reverse the point order of flipped faces; the operation is its own inverse."""
    mask = flip.reshape((-1,) + (1,) * (values.ndim - 1))
    return np.where(mask, values[:, ::-1], values)
