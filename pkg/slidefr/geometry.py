"""
Element mappings and moving-grid metrics.

Reference coordinates are ``(xi, eta)`` on the unit square. Local faces are
numbered ``0: eta = 0``, ``1: xi = 1``, ``2: eta = 1``, ``3: xi = 0`` and each
face is parameterized by the reference coordinate that runs along it, so the
natural direction of faces 0 and 1 follows the counterclockwise corner order
while faces 2 and 3 run against it.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    ConfigurationError,
    DegenerateFaceError,
    GeometryError,
    InvertedElementError,
)

__all__ = [
    "FACE_CORNERS",
    "LineCurve",
    "ArcCurve",
    "Curve",
    "serendipity_nodes",
    "serendipity_shape",
    "IsoElementMap",
    "TransfiniteElementMap",
    "ElementMap",
    "MetricState",
    "MeshMotion",
    "RigidRotation",
    "VertexOscillation",
    "map_iso",
    "map_transfinite_element",
    "metrics_at",
    "face_normal",
    "face_scaled_normal",
    "arc_iso_element",
    "transfinite_with_arcs",
    "polygon_area",
]

#: corner indices (start, end) of each local face in the natural direction
FACE_CORNERS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 2), (3, 2), (0, 3))

_CORNER_REF = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


# ---------------------------------------------------------------------------
# face curves


@dataclass(frozen=True)
class LineCurve:
    """Straight segment from ``start`` to ``end``."""

    start: np.ndarray
    end: np.ndarray

    def point(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)[..., None]
        return (1.0 - s) * self.start + s * self.end

    def tangent(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(self.end - self.start, s.shape + (2,)).copy()

    def reversed(self) -> LineCurve:
        return LineCurve(self.end, self.start)


@dataclass(frozen=True)
class ArcCurve:
    """
    Circular arc with the angle affine in the curve parameter.

    :param center: Arc center
    :param radius: Arc radius
    :param theta1: Angle at ``s = 0`` (radians)
    :param theta2: Angle at ``s = 1``; ``theta2 < theta1`` runs clockwise
    """

    center: np.ndarray
    radius: float
    theta1: float
    theta2: float

    @staticmethod
    def through(center: Sequence[float], start: Sequence[float], end: Sequence[float]) -> ArcCurve:
        """
        Short arc about ``center`` from ``start`` to ``end``.

        The radius is taken from ``start``.
        """
        c = np.asarray(center, dtype=float)
        a = np.asarray(start, dtype=float) - c
        b = np.asarray(end, dtype=float) - c
        radius = float(np.hypot(*a))
        if radius == 0.0:
            raise GeometryError("Arc endpoint coincides with its center")
        t1 = math.atan2(a[1], a[0])
        sweep = math.atan2(b[1], b[0]) - t1
        sweep = (sweep + math.pi) % (2.0 * math.pi) - math.pi
        return ArcCurve(c, radius, t1, t1 + sweep)

    @property
    def sweep(self) -> float:
        return self.theta2 - self.theta1

    @property
    def length(self) -> float:
        return abs(self.sweep) * self.radius

    def angle(self, s: np.ndarray) -> np.ndarray:
        return self.theta1 + np.asarray(s, dtype=float) * self.sweep

    def point(self, s: np.ndarray) -> np.ndarray:
        theta = self.angle(s)
        return self.center + self.radius * np.stack([np.cos(theta), np.sin(theta)], axis=-1)

    def tangent(self, s: np.ndarray) -> np.ndarray:
        theta = self.angle(s)
        scale = self.radius * self.sweep
        return scale * np.stack([-np.sin(theta), np.cos(theta)], axis=-1)

    def reversed(self) -> ArcCurve:
        return ArcCurve(self.center, self.radius, self.theta2, self.theta1)


Curve = Union[LineCurve, ArcCurve]


def face_normal(curve: Curve, s: np.ndarray | float, sign: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Scaled and unit normal of a parameterized curve.

    ``N = sign * (y_s, -x_s)``, the right-hand normal of the curve direction.
    Its magnitude is the length scaling of the parameterization.

    :param curve: Face or mortar curve
    :param s: Curve parameter(s)
    :param sign: ``+1`` or ``-1`` to select the side
    :return: ``(N, n)``
    :raises DegenerateFaceError: If the curve has zero length
    """
    t = curve.tangent(np.asarray(s, dtype=float))
    scaled = sign * np.stack([t[..., 1], -t[..., 0]], axis=-1)
    norm = np.linalg.norm(scaled, axis=-1, keepdims=True)
    if np.any(norm == 0.0):
        raise DegenerateFaceError("Zero-length face")
    return scaled, scaled / norm


# ---------------------------------------------------------------------------
# serendipity shape functions


def serendipity_nodes(k: int) -> np.ndarray:
    """
    Reference node layout for ``k`` in {4, 8, 12}.

    Corners counterclockwise, then edge nodes edge by edge in counterclockwise
    order.

    :raises ConfigurationError: For unsupported ``k``
    """
    if k == 4:
        return _CORNER_REF.copy()
    if k == 8:
        edges = [[0.5, 0.0], [1.0, 0.5], [0.5, 1.0], [0.0, 0.5]]
    elif k == 12:
        a, b = 1.0 / 3.0, 2.0 / 3.0
        edges = [[a, 0.0], [b, 0.0], [1.0, a], [1.0, b], [b, 1.0], [a, 1.0], [0.0, b], [0.0, a]]
    else:
        raise ConfigurationError(f"Unsupported iso-parametric node count K={k}", key="K")
    return np.vstack([_CORNER_REF, np.asarray(edges)])


_MONOMIALS = {
    4: [(0, 0), (1, 0), (0, 1), (1, 1)],
    8: [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (2, 1), (1, 2)],
    12: [
        (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
        (3, 0), (2, 1), (1, 2), (0, 3), (3, 1), (1, 3),
    ],
}


@functools.lru_cache(maxsize=None)
def _serendipity_coefficients(k: int) -> np.ndarray:
    nodes = serendipity_nodes(k)
    # centered coordinates keep the Vandermonde well conditioned
    u = 2.0 * nodes - 1.0
    vander = np.array([[x**p * y**q for p, q in _MONOMIALS[k]] for x, y in u])
    return np.linalg.inv(vander)


def serendipity_shape(
    k: int, xi: np.ndarray, eta: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Serendipity shape functions and their reference derivatives.

    :param k: Node count, 4, 8 or 12
    :param xi: Reference coordinates
    :param eta: Reference coordinates (same shape as ``xi``)
    :return: ``(M, M_xi, M_eta)`` each of shape ``xi.shape + (k,)``
    :raises ConfigurationError: For unsupported ``k``
    """
    if k not in _MONOMIALS:
        raise ConfigurationError(f"Unsupported iso-parametric node count K={k}", key="K")
    coeff = _serendipity_coefficients(k)
    u = 2.0 * np.asarray(xi, dtype=float) - 1.0
    v = 2.0 * np.asarray(eta, dtype=float) - 1.0
    mono = np.stack([u**p * v**q for p, q in _MONOMIALS[k]], axis=-1)
    du = np.stack(
        [p * u ** max(p - 1, 0) * v**q if p else np.zeros_like(u) for p, q in _MONOMIALS[k]],
        axis=-1,
    )
    dv = np.stack(
        [q * u**p * v ** max(q - 1, 0) if q else np.zeros_like(v) for p, q in _MONOMIALS[k]],
        axis=-1,
    )
    # chain rule factor 2 from u = 2 xi - 1
    return mono @ coeff, 2.0 * (du @ coeff), 2.0 * (dv @ coeff)


# ---------------------------------------------------------------------------
# element maps


@dataclass(frozen=True)
class IsoElementMap:
    """
    Iso-parametric element with ``K`` nodes.

    :param nodes: Node coordinates in :func:`serendipity_nodes` order, shape ``(K, 2)``
    """

    nodes: np.ndarray

    @property
    def k(self) -> int:
        return len(self.nodes)

    @property
    def corners(self) -> np.ndarray:
        return self.nodes[:4]

    @property
    def straight(self) -> bool:
        return self.k == 4

    def evaluate(self, xi: np.ndarray, eta: np.ndarray) -> Tuple[np.ndarray, ...]:
        m, mxi, meta = serendipity_shape(self.k, xi, eta)
        x, y = m @ self.nodes[:, 0], m @ self.nodes[:, 1]
        return x, y, mxi @ self.nodes[:, 0], meta @ self.nodes[:, 0], mxi @ self.nodes[:, 1], meta @ self.nodes[:, 1]


@dataclass(frozen=True)
class TransfiniteElementMap:
    """
    Transfinite (Coons) blend of four face curves.

    :param corners: Corner coordinates counterclockwise, shape ``(4, 2)``
    :param curves: One curve per local face, each in its natural direction
    :raises GeometryError: If a curve does not start and end on its corners
    """

    corners: np.ndarray
    curves: Tuple[Curve, Curve, Curve, Curve]

    def __post_init__(self) -> None:
        for face, (a, b) in enumerate(FACE_CORNERS):
            curve = self.curves[face]
            ends = curve.point(np.array([0.0, 1.0]))
            scale = max(1.0, float(np.max(np.abs(self.corners))))
            if not (
                np.allclose(ends[0], self.corners[a], rtol=0.0, atol=1e-10 * scale)
                and np.allclose(ends[1], self.corners[b], rtol=0.0, atol=1e-10 * scale)
            ):
                raise GeometryError(f"Face {face} curve does not join corners {a} and {b}")

    @staticmethod
    def straight_sided(corners: np.ndarray) -> TransfiniteElementMap:
        c = np.asarray(corners, dtype=float)
        curves = tuple(LineCurve(c[a], c[b]) for a, b in FACE_CORNERS)
        return TransfiniteElementMap(c, curves)  # type: ignore[arg-type]

    @property
    def straight(self) -> bool:
        return all(isinstance(curve, LineCurve) for curve in self.curves)

    def evaluate(self, xi: np.ndarray, eta: np.ndarray) -> Tuple[np.ndarray, ...]:
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        c0, c1, c2, c3 = self.curves
        p0, p1, p2, p3 = self.corners
        a, b = xi[..., None], eta[..., None]

        f0, f2 = c0.point(xi), c2.point(xi)
        f1, f3 = c1.point(eta), c3.point(eta)
        d0, d2 = c0.tangent(xi), c2.tangent(xi)
        d1, d3 = c1.tangent(eta), c3.tangent(eta)

        pos = (
            (1 - b) * f0 + b * f2 + (1 - a) * f3 + a * f1
            - ((1 - a) * (1 - b) * p0 + a * (1 - b) * p1 + a * b * p2 + (1 - a) * b * p3)
        )
        dxi = (
            (1 - b) * d0 + b * d2 - f3 + f1
            - (-(1 - b) * p0 + (1 - b) * p1 + b * p2 - b * p3)
        )
        deta = (
            -f0 + f2 + (1 - a) * d3 + a * d1
            - (-(1 - a) * p0 - a * p1 + a * p2 + (1 - a) * p3)
        )
        return pos[..., 0], pos[..., 1], dxi[..., 0], deta[..., 0], dxi[..., 1], deta[..., 1]


ElementMap = Union[IsoElementMap, TransfiniteElementMap]


# ---------------------------------------------------------------------------
# metrics and motion


@dataclass(frozen=True)
class MetricState:
    """
    Mapping values and first derivatives at a set of points.

    All fields share one shape. ``x_t``/``y_t`` are the grid velocity.
    """

    x: np.ndarray
    y: np.ndarray
    x_xi: np.ndarray
    x_eta: np.ndarray
    y_xi: np.ndarray
    y_eta: np.ndarray
    x_t: np.ndarray
    y_t: np.ndarray

    @property
    def jacobian(self) -> np.ndarray:
        return self.x_xi * self.y_eta - self.x_eta * self.y_xi

    @property
    def grid_velocity(self) -> np.ndarray:
        return np.stack([self.x_t, self.y_t], axis=-1)

    def take(self, index) -> MetricState:
        return MetricState(*(getattr(self, f)[index] for f in _METRIC_FIELDS))

    @staticmethod
    def static(x, y, x_xi, x_eta, y_xi, y_eta) -> MetricState:
        zero = np.zeros_like(np.asarray(x, dtype=float))
        return MetricState(x, y, x_xi, x_eta, y_xi, y_eta, zero, zero.copy())

    @staticmethod
    def concatenate(states: Sequence[MetricState], axis: int = 0) -> MetricState:
        return MetricState(
            *(np.concatenate([getattr(s, f) for s in states], axis=axis) for f in _METRIC_FIELDS)
        )


_METRIC_FIELDS = ("x", "y", "x_xi", "x_eta", "y_xi", "y_eta", "x_t", "y_t")


def face_scaled_normal(state: MetricState, face: int) -> np.ndarray:
    """
    Outward scaled normal on a local face from metrics sampled on that face.

    :param state: Metrics at the face points
    :param face: Local face index 0..3
    :return: Array of shape ``state.x.shape + (2,)``
    """
    if face == 0:
        n = (state.y_xi, -state.x_xi)
    elif face == 1:
        n = (state.y_eta, -state.x_eta)
    elif face == 2:
        n = (-state.y_xi, state.x_xi)
    elif face == 3:
        n = (-state.y_eta, state.x_eta)
    else:
        raise ValueError(f"Local face index must be 0..3, got {face}")
    return np.stack(n, axis=-1)


class MeshMotion(Protocol):
    """Prescribed motion applied on top of the reference (t = 0) mapping."""

    def apply(
        self,
        state: MetricState,
        t: float,
        corners: Optional[np.ndarray] = None,
        shapes: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None,
    ) -> MetricState: ...

    @property
    def requires_straight(self) -> bool: ...


@dataclass(frozen=True)
class RigidRotation:
    """
    Rigid rotation about ``center`` at angular speed ``omega`` (rad per time unit).

    :param center: Rotation center
    :param omega: Angular speed, counterclockwise positive
    :param phase: Angle at ``t = 0``
    """

    center: Tuple[float, float] = (0.0, 0.0)
    omega: float = 0.0
    phase: float = 0.0

    requires_straight = False

    def angle(self, t: float) -> float:
        return self.phase + self.omega * t

    def apply(self, state: MetricState, t: float, corners=None, shapes=None) -> MetricState:
        theta = self.angle(t)
        cx, cy = self.center
        c, s = math.cos(theta), math.sin(theta)
        dx, dy = state.x - cx, state.y - cy
        x = cx + c * dx - s * dy
        y = cy + s * dx + c * dy
        return MetricState(
            x=x,
            y=y,
            x_xi=c * state.x_xi - s * state.y_xi,
            x_eta=c * state.x_eta - s * state.y_eta,
            y_xi=s * state.x_xi + c * state.y_xi,
            y_eta=s * state.x_eta + c * state.y_eta,
            x_t=-self.omega * (y - cy),
            y_t=self.omega * (x - cx),
        )

    def rotate_points(self, points: np.ndarray, t: float) -> np.ndarray:
        theta = self.angle(t)
        c, s = math.cos(theta), math.sin(theta)
        d = np.asarray(points, dtype=float) - self.center
        return np.asarray(self.center) + d @ np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class VertexOscillation:
    """
    Analytic vertex displacement for straight-sided elements.

    Each vertex moves by ``amplitude * sin(frequency * t) * bump(x0, y0) * direction``
    where the bump is ``sin(pi (x - x_min) / Lx) * sin(pi (y - y_min) / Ly)`` over
    ``box``, so vertices on the box boundary stay fixed. Interior points follow
    the bilinear interpolation of the vertex motion.

    :param amplitude: Peak displacement at the box center
    :param frequency: Angular frequency
    :param box: ``(x_min, y_min, x_max, y_max)``
    :param direction: Unit displacement direction
    """

    amplitude: float
    frequency: float
    box: Tuple[float, float, float, float]
    direction: Tuple[float, float] = (0.0, 1.0)

    requires_straight = True

    def bump(self, points: np.ndarray) -> np.ndarray:
        x0, y0, x1, y1 = self.box
        p = np.asarray(points, dtype=float)
        return np.sin(np.pi * (p[..., 0] - x0) / (x1 - x0)) * np.sin(
            np.pi * (p[..., 1] - y0) / (y1 - y0)
        )

    def displacement(self, points: np.ndarray, t: float) -> Tuple[np.ndarray, np.ndarray]:
        """Vertex displacement and velocity, each of shape ``points.shape``."""
        e = np.asarray(self.direction, dtype=float)
        b = self.bump(points)[..., None]
        d = self.amplitude * math.sin(self.frequency * t) * b * e
        v = self.amplitude * self.frequency * math.cos(self.frequency * t) * b * e
        return d, v

    def apply(self, state: MetricState, t: float, corners=None, shapes=None) -> MetricState:
        if corners is None or shapes is None:
            raise GeometryError("Vertex oscillation needs element corners and bilinear shape tables")
        m, mxi, meta = shapes
        d, v = self.displacement(corners, t)
        return MetricState(
            x=state.x + np.einsum("pk,ek->ep", m, d[..., 0]),
            y=state.y + np.einsum("pk,ek->ep", m, d[..., 1]),
            x_xi=state.x_xi + np.einsum("pk,ek->ep", mxi, d[..., 0]),
            x_eta=state.x_eta + np.einsum("pk,ek->ep", meta, d[..., 0]),
            y_xi=state.y_xi + np.einsum("pk,ek->ep", mxi, d[..., 1]),
            y_eta=state.y_eta + np.einsum("pk,ek->ep", meta, d[..., 1]),
            x_t=state.x_t + np.einsum("pk,ek->ep", m, v[..., 0]),
            y_t=state.y_t + np.einsum("pk,ek->ep", m, v[..., 1]),
        )


MotionLike = Union[RigidRotation, VertexOscillation]


def _reference_state(el: ElementMap, xi, eta) -> MetricState:
    return MetricState.static(*el.evaluate(np.asarray(xi, dtype=float), np.asarray(eta, dtype=float)))


def metrics_at(
    el: ElementMap,
    t: float,
    xi: np.ndarray | float,
    eta: np.ndarray | float,
    motion: Optional[MotionLike] = None,
    element: Optional[int] = None,
) -> MetricState:
    """
    Analytic metrics of a (possibly moving) element.

    :param el: Element mapping in its reference configuration
    :param t: Time
    :param xi: Reference coordinate(s)
    :param eta: Reference coordinate(s)
    :param motion: Prescribed motion, ``None`` for a static element
    :param element: Element id used in error messages
    :return: Metric state at the requested points
    :raises InvertedElementError: If ``|J| <= 0`` anywhere
    :raises GeometryError: If a vertex motion is requested for a curved element
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    state = _reference_state(el, xi, eta)
    if motion is not None:
        if motion.requires_straight:
            if not el.straight:
                raise GeometryError("Vertex motion requires straight-sided elements", element=element)
            shapes = serendipity_shape(4, xi, eta)
            state = motion.apply(
                MetricState(*(getattr(state, f)[None] for f in _METRIC_FIELDS)),
                t,
                corners=np.asarray(el.corners)[None],
                shapes=shapes,  # type: ignore[arg-type]
            ).take(0)
        else:
            state = motion.apply(state, t)
    if np.any(state.jacobian <= 0.0):
        raise InvertedElementError("Non-positive Jacobian determinant", element=element)
    return state


def map_iso(
    el: IsoElementMap, t: float, xi, eta, motion: Optional[MotionLike] = None
) -> np.ndarray:
    """
    Physical position of reference points under an iso-parametric map.

    :return: Array of shape ``(..., 2)``
    """
    state = metrics_at(el, t, xi, eta, motion) if motion is not None else _reference_state(el, xi, eta)
    return np.stack([state.x, state.y], axis=-1)


def map_transfinite_element(
    corners: np.ndarray,
    curves: Sequence[Curve],
    t: float,
    xi,
    eta,
    motion: Optional[MotionLike] = None,
) -> np.ndarray:
    """
    Physical position of reference points under a transfinite blend.

    :param corners: Corner coordinates counterclockwise
    :param curves: Face curves in natural direction
    :return: Array of shape ``(..., 2)``
    :raises GeometryError: If a curve does not join its corners
    """
    el = TransfiniteElementMap(np.asarray(corners, dtype=float), tuple(curves))  # type: ignore[arg-type]
    state = metrics_at(el, t, xi, eta, motion) if motion is not None else _reference_state(el, xi, eta)
    return np.stack([state.x, state.y], axis=-1)


def arc_iso_element(corners: np.ndarray, k: int, arcs: dict) -> IsoElementMap:
    """
    Iso-parametric element whose edge nodes sit on exact arcs.

    :param corners: Corner coordinates counterclockwise
    :param k: Node count (4 ignores the arcs)
    :param arcs: ``{local_face: center}`` of circular faces
    :return: Element map
    """
    corners = np.asarray(corners, dtype=float)
    ref = serendipity_nodes(k)
    nodes = [c for c in corners]
    straight = TransfiniteElementMap.straight_sided(corners)
    for xi, eta in ref[4:]:
        face = _face_of(xi, eta)
        s = xi if face in (0, 2) else eta
        if face in arcs:
            a, b = FACE_CORNERS[face]
            curve = ArcCurve.through(arcs[face], corners[a], corners[b])
            nodes.append(curve.point(s))
        else:
            nodes.append(straight.curves[face].point(s))
    return IsoElementMap(np.asarray(nodes))


def _face_of(xi: float, eta: float) -> int:
    if eta == 0.0:
        return 0
    if xi == 1.0:
        return 1
    if eta == 1.0:
        return 2
    return 3


def transfinite_with_arcs(corners: np.ndarray, arcs: dict) -> TransfiniteElementMap:
    """
    Transfinite element with exact arcs on the listed faces.

    :param corners: Corner coordinates counterclockwise
    :param arcs: ``{local_face: center}``
    """
    corners = np.asarray(corners, dtype=float)
    curves = []
    for face, (a, b) in enumerate(FACE_CORNERS):
        if face in arcs:
            curves.append(ArcCurve.through(arcs[face], corners[a], corners[b]))
        else:
            curves.append(LineCurve(corners[a], corners[b]))
    return TransfiniteElementMap(corners, tuple(curves))  # type: ignore[arg-type]


def polygon_area(points: np.ndarray) -> float:
    """Signed shoelace area of a closed polygon."""
    p = np.asarray(points, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

