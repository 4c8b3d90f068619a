"""
Weakly imposed boundary conditions.

Every condition produces an exterior (ghost) state at the face points. The
common solution on a boundary face is the average of the interior and ghost
states, the common inviscid flux is the Riemann flux between them and the
common gradient is the interior one.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..exceptions import ConfigurationError
from .gas import FluidModel, conservative, primitive

__all__ = [
    "BoundaryKind",
    "BoundaryCondition",
    "StateFunction",
    "apply_boundary_condition",
    "FarfieldMonitor",
]

logger = logging.getLogger(__name__)

#: ``state(t, x, y) -> Q`` with ``Q.shape == x.shape + (4,)``
StateFunction = Callable[[float, np.ndarray, np.ndarray], np.ndarray]


class BoundaryKind(str, enum.Enum):
    """Supported boundary treatments."""

    DIRICHLET = "dirichlet"
    NOSLIP_ISOTHERMAL = "noslip_isothermal"
    NOSLIP_ADIABATIC = "noslip_adiabatic"
    CHARACTERISTIC_FARFIELD = "characteristic_farfield"

    @staticmethod
    def parse(value: Union[str, BoundaryKind]) -> BoundaryKind:
        """
        :raises ConfigurationError: For an unknown kind
        """
        try:
            return BoundaryKind(value)
        except ValueError:
            raise ConfigurationError(f"Unknown boundary condition kind {value!r}", key="boundary")

    @property
    def is_wall(self) -> bool:
        return self in (BoundaryKind.NOSLIP_ISOTHERMAL, BoundaryKind.NOSLIP_ADIABATIC)


@dataclass(frozen=True)
class BoundaryCondition:
    """
    Boundary condition attached to a face tag.

    :param kind: Treatment
    :param state: Exterior state for Dirichlet faces and the free stream for
        far-field faces; a constant conservative vector or a function of ``(t, x, y)``
    :param wall_temperature: Wall temperature of isothermal walls
    :param wall_omega: Angular speed of a rotating wall about ``wall_center``;
        ``None`` makes the wall move with the grid
    :param wall_center: Rotation center of the wall
    """

    kind: BoundaryKind
    state: Optional[Union[StateFunction, Sequence[float], np.ndarray]] = None
    wall_temperature: Optional[float] = None
    wall_omega: Optional[float] = None
    wall_center: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        kind = BoundaryKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (BoundaryKind.DIRICHLET, BoundaryKind.CHARACTERISTIC_FARFIELD) and self.state is None:
            raise ConfigurationError(f"{kind.value} boundaries need a state", key="boundary")
        if kind is BoundaryKind.NOSLIP_ISOTHERMAL and self.wall_temperature is None:
            raise ConfigurationError("Isothermal walls need a wall temperature", key="boundary")

    @property
    def heat_flux(self) -> bool:
        """Whether the common viscous flux keeps the conduction term."""
        return self.kind is not BoundaryKind.NOSLIP_ADIABATIC

    def exterior_state(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if callable(self.state):
            return np.asarray(self.state(t, x, y), dtype=float)
        return np.broadcast_to(np.asarray(self.state, dtype=float), np.shape(x) + (4,))

    def wall_velocity(self, x: np.ndarray, y: np.ndarray, grid_velocity: np.ndarray) -> np.ndarray:
        if self.wall_omega is None:
            return grid_velocity
        cx, cy = self.wall_center
        return np.stack([-self.wall_omega * (y - cy), self.wall_omega * (x - cx)], axis=-1)


class FarfieldMonitor:
    """
    Warns when a far-field boundary switches between inflow and outflow.

    The regime of every face point is remembered per boundary tag. A change
    at any point logs one warning, at most once per ``interval`` of
    simulated time for each tag.

    :param interval: Minimum simulated time between warnings for one tag
    """

    def __init__(self, interval: float = 1.0) -> None:
        self.interval = interval
        self._regime: Dict[str, np.ndarray] = {}
        self._warned_at: Dict[str, float] = {}

    def observe(self, tag: str, t: float, outflow: np.ndarray) -> bool:
        """Record the regime of ``tag`` at time ``t``; return whether a warning was logged."""
        previous = self._regime.get(tag)
        self._regime[tag] = outflow.copy()
        if previous is None or previous.shape != outflow.shape:
            return False
        flipped = previous != outflow
        if not np.any(flipped):
            return False
        last = self._warned_at.get(tag)
        if last is not None and abs(t - last) < self.interval:
            return False
        self._warned_at[tag] = t
        to_out = int(np.count_nonzero(flipped & outflow))
        to_in = int(np.count_nonzero(flipped & ~outflow))
        logger.warning(
            f"Far-field boundary {tag!r} switched regime at t={t:.6g}: "
            f"{to_out} points to outflow, {to_in} to inflow"
        )
        return True


def apply_boundary_condition(
    bc: BoundaryCondition,
    q_interior: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    t: float,
    normal: np.ndarray,
    grid_velocity: np.ndarray,
    model: FluidModel,
    monitor: Optional[FarfieldMonitor] = None,
    tag: str = "",
) -> np.ndarray:
    """
    Ghost state for one group of boundary face points.

    :param bc: Boundary condition
    :param q_interior: Interior traces ``(..., 4)``
    :param x: Face point coordinates
    :param y: Face point coordinates
    :param t: Time
    :param normal: Unit outward normal ``(..., 2)``
    :param grid_velocity: Grid velocity ``(..., 2)``
    :param model: Fluid model
    :param monitor: Receives the inflow/outflow regime of far-field points
    :param tag: Boundary tag reported to ``monitor``
    :return: Exterior state ``(..., 4)``
    :raises ConfigurationError: For an unknown kind
    """
    kind = BoundaryKind.parse(bc.kind)
    if kind is BoundaryKind.DIRICHLET:
        return np.array(bc.exterior_state(t, x, y), dtype=float)

    rho, u, v, p = primitive(q_interior, model)
    if kind.is_wall:
        wall = bc.wall_velocity(x, y, grid_velocity)
        if kind is BoundaryKind.NOSLIP_ISOTHERMAL:
            rho = p / (model.gas_constant * bc.wall_temperature)
        return conservative(rho, wall[..., 0], wall[..., 1], p, model)

    ghost, outflow = _characteristic_farfield(bc.exterior_state(t, x, y), rho, u, v, p, normal, model)
    if monitor is not None:
        monitor.observe(tag, t, outflow)
    return ghost


def _characteristic_farfield(q_inf, rho, u, v, p, normal, model: FluidModel) -> Tuple[np.ndarray, np.ndarray]:
    gamma = model.gamma
    rho_f, u_f, v_f, p_f = primitive(q_inf, model)
    nx, ny = normal[..., 0], normal[..., 1]
    vn_i = u * nx + v * ny
    vn_f = u_f * nx + v_f * ny
    c_i = np.sqrt(gamma * p / rho)
    c_f = np.sqrt(gamma * p_f / rho_f)

    r_plus = vn_i + 2.0 * c_i / (gamma - 1.0)
    r_minus = vn_f - 2.0 * c_f / (gamma - 1.0)
    vn_b = 0.5 * (r_plus + r_minus)
    c_b = 0.25 * (gamma - 1.0) * (r_plus - r_minus)

    outflow = vn_b > 0.0
    # tangential velocity and entropy come from the upwind side
    entropy = np.where(outflow, p / rho**gamma, p_f / rho_f**gamma)
    ut = np.where(outflow, u - vn_i * nx, u_f - vn_f * nx)
    vt = np.where(outflow, v - vn_i * ny, v_f - vn_f * ny)

    rho_b = (c_b**2 / (gamma * entropy)) ** (1.0 / (gamma - 1.0))
    p_b = rho_b * c_b**2 / gamma
    ghost = conservative(rho_b, ut + vn_b * nx, vt + vn_b * ny, p_b, model)

    supersonic_in = (vn_i <= -c_i)
    supersonic_out = (vn_i >= c_i)
    interior = conservative(rho, u, v, p, model)
    ghost = np.where(supersonic_in[..., None], np.broadcast_to(q_inf, ghost.shape), ghost)
    ghost = np.where(supersonic_out[..., None], interior, ghost)
    return ghost, outflow
