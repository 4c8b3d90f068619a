"""
Ideal-gas model and the pointwise Navier-Stokes fluxes.

Conservative states are arrays whose last axis holds ``(rho, rho u, rho v, E)``.
Gradients carry two trailing axes ``(variable, direction)``. Inputs are
nondimensional with free-stream density and speed equal to one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..exceptions import AdmissibilityError, ConfigurationError

__all__ = [
    "SoundSpeedPolicy",
    "FluidModel",
    "primitive",
    "conservative",
    "pressure",
    "temperature",
    "sound_speed",
    "inviscid_flux",
    "viscous_flux",
    "normal_viscous_flux",
    "rusanov_flux",
    "check_admissible",
]


class SoundSpeedPolicy(str, enum.Enum):
    """State the Rusanov dissipation speed is computed from."""

    AVERAGE = "average"
    MAX_SIDES = "max_sides"


@dataclass(frozen=True)
class FluidModel:
    """
    Calorically perfect gas with constant viscosity.

    :param gamma: Ratio of specific heats
    :param gas_constant: Specific gas constant
    :param mu: Dynamic viscosity; zero for inviscid flow
    :param prandtl: Prandtl number
    """

    gamma: float = 1.4
    gas_constant: float = 1.0
    mu: float = 0.0
    prandtl: float = 0.72

    def __post_init__(self) -> None:
        if self.gamma <= 1.0:
            raise ConfigurationError(f"gamma must exceed 1, got {self.gamma}", key="fluid.gamma")
        if self.gas_constant <= 0.0:
            raise ConfigurationError("gas constant must be positive", key="fluid.gas_constant")
        if self.mu < 0.0:
            raise ConfigurationError("viscosity must be non-negative", key="fluid.reynolds")
        if self.prandtl <= 0.0:
            raise ConfigurationError("Prandtl number must be positive", key="fluid.prandtl")

    @property
    def cp(self) -> float:
        return self.gamma * self.gas_constant / (self.gamma - 1.0)

    @property
    def kappa(self) -> float:
        return self.mu * self.cp / self.prandtl

    @property
    def bulk_viscosity(self) -> float:
        return -2.0 / 3.0 * self.mu

    @property
    def viscous(self) -> bool:
        return self.mu > 0.0

    @staticmethod
    def from_groups(
        mach: float,
        reynolds: Optional[float] = None,
        prandtl: float = 0.72,
        gamma: float = 1.4,
        gas_constant: Optional[float] = None,
    ) -> FluidModel:
        """
        Model from nondimensional groups with unit free-stream density, speed and temperature.

        The free-stream pressure is ``1 / (gamma Ma^2)`` and, unless given, the
        gas constant equals it. ``reynolds=None`` gives inviscid flow.
        """
        if mach <= 0.0:
            raise ConfigurationError(f"Mach number must be positive, got {mach}", key="fluid.mach")
        if reynolds is not None and reynolds <= 0.0:
            raise ConfigurationError(
                f"Reynolds number must be positive, got {reynolds}", key="fluid.reynolds"
            )
        r = gas_constant if gas_constant is not None else 1.0 / (gamma * mach**2)
        return FluidModel(
            gamma=gamma,
            gas_constant=r,
            mu=0.0 if reynolds is None else 1.0 / reynolds,
            prandtl=prandtl,
        )

    def freestream_pressure(self, mach: float) -> float:
        return 1.0 / (self.gamma * mach**2)


def primitive(q: np.ndarray, model: FluidModel) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(rho, u, v, p)`` from conservative variables."""
    rho = q[..., 0]
    u = q[..., 1] / rho
    v = q[..., 2] / rho
    p = (model.gamma - 1.0) * (q[..., 3] - 0.5 * rho * (u * u + v * v))
    return rho, u, v, p


def conservative(rho, u, v, p, model: FluidModel) -> np.ndarray:
    """Conservative variables from primitives."""
    rho, u, v, p = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (rho, u, v, p)))
    energy = p / (model.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return np.stack([rho, rho * u, rho * v, energy], axis=-1)


def pressure(q: np.ndarray, model: FluidModel) -> np.ndarray:
    return primitive(q, model)[3]


def temperature(q: np.ndarray, model: FluidModel) -> np.ndarray:
    rho, _, _, p = primitive(q, model)
    return p / (rho * model.gas_constant)


def sound_speed(q: np.ndarray, model: FluidModel) -> np.ndarray:
    rho, _, _, p = primitive(q, model)
    return np.sqrt(model.gamma * p / rho)


def inviscid_flux(q: np.ndarray, model: FluidModel) -> Tuple[np.ndarray, np.ndarray]:
    """Euler fluxes ``(F, G)`` in the x and y directions."""
    rho, u, v, p = primitive(q, model)
    e = q[..., 3]
    f = np.stack([rho * u, rho * u * u + p, rho * u * v, (e + p) * u], axis=-1)
    g = np.stack([rho * v, rho * u * v, rho * v * v + p, (e + p) * v], axis=-1)
    return f, g


def viscous_flux(
    q: np.ndarray, grad: np.ndarray, model: FluidModel, heat_flux: bool = True
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Viscous fluxes from conservative variables and their gradients.

    For a fixed state the result is linear in ``grad``.

    :param q: State ``(..., 4)``
    :param grad: Gradients of the conservative variables ``(..., 4, 2)``
    :param model: Fluid model
    :param heat_flux: Drop the conduction term when ``False``
    :return: ``(F_vis, G_vis)``, each ``(..., 4)``
    """
    rho, u, v, p = primitive(q, model)
    d_rho = grad[..., 0, :]
    du = (grad[..., 1, :] - u[..., None] * d_rho) / rho[..., None]
    dv = (grad[..., 2, :] - v[..., None] * d_rho) / rho[..., None]
    dp = (model.gamma - 1.0) * (
        grad[..., 3, :]
        - u[..., None] * grad[..., 1, :]
        - v[..., None] * grad[..., 2, :]
        + 0.5 * (u * u + v * v)[..., None] * d_rho
    )
    dt = (dp - (p / rho)[..., None] * d_rho) / (rho * model.gas_constant)[..., None]

    mu, lam = model.mu, model.bulk_viscosity
    div = du[..., 0] + dv[..., 1]
    txx = 2.0 * mu * du[..., 0] + lam * div
    tyy = 2.0 * mu * dv[..., 1] + lam * div
    txy = mu * (du[..., 1] + dv[..., 0])
    kappa = model.kappa if heat_flux else 0.0
    zero = np.zeros_like(txx)
    f = np.stack([zero, txx, txy, u * txx + v * txy + kappa * dt[..., 0]], axis=-1)
    g = np.stack([zero, txy, tyy, u * txy + v * tyy + kappa * dt[..., 1]], axis=-1)
    return f, g


def normal_viscous_flux(
    q: np.ndarray, grad: np.ndarray, normal: np.ndarray, model: FluidModel, heat_flux: bool = True
) -> np.ndarray:
    """``F_vis n_x + G_vis n_y``; ``normal`` may be scaled."""
    f, g = viscous_flux(q, grad, model, heat_flux=heat_flux)
    return f * normal[..., 0:1] + g * normal[..., 1:2]


def rusanov_flux(
    q_left: np.ndarray,
    q_right: np.ndarray,
    normal: np.ndarray,
    grid_normal_speed: np.ndarray | float,
    model: FluidModel,
    policy: SoundSpeedPolicy = SoundSpeedPolicy.AVERAGE,
) -> np.ndarray:
    """
    Moving-grid Rusanov flux per unit face length.

    ``0.5 [(F_L + F_R) . n - lambda (Q_R - Q_L)] - (v_g . n) Q_com`` with
    ``lambda = |(v_avg - v_g) . n| + c``.

    :param q_left: Interior state ``(..., 4)``
    :param q_right: Exterior state ``(..., 4)``
    :param normal: Unit normal from left to right ``(..., 2)``
    :param grid_normal_speed: ``v_g . n``
    :param model: Fluid model
    :param policy: Sound-speed policy
    :return: Normal flux ``(..., 4)``
    """
    nx, ny = normal[..., 0], normal[..., 1]
    fl, gl = inviscid_flux(q_left, model)
    fr, gr = inviscid_flux(q_right, model)
    flux_l = fl * nx[..., None] + gl * ny[..., None]
    flux_r = fr * nx[..., None] + gr * ny[..., None]

    q_avg = 0.5 * (q_left + q_right)
    _, ua, va, _ = primitive(q_avg, model)
    vgn = np.broadcast_to(np.asarray(grid_normal_speed, dtype=float), nx.shape)
    if policy is SoundSpeedPolicy.AVERAGE:
        c = sound_speed(q_avg, model)
    else:
        c = np.maximum(sound_speed(q_left, model), sound_speed(q_right, model))
    lam = np.abs(ua * nx + va * ny - vgn) + c
    return 0.5 * (flux_l + flux_r - lam[..., None] * (q_right - q_left)) - vgn[..., None] * q_avg


def check_admissible(
    q: np.ndarray, model: FluidModel, where: str = "", leading: str = "element", **context
) -> None:
    """
    Raise if any state has non-positive density or pressure.

    The first offending index is reported with its leading axis named by
    ``leading`` (``element`` or ``mortar``) and the rest as ``point``, unless
    the caller supplies its own context.

    :raises AdmissibilityError: For a non-physical or non-finite state
    """
    if leading not in ("element", "mortar"):
        raise ValueError(f"leading must be 'element' or 'mortar', got {leading!r}")
    rho, _, _, p = primitive(q, model)
    bad = ~((rho > 0.0) & (p > 0.0) & np.isfinite(p))
    if not np.any(bad):
        return
    index = np.argwhere(bad)[0]
    if "element" not in context and "mortar" not in context and len(index):
        context[leading] = int(index[0])
        context["point"] = tuple(int(i) for i in index[1:]) or None
    raise AdmissibilityError(
        f"Non-physical state{' in ' + where if where else ''}: "
        f"rho={float(rho[tuple(index)]):.6g}, p={float(p[tuple(index)]):.6g}",
        **context,
    )
