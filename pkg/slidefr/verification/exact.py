"""
Closed-form flow fields used as initial data, boundary data and error oracles.

Every solution is a pure function of ``(t, x, y)`` returning conservative
variables with the coordinate shape plus a trailing axis of four.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any, Tuple, Union

import numpy as np

from ..exceptions import ConfigurationError
from ..solver.gas import FluidModel, conservative

__all__ = [
    "CaseTag",
    "EulerVortex",
    "TaylorCouette",
    "FlatCouette",
    "FreeStream",
    "ExactSolution",
    "make_exact",
    "exact_state",
]

Primitives = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


class CaseTag(str, enum.Enum):
    """Analytic solutions shipped with the package."""

    EULER_VORTEX = "euler_vortex"
    TAYLOR_COUETTE = "taylor_couette"
    FLAT_COUETTE = "flat_couette"
    FREE_STREAM = "free_stream"

    @staticmethod
    def parse(value: Union[str, CaseTag]) -> CaseTag:
        try:
            return CaseTag(value)
        except ValueError:
            raise ConfigurationError(f"Unknown exact solution {value!r}", key="case.name")


class _Exact:
    model: FluidModel

    def primitive(self, t: float, x: np.ndarray, y: np.ndarray) -> Primitives:
        raise NotImplementedError

    def __call__(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return conservative(*self.primitive(t, x, y), self.model)

    def at(self, t: float):
        """Time-frozen ``(x, y) -> Q`` for initial conditions."""
        return lambda x, y: self(t, x, y)


@dataclass(frozen=True)
class EulerVortex(_Exact):
    """
    Isentropic vortex convected by a uniform stream.

    :param model: Gas model (inviscid)
    :param mach: Free-stream Mach number
    :param speed: Free-stream speed
    :param density: Free-stream density
    :param angle: Stream direction in radians
    :param strength: Vortex strength
    :param radius: Vortex core size
    :param center: Position at ``t = 0``
    """

    model: FluidModel
    mach: float = 0.3
    speed: float = 1.0
    density: float = 1.0
    angle: float = math.atan(0.5)
    strength: float = 1.0
    radius: float = 1.0
    center: Tuple[float, float] = (5.0, 5.0)

    @property
    def pressure(self) -> float:
        return self.density * self.speed**2 / (self.model.gamma * self.mach**2)

    def primitive(self, t, x, y):
        gamma = self.model.gamma
        ub = self.speed * math.cos(self.angle)
        vb = self.speed * math.sin(self.angle)
        xr = x - self.center[0] - ub * t
        yr = y - self.center[1] - vb * t
        rc, eps = self.radius, self.strength
        r2 = xr * xr + yr * yr
        bump = np.exp((1.0 - r2) / (2.0 * rc**2))
        u = self.speed * (math.cos(self.angle) - eps * yr / rc * bump)
        v = self.speed * (math.sin(self.angle) + eps * xr / rc * bump)
        base = 1.0 - 0.5 * (gamma - 1.0) * (eps * self.mach) ** 2 * np.exp((1.0 - r2) / rc**2)
        rho = self.density * base ** (1.0 / (gamma - 1.0))
        p = self.pressure * base ** (gamma / (gamma - 1.0))
        return rho, u, v, p


@dataclass(frozen=True)
class TaylorCouette(_Exact):
    """
    Steady azimuthal flow between concentric cylinders.

    Density and pressure are taken uniform; the azimuthal speed is the exact
    steady profile.
    """

    model: FluidModel
    r_inner: float = 1.0
    r_outer: float = 2.0
    v_inner: float = 1.0
    v_outer: float = 0.0
    center: Tuple[float, float] = (0.0, 0.0)
    density: float = 1.0
    pressure: float = 1.0 / (1.4 * 0.1**2)

    def v_theta(self, r: np.ndarray) -> np.ndarray:
        ri, ro = self.r_inner, self.r_outer
        den = ro / ri - ri / ro
        return self.v_inner * (ro / r - r / ro) / den + self.v_outer * (r / ri - ri / r) / den

    def primitive(self, t, x, y):
        dx, dy = x - self.center[0], y - self.center[1]
        r = np.hypot(dx, dy)
        vt = self.v_theta(r)
        return (
            np.full_like(r, self.density),
            -vt * dy / r,
            vt * dx / r,
            np.full_like(r, self.pressure),
        )


@dataclass(frozen=True)
class FlatCouette(_Exact):
    """
    Steady shear flow between a fixed lower plate at ``y = y0`` and an upper
    plate at ``y0 + height`` moving at ``speed``.
    """

    model: FluidModel
    speed: float = 1.0
    height: float = 1.0
    t_lower: float = 1.0
    t_upper: float = 1.0
    pressure: float = 1.0 / (1.4 * 0.8**2)
    y0: float = 0.0

    def temperature(self, y: np.ndarray) -> np.ndarray:
        eta = (y - self.y0) / self.height
        m = self.model
        return (
            self.t_lower
            + (self.t_upper - self.t_lower) * eta
            + m.mu * self.speed**2 / (2.0 * m.kappa) * (eta - eta * eta)
        )

    def primitive(self, t, x, y):
        temp = self.temperature(y)
        rho = self.pressure / (self.model.gas_constant * temp)
        u = self.speed * (y - self.y0) / self.height
        return rho, u, np.zeros_like(u), np.full_like(u, self.pressure)


@dataclass(frozen=True)
class FreeStream(_Exact):
    """Uniform flow at ``mach`` along ``angle``."""

    model: FluidModel
    mach: float = 0.3
    speed: float = 1.0
    density: float = 1.0
    angle: float = 0.0

    @property
    def pressure(self) -> float:
        return self.density * self.speed**2 / (self.model.gamma * self.mach**2)

    @property
    def state(self) -> np.ndarray:
        return conservative(
            self.density,
            self.speed * math.cos(self.angle),
            self.speed * math.sin(self.angle),
            self.pressure,
            self.model,
        )

    def primitive(self, t, x, y):
        shape = np.shape(x)
        return (
            np.full(shape, self.density),
            np.full(shape, self.speed * math.cos(self.angle)),
            np.full(shape, self.speed * math.sin(self.angle)),
            np.full(shape, self.pressure),
        )


ExactSolution = Union[EulerVortex, TaylorCouette, FlatCouette, FreeStream]

_CLASSES = {
    CaseTag.EULER_VORTEX: EulerVortex,
    CaseTag.TAYLOR_COUETTE: TaylorCouette,
    CaseTag.FLAT_COUETTE: FlatCouette,
    CaseTag.FREE_STREAM: FreeStream,
}


def make_exact(case: Union[str, CaseTag], model: FluidModel, **params: Any) -> ExactSolution:
    """
    :raises ConfigurationError: For an unknown tag or parameter
    """
    cls = _CLASSES[CaseTag.parse(case)]
    try:
        return cls(model=model, **params)
    except TypeError as exc:
        raise ConfigurationError(f"Bad parameters for {case}: {exc}", key="case")


def exact_state(
    case: Union[str, CaseTag, ExactSolution],
    t: float,
    x: np.ndarray,
    y: np.ndarray,
    model: FluidModel = FluidModel(),
    **params: Any,
) -> np.ndarray:
    """
    Conservative state of an analytic solution.

    :param case: Tag or an already configured solution
    :param t: Time
    :param x: Coordinates
    :param y: Coordinates
    :param model: Gas model used when ``case`` is a tag
    :return: ``x.shape + (4,)``
    :raises ConfigurationError: For an unknown tag
    """
    solution = case if isinstance(case, _Exact) else make_exact(case, model, **params)
    return solution(t, x, y)
