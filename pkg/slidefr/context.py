"""
Context class for simulation event handlers.

This module provides the StepContext passed to handlers registered with
:meth:`slidefr.Simulation.on`. It exposes the evolved state of the step that
triggered the event and the derived quantities monitors ask for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np

from .solver.forces import ForceSample, force_coefficients
from .solver.gas import primitive
from .types.events import EventType
from .verification.exact import FreeStream
from .verification.norms import l2_error, normalized_l2_error

if TYPE_CHECKING:
    from .app import Simulation
    from .solver.discretization import Discretization

__all__ = ["StepContext", "PRIMITIVE_INDEX"]

PRIMITIVE_INDEX = {"rho": 0, "u": 1, "v": 2, "p": 3}


@dataclass
class StepContext:
    """
    Context for simulation event handlers.

    :param simulation: Simulation that emitted the event
    :param event: Event type
    :param step: Steps completed
    :param t: Time of ``u``
    :param u: Evolved state ``(E, N, N, 5)``
    :param dt: Size of the step just taken; ``0`` outside ``step_completed``
    :param previous: State before the step
    :param stage_fluxes: Integrated boundary flux of every stage of the step
    :param path: File written, for ``snapshot_written``
    """

    simulation: Simulation
    event: EventType
    step: int
    t: float
    u: np.ndarray
    dt: float = 0.0
    previous: Optional[np.ndarray] = None
    stage_fluxes: List[np.ndarray] = field(default_factory=list)
    path: Optional[Path] = None

    @staticmethod
    def from_simulation(simulation: Simulation, event: EventType, **kwargs) -> StepContext:
        return StepContext(simulation, EventType(event), simulation.step, simulation.t, simulation.u, **kwargs)

    @property
    def disc(self) -> Discretization:
        return self.simulation.disc

    @property
    def q(self) -> np.ndarray:
        """Physical conservative variables ``(E, N, N, 4)``."""
        return self.disc.physical_state(self.u, self.t)

    @property
    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        geo = self.disc.geometry_at(self.t)
        return geo.volume.x, geo.volume.y

    def primitive(self, name: str) -> np.ndarray:
        return primitive(self.q, self.disc.model)[PRIMITIVE_INDEX[name]]

    def exact_primitive(self, name: str) -> np.ndarray:
        exact = self.simulation.setup.exact
        if exact is None:
            raise ValueError("The case has no exact solution")
        x, y = self.coordinates
        return primitive(exact(self.t, x, y), self.disc.model)[PRIMITIVE_INDEX[name]]

    def error(self, name: str = "rho") -> float:
        """L2 error of one primitive variable against the exact solution."""
        return l2_error(self.primitive(name), self.exact_primitive(name))

    def pressure_error(self) -> float:
        """Pressure error normalized by the free-stream pressure."""
        exact = self.simulation.setup.exact
        p_inf = exact.pressure if isinstance(exact, FreeStream) else float(np.mean(self.exact_primitive("p")))
        return normalized_l2_error(self.primitive("p"), self.exact_primitive("p"), p_inf)

    def totals(self, u: Optional[np.ndarray] = None) -> np.ndarray:
        """Domain integrals of the four conserved quantities."""
        u = self.u if u is None else u
        w = self.disc.basis.weights
        return np.einsum("a,b,eabv->v", w, w, u[..., :4])

    def conservation(self) -> np.ndarray:
        """
        Conservation error of the step just taken.

        ``E = sum(|J| Q)^{n+1} - sum(|J| Q)^n + dt sum_i b_i B_i`` with ``B_i``
        the integrated outward boundary flux of stage ``i``.
        """
        if self.previous is None or not self.stage_fluxes:
            return np.zeros(4)
        b = self.simulation.scheme.b
        boundary = self.dt * sum(bi * flux for bi, flux in zip(b, self.stage_fluxes))
        return self.totals() - self.totals(self.previous) + boundary

    def forces(self, tags: Optional[Sequence[str]] = None) -> ForceSample:
        sim = self.simulation
        exact = sim.setup.exact
        stream = exact if isinstance(exact, FreeStream) else FreeStream(self.disc.model, angle=sim.config.fluid.angle)
        return force_coefficients(
            self.disc,
            self.u,
            self.t,
            tags or sim.config.output.force_tags,
            reference_length=sim.config.output.reference_length,
            density=stream.density,
            speed=stream.speed,
            angle=stream.angle,
        )

    def __repr__(self) -> str:
        return f"StepContext(event={self.event.value}, step={self.step}, t={self.t})"
