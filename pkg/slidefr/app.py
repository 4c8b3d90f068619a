"""
Simulation driver for slidefr.

This module provides the Simulation class that builds a case from a
configuration, marches it in time and routes lifecycle events to handlers.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .cases import CaseSetup, build_case
from .config import RunConfig
from .context import StepContext
from .exceptions import AdmissibilityError, DivergenceError, GeometryError, SnapshotError
from .io.manifest import build_manifest, write_manifest
from .io.restart import Restart, write_restart
from .io.snapshot import write_snapshot, write_vtk
from .monitors import install_monitors
from .solver.discretization import Discretization
from .timestepping import advance
from .types.events import EventType, RunStatus

__all__ = ["Simulation", "StepHandler", "NUMERICAL_FAILURES"]

# Type alias for event handlers
StepHandler = Callable[[StepContext], Any]

#: Errors that end a run with a last-good snapshot instead of propagating
NUMERICAL_FAILURES = (DivergenceError, AdmissibilityError, GeometryError)


class Simulation:
    """
    Time-marching driver.

    Builds the discretization for a validated configuration, advances the
    evolved state with the configured Runge-Kutta scheme and emits
    :class:`~slidefr.types.events.EventType` events to registered handlers.

    :param config: Validated run configuration
    :param setup: Pre-built case; built from ``config`` when omitted
    :param logger: Optional logger instance
    :param write_output: Write snapshots, restarts, monitors and the manifest
    :raises ConfigurationError: For an inconsistent configuration, before any file is written
    """

    def __init__(
        self,
        config: RunConfig,
        setup: Optional[CaseSetup] = None,
        logger: Optional[logging.Logger] = None,
        write_output: bool = True,
    ) -> None:
        if logger is None:
            logger = logging.getLogger(__name__)
        self.logger = logger
        self.config = config
        self.setup = setup if setup is not None else build_case(config)
        solver = config.solver
        self.disc = Discretization(
            self.setup.mesh,
            config.n_points,
            self.setup.model,
            self.setup.boundaries,
            motions=self.setup.motions,
            viscous_method=solver.viscous_method,
            policy=solver.sound_speed,
            gcl=solver.gcl,
            boundary_nodes=solver.boundary_nodes,
            workers=solver.workers,
            logger=logger,
        )
        self.scheme = config.time.rk
        self.output = Path(config.output.directory)
        self.write_output = write_output

        self.u: Optional[np.ndarray] = None
        self.t = config.time.start_time
        self.step = 0
        self.status = RunStatus.RUNNING
        self.error: Optional[BaseException] = None
        self.artifacts: List[str] = []
        self.stage_interface_defect = 0.0

        self._event_handlers: Dict[EventType, List[StepHandler]] = {}
        self._stage_fluxes: List[np.ndarray] = []
        self._track_interfaces = config.diagnostics.conservation and bool(self.disc.interfaces)
        if write_output:
            install_monitors(self)

    def on(self, event_type: str | EventType) -> Callable[[StepHandler], StepHandler]:
        """
        Decorator for registering event handlers.

        Handlers run in registration order; an exception in one handler is
        logged and does not stop the run.

        :param event_type: Event type to handle
        :return: Decorator function
        :raises ValueError: If event type is invalid

        Example::

            @sim.on("step_completed")
            def report(ctx: StepContext):
                print(ctx.step, ctx.error("rho"))
        """
        if isinstance(event_type, str):
            try:
                event_type = EventType(event_type)
            except ValueError:
                raise ValueError(f"Unknown event type: {event_type}")

        def decorator(handler: StepHandler) -> StepHandler:
            self._event_handlers.setdefault(event_type, []).append(handler)
            return handler

        return decorator

    def _emit(self, event_type: EventType, **kwargs: Any) -> None:
        handlers = self._event_handlers.get(event_type, [])
        if not handlers:
            return
        context = StepContext.from_simulation(self, event_type, **kwargs)
        for handler in handlers:
            try:
                handler(context)
            except Exception:
                self.logger.exception(f"Error in event handler for {event_type.value}")

    # ------------------------------------------------------------------
    # state

    def initialize(self) -> np.ndarray:
        """Evolved state at the start time from the case's initial field."""
        t0 = self.config.time.start_time
        self.u = self.disc.initial_state(lambda x, y: self.setup.initial(x, y, t0), t0)
        self.t, self.step = t0, 0
        return self.u

    def restore(self, restart: Restart) -> None:
        """
        Resume from a restart frame.

        :raises SnapshotError: If the frame does not fit the discretization
        """
        expected = (self.disc.n_elements, self.disc.n, self.disc.n, 5)
        if restart.state.shape != expected:
            raise SnapshotError(f"Restart state {restart.state.shape} does not match discretization {expected}")
        self.u = np.array(restart.state, dtype=float)
        self.t, self.step = restart.t, restart.step
        self.logger.info(f"Restored step {self.step} at t={self.t}")

    def time_of(self, step: int) -> float:
        """Time after ``step`` steps; the last step is clipped to the end time."""
        cfg = self.config.time
        if step >= self.config.n_steps:
            return max(cfg.end_time, cfg.start_time)
        return cfg.start_time + step * cfg.dt

    def _rhs(self, t: float, u: np.ndarray) -> np.ndarray:
        du = self.disc.residual(t, u)
        flux = self.disc.last_boundary_flux
        w = self.disc.basis.weights
        self._stage_fluxes.append(np.einsum("k,bkv->v", w, flux) if len(flux) else np.zeros(4))
        if self._track_interfaces:
            self.stage_interface_defect = max(self.stage_interface_defect, self.disc.interface_defect())
        return du

    def advance(self) -> np.ndarray:
        """
        Take one step.

        :raises DivergenceError: For non-finite values
        :raises AdmissibilityError: For non-physical states
        """
        t = self.t
        t_next = self.time_of(self.step + 1)
        dt = t_next - t
        previous = self.u
        self._stage_fluxes = []
        self.stage_interface_defect = 0.0
        self.u = advance(self.scheme, previous, t, dt, self._rhs, step=self.step)
        self.step += 1
        self.t = t_next
        self._emit(EventType.STEP_COMPLETED, dt=dt, previous=previous, stage_fluxes=list(self._stage_fluxes))
        return self.u

    # ------------------------------------------------------------------
    # output

    def _record(self, path: Path) -> None:
        if str(path) not in self.artifacts:
            self.artifacts.append(str(path))

    def write_snapshot(self) -> Optional[Path]:
        """
        Write the current fields; no-op without output.

        :raises SnapshotError: If a file cannot be written
        """
        if not self.write_output:
            return None
        geo = self.disc.geometry_at(self.t)
        q = self.disc.physical_state(self.u, self.t)
        x, y = geo.volume.x, geo.volume.y
        path = write_snapshot(self.output / f"snapshot_{self.step:08d}.dat", x, y, q, self.disc.model, self.t)
        self._record(path)
        if self.config.output.vtk:
            self._record(write_vtk(path.with_suffix(".vtk"), x, y, q, self.disc.model, self.t))
        self.logger.info(f"Snapshot written: {path} (t={self.t})")
        self._emit(EventType.SNAPSHOT_WRITTEN, path=path)
        return path

    def write_restart(self) -> Optional[Path]:
        if not self.write_output:
            return None
        path = write_restart(self.output / f"restart_{self.step:08d}.bin", self.u, self.t, self.step)
        self._record(path)
        return path

    def _write_manifest(self, wall_time: float) -> None:
        if not self.write_output:
            return
        manifest = build_manifest(
            self.config.sections(),
            self.status,
            wall_time,
            self.step,
            self.t,
            [a for a in self.artifacts if Path(a).exists()],
            error=str(self.error) if self.error is not None else None,
        )
        write_manifest(self.output / "manifest.json", manifest)

    # ------------------------------------------------------------------
    # run

    def run(self, restart: Optional[Restart] = None) -> RunStatus:
        """
        Run to the configured end time.

        A numerical failure stops the run, writes the last good state and
        returns :attr:`RunStatus.FAILED`.

        :param restart: Resume from this frame instead of the initial field
        :return: Final run status
        :raises SnapshotError: If an output file cannot be written
        """
        start = time.perf_counter()
        if restart is not None:
            self.restore(restart)
        elif self.u is None:
            self.initialize()

        out = self.config.output
        n_steps = self.config.n_steps
        self.status = RunStatus.RUNNING
        self.logger.info(
            f"Run started: {self.scheme}, dt={self.config.time.dt}, "
            f"steps {self.step}..{n_steps}, N={self.disc.n}"
        )
        self._emit(EventType.RUN_STARTED)
        self.write_snapshot()

        try:
            while self.step < n_steps:
                self.advance()
                if out.cadence and self.step % out.cadence == 0 and self.step < n_steps:
                    self.write_snapshot()
                if out.restart_every and self.step % out.restart_every == 0:
                    self.write_restart()
        except NUMERICAL_FAILURES as exc:
            self.status = RunStatus.FAILED
            self.error = exc
            self.logger.error(f"Run failed at step {self.step}, t={self.t}: {exc}")
        else:
            self.status = RunStatus.COMPLETED

        if self.step > 0 or self.status is RunStatus.FAILED:
            self.write_snapshot()
            self.write_restart()
        wall = time.perf_counter() - start
        self._emit(EventType.RUN_FINISHED)
        self._write_manifest(wall)
        self.logger.info(f"Run {self.status.value}: {self.step} steps, t={self.t}, {wall:.2f}s")
        return self.status

    def __repr__(self) -> str:
        return f"Simulation(case={self.config.case.name!r}, step={self.step}, t={self.t}, status={self.status.value})"

