"""
Step handlers that sample diagnostics into CSV tables.

:func:`install_monitors` registers the handlers enabled in ``[diagnostics]``
and ``[output]`` on a :class:`~slidefr.app.Simulation`; each one appends to
its own table in the output directory.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, List

from .context import StepContext
from .io.tables import CsvTable
from .types.events import EventType

if TYPE_CHECKING:
    from .app import Simulation

__all__ = [
    "Monitor",
    "ConservationMonitor",
    "FreeStreamMonitor",
    "ErrorMonitor",
    "ForceMonitor",
    "MortarDump",
    "install_monitors",
]

logger = logging.getLogger(__name__)


class Monitor:
    """
    Base handler: samples every ``every`` steps into one table.

    :param path: CSV file
    :param every: Sampling interval in steps
    """

    filename = "monitor.csv"
    columns = ("step", "t")

    def __init__(self, path: Path, every: int = 1) -> None:
        self.table = CsvTable(path, self.columns)
        self.every = max(1, every)

    def __call__(self, ctx: StepContext) -> None:
        if ctx.event is EventType.STEP_COMPLETED and ctx.step % self.every:
            return
        for row in self.sample(ctx):
            self.table.append(row)

    def sample(self, ctx: StepContext) -> List[dict]:
        raise NotImplementedError

    def close(self, ctx: StepContext) -> None:
        self.table.close()


class ConservationMonitor(Monitor):
    """Global conservation error ``E`` of every step and the interface flux mismatch."""

    filename = "conservation.csv"
    columns = ("step", "t", "mass", "x_momentum", "y_momentum", "energy", "interface_defect")

    def __call__(self, ctx: StepContext) -> None:
        if ctx.event is EventType.STEP_COMPLETED:
            super().__call__(ctx)

    def sample(self, ctx):
        e = ctx.conservation()
        logger.debug(f"Step {ctx.step}: conservation error {e.tolist()}")
        return [
            {
                "step": ctx.step,
                "t": ctx.t,
                "mass": float(e[0]),
                "x_momentum": float(e[1]),
                "y_momentum": float(e[2]),
                "energy": float(e[3]),
                "interface_defect": ctx.simulation.stage_interface_defect,
            }
        ]


class FreeStreamMonitor(Monitor):
    filename = "free_stream.csv"
    columns = ("step", "t", "pressure_error")

    def sample(self, ctx):
        return [{"step": ctx.step, "t": ctx.t, "pressure_error": ctx.pressure_error()}]


class ErrorMonitor(Monitor):
    filename = "error.csv"
    columns = ("step", "t", "variable", "l2_error")

    def __init__(self, path: Path, variable: str = "rho", every: int = 1) -> None:
        super().__init__(path, every)
        self.variable = variable

    def sample(self, ctx):
        return [{"step": ctx.step, "t": ctx.t, "variable": self.variable, "l2_error": ctx.error(self.variable)}]


class ForceMonitor(Monitor):
    """Forces are sampled on every step regardless of ``every``."""

    filename = "forces.csv"
    columns = ("step", "t", "fx", "fy", "cd", "cl")

    def __init__(self, path: Path) -> None:
        super().__init__(path, 1)

    def sample(self, ctx):
        s = ctx.forces()
        return [{"step": ctx.step, "t": ctx.t, "fx": s.fx, "fy": s.fy, "cd": s.drag, "cl": s.lift}]


class MortarDump(Monitor):
    filename = "mortars.csv"
    columns = (
        "step", "t", "interface", "nm", "mortar", "left_face", "right_face",
        "s_left", "o_left", "s_right", "o_right",
    )

    def sample(self, ctx):
        rows = []
        for iface in ctx.disc.interfaces:
            for row in iface.diagnostic_rows(ctx.t):
                rows.append({"step": ctx.step, **row})
        return rows


def install_monitors(sim: Simulation) -> List[Monitor]:
    """Register the configured monitors on ``sim``."""
    cfg = sim.config
    diag = cfg.diagnostics
    out = sim.output
    monitors: List[Monitor] = []
    if diag.conservation:
        monitors.append(ConservationMonitor(out / ConservationMonitor.filename, diag.every))
    if diag.free_stream:
        monitors.append(FreeStreamMonitor(out / FreeStreamMonitor.filename, diag.every))
    if diag.error and sim.setup.exact is not None:
        monitors.append(ErrorMonitor(out / ErrorMonitor.filename, diag.error_variable, diag.every))
    if cfg.output.force_tags:
        monitors.append(ForceMonitor(out / ForceMonitor.filename))
    if diag.mortar_dump and sim.disc.interfaces:
        monitors.append(MortarDump(out / MortarDump.filename, diag.every))

    for monitor in monitors:
        sim.on(EventType.RUN_STARTED)(monitor)
        sim.on(EventType.STEP_COMPLETED)(monitor)
        sim.on(EventType.RUN_FINISHED)(monitor.close)
        sim.artifacts.append(str(monitor.table.path))
    return monitors
