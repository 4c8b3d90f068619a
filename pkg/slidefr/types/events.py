"""
Simulation lifecycle events.

Handlers registered with :meth:`slidefr.Simulation.on` receive a
:class:`slidefr.context.StepContext` for the event they subscribed to.
"""

from __future__ import annotations

import enum

__all__ = ["EventType", "RunStatus"]


class EventType(str, enum.Enum):
    """Events emitted by a running simulation, in emission order."""

    RUN_STARTED = "run_started"
    STEP_COMPLETED = "step_completed"
    SNAPSHOT_WRITTEN = "snapshot_written"
    RUN_FINISHED = "run_finished"


class RunStatus(str, enum.Enum):
    """Outcome recorded in the run manifest."""

    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"

    @property
    def exit_code(self) -> int:
        return 1 if self is RunStatus.FAILED else 0
