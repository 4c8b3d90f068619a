import numpy as np
import pytest

from slidefr import Simulation, StepContext
from slidefr.cases import PRESETS
from slidefr.config import load_config
from slidefr.exceptions import ConfigurationError, SnapshotError
from slidefr.io import read_manifest, read_restart, read_table
from slidefr.io.restart import Restart
from slidefr.types.events import EventType, RunStatus

BOX = [f"boundary.{tag}=dirichlet" for tag in ("bottom", "right", "top", "left")]


def block_config(tmp_path, *extra):
    overrides = [
        "case.exact=free_stream",
        "mesh.generator=block",
        "solver.order=2",
        "time.scheme=ssp(3,3)",
        "time.dt=0.01",
        "time.end_time=0.03",
        f"output.directory={tmp_path}",
        *BOX,
        *extra,
    ]
    return load_config(overrides=overrides)


def vortex_config(tmp_path, *extra):
    overrides = [
        "mesh.scale=0.1",
        "solver.order=2",
        "time.scheme=ssp(3,3)",
        "time.dt=0.002",
        "time.end_time=0.006",
        f"output.directory={tmp_path}",
        *extra,
    ]
    return load_config(overrides=overrides, presets=PRESETS, preset="euler-vortex")


def test_events_arrive_in_order(tmp_path):
    sim = Simulation(block_config(tmp_path), write_output=False)
    seen = []

    for event in EventType:
        sim.on(event)(lambda ctx: seen.append((ctx.event, ctx.step)))

    assert sim.run() is RunStatus.COMPLETED
    assert seen == [
        (EventType.RUN_STARTED, 0),
        (EventType.STEP_COMPLETED, 1),
        (EventType.STEP_COMPLETED, 2),
        (EventType.STEP_COMPLETED, 3),
        (EventType.RUN_FINISHED, 3),
    ]
    assert not any(tmp_path.iterdir())


def test_run_writes_artifacts_and_manifest(tmp_path):
    config = block_config(tmp_path, "diagnostics.conservation=true", "diagnostics.free_stream=true", "output.cadence=2")
    sim = Simulation(config)
    assert sim.run() is RunStatus.COMPLETED
    assert sim.t == 0.03
    names = {p.name for p in tmp_path.iterdir()}
    assert {
        "snapshot_00000000.dat",
        "snapshot_00000002.dat",
        "snapshot_00000003.dat",
        "restart_00000003.bin",
        "free_stream.csv",
        "manifest.json",
    } <= names

    manifest = read_manifest(tmp_path / "manifest.json")
    assert manifest["status"] == "completed"
    assert manifest["exit_code"] == 0
    assert manifest["steps"] == 3
    assert manifest["config"]["time"]["scheme"] == "ssp(3,3)"
    assert str(tmp_path / "free_stream.csv") in manifest["artifacts"]

    rows = read_table(tmp_path / "free_stream.csv")
    assert [int(r["step"]) for r in rows] == [0, 1, 2, 3]
    assert max(float(r["pressure_error"]) for r in rows) < 1e-12


def test_conservation_monitor_on_sliding_mesh(tmp_path):
    sim = Simulation(vortex_config(tmp_path, "diagnostics.conservation=true", "diagnostics.error=false"))
    sim.run()
    rows = read_table(tmp_path / "conservation.csv")
    assert len(rows) == 3
    for row in rows:
        for column in ("mass", "x_momentum", "y_momentum", "energy"):
            assert abs(float(row[column])) < 1e-10
        assert float(row["interface_defect"]) < 1e-10


def test_error_monitor_tracks_vortex(tmp_path):
    sim = Simulation(vortex_config(tmp_path))
    sim.run()
    rows = read_table(tmp_path / "error.csv")
    assert rows[0]["variable"] == "rho"
    assert float(rows[0]["l2_error"]) < 1e-2
    assert float(rows[-1]["l2_error"]) < 1e-2


def test_zero_end_time_writes_initial_state_only(tmp_path):
    sim = Simulation(block_config(tmp_path, "time.end_time=0"))
    assert sim.run() is RunStatus.COMPLETED
    assert sim.step == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert "snapshot_00000000.dat" in names
    assert not any(name.startswith("restart_") for name in names)


def test_restart_reproduces_uninterrupted_run(tmp_path):
    full = Simulation(vortex_config(tmp_path / "full", "output.restart_every=1"))
    full.run()
    resumed = Simulation(vortex_config(tmp_path / "resumed"))
    resumed.run(read_restart(tmp_path / "full" / "restart_00000001.bin"))
    assert resumed.step == full.step == 3
    assert resumed.t == full.t
    np.testing.assert_array_equal(resumed.u, full.u)


def test_restart_must_fit_discretization(tmp_path):
    sim = Simulation(block_config(tmp_path), write_output=False)
    with pytest.raises(SnapshotError):
        sim.restore(Restart(0, 0.0, np.zeros((2, 3, 3, 5))))


def test_numerical_failure_keeps_last_good_state(tmp_path):
    sim = Simulation(block_config(tmp_path))

    @sim.on("step_completed")
    def poison(ctx: StepContext):
        ctx.disc.residual = lambda t, u: np.full_like(u, np.nan)

    assert sim.run() is RunStatus.FAILED
    assert sim.step == 1
    assert (tmp_path / "snapshot_00000001.dat").exists()
    manifest = read_manifest(tmp_path / "manifest.json")
    assert manifest["exit_code"] == 1
    assert "Non-finite" in manifest["error"]


def test_handler_errors_do_not_stop_run(tmp_path):
    sim = Simulation(block_config(tmp_path), write_output=False)

    @sim.on(EventType.STEP_COMPLETED)
    def broken(ctx):
        raise RuntimeError("handler bug")

    assert sim.run() is RunStatus.COMPLETED


def test_unknown_event_name(tmp_path):
    sim = Simulation(block_config(tmp_path), write_output=False)
    with pytest.raises(ValueError):
        sim.on("step_started")


def test_configuration_error_before_output(tmp_path):
    config = load_config(
        overrides=["case.exact=free_stream", "mesh.generator=block", f"output.directory={tmp_path / 'out'}"]
    )
    with pytest.raises(ConfigurationError):
        Simulation(config)
    assert not (tmp_path / "out").exists()


def test_step_context_totals(tmp_path):
    sim = Simulation(block_config(tmp_path), write_output=False)
    sim.initialize()
    ctx = StepContext.from_simulation(sim, EventType.RUN_STARTED)
    rho = ctx.primitive("rho")
    assert rho.shape == (72, 3, 3)
    assert ctx.totals()[0] == pytest.approx(1.0)
    np.testing.assert_array_equal(ctx.conservation(), 0.0)
