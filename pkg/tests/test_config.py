import math

import pytest

from slidefr.cases import PRESETS
from slidefr.config import (
    RunConfig,
    load_config,
    merge_sections,
    parse_override,
    read_ini,
)
from slidefr.exceptions import ConfigurationError
from slidefr.mortar import ViscousMethod
from slidefr.solver.boundary import BoundaryKind

CONFIG = """\
[case]
exact = free_stream   # uniform flow

[mesh]
generator = vortex
scale = 0.1

[solver]
order = 3
viscous_method = gradients

[time]
scheme = SSP(10, 4)
dt = 0.01
end_time = 0.05

[boundary]
left = dirichlet
outer_wall = noslip_isothermal
outer_wall.temperature = 1.5

[rotation]
omega.0 = 2.5

[output]
force_tags = wall, flap
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(CONFIG)
    return path


def test_defaults():
    config = RunConfig()
    assert config.solver.order == 4
    assert config.n_points == 5
    assert config.time.scheme == "ssp(5,4)"
    assert config.solver.viscous_method is ViscousMethod.FLUXES
    assert config.n_steps == 1000


def test_load_file(config_file):
    config = load_config(config_file)
    assert config.mesh.scale == 0.1
    assert config.solver.viscous_method is ViscousMethod.GRADIENTS
    assert config.time.scheme == "ssp(10,4)"
    assert config.time.rk.stages == 10
    assert config.n_steps == 5
    wall = config.boundary["outer_wall"]
    assert wall.kind is BoundaryKind.NOSLIP_ISOTHERMAL
    assert wall.temperature == 1.5
    assert config.rotation.omega == {0: 2.5}
    assert config.output.force_tags == ["wall", "flap"]


def test_overrides_win_over_file(config_file):
    config = load_config(config_file, ["solver.order=6", "time.dt = 0.02", "rotation.omega.1=-1"])
    assert config.solver.order == 6
    assert config.time.dt == 0.02
    assert config.rotation.omega == {0: 2.5, 1: -1.0}


def test_preset_layers_under_file(config_file):
    config = load_config(config_file, presets=PRESETS, preset="euler-vortex")
    assert config.case.name == "euler-vortex"
    assert config.case.exact == "free_stream"
    assert config.fluid.angle == pytest.approx(math.atan(0.5))
    assert config.solver.order == 3
    assert set(config.boundary) == {"bottom", "right", "top", "left", "outer_wall"}


def test_preset_named_in_overrides():
    config = load_config(overrides=["case.name=taylor-couette"], presets=PRESETS)
    assert config.mesh.generator == "annulus"
    assert config.fluid.reynolds == 10.0


def test_unknown_preset():
    with pytest.raises(ConfigurationError) as info:
        load_config(overrides=["case.name=nope"], presets=PRESETS)
    assert info.value.key == "case.name"


def test_sections_reproduce_config(config_file):
    config = load_config(config_file)
    again = load_config(overrides=[f"{s}.{k}={v}" for s, values in config.sections().items() for k, v in values.items()])
    assert again == config


@pytest.mark.parametrize(
    "override, key",
    [
        ("solver.order=0", "solver.order"),
        ("solver.colour=red", "solver.colour"),
        ("time.scheme=rk4", "time.scheme"),
        ("time.dt=-1", "time.dt"),
        ("boundary.wall=slip", "boundary.wall.kind"),
        ("solver.boundary_nodes=6", "solver.boundary_nodes"),
        ("diagnostics.error_variable=T", "diagnostics.error_variable"),
        ("rotation.omega.x=1", "rotation.omega.x"),
    ],
)
def test_invalid_values_name_their_key(override, key):
    with pytest.raises(ConfigurationError) as info:
        load_config(overrides=[override])
    assert info.value.key == key


def test_generator_and_files_are_exclusive():
    with pytest.raises(ConfigurationError):
        load_config(overrides=["mesh.generator=block", "mesh.files=a.mesh"])


@pytest.mark.parametrize("text", ["solver", "solver.order", "=3", "grid.n=3"])
def test_malformed_override(text):
    with pytest.raises(ConfigurationError):
        parse_override(text)


def test_merge_sections():
    merged = merge_sections({"a": {"x": 1, "y": 2}}, None, {"a": {"y": 3}, "b": {"z": 4}})
    assert merged == {"a": {"x": 1, "y": 3}, "b": {"z": 4}}


def test_read_ini_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        read_ini(tmp_path / "missing.ini")
    bad = tmp_path / "bad.ini"
    bad.write_text("[grid]\nn = 3\n")
    with pytest.raises(ConfigurationError) as info:
        read_ini(bad)
    assert info.value.key == "grid"
    broken = tmp_path / "broken.ini"
    broken.write_text("order = 3\n")
    with pytest.raises(ConfigurationError):
        read_ini(broken)
