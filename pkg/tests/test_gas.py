import logging

import numpy as np
import pytest

from slidefr.exceptions import AdmissibilityError, ConfigurationError
from slidefr.solver.boundary import BoundaryCondition, BoundaryKind, FarfieldMonitor, apply_boundary_condition
from slidefr.solver.gas import (
    FluidModel,
    SoundSpeedPolicy,
    check_admissible,
    conservative,
    inviscid_flux,
    normal_viscous_flux,
    primitive,
    rusanov_flux,
    sound_speed,
    temperature,
    viscous_flux,
)


def test_from_groups(viscous):
    assert viscous.mu == pytest.approx(0.01)
    assert viscous.gas_constant == pytest.approx(1.0 / (1.4 * 0.64))
    q = conservative(1.0, 1.0, 0.0, viscous.freestream_pressure(0.8), viscous)
    assert temperature(q, viscous) == pytest.approx(1.0)
    assert sound_speed(q, viscous) == pytest.approx(1.0 / 0.8)


def test_inviscid_groups(inviscid):
    assert not inviscid.viscous
    assert inviscid.kappa == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [dict(gamma=1.0), dict(gas_constant=0.0), dict(mu=-1.0), dict(prandtl=0.0)],
)
def test_model_validation(kwargs):
    with pytest.raises(ConfigurationError):
        FluidModel(**kwargs)


def test_group_validation():
    with pytest.raises(ConfigurationError) as info:
        FluidModel.from_groups(0.0)
    assert info.value.key == "fluid.mach"
    with pytest.raises(ConfigurationError):
        FluidModel.from_groups(0.3, reynolds=-5.0)


def test_primitive_conservative_inverse(inviscid, rng):
    rho = 1.0 + rng.random(10)
    u, v = rng.normal(size=(2, 10))
    p = 5.0 + rng.random(10)
    back = primitive(conservative(rho, u, v, p, inviscid), inviscid)
    for a, b in zip(back, (rho, u, v, p)):
        np.testing.assert_allclose(a, b, rtol=1e-13)


def test_rusanov_is_consistent(inviscid):
    q = conservative(1.2, 0.3, -0.4, 6.0, inviscid)
    n = np.array([0.6, 0.8])
    f, g = inviscid_flux(q, inviscid)
    np.testing.assert_allclose(rusanov_flux(q, q, n, 0.0, inviscid), 0.6 * f + 0.8 * g, rtol=1e-14)
    moving = rusanov_flux(q, q, n, 0.25, inviscid, SoundSpeedPolicy.MAX_SIDES)
    np.testing.assert_allclose(moving, 0.6 * f + 0.8 * g - 0.25 * q, rtol=1e-14)


def test_rusanov_is_antisymmetric(inviscid):
    a = conservative(1.0, 0.1, 0.0, 7.0, inviscid)
    b = conservative(0.9, -0.2, 0.3, 6.5, inviscid)
    n = np.array([1.0, 0.0])
    for policy in SoundSpeedPolicy:
        np.testing.assert_allclose(
            rusanov_flux(a, b, n, 0.0, inviscid, policy), -rusanov_flux(b, a, -n, 0.0, inviscid, policy), rtol=1e-14
        )


def test_viscous_flux_of_shear(viscous):
    q = conservative(1.0, 0.0, 0.0, 2.0, viscous)
    grad = np.zeros((4, 2))
    grad[1, 1] = 3.0  # d(rho u)/dy
    f, g = viscous_flux(q, grad, viscous)
    assert f[2] == pytest.approx(viscous.mu * 3.0)
    assert g[1] == pytest.approx(viscous.mu * 3.0)
    assert f[0] == g[0] == 0.0
    n = normal_viscous_flux(q, grad, np.array([0.0, 2.0]), viscous)
    np.testing.assert_allclose(n, 2.0 * g)


def test_viscous_flux_is_linear_in_gradient(viscous, rng):
    q = conservative(1.1, 0.2, -0.3, 2.0, viscous)
    a, b = rng.normal(size=(2, 4, 2))
    fa, _ = viscous_flux(q, a, viscous)
    fb, _ = viscous_flux(q, b, viscous)
    fab, _ = viscous_flux(q, 2.0 * a + b, viscous)
    np.testing.assert_allclose(fab, 2.0 * fa + fb, atol=1e-14)


def test_adiabatic_drops_conduction(viscous):
    q = conservative(1.0, 0.0, 0.0, 2.0, viscous)
    grad = np.zeros((4, 2))
    grad[3, 0] = 1.0
    f, _ = viscous_flux(q, grad, viscous)
    assert f[3] > 0.0
    f, _ = viscous_flux(q, grad, viscous, heat_flux=False)
    assert f[3] == 0.0


def test_check_admissible_reports_location(inviscid):
    q = np.broadcast_to(conservative(1.0, 0.0, 0.0, 1.0, inviscid), (2, 3, 4)).copy()
    check_admissible(q, inviscid)
    q[1, 2, 0] = -1.0
    with pytest.raises(AdmissibilityError) as info:
        check_admissible(q, inviscid, where="test")
    assert info.value.element == 1
    assert info.value.point == (2,)
    q[1, 2, 0] = np.nan
    with pytest.raises(AdmissibilityError):
        check_admissible(q, inviscid, mortar=4)


# ---------------------------------------------------------------------------
# boundary conditions


def test_boundary_validation():
    with pytest.raises(ConfigurationError):
        BoundaryCondition(BoundaryKind.DIRICHLET)
    with pytest.raises(ConfigurationError):
        BoundaryCondition("noslip_isothermal")
    with pytest.raises(ConfigurationError):
        BoundaryCondition("slip")
    assert BoundaryCondition("noslip_adiabatic").kind is BoundaryKind.NOSLIP_ADIABATIC
    assert not BoundaryCondition("noslip_adiabatic").heat_flux


def test_dirichlet_uses_function_of_position(inviscid):
    bc = BoundaryCondition("dirichlet", state=lambda t, x, y: conservative(1.0 + x, t, 0.0, 5.0, inviscid))
    x, y = np.array([0.0, 1.0]), np.zeros(2)
    ghost = apply_boundary_condition(bc, np.zeros((2, 4)), x, y, 0.5, np.zeros((2, 2)), np.zeros((2, 2)), inviscid)
    np.testing.assert_allclose(ghost[:, 0], [1.0, 2.0])
    np.testing.assert_allclose(ghost[:, 1], [0.5, 1.0])


def test_isothermal_wall_moves_with_rotating_wall(viscous):
    bc = BoundaryCondition("noslip_isothermal", wall_temperature=1.0, wall_omega=2.0)
    q = conservative(1.3, 0.5, 0.5, 3.0, viscous)[None]
    ghost = apply_boundary_condition(
        bc, q, np.array([1.0]), np.array([0.0]), 0.0, np.array([[1.0, 0.0]]), np.zeros((1, 2)), viscous
    )
    rho, u, v, p = primitive(ghost, viscous)
    assert p[0] == pytest.approx(3.0)
    assert rho[0] == pytest.approx(3.0 / viscous.gas_constant)
    assert (u[0], v[0]) == pytest.approx((0.0, 2.0))


def test_adiabatic_wall_follows_grid(viscous):
    bc = BoundaryCondition("noslip_adiabatic")
    q = conservative(1.3, 0.5, 0.5, 3.0, viscous)[None]
    ghost = apply_boundary_condition(
        bc, q, np.zeros(1), np.zeros(1), 0.0, np.array([[0.0, 1.0]]), np.array([[0.1, -0.2]]), viscous
    )
    rho, u, v, p = primitive(ghost, viscous)
    assert rho[0] == pytest.approx(1.3)
    assert (u[0], v[0]) == pytest.approx((0.1, -0.2))


def test_farfield_returns_free_stream_for_matching_state(inviscid):
    q_inf = conservative(1.0, 1.0, 0.0, inviscid.freestream_pressure(0.3), inviscid)
    bc = BoundaryCondition("characteristic_farfield", state=q_inf)
    normals = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    q = np.broadcast_to(q_inf, (3, 4))
    ghost = apply_boundary_condition(bc, q, np.zeros(3), np.zeros(3), 0.0, normals, np.zeros((3, 2)), inviscid)
    np.testing.assert_allclose(ghost, q, rtol=1e-12, atol=1e-12)


def test_farfield_supersonic_limits(inviscid):
    q_inf = conservative(1.0, 1.0, 0.0, inviscid.freestream_pressure(0.3), inviscid)
    bc = BoundaryCondition("characteristic_farfield", state=q_inf)
    fast = conservative(0.8, 20.0, 0.0, 1.0, inviscid)[None]
    n = np.array([[1.0, 0.0]])
    out = apply_boundary_condition(bc, fast, np.zeros(1), np.zeros(1), 0.0, n, np.zeros((1, 2)), inviscid)
    np.testing.assert_allclose(out, fast)
    into = apply_boundary_condition(bc, fast, np.zeros(1), np.zeros(1), 0.0, -n, np.zeros((1, 2)), inviscid)
    np.testing.assert_allclose(into[0], q_inf)


def farfield_ghost(bc, q, normal, t, monitor, model, tag="far"):
    n = np.array([normal])
    return apply_boundary_condition(bc, q, np.zeros(1), np.zeros(1), t, n, np.zeros((1, 2)), model, monitor, tag)


def test_farfield_regime_switch_warns_once_per_interval(inviscid, caplog):
    q_inf = conservative(1.0, 1.0, 0.0, inviscid.freestream_pressure(0.3), inviscid)
    bc = BoundaryCondition("characteristic_farfield", state=q_inf)
    q = q_inf[None]
    monitor = FarfieldMonitor(interval=1.0)
    with caplog.at_level(logging.WARNING, logger="slidefr.solver.boundary"):
        farfield_ghost(bc, q, (1.0, 0.0), 0.0, monitor, inviscid)
        farfield_ghost(bc, q, (1.0, 0.0), 0.05, monitor, inviscid)
        assert not caplog.records
        farfield_ghost(bc, q, (-1.0, 0.0), 0.1, monitor, inviscid)
        farfield_ghost(bc, q, (1.0, 0.0), 0.2, monitor, inviscid)
        farfield_ghost(bc, q, (-1.0, 0.0), 1.5, monitor, inviscid)
    warnings = [r for r in caplog.records if r.levelno == logging.WARNING]
    assert len(warnings) == 2
    assert "'far'" in warnings[0].getMessage()
    assert "0 points to outflow, 1 to inflow" in warnings[0].getMessage()


def test_farfield_monitor_keeps_tags_apart(inviscid, caplog):
    q_inf = conservative(1.0, 1.0, 0.0, inviscid.freestream_pressure(0.3), inviscid)
    bc = BoundaryCondition("characteristic_farfield", state=q_inf)
    q = q_inf[None]
    monitor = FarfieldMonitor()
    with caplog.at_level(logging.WARNING, logger="slidefr.solver.boundary"):
        farfield_ghost(bc, q, (1.0, 0.0), 0.0, monitor, inviscid, tag="left")
        farfield_ghost(bc, q, (-1.0, 0.0), 0.0, monitor, inviscid, tag="right")
        farfield_ghost(bc, q, (1.0, 0.0), 0.1, monitor, inviscid, tag="right")
        farfield_ghost(bc, q, (1.0, 0.0), 0.1, monitor, inviscid, tag="left")
    messages = [r.getMessage() for r in caplog.records]
    assert len(messages) == 1
    assert "'right'" in messages[0]


def test_farfield_without_monitor_stays_silent(inviscid, caplog):
    q_inf = conservative(1.0, 1.0, 0.0, inviscid.freestream_pressure(0.3), inviscid)
    bc = BoundaryCondition("characteristic_farfield", state=q_inf)
    with caplog.at_level(logging.WARNING, logger="slidefr.solver.boundary"):
        farfield_ghost(bc, q_inf[None], (1.0, 0.0), 0.0, None, inviscid)
        farfield_ghost(bc, q_inf[None], (-1.0, 0.0), 0.1, None, inviscid)
    assert not caplog.records
