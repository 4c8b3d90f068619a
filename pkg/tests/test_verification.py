import math

import numpy as np
import pytest

from slidefr.exceptions import ConfigurationError
from slidefr.solver.gas import primitive
from slidefr.verification import (
    CaseTag,
    EulerVortex,
    FlatCouette,
    FreeStream,
    TaylorCouette,
    exact_state,
    l2_error,
    make_exact,
    mapping_error_study,
    max_error,
    normalized_l2_error,
)


def test_vortex_is_convected_by_the_stream(inviscid, rng):
    vortex = EulerVortex(inviscid)
    x, y = rng.uniform(0.0, 10.0, size=(2, 50))
    ub, vb = math.cos(vortex.angle), math.sin(vortex.angle)
    t = 1.7
    np.testing.assert_allclose(vortex(t, x + ub * t, y + vb * t), vortex(0.0, x, y), rtol=1e-13)


def test_vortex_far_field_is_free_stream(inviscid):
    vortex = EulerVortex(inviscid, angle=0.0)
    rho, u, v, p = primitive(vortex(0.0, np.array([40.0]), np.array([5.0])), inviscid)
    assert rho[0] == pytest.approx(1.0)
    assert u[0] == pytest.approx(1.0)
    assert v[0] == pytest.approx(0.0, abs=1e-12)
    assert p[0] == pytest.approx(1.0 / (1.4 * 0.09))


def test_vortex_core_has_pressure_deficit(inviscid):
    vortex = EulerVortex(inviscid)
    _, _, _, p = primitive(vortex(0.0, np.array([5.0]), np.array([5.0])), inviscid)
    assert p[0] < vortex.pressure


def test_taylor_couette_matches_wall_speeds(inviscid):
    flow = TaylorCouette(inviscid, v_inner=2.0)
    assert flow.v_theta(np.array(1.0)) == pytest.approx(2.0)
    assert flow.v_theta(np.array(2.0)) == pytest.approx(0.0, abs=1e-14)
    rho, u, v, _ = primitive(flow(0.0, np.array([0.0]), np.array([1.0])), inviscid)
    assert (u[0], v[0]) == pytest.approx((-2.0, 0.0))
    assert rho[0] == pytest.approx(1.0)


def test_flat_couette_wall_temperatures(viscous):
    flow = FlatCouette(viscous, t_lower=1.0, t_upper=1.2, y0=-1.0, height=2.0)
    np.testing.assert_allclose(flow.temperature(np.array([-1.0, 1.0])), [1.0, 1.2])
    assert flow.temperature(np.array(0.0)) > 1.1
    _, u, _, _ = primitive(flow(0.0, np.array([0.0, 0.0]), np.array([-1.0, 1.0])), viscous)
    np.testing.assert_allclose(u, [0.0, 1.0], atol=1e-14)


def test_free_stream_state_everywhere(free_stream):
    q = free_stream(3.0, np.zeros((2, 3)), np.ones((2, 3)))
    assert q.shape == (2, 3, 4)
    np.testing.assert_allclose(q, np.broadcast_to(free_stream.state, q.shape))


def test_make_exact_by_tag(inviscid):
    assert isinstance(make_exact("free_stream", inviscid, mach=0.5), FreeStream)
    assert CaseTag.parse(CaseTag.FLAT_COUETTE) is CaseTag.FLAT_COUETTE
    q = exact_state("euler_vortex", 0.0, np.array([5.0]), np.array([5.0]), inviscid)
    assert q.shape == (1, 4)


def test_unknown_tag_and_parameter(inviscid):
    with pytest.raises(ConfigurationError):
        CaseTag.parse("vortex-street")
    with pytest.raises(ConfigurationError):
        make_exact("taylor_couette", inviscid, omega=3.0)


def test_norms():
    a = np.array([1.0, 2.0, 3.0, 4.0])
    b = np.array([1.0, 2.0, 3.0, 6.0])
    assert l2_error(a, b) == pytest.approx(1.0)
    assert normalized_l2_error(a, b, -4.0) == pytest.approx(0.25)
    assert max_error(a, b) == 2.0
    assert l2_error(np.empty(0), np.empty(0)) == 0.0


def test_mapping_study_orders_maps_by_accuracy():
    study = mapping_error_study()
    assert study.max_dr("transfinite") < 1e-14
    assert study.max_dr("linear") > study.max_dr("quadratic") > study.max_dr("cubic")
    for row in study.radius:
        assert row["nodal_dr"] < 1e-13
    assert study.max_dx("linear") > study.max_dx("cubic")
