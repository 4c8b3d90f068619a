import math

import pytest

from slidefr.exceptions import ConfigurationError
from slidefr.verification.studies import (
    Check,
    ConvergenceStudy,
    conservation_study,
    free_stream_study,
    outflow_check,
    run_convergence_study,
    run_point,
    VERIFY_SUITES,
    cylinder_study,
    run_verification,
    temporal_order_study,
)

QUICK = ["solver.order=2", "time.scheme=ssp(3,3)", "time.dt=0.002", "time.end_time=0.006"]


def test_order_fit_recovers_decay_rate():
    study = ConvergenceStudy("synthetic", "order", "rho")
    study.rows = [{"order": p, "error": 3.0 * math.exp(-1.5 * p)} for p in (2, 3, 4, 5)]
    study.fit()
    assert study.slope == pytest.approx(-1.5)
    assert study.r_squared == pytest.approx(1.0)
    assert study.ratios == pytest.approx([math.exp(-1.5)] * 3)


def test_dt_fit_is_log_log():
    study = ConvergenceStudy("synthetic", "dt", "rho")
    study.rows = [{"dt": dt, "error": 2.0 * dt**4} for dt in (0.02, 0.01, 0.005)]
    assert study.fit().slope == pytest.approx(4.0)


def test_single_point_is_not_fitted():
    study = ConvergenceStudy("synthetic", "dt", "rho", rows=[{"dt": 0.1, "error": 1.0}]).fit()
    assert math.isnan(study.slope)


def test_check_formatting():
    assert str(Check("x", 1e-14, 1e-12, True)).startswith("PASS x: 1.000e-14")
    assert str(Check("x", 1.0, 0.5, False)).startswith("FAIL")


def test_outflow_check_small():
    assert outflow_check(counts=((4, 8),), sizes=(2, 5), samples=3) < 1e-12


def test_study_needs_one_axis():
    with pytest.raises(ConfigurationError):
        run_convergence_study("euler-vortex")
    with pytest.raises(ConfigurationError):
        run_convergence_study("euler-vortex", orders=[2], dts=[0.1])


def test_unknown_suite():
    with pytest.raises(ConfigurationError):
        run_verification(["nope"])


def test_mapping_suite_passes():
    checks = run_verification(["mapping"])
    assert len(checks) == 3
    assert all(check.passed for check in checks)


def test_run_point_returns_small_error():
    assert run_point("euler-vortex", ["mesh.scale=0.1", *QUICK]) < 1e-2


@pytest.mark.slow
def test_vortex_error_falls_with_order():
    study = run_convergence_study(
        "euler-vortex", orders=[2, 3, 4], overrides=["time.end_time=0.05"], variable="rho", workers=3
    )
    assert study.errors[-1] < study.errors[0]
    assert study.slope < 0.0


@pytest.mark.slow
def test_conservation_study_quick():
    rows = conservation_study(omegas=(0.0, 5.0), orders=(3,), end_time=0.005)
    assert len(rows) == 2
    for row in rows:
        assert max(row[name] for name in ("mass", "x_momentum", "y_momentum", "energy")) < 1e-11


@pytest.mark.slow
def test_conforming_free_stream_is_exact():
    rows = free_stream_study(orders=(2, 3), conforming=True, end_time=0.02)
    assert [row["order"] for row in rows] == [2, 3]
    assert max(row["pressure_error"] for row in rows) < 1e-12


def test_every_acceptance_suite_is_registered():
    assert set(VERIFY_SUITES) == {
        "mapping", "outflow", "conservation", "free-stream", "vortex", "taylor-couette", "temporal-order", "cylinder",
    }


def test_cylinder_study_needs_steps():
    with pytest.raises(ConfigurationError) as info:
        cylinder_study(overrides=["time.end_time=0"])
    assert info.value.key == "time.end_time"


def test_temporal_study_measures_second_order():
    study = temporal_order_study(
        "ssp(4,2)", dts=(0.0005, 0.00025), order=2, end_time=0.002, overrides=["mesh.scale=0.1"]
    )
    assert [row["dt"] for row in study.rows] == [0.0005, 0.00025]
    assert study.errors[1] < study.errors[0]
    assert study.slope == pytest.approx(2.0, abs=0.3)


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["taylor-couette", "temporal-order", "cylinder", "free-stream"])
def test_quick_suite_passes(suite):
    checks = run_verification([suite])
    assert checks
    assert all(check.passed for check in checks), [str(c) for c in checks]
