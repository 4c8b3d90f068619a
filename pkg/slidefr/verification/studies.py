"""
Verification studies: convergence, conservation, free-stream preservation
and rotational-speed sweeps, plus the acceptance suites behind
``slidefr verify``.

Every study point is an independent run of a case preset with a few
overridden keys; points are mapped over a thread pool when ``workers > 1``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence

import numpy as np
from scipy import stats

from ..basis import basis_for
from ..exceptions import ConfigurationError
from ..mortar.connectivity import update_connectivity
from ..mortar.projection import build_projection_cache, outflow_residual
from ..types.events import EventType, RunStatus
from .mapping import mapping_error_study
from .norms import l2_error

__all__ = [
    "Check",
    "ConvergenceStudy",
    "run_point",
    "run_convergence_study",
    "omega_sweep",
    "conservation_study",
    "free_stream_study",
    "temporal_order_study",
    "cylinder_study",
    "outflow_check",
    "VERIFY_SUITES",
    "run_verification",
]

logger = logging.getLogger(__name__)

CONSERVATION_LIMIT = 1e-12
OUTFLOW_LIMIT = 1e-12
#: within ten times the 1e-5 level of a comparable mesh at P = 2
SLIDING_FREE_STREAM_LIMIT = 1e-4


class Check(NamedTuple):
    """One acceptance check."""

    name: str
    value: float
    limit: float
    passed: bool

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.name}: {self.value:.3e} (limit {self.limit:.3e})"


@dataclass
class ConvergenceStudy:
    """
    Errors against polynomial degree (``kind="order"``) or step size
    (``kind="dt"``) with a least-squares fit.

    For ``order`` studies the fit is ``log(error)`` against ``P`` and the
    slope is the exponential decay rate; for ``dt`` studies it is
    ``log(error)`` against ``log(dt)`` and the slope is the observed order.
    """

    case: str
    kind: str
    variable: str
    rows: List[Dict[str, float]] = field(default_factory=list)
    slope: float = math.nan
    intercept: float = math.nan
    r_squared: float = math.nan

    @property
    def errors(self) -> np.ndarray:
        return np.array([row["error"] for row in self.rows])

    @property
    def ratios(self) -> np.ndarray:
        """Successive error ratios ``e_{k+1} / e_k``."""
        e = self.errors
        return e[1:] / e[:-1]

    def fit(self) -> ConvergenceStudy:
        x = np.array([row[self.kind] for row in self.rows], dtype=float)
        y = np.log(self.errors)
        if self.kind == "dt":
            x = np.log(x)
        if len(x) >= 2:
            result = stats.linregress(x, y)
            self.slope = float(result.slope)
            self.intercept = float(result.intercept)
            self.r_squared = float(result.rvalue**2)
        return self


def _map(fn: Callable[[Any], Any], items: Sequence[Any], workers: int) -> List[Any]:
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _simulation(case: str, overrides: Iterable[str]):
    from ..app import Simulation
    from ..cases import PRESETS
    from ..config import load_config

    config = load_config(overrides=list(overrides), presets=PRESETS, preset=case)
    return Simulation(config, write_output=False)


def _finish(sim) -> None:
    status = sim.run()
    if status is RunStatus.FAILED:
        raise sim.error


def _context(sim):
    from ..context import StepContext

    return StepContext.from_simulation(sim, EventType.RUN_FINISHED)


def run_point(case: str, overrides: Iterable[str] = (), variable: Optional[str] = None) -> float:
    """
    Run one preset and return the final L2 error.

    :param case: Preset name
    :param overrides: ``section.key=value`` strings
    :param variable: Primitive variable; defaults to ``[diagnostics] error_variable``
    :raises SlideFRError: If the run fails
    """
    sim = _simulation(case, overrides)
    _finish(sim)
    error = _context(sim).error(variable or sim.config.diagnostics.error_variable)
    logger.info(f"{case} {list(overrides)}: error {error:.6e}")
    return error


def run_convergence_study(
    case: str,
    orders: Optional[Sequence[int]] = None,
    dts: Optional[Sequence[float]] = None,
    overrides: Iterable[str] = (),
    variable: Optional[str] = None,
    workers: int = 1,
) -> ConvergenceStudy:
    """
    Spatial (``orders``) or temporal (``dts``) convergence of one preset.

    :param case: Preset name
    :param orders: Polynomial degrees
    :param dts: Step sizes
    :param overrides: Extra ``section.key=value`` strings shared by all points
    :param variable: Primitive variable of the error
    :param workers: Concurrent runs
    :raises ConfigurationError: Unless exactly one of ``orders`` and ``dts`` is given
    """
    if (orders is None) == (dts is None):
        raise ConfigurationError("Give either orders or time steps", key="study")
    base = list(overrides)
    kind = "order" if orders is not None else "dt"
    values = list(orders if orders is not None else dts)
    def point(v):
        setting = f"solver.order={int(v)}" if kind == "order" else f"time.dt={float(v)!r}"
        return run_point(case, base + [setting], variable)

    errors = _map(point, values, workers)
    study = ConvergenceStudy(case, kind, variable or "default")
    study.rows = [{kind: float(v), "error": e} for v, e in zip(values, errors)]
    return study.fit()


def omega_sweep(
    case: str = "euler-vortex",
    omegas: Sequence[float] = (0.0, 1.0, 5.0, 10.0, 15.0, 20.0),
    overrides: Iterable[str] = (),
    variable: Optional[str] = None,
    workers: int = 1,
) -> List[Dict[str, float]]:
    """Final error of one preset for several rotational speeds of subdomain 0."""
    base = list(overrides)
    errors = _map(lambda w: run_point(case, base + [f"rotation.omega.0={float(w)!r}"], variable), list(omegas), workers)
    return [{"omega": float(w), "error": e} for w, e in zip(omegas, errors)]


_CONSERVED = ("mass", "x_momentum", "y_momentum", "energy")


def _conservation_point(point) -> Dict[str, float]:
    omega, order, base = point
    sim = _simulation("flat-couette", base + [f"rotation.omega.0={float(omega)!r}", f"solver.order={int(order)}"])
    worst = np.zeros(4)
    defect = [0.0]

    @sim.on(EventType.STEP_COMPLETED)
    def track(ctx) -> None:
        np.maximum(worst, np.abs(ctx.conservation()), out=worst)
        defect[0] = max(defect[0], sim.stage_interface_defect)

    _finish(sim)
    row = {"omega": float(omega), "order": order}
    row.update({name: float(v) for name, v in zip(_CONSERVED, worst)})
    row["interface_defect"] = defect[0]
    return row


def conservation_study(
    omegas: Sequence[float] = (0.0, 5.0, 10.0, 20.0),
    orders: Sequence[int] = (4, 8),
    end_time: float = 2.0,
    overrides: Iterable[str] = (),
    workers: int = 1,
) -> List[Dict[str, float]]:
    """
    Largest per-step conservation error of the plate Couette flow.

    :return: One row per ``(omega, order)`` with the four components
    """
    base = list(overrides) + [f"time.end_time={end_time!r}"]
    points = [(w, p, base) for w in omegas for p in orders]
    return _map(_conservation_point, points, workers)


def _free_stream_point(point) -> Dict[str, float]:
    case, omega, order, base = point
    extra = [f"solver.order={int(order)}"]
    if case == "free-stream":
        extra.append(f"rotation.omega.0={float(omega)!r}")
    sim = _simulation(case, base + extra)
    _finish(sim)
    return {"omega": float(omega), "order": order, "pressure_error": _context(sim).pressure_error()}


def free_stream_study(
    orders: Sequence[int] = (2, 3, 4, 5, 6),
    omegas: Sequence[float] = (0.0,),
    conforming: bool = False,
    end_time: float = 5.0,
    overrides: Iterable[str] = (),
    workers: int = 1,
) -> List[Dict[str, float]]:
    """
    Normalized pressure error of a uniform flow after ``end_time``.

    :param conforming: Use the oscillating conforming block instead of the
        sliding mesh; ``omegas`` is ignored then
    """
    case = "free-stream-conforming" if conforming else "free-stream"
    base = list(overrides) + [f"time.end_time={end_time!r}"]
    speeds = (0.0,) if conforming else tuple(omegas)
    points = [(case, w, p, base) for w in speeds for p in orders]
    return _map(_free_stream_point, points, workers)


def _rho(sim) -> np.ndarray:
    return _context(sim).primitive("rho")


def temporal_order_study(
    scheme: str,
    dts: Sequence[float],
    case: str = "euler-vortex",
    order: int = 5,
    end_time: float = 0.2,
    overrides: Iterable[str] = (),
    workers: int = 1,
) -> ConvergenceStudy:
    """
    Observed temporal order of one scheme.

    Each step size is compared against a ``ssp(10,4)`` run at a quarter of the
    smallest step on the same mesh and degree, so the spatial error cancels.

    :param scheme: Scheme name, e.g. ``"ssp(4,2)"``
    :param dts: Step sizes; ``end_time`` should be a multiple of each
    :param case: Preset name
    :param order: Polynomial degree shared by all runs
    :param end_time: Final time
    :param overrides: Extra ``section.key=value`` strings
    :param workers: Concurrent runs
    """
    base = list(overrides) + [f"solver.order={int(order)}", f"time.end_time={end_time!r}"]
    values = [float(dt) for dt in dts]
    runs = [(scheme, dt) for dt in values] + [("ssp(10,4)", 0.25 * min(values))]

    def point(run):
        name, dt = run
        sim = _simulation(case, base + [f"time.scheme={name}", f"time.dt={dt!r}"])
        _finish(sim)
        return _rho(sim)

    *fields, reference = _map(point, runs, workers)
    study = ConvergenceStudy(case, "dt", "rho")
    study.rows = [{"dt": dt, "error": l2_error(rho, reference)} for dt, rho in zip(values, fields)]
    logger.info(f"{scheme}: observed order {study.fit().slope:.3f}")
    return study


def cylinder_study(
    case: str = "square-cylinder", overrides: Iterable[str] = (), window: float = 0.5
) -> Dict[str, float]:
    """
    Force coefficients of a rotating-cylinder run.

    :param case: Preset name
    :param overrides: Extra ``section.key=value`` strings
    :param window: Fraction of the run, counted from the end, treated as developed
    :return: Step count and extremes of ``C_d`` and ``C_l`` over the developed window
    """
    sim = _simulation(case, overrides)
    samples = []

    @sim.on(EventType.STEP_COMPLETED)
    def sample(ctx) -> None:
        samples.append(ctx.forces())

    _finish(sim)
    if not samples:
        raise ConfigurationError("The run took no steps", key="time.end_time")
    start = sim.t * (1.0 - window)
    developed = [s for s in samples if s.t >= start] or samples[-1:]
    drag = np.array([s.drag for s in developed])
    lift = np.array([s.lift for s in developed])
    every = np.array([[s.fx, s.fy] for s in samples])
    return {
        "steps": float(sim.step),
        "finite": float(np.all(np.isfinite(every))),
        "min_cd": float(drag.min()),
        "mean_cd": float(drag.mean()),
        "max_cl": float(lift.max()),
        "mean_cl": float(lift.mean()),
    }


def outflow_check(
    counts: Sequence[Sequence[int]] = ((4, 8), (5, 7)),
    sizes: Iterable[int] = range(1, 11),
    samples: int = 50,
    seed: int = 0,
) -> float:
    """
    Largest outflow residual over random relative rotations of uniform
    interfaces with the given face counts.

    :param counts: ``(left, right)`` face counts
    :param sizes: Points per face ``N``
    :param samples: Random angles per face-count pair
    :param seed: Generator seed
    """
    rng = np.random.default_rng(seed)
    sizes = list(sizes)
    worst = 0.0
    for nl, nr in counts:
        left_sweep = np.full(nl, 2.0 * math.pi / nl)
        right_sweep = np.full(nr, 2.0 * math.pi / nr)
        left_start = np.arange(nl) * left_sweep[0]
        for angle in rng.uniform(0.0, 2.0 * math.pi, samples):
            conn = update_connectivity(left_start, left_sweep, np.arange(nr) * right_sweep[0] + angle, right_sweep)
            for n in sizes:
                worst = max(worst, outflow_residual(build_projection_cache(basis_for(n), conn)))
    return worst


# ---------------------------------------------------------------------------
# acceptance suites


def _mapping_suite(quick: bool) -> List[Check]:
    study = mapping_error_study()
    dr = [study.max_dr(name) for name in ("linear", "quadratic", "cubic")]
    dx = [study.max_dx(name) for name in ("linear", "quadratic", "cubic")]
    return [
        Check("transfinite radius error", study.max_dr("transfinite"), 1e-13, study.max_dr("transfinite") <= 1e-13),
        Check("iso-parametric radius error decreases", dr[-1], dr[0], dr[0] > dr[1] > dr[2]),
        Check("iso-parametric coordinate error decreases", dx[-1], dx[0], dx[0] > dx[1] > dx[2]),
    ]


def _outflow_suite(quick: bool) -> List[Check]:
    value = outflow_check(samples=10 if quick else 50)
    return [Check("projection outflow identity", value, OUTFLOW_LIMIT, value <= OUTFLOW_LIMIT)]


def _conservation_suite(quick: bool) -> List[Check]:
    rows = conservation_study(
        omegas=(0.0, 5.0) if quick else (0.0, 5.0, 10.0, 20.0),
        orders=(4,) if quick else (4, 8),
        end_time=0.01 if quick else 2.0,
    )
    worst = max(max(row[name] for name in _CONSERVED) for row in rows)
    defect = max(row["interface_defect"] for row in rows)
    return [
        Check("global conservation", worst, CONSERVATION_LIMIT, worst <= CONSERVATION_LIMIT),
        Check("interface flux conservation", defect, CONSERVATION_LIMIT, defect <= CONSERVATION_LIMIT),
    ]


def _free_stream_suite(quick: bool) -> List[Check]:
    orders = (2, 3) if quick else (2, 3, 4, 5, 6)
    end_time = 0.05 if quick else 5.0
    conforming = free_stream_study(orders, conforming=True, end_time=end_time)
    worst = max(row["pressure_error"] for row in conforming)
    checks = [Check("conforming free-stream preservation", worst, 1e-12, worst <= 1e-12)]
    rows = free_stream_study(orders[:1] if quick else orders, end_time=end_time)
    sliding = [row["pressure_error"] for row in rows]
    limit = SLIDING_FREE_STREAM_LIMIT
    checks.append(Check("sliding free-stream error at P=2", sliding[0], limit, sliding[0] <= limit))
    if not quick:
        ratio = max(b / a for a, b in zip(sliding, sliding[1:]))
        checks.append(Check("sliding free-stream decay per degree", ratio, 0.2, ratio <= 0.2))
    return checks


def _vortex_suite(quick: bool) -> List[Check]:
    orders = (2, 3) if quick else (2, 3, 4, 5)
    overrides = ["time.end_time=0.05"] if quick else []
    checks = []
    for omega in (0.0,) if quick else (0.0, 5.0, 20.0):
        study = run_convergence_study(
            "euler-vortex", orders=orders, overrides=overrides + [f"rotation.omega.0={float(omega)!r}"], variable="rho"
        )
        ratio = float(study.ratios.max())
        checks.append(Check(f"vortex spatial ratio omega={omega:g}", ratio, 0.5, ratio <= 0.5))
        if not quick:
            checks.append(Check(f"vortex fit R^2 omega={omega:g}", study.r_squared, 0.95, study.r_squared >= 0.95))
    return checks


def _taylor_couette_suite(quick: bool) -> List[Check]:
    orders = (2, 3) if quick else (2, 3, 4, 5)
    overrides = ["time.end_time=0.02"] if quick else []
    checks = []
    for omega in (0.0,) if quick else (0.0, 5.0):
        study = run_convergence_study(
            "taylor-couette", orders=orders, overrides=overrides + [f"rotation.omega.0={float(omega)!r}"], variable="u"
        )
        ratio = float(study.ratios.max())
        checks.append(Check(f"Taylor-Couette u-error ratio omega={omega:g}", ratio, 1.0, ratio < 1.0))
        if not quick:
            checks.append(
                Check(f"Taylor-Couette fit R^2 omega={omega:g}", study.r_squared, 0.9, study.r_squared >= 0.9)
            )
    return checks


_TEMPORAL_SCHEMES = (("ssp(4,2)", 2), ("ssp(8,3)", 3), ("ssp(10,4)", 4))


def _temporal_suite(quick: bool) -> List[Check]:
    if quick:
        settings = dict(dts=(0.0005, 0.00025), order=2, end_time=0.005, overrides=["mesh.scale=0.1"])
    else:
        settings = dict(dts=(0.002, 0.001, 0.0005), order=5, end_time=0.2)
    checks = []
    for scheme, expected in _TEMPORAL_SCHEMES:
        slope = temporal_order_study(scheme, **settings).slope
        miss = abs(slope - expected)
        checks.append(Check(f"{scheme} temporal order {slope:.2f}", miss, 0.1 * expected, miss <= 0.1 * expected))
    return checks


def _cylinder_suite(quick: bool) -> List[Check]:
    overrides = ["time.end_time=0.005"] if quick else []
    result = cylinder_study(overrides=overrides)
    checks = [
        Check("cylinder forces finite", 1.0 - result["finite"], 0.0, result["finite"] == 1.0),
        Check("cylinder mean drag positive", result["mean_cd"], 0.0, result["mean_cd"] > 0.0),
    ]
    if not quick:
        checks.append(Check("cylinder drag positive", result["min_cd"], 0.0, result["min_cd"] > 0.0))
        checks.append(Check("cylinder lift negative", result["max_cl"], 0.0, result["max_cl"] < 0.0))
    return checks


VERIFY_SUITES: Dict[str, Callable[[bool], List[Check]]] = {
    "mapping": _mapping_suite,
    "outflow": _outflow_suite,
    "conservation": _conservation_suite,
    "free-stream": _free_stream_suite,
    "vortex": _vortex_suite,
    "taylor-couette": _taylor_couette_suite,
    "temporal-order": _temporal_suite,
    "cylinder": _cylinder_suite,
}


def run_verification(suites: Optional[Sequence[str]] = None, quick: bool = True) -> List[Check]:
    """
    Run acceptance suites.

    :param suites: Suite names; all by default
    :param quick: Shortened runs that finish in seconds
    :raises ConfigurationError: For an unknown suite
    """
    names = list(suites) if suites else list(VERIFY_SUITES)
    unknown = [name for name in names if name not in VERIFY_SUITES]
    if unknown:
        raise ConfigurationError(f"Unknown verification suite(s) {unknown}; available: {', '.join(VERIFY_SUITES)}", key="suite")
    checks: List[Check] = []
    for name in names:
        results = VERIFY_SUITES[name](quick)
        for check in results:
            (logger.info if check.passed else logger.warning)(str(check))
        checks.extend(results)
    return checks
