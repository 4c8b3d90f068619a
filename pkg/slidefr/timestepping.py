"""
Explicit strong-stability-preserving Runge-Kutta schemes.

Every scheme is stored as a Butcher tableau. Tableaux are assembled from the
Shu-Osher or low-storage form they are usually published in, then checked
against the order conditions on construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction as Fr
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ConfigurationError, DivergenceError

__all__ = [
    "RKScheme",
    "SCHEMES",
    "ORDER_TOLERANCE",
    "parse_scheme",
    "shu_osher_tableau",
    "compose",
    "advance",
    "stability_function",
    "order_defects",
]

ORDER_TOLERANCE = 1e-12

Rhs = Callable[[float, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RKScheme:
    """
    Explicit Runge-Kutta scheme.

    :param stages: Number of stages ``s``
    :param order: Formal order ``p``
    :param a: Strictly lower-triangular ``(s, s)`` stage matrix
    :param b: Weights ``(s,)``
    :param c: Abscissae ``(s,)``, the row sums of ``a``
    :param tolerance: Largest accepted order-condition defect
    :raises ConfigurationError: If the tableau violates its order conditions
    """

    stages: int
    order: int
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    c: np.ndarray = field(repr=False)
    tolerance: float = field(default=ORDER_TOLERANCE, repr=False)

    def __post_init__(self) -> None:
        if self.a.shape != (self.stages, self.stages) or np.any(np.triu(self.a) != 0.0):
            raise ConfigurationError(f"{self.name} is not an explicit {self.stages}-stage tableau", key="time.scheme")
        if np.max(np.abs(self.a.sum(axis=1) - self.c)) > self.tolerance:
            raise ConfigurationError(f"{self.name}: abscissae are not the row sums", key="time.scheme")
        worst = max(order_defects(self)[: _CONDITION_COUNT[self.order]])
        if worst > self.tolerance:
            raise ConfigurationError(
                f"{self.name} violates its order conditions by {worst:.3e}", key="time.scheme"
            )

    @property
    def name(self) -> str:
        return f"ssp({self.stages},{self.order})"

    def __str__(self) -> str:
        return self.name


_CONDITION_COUNT = {1: 1, 2: 2, 3: 4, 4: 8}


def order_defects(scheme: RKScheme) -> List[float]:
    """
    Absolute defects of the eight rooted-tree conditions through order four.

    Conditions are listed by order: ``b.1``, ``b.c``, ``b.c^2``, ``b.Ac``,
    ``b.c^3``, ``b.(c*Ac)``, ``b.Ac^2``, ``b.AAc``.
    """
    a, b, c = scheme.a, scheme.b, scheme.c
    ac = a @ c
    checks = [
        (b.sum(), 1.0),
        (b @ c, 1.0 / 2.0),
        (b @ c**2, 1.0 / 3.0),
        (b @ ac, 1.0 / 6.0),
        (b @ c**3, 1.0 / 4.0),
        (b @ (c * ac), 1.0 / 8.0),
        (b @ (a @ c**2), 1.0 / 12.0),
        (b @ (a @ ac), 1.0 / 24.0),
    ]
    return [abs(float(value) - target) for value, target in checks]


def shu_osher_tableau(alpha: Sequence[Sequence], beta: Sequence[Sequence]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Butcher ``(A, b)`` from Shu-Osher coefficients.

    Row ``i`` (1-based, ``i = 1..s``) defines
    ``y_i = sum_k alpha[i-1][k] y_k + dt beta[i-1][k] L(y_k)`` over ``k < i``
    with ``y_0 = u_n`` and ``u_{n+1} = y_s``.
    """
    s = len(alpha)
    rows = [[Fr(0)] * s]
    for i in range(s):
        row = [Fr(0)] * s
        for k, (al, be) in enumerate(zip(alpha[i], beta[i])):
            al, be = Fr(al), Fr(be)
            for j in range(s):
                row[j] += al * rows[k][j]
            if be:
                row[k] += be
        rows.append(row)
    a = np.array([[float(x) for x in r] for r in rows[:s]])
    b = np.array([float(x) for x in rows[s]])
    return a, b


def _scheme(stages: int, order: int, a: np.ndarray, b: np.ndarray) -> RKScheme:
    return RKScheme(stages, order, a, b, a.sum(axis=1))


def compose(first: RKScheme, second: RKScheme, order: int) -> RKScheme:
    """Two half steps, ``first`` then ``second``, as one scheme."""
    s1, s2 = first.stages, second.stages
    a = np.zeros((s1 + s2, s1 + s2))
    a[:s1, :s1] = 0.5 * first.a
    a[s1:, :s1] = 0.5 * first.b[None, :]
    a[s1:, s1:] = 0.5 * second.a
    b = 0.5 * np.concatenate([first.b, second.b])
    return _scheme(s1 + s2, order, a, b)


def _ssp_second_order(s: int) -> RKScheme:
    alpha, beta = [], []
    for i in range(1, s):
        alpha.append([0] * (i - 1) + [1])
        beta.append([0] * (i - 1) + [Fr(1, s - 1)])
    alpha.append([Fr(1, s)] + [0] * (s - 2) + [Fr(s - 1, s)])
    beta.append([0] * (s - 1) + [Fr(1, s)])
    return _scheme(s, 2, *shu_osher_tableau(alpha, beta))


def _ssp33() -> RKScheme:
    alpha = [[1], [Fr(3, 4), Fr(1, 4)], [Fr(1, 3), 0, Fr(2, 3)]]
    beta = [[1], [0, Fr(1, 4)], [0, 0, Fr(2, 3)]]
    return _scheme(3, 3, *shu_osher_tableau(alpha, beta))


def _ssp43() -> RKScheme:
    half, sixth = Fr(1, 2), Fr(1, 6)
    alpha = [[1], [0, 1], [Fr(2, 3), 0, Fr(1, 3)], [0, 0, 0, 1]]
    beta = [[half], [0, half], [0, 0, sixth], [0, 0, 0, half]]
    return _scheme(4, 3, *shu_osher_tableau(alpha, beta))


def _ssp54() -> RKScheme:
    alpha = [
        [1.0],
        [0.444370493651235, 0.555629506348765],
        [0.620101851488403, 0.0, 0.379898148511597],
        [0.178079954393132, 0.0, 0.0, 0.821920045606868],
        [0.0, 0.0, 0.517231671970585, 0.096059710526147, 0.386708617503269],
    ]
    beta = [
        [0.391752226571890],
        [0.0, 0.368410593050371],
        [0.0, 0.0, 0.251891774271694],
        [0.0, 0.0, 0.0, 0.544974750228521],
        [0.0, 0.0, 0.0, 0.063692468666290, 0.226007483236906],
    ]
    a, b = shu_osher_tableau(alpha, beta)
    # published to 15 digits
    return RKScheme(5, 4, a, b, a.sum(axis=1), tolerance=1e-10)


def _ssp10_4() -> RKScheme:
    """Low-storage ten-stage scheme written out in Butcher form."""
    s = 10
    a = [[Fr(0)] * s for _ in range(s)]
    for i in range(1, 5):
        for j in range(i):
            a[i][j] = Fr(1, 6)
    for j in range(5):
        a[5][j] = Fr(1, 15)
    for i in range(6, 10):
        for j in range(5):
            a[i][j] = Fr(1, 15)
        for j in range(5, i):
            a[i][j] = Fr(1, 6)
    a = np.array([[float(x) for x in row] for row in a])
    return _scheme(s, 4, a, np.full(s, 0.1))


SCHEMES: Dict[str, Callable[[], RKScheme]] = {
    "ssp(3,3)": _ssp33,
    "ssp(4,2)": lambda: _ssp_second_order(4),
    "ssp(4,3)": _ssp43,
    "ssp(5,4)": _ssp54,
    "ssp(8,3)": lambda: compose(_ssp43(), _ssp43(), 3),
    "ssp(10,4)": _ssp10_4,
}

_NAME = re.compile(r"^\s*ssp\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*$", re.IGNORECASE)


def parse_scheme(name: str) -> RKScheme:
    """
    Scheme from its ``ssp(s,p)`` name.

    :raises ConfigurationError: For a malformed or unsupported name
    """
    match = _NAME.match(str(name))
    if match is None:
        raise ConfigurationError(f"Malformed scheme name {name!r}, expected 'ssp(s,p)'", key="time.scheme")
    key = f"ssp({int(match.group(1))},{int(match.group(2))})"
    if key not in SCHEMES:
        raise ConfigurationError(
            f"Unsupported scheme {key}; available: {', '.join(SCHEMES)}", key="time.scheme"
        )
    return SCHEMES[key]()


def advance(
    scheme: RKScheme,
    u: np.ndarray,
    t: float,
    dt: float,
    rhs: Rhs,
    step: Optional[int] = None,
) -> np.ndarray:
    """
    One explicit step.

    Stage ``i`` is evaluated at ``t + c_i dt``; every component of ``u``,
    including a co-integrated Jacobian, advances with the same tableau.

    :param scheme: Scheme
    :param u: State at ``t``
    :param t: Current time
    :param dt: Step size
    :param rhs: ``rhs(t, u) -> du/dt``
    :param step: Step number for error reports
    :return: State at ``t + dt``
    :raises DivergenceError: If a stage produces a non-finite value
    """
    a, b, c = scheme.a, scheme.b, scheme.c
    k: List[np.ndarray] = []
    for i in range(scheme.stages):
        y = u
        for j in range(i):
            if a[i, j] != 0.0:
                y = y + (dt * a[i, j]) * k[j]
        if not np.all(np.isfinite(y)):
            raise DivergenceError("Non-finite stage value", step=step, stage=i)
        k.append(rhs(t + c[i] * dt, y))
    out = u
    for j in range(scheme.stages):
        if b[j] != 0.0:
            out = out + (dt * b[j]) * k[j]
    if not np.all(np.isfinite(out)):
        raise DivergenceError("Non-finite solution", step=step, stage=scheme.stages)
    return out


def stability_function(scheme: RKScheme, z: np.ndarray | complex) -> np.ndarray:
    """``R(z) = 1 + z b^T (I - z A)^-1 1``, a polynomial for explicit schemes."""
    z = np.asarray(z, dtype=complex)
    result = np.ones_like(z)
    term = np.ones(scheme.stages)
    power = np.ones_like(z)
    for _ in range(scheme.stages):
        power = power * z
        result = result + power * (scheme.b @ term)
        term = scheme.a @ term
    return result if result.ndim else result[()]
