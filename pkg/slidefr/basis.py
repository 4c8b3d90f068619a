"""
One-dimensional polynomial bases on the unit interval.

Gauss-Legendre solution points, their quadrature weights, Lagrange cardinal
functions, the nodal derivative operator, boundary interpolation rows and the
DG-recovering (right Radau) correction function. Everything else in the
package works in tensor products of these 1D objects.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.polynomial import Legendre

from .exceptions import InvalidOrderError

__all__ = [
    "BasisSet",
    "basis_for",
    "legendre_points",
    "lagrange_eval",
    "lagrange_matrix",
    "correction_function",
    "correction_derivative",
    "quadrature_integrate",
]

NEWTON_TOLERANCE = 1e-15
NEWTON_MAX_ITERATIONS = 100

Side = Literal["left", "right"]


def _check_order(n: int) -> None:
    if int(n) != n or n < 1:
        raise InvalidOrderError(f"Point count must be a positive integer, got {n}")


def _newton_roots(n: int) -> np.ndarray:
    """Roots of L_n on [-1, 1], ascending."""
    poly = Legendre.basis(n)
    dpoly = poly.deriv()
    k = np.arange(1, n + 1)
    x = -np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(NEWTON_MAX_ITERATIONS):
        dx = poly(x) / dpoly(x)
        x = x - dx
        if np.max(np.abs(dx)) <= NEWTON_TOLERANCE:
            break
    return np.sort(x)


def legendre_points(n: int) -> np.ndarray:
    """
    Roots of the degree-``n`` Legendre polynomial mapped to [0, 1].

    :param n: Number of points
    :return: Strictly increasing array of ``n`` points
    :raises InvalidOrderError: If ``n`` < 1
    """
    _check_order(n)
    x = _newton_roots(n)
    # enforce exact symmetry about 0.5
    x = 0.5 * (x - x[::-1])
    return 0.5 * (1.0 + x)


def _barycentric_weights(points: np.ndarray) -> np.ndarray:
    diff = points[:, None] - points[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def lagrange_matrix(points: np.ndarray, x: np.ndarray | float) -> np.ndarray:
    """
    Evaluate all Lagrange cardinal functions at ``x``.

    :param points: Interpolation nodes
    :param x: Evaluation coordinates (any real value)
    :return: Array of shape ``(len(x), len(points))`` with ``H[m, i] = h_i(x_m)``
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = len(points)
    out = np.ones((len(x), n))
    for i in range(n):
        for s in range(n):
            if s != i:
                out[:, i] *= (x - points[s]) / (points[i] - points[s])
    return out


def _derivative_matrix(points: np.ndarray) -> np.ndarray:
    n = len(points)
    if n == 1:
        return np.zeros((1, 1))
    c = _barycentric_weights(points)
    diff = points[:, None] - points[None, :]
    np.fill_diagonal(diff, 1.0)
    d = (c[None, :] / c[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    # negative-sum trick keeps D @ 1 == 0 to round-off
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


def _radau_left(n: int) -> Legendre:
    """g_L on [-1, 1]: (-1)^n (L_n - L_{n-1}) / 2."""
    return ((-1) ** n) * 0.5 * (Legendre.basis(n) - Legendre.basis(n - 1))


@dataclass(frozen=True)
class BasisSet:
    """
    Nodal basis with ``n`` Gauss-Legendre points on [0, 1].

    Indices are zero-based throughout: ``h_i`` for ``i`` in ``range(n)``.

    :param n: Number of points per direction (polynomial degree ``n - 1``)
    """

    n: int
    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    derivative: np.ndarray = field(repr=False)
    left_row: np.ndarray = field(repr=False)
    right_row: np.ndarray = field(repr=False)
    gl_prime: np.ndarray = field(repr=False)
    gr_prime: np.ndarray = field(repr=False)

    @property
    def degree(self) -> int:
        return self.n - 1

    @staticmethod
    def build(n: int) -> BasisSet:
        """
        Construct the basis for ``n`` points.

        :param n: Number of points
        :return: New basis set
        :raises InvalidOrderError: If ``n`` < 1
        """
        _check_order(n)
        points = legendre_points(n)
        # weights from the derivative of L_n at the [-1, 1] roots, halved for [0, 1]
        x = 2.0 * points - 1.0
        dln = Legendre.basis(n).deriv()(x)
        weights = 1.0 / ((1.0 - x**2) * dln**2)
        weights = 0.5 * (weights + weights[::-1])

        derivative = _derivative_matrix(points)
        left_row = lagrange_matrix(points, 0.0)[0]
        right_row = lagrange_matrix(points, 1.0)[0]

        dgl = _radau_left(n).deriv()
        gl_prime = 2.0 * dgl(2.0 * points - 1.0)
        gr_prime = -gl_prime[::-1]

        for array in (points, weights, derivative, left_row, right_row, gl_prime, gr_prime):
            array.setflags(write=False)
        return BasisSet(
            n=n,
            points=points,
            weights=weights,
            derivative=derivative,
            left_row=left_row,
            right_row=right_row,
            gl_prime=gl_prime,
            gr_prime=gr_prime,
        )

    def interpolation_matrix(self, x: np.ndarray | float) -> np.ndarray:
        """Rows of cardinal-function values at ``x``; see :func:`lagrange_matrix`."""
        return lagrange_matrix(self.points, x)

    def __hash__(self) -> int:
        return hash(self.n)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BasisSet) and other.n == self.n


@functools.lru_cache(maxsize=None)
def basis_for(n: int) -> BasisSet:
    """Cached :meth:`BasisSet.build`."""
    return BasisSet.build(n)


def lagrange_eval(basis: BasisSet, i: int, xi: float | np.ndarray) -> float | np.ndarray:
    """
    Value of the ``i``-th cardinal function at ``xi``.

    :param basis: Basis set
    :param i: Zero-based index, ``0 <= i < basis.n``
    :param xi: Coordinate(s); extrapolation outside [0, 1] is allowed
    :return: ``prod_{s != i} (xi - X_s) / (X_i - X_s)``
    :raises IndexError: If ``i`` is out of range
    """
    if not 0 <= i < basis.n:
        raise IndexError(f"Basis index {i} out of range for n={basis.n}")
    values = lagrange_matrix(basis.points, xi)[:, i]
    return float(values[0]) if np.ndim(xi) == 0 else values


def correction_function(basis: BasisSet, side: Side, xi: float | np.ndarray) -> np.ndarray:
    """
    Value of the degree-``n`` DG correction polynomial.

    :param basis: Basis set
    :param side: ``"left"`` (``g_L(0) = 1``) or ``"right"`` (``g_R(1) = 1``)
    :param xi: Coordinate(s) on [0, 1]
    :return: Correction values
    """
    xi = np.asarray(xi, dtype=float)
    radau = _radau_left(basis.n)
    if side == "left":
        return radau(2.0 * xi - 1.0)
    if side == "right":
        return radau(1.0 - 2.0 * xi)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def correction_derivative(basis: BasisSet, side: Side) -> np.ndarray:
    """
    Derivative of the correction polynomial at the solution points.

    :param basis: Basis set
    :param side: ``"left"`` or ``"right"``
    :return: Array ``g'(X_j)``
    """
    if side == "left":
        return basis.gl_prime
    if side == "right":
        return basis.gr_prime
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def quadrature_integrate(basis: BasisSet, samples: np.ndarray) -> float | np.ndarray:
    """
    Gauss quadrature over [0, 1] of nodal samples.

    :param basis: Basis set
    :param samples: Values at the ``n`` points along the first axis
    :return: ``sum_i w_i f(X_i)``
    :raises ValueError: If the sample count does not match the basis
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != basis.n:
        raise ValueError(
            f"Expected {basis.n} samples for quadrature, got {samples.shape[0]}"
        )
    return np.tensordot(basis.weights, samples, axes=(0, 0))
