import numpy as np
import pytest
from scipy.special import roots_legendre

from slidefr.basis import (
    BasisSet,
    basis_for,
    correction_derivative,
    correction_function,
    lagrange_eval,
    lagrange_matrix,
    legendre_points,
    quadrature_integrate,
)
from slidefr.exceptions import InvalidOrderError


def test_single_point_is_midpoint():
    assert legendre_points(1) == pytest.approx([0.5])


def test_two_points():
    d = 0.5 / np.sqrt(3.0)
    assert legendre_points(2) == pytest.approx([0.5 - d, 0.5 + d], abs=1e-15)


@pytest.mark.parametrize("n", range(1, 16))
def test_points_and_weights_match_reference_rule(n):
    x, w = roots_legendre(n)
    basis = basis_for(n)
    np.testing.assert_allclose(basis.points, 0.5 * (x + 1.0), atol=1e-14)
    np.testing.assert_allclose(basis.weights, 0.5 * w, atol=1e-13)
    assert basis.weights.sum() == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_points_symmetric_and_increasing(n):
    p = legendre_points(n)
    assert np.all(np.diff(p) > 0)
    np.testing.assert_allclose(p + p[::-1], 1.0, atol=1e-15)


@pytest.mark.parametrize("n", [0, -2, 2.5])
def test_invalid_point_count(n):
    with pytest.raises(InvalidOrderError):
        BasisSet.build(n)


def test_basis_is_cached():
    assert basis_for(6) is basis_for(6)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_cardinal_property_and_partition_of_unity(n):
    basis = basis_for(n)
    np.testing.assert_allclose(basis.interpolation_matrix(basis.points), np.eye(n), atol=1e-13)
    x = np.linspace(-0.3, 1.3, 17)
    np.testing.assert_allclose(lagrange_matrix(basis.points, x).sum(axis=1), 1.0, atol=1e-12)


def test_lagrange_eval_scalar_and_range(basis4):
    assert lagrange_eval(basis4, 2, basis4.points[2]) == pytest.approx(1.0)
    assert lagrange_eval(basis4, 2, basis4.points[1]) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(IndexError):
        lagrange_eval(basis4, 4, 0.5)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_derivative_exact_for_degree_n_minus_one(n):
    basis = basis_for(n)
    x = basis.points
    coeffs = np.arange(1, n + 1, dtype=float)
    f = np.polynomial.polynomial.polyval(x, coeffs)
    df = np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(coeffs))
    np.testing.assert_allclose(basis.derivative @ f, df, rtol=1e-11, atol=1e-11)
    np.testing.assert_allclose(basis.derivative @ np.ones(n), 0.0, atol=1e-13)


def test_boundary_rows_interpolate_endpoints(basis4):
    f = basis4.points**3 - 2.0 * basis4.points
    assert basis4.left_row @ f == pytest.approx(0.0, abs=1e-13)
    assert basis4.right_row @ f == pytest.approx(-1.0, abs=1e-13)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_correction_function_endpoint_values(n):
    basis = basis_for(n)
    assert correction_function(basis, "left", 0.0) == pytest.approx(1.0)
    assert correction_function(basis, "left", 1.0) == pytest.approx(0.0, abs=1e-14)
    assert correction_function(basis, "right", 1.0) == pytest.approx(1.0)
    assert correction_function(basis, "right", 0.0) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_correction_derivative_recovers_lumped_dg(n):
    basis = basis_for(n)
    np.testing.assert_allclose(correction_derivative(basis, "left"), -basis.left_row / basis.weights, atol=1e-10)
    np.testing.assert_allclose(correction_derivative(basis, "right"), basis.right_row / basis.weights, atol=1e-10)


def test_correction_side_must_be_named(basis4):
    with pytest.raises(ValueError):
        correction_derivative(basis4, "top")


@pytest.mark.parametrize("n", [1, 3, 5])
def test_quadrature_exact_to_degree_2n_minus_1(n):
    basis = basis_for(n)
    degree = 2 * n - 1
    assert quadrature_integrate(basis, basis.points**degree) == pytest.approx(1.0 / (degree + 1), rel=1e-13)


def test_quadrature_length_mismatch(basis4):
    with pytest.raises(ValueError):
        quadrature_integrate(basis4, np.ones(3))


def test_diagonal_mass_matrix(basis4):
    # exact mass matrix by a rule that integrates degree 2(n-1) products exactly
    fine = basis_for(8)
    h = lagrange_matrix(basis4.points, fine.points)
    mass = np.einsum("k,ki,kj->ij", fine.weights, h, h)
    lumped = np.diag(basis4.weights)
    np.testing.assert_allclose(mass, lumped, atol=1e-14)
