import math

import numpy as np
import pytest

from slidefr.exceptions import ConfigurationError, DegenerateFaceError, GeometryError, InvertedElementError
from slidefr.geometry import (
    ArcCurve,
    IsoElementMap,
    LineCurve,
    RigidRotation,
    TransfiniteElementMap,
    VertexOscillation,
    arc_iso_element,
    face_normal,
    face_scaled_normal,
    map_iso,
    map_transfinite_element,
    metrics_at,
    polygon_area,
    serendipity_nodes,
    serendipity_shape,
    transfinite_with_arcs,
)
from slidefr.verification.mapping import sector_corners

UNIT = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.mark.parametrize("k", [4, 8, 12])
def test_serendipity_kronecker_and_partition(k):
    nodes = serendipity_nodes(k)
    m, mxi, meta = serendipity_shape(k, nodes[:, 0], nodes[:, 1])
    np.testing.assert_allclose(m, np.eye(k), atol=1e-12)

    xi, eta = np.meshgrid(np.linspace(0, 1, 7), np.linspace(0, 1, 7))
    m, mxi, meta = serendipity_shape(k, xi, eta)
    np.testing.assert_allclose(m.sum(axis=-1), 1.0, atol=1e-12)
    np.testing.assert_allclose(mxi.sum(axis=-1), 0.0, atol=1e-11)
    np.testing.assert_allclose(meta.sum(axis=-1), 0.0, atol=1e-11)


def test_serendipity_rejects_unsupported_count():
    with pytest.raises(ConfigurationError):
        serendipity_nodes(9)
    with pytest.raises(ConfigurationError):
        serendipity_shape(6, np.zeros(1), np.zeros(1))


@pytest.mark.parametrize("k", [4, 8, 12])
def test_iso_map_reproduces_affine_element(k):
    # an affine image of the unit square stays affine with any K
    affine = np.array([[2.0, 0.5], [-0.5, 1.0]])
    nodes = serendipity_nodes(k) @ affine.T + [1.0, 2.0]
    el = IsoElementMap(nodes)
    xi, eta = np.array([0.2, 0.7]), np.array([0.9, 0.3])
    x, y, x_xi, x_eta, y_xi, y_eta = el.evaluate(xi, eta)
    np.testing.assert_allclose(x, 2.0 * xi + 0.5 * eta + 1.0, atol=1e-12)
    np.testing.assert_allclose(y, -0.5 * xi + eta + 2.0, atol=1e-12)
    np.testing.assert_allclose(x_xi, 2.0, atol=1e-11)
    np.testing.assert_allclose(y_eta, 1.0, atol=1e-11)


def test_straight_transfinite_matches_bilinear():
    corners = np.array([[0.0, 0.0], [2.0, 0.2], [2.2, 1.8], [-0.1, 1.0]])
    xi, eta = np.meshgrid(np.linspace(0, 1, 5), np.linspace(0, 1, 5))
    tf = map_transfinite_element(corners, TransfiniteElementMap.straight_sided(corners).curves, 0.0, xi, eta)
    iso = map_iso(IsoElementMap(corners), 0.0, xi, eta)
    np.testing.assert_allclose(tf, iso, atol=1e-14)


def test_transfinite_curve_must_join_corners():
    curves = (
        LineCurve(UNIT[0], UNIT[1]),
        LineCurve(UNIT[1], UNIT[2]),
        LineCurve(UNIT[3], UNIT[2] + 0.1),
        LineCurve(UNIT[0], UNIT[3]),
    )
    with pytest.raises(GeometryError):
        TransfiniteElementMap(UNIT, curves)


def test_transfinite_arc_face_is_exact():
    corners = sector_corners(2.0, -110.0, -70.0, 1.0)
    el = transfinite_with_arcs(corners, {0: (0.0, 0.0)})
    s = np.linspace(0.0, 1.0, 101)
    x, y, *_ = el.evaluate(s, np.zeros_like(s))
    assert np.max(np.abs(np.hypot(x, y) - 2.0)) <= 1e-13


def test_iso_arc_element_exact_only_at_nodes():
    corners = sector_corners(1.0, 0.0, 10.0, 0.8)
    el = arc_iso_element(corners, 8, {0: (0.0, 0.0)})
    x, y, *_ = el.evaluate(np.array([0.0, 0.5, 1.0]), np.zeros(3))
    np.testing.assert_allclose(np.hypot(x, y), 1.0, atol=1e-14)
    x, y, *_ = el.evaluate(np.array([0.25]), np.zeros(1))
    assert abs(np.hypot(x, y)[0] - 1.0) > 1e-12


def test_arc_through_and_length():
    arc = ArcCurve.through((0.0, 0.0), (2.0, 0.0), (0.0, 2.0))
    assert arc.length == pytest.approx(math.pi)
    np.testing.assert_allclose(arc.point(0.5), [math.sqrt(2.0), math.sqrt(2.0)], atol=1e-14)
    back = arc.reversed()
    np.testing.assert_allclose(back.point(0.0), [0.0, 2.0], atol=1e-14)
    with pytest.raises(GeometryError):
        ArcCurve.through((1.0, 1.0), (1.0, 1.0), (2.0, 2.0))


def test_face_normal_points_right_of_direction():
    scaled, unit = face_normal(LineCurve(np.array([0.0, 0.0]), np.array([2.0, 0.0])), np.array([0.3]))
    np.testing.assert_allclose(scaled, [[0.0, -2.0]])
    np.testing.assert_allclose(unit, [[0.0, -1.0]])
    _, flipped = face_normal(LineCurve(np.array([0.0, 0.0]), np.array([2.0, 0.0])), 0.3, sign=-1.0)
    np.testing.assert_allclose(flipped, [0.0, 1.0])
    with pytest.raises(DegenerateFaceError):
        face_normal(LineCurve(np.array([1.0, 1.0]), np.array([1.0, 1.0])), 0.5)


@pytest.mark.parametrize("face, expected", [(0, [0.0, -1.0]), (1, [1.0, 0.0]), (2, [0.0, 1.0]), (3, [-1.0, 0.0])])
def test_unit_square_outward_normals(face, expected):
    state = metrics_at(IsoElementMap(UNIT), 0.0, 0.5, 0.5)
    np.testing.assert_allclose(face_scaled_normal(state, face)[0], expected)


def test_clockwise_element_is_inverted():
    with pytest.raises(InvertedElementError):
        metrics_at(IsoElementMap(UNIT[::-1].copy()), 0.0, 0.5, 0.5, element=7)


def test_rigid_rotation_keeps_jacobian_and_moves_with_omega():
    corners = np.array([[1.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0]])
    el = IsoElementMap(corners)
    motion = RigidRotation(center=(0.0, 0.0), omega=3.0)
    xi = np.linspace(0.1, 0.9, 4)
    ref = metrics_at(el, 0.0, xi, xi)
    moved = metrics_at(el, 0.7, xi, xi, motion)
    np.testing.assert_allclose(moved.jacobian, ref.jacobian, rtol=1e-13)
    np.testing.assert_allclose(np.hypot(moved.x, moved.y), np.hypot(ref.x, ref.y), rtol=1e-14)
    np.testing.assert_allclose(moved.x_t, -3.0 * moved.y, atol=1e-14)
    np.testing.assert_allclose(moved.y_t, 3.0 * moved.x, atol=1e-14)
    np.testing.assert_allclose(motion.rotate_points(corners, 2.0 * math.pi / 3.0), corners, atol=1e-13)


def test_vertex_oscillation_fixes_box_boundary():
    motion = VertexOscillation(0.1, 1.0, (0.0, 0.0, 1.0, 1.0))
    d, v = motion.displacement(np.array([[0.0, 0.3], [1.0, 0.5], [0.5, 0.5]]), 0.5 * math.pi)
    np.testing.assert_allclose(d[:2], 0.0, atol=1e-15)
    np.testing.assert_allclose(d[2], [0.0, 0.1])
    np.testing.assert_allclose(v[2], [0.0, 0.0], atol=1e-15)


def test_vertex_oscillation_interpolates_bilinearly():
    corners = np.array([[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75]])
    motion = VertexOscillation(0.05, 2.0, (0.0, 0.0, 1.0, 1.0))
    state = metrics_at(IsoElementMap(corners), 0.3, np.array([0.5]), np.array([0.5]), motion)
    d, v = motion.displacement(corners, 0.3)
    assert state.y[0] == pytest.approx(0.5 + d[:, 1].mean())
    assert state.y_t[0] == pytest.approx(v[:, 1].mean())
    assert state.x_t[0] == pytest.approx(0.0)


def test_vertex_oscillation_rejects_curved_element():
    el = transfinite_with_arcs(sector_corners(2.0, 10.0, 40.0, 1.0), {0: (0.0, 0.0)})
    with pytest.raises(GeometryError):
        metrics_at(el, 0.1, 0.5, 0.5, VertexOscillation(0.1, 1.0, (-3.0, -3.0, 3.0, 3.0)))


def test_polygon_area_sign():
    assert polygon_area(UNIT) == pytest.approx(1.0)
    assert polygon_area(UNIT[::-1]) == pytest.approx(-1.0)
