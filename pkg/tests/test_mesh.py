import math
from dataclasses import replace

import numpy as np
import pytest

from slidefr.exceptions import InvertedElementError, MeshParseError, TopologyError
from slidefr.geometry import TransfiniteElementMap, IsoElementMap, polygon_area
from slidefr.mesh import (
    GENERATORS,
    InterfaceSide,
    SubdomainMesh,
    assemble,
    block_mesh,
    concentric_rings_mesh,
    correct_interface_radius,
    interface_radius,
    parse_subdomain,
    prepare_mesh,
    read_subdomain,
    reorder_sliding_faces,
    vortex_box_mesh,
    write_subdomain,
)

SINGLE_CELL = """\
# one unit cell
VERTICES 4
0 0
1 0
1 1
0 1   # last vertex
CELLS 1
0 1 2 3
BOUNDARY 4
0 0 bottom
0 1 right
0 2 top
0 3 left
"""


def test_parse_single_cell():
    mesh = parse_subdomain(SINGLE_CELL)
    assert mesh.n_cells == 1
    assert mesh.n_vertices == 4
    assert mesh.boundary[(0, 2)] == "top"
    assert mesh.rotation.omega == 0.0


def test_parse_sliding_and_rotation():
    open_left = SINGLE_CELL.replace("BOUNDARY 4", "BOUNDARY 3").replace("0 3 left\n", "")
    text = open_left + "SLIDING 1\n0 0 3 inner 0.5 -2\nROTATION 1\n0.5 -2 4.0\n"
    mesh = parse_subdomain(text)
    (face,) = mesh.sliding
    assert face.side is InterfaceSide.INNER
    assert face.interface == 3
    assert face.center == (0.5, -2.0)
    assert mesh.rotation.omega == 4.0


@pytest.mark.parametrize(
    "text, line",
    [
        ("VERTICES 2\n0 0\n1 0\nCELLS 1\n0 1 2\n", 5),
        ("VERTICES 4\n0 0\n1 0\n", 3),
        ("FACES 1\n0 1\n", 1),
        ("VERTICES x\n", 1),
        ("VERTICES 1\n0 zero\n", 2),
        ("VERTICES 1\n0 0\nVERTICES 1\n1 1\n", 3),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(MeshParseError) as info:
        parse_subdomain(text, path="bad.mesh")
    assert info.value.line == line
    assert "bad.mesh" in str(info.value)


def test_missing_cells_section():
    with pytest.raises(MeshParseError):
        parse_subdomain("VERTICES 1\n0 0\n")


def test_vertex_out_of_range():
    with pytest.raises(MeshParseError):
        parse_subdomain("VERTICES 3\n0 0\n1 0\n1 1\nCELLS 1\n0 1 2 3\n")


def test_clockwise_cell_rejected():
    with pytest.raises(InvertedElementError) as info:
        parse_subdomain("VERTICES 4\n0 0\n1 0\n1 1\n0 1\nCELLS 1\n0 3 2 1\n")
    assert info.value.element == 0


def test_write_then_read_preserves_mesh(tmp_path):
    inner, outer = vortex_box_mesh(scale=0.1, omega=5.0)
    path = write_subdomain(inner, tmp_path / "meshes" / "inner.mesh")
    back = read_subdomain(path)
    assert back.name == "inner"
    np.testing.assert_array_equal(back.vertices, inner.vertices)
    np.testing.assert_array_equal(back.cells, inner.cells)
    assert back.sliding == inner.sliding
    assert back.rotation == inner.rotation


def test_read_missing_file(tmp_path):
    with pytest.raises(MeshParseError):
        read_subdomain(tmp_path / "nothing.mesh")


def test_vortex_mesh_counts():
    inner, outer = vortex_box_mesh()
    assert (inner.n_cells, outer.n_cells) == (20, 52)
    assert len(inner.sliding) == 8
    assert len(outer.sliding) == 12
    assert set(outer.boundary.values()) == {"bottom", "right", "top", "left"}
    assert not inner.boundary


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_generated_meshes_assemble(name):
    mesh = prepare_mesh(GENERATORS[name]())
    sliding = sum(side.n_faces for item in mesh.interfaces for side in (item.inner, item.outer))
    assert 4 * mesh.n_cells == 2 * len(mesh.interior_faces) + len(mesh.boundary_faces) + sliding
    for verts in mesh.cells:
        assert polygon_area(mesh.vertices[verts]) > 0.0


def test_assembly_offsets(vortex_mesh):
    assert vortex_mesh.n_cells == 72
    assert vortex_mesh.n_subdomains == 2
    assert vortex_mesh.cell_offsets == (0, 20)
    assert np.count_nonzero(vortex_mesh.cell_subdomain == 1) == 52
    assert len(vortex_mesh.boundary_faces) == 20
    assert vortex_mesh.rotations[0].omega == 5.0


def test_interior_faces_traverse_edge_in_opposite_directions(vortex_mesh):
    cells = vortex_mesh.cells
    for c0, f0, c1, f1 in vortex_mesh.interior_faces:
        assert cells[c0, f0] == cells[c1, (f1 + 1) % 4]
        assert cells[c0, (f0 + 1) % 4] == cells[c1, f1]


def test_sliding_sides_form_counterclockwise_loops(vortex_mesh):
    (item,) = vortex_mesh.interfaces
    assert vortex_mesh.ordered
    for side, count in ((item.inner, 8), (item.outer, 12)):
        assert side.n_faces == count
        np.testing.assert_array_equal(side.vof[:, 1], np.roll(side.vof[:, 0], -1))
        angles = [
            math.atan2(*(vortex_mesh.vertices[v] - item.center)[::-1]) % (2 * math.pi) for v in side.vof[:, 0]
        ]
        assert np.all(np.diff(angles) > 0.0)


def test_interface_vertices_share_one_radius(vortex_mesh):
    (item,) = vortex_mesh.interfaces
    radius = interface_radius(vortex_mesh, item.id)
    assert radius == pytest.approx(0.2)
    ids = np.concatenate([item.inner.vof.ravel(), item.outer.vof.ravel()])
    np.testing.assert_allclose(np.hypot(*(vortex_mesh.vertices[ids] - item.center).T), radius, rtol=0, atol=1e-15)


def test_flip_marks_clockwise_natural_faces(vortex_mesh):
    (item,) = vortex_mesh.interfaces
    for side in (item.inner, item.outer):
        for cell, face, (a, _), flip in zip(side.cells, side.faces, side.vof, side.flip):
            natural_start = vortex_mesh.cells[cell, (0, 1, 3, 0)[face]]
            assert flip == (natural_start != a)


def test_element_maps_use_exact_arcs_on_sliding_faces(annulus):
    (item,) = annulus.interfaces
    cell, face = int(item.inner.cells[0]), int(item.inner.faces[0])
    el = annulus.element_map(cell, boundary_nodes=8)
    assert isinstance(el, TransfiniteElementMap)
    assert not el.straight

    wall = next(c for (c, f), tag in zip(annulus.boundary_faces.tolist(), annulus.boundary_tags) if tag == "inner_wall")
    assert isinstance(annulus.element_map(wall, boundary_nodes=8), IsoElementMap)
    assert isinstance(annulus.element_map(wall), TransfiniteElementMap)


def test_unknown_interface_id(vortex_mesh):
    with pytest.raises(KeyError):
        vortex_mesh.interface(9)


def test_untagged_face_is_a_topology_error():
    mesh = parse_subdomain(SINGLE_CELL.replace("BOUNDARY 4", "BOUNDARY 3").replace("0 3 left\n", ""))
    with pytest.raises(TopologyError):
        assemble([mesh])


def test_one_sided_interface():
    inner, _ = vortex_box_mesh()
    with pytest.raises(TopologyError) as info:
        assemble([inner])
    assert info.value.interface == 1


def test_face_both_boundary_and_sliding_rejected():
    with pytest.raises(MeshParseError, match="both a boundary and a sliding face"):
        parse_subdomain(SINGLE_CELL + "SLIDING 1\n0 0 3 inner 0 0\n")


def test_interface_center_must_match_inner_rotation():
    inner, outer = vortex_box_mesh(omega=1.0)
    cx, cy = inner.rotation.center
    shifted = replace(inner, rotation=replace(inner.rotation, center=(cx + 0.5, cy)))
    with pytest.raises(TopologyError, match="inner rotation center") as info:
        assemble([shifted, outer])
    assert info.value.interface == 1


def test_outer_rotation_center_is_not_checked():
    inner, outer = vortex_box_mesh(omega=1.0)
    moved = replace(outer, rotation=replace(outer.rotation, center=(3.0, -2.0)))
    mesh = assemble([inner, moved])
    assert len(mesh.interfaces) == 1


def test_no_subdomains():
    with pytest.raises(TopologyError):
        assemble([])


def test_broken_loop_detected():
    inner, outer = vortex_box_mesh()
    gap = SubdomainMesh(
        vertices=inner.vertices,
        cells=inner.cells,
        sliding=inner.sliding[:-1],
        boundary={(s.cell, s.face): "wall" for s in inner.sliding[-1:]},
        rotation=inner.rotation,
    )
    with pytest.raises(TopologyError):
        prepare_mesh([gap, outer])


def test_block_mesh_extent():
    (mesh,) = block_mesh(4, 3, extent=(0.0, 0.0, 2.0, 1.0))
    assert mesh.n_cells == 12
    assert mesh.vertices[:, 0].max() == 2.0
    assert sorted(set(mesh.boundary.values())) == ["bottom", "left", "right", "top"]


def test_concentric_rings_chain_interfaces():
    mesh = prepare_mesh(concentric_rings_mesh())
    assert [item.id for item in mesh.interfaces] == [1, 2]
    assert interface_radius(mesh, 1) == pytest.approx(1.0)
    assert interface_radius(mesh, 2) == pytest.approx(2.0)
    assert set(mesh.boundary_tags) == {"farfield"}


def test_reorder_ignores_input_order(rng):
    inner, outer = vortex_box_mesh()
    shuffled = [inner.sliding[i] for i in rng.permutation(len(inner.sliding))]
    mesh = prepare_mesh([replace(inner, sliding=shuffled), outer])
    reference = prepare_mesh([inner, outer])
    (item,), (expected,) = mesh.interfaces, reference.interfaces
    np.testing.assert_array_equal(item.inner.vof, expected.inner.vof)
    np.testing.assert_array_equal(item.inner.vof[:, 1], np.roll(item.inner.vof[:, 0], -1))


def test_radius_correction_removes_jitter(rng):
    inner, outer = vortex_box_mesh()
    jittered = []
    for sub in (inner, outer):
        v = sub.vertices.copy()
        r = np.hypot(*(v - 5.0).T)
        on_circle = np.abs(r - 2.0) < 1e-9
        v[on_circle] += rng.uniform(-1e-8, 1e-8, size=(on_circle.sum(), 2))
        jittered.append(replace(sub, vertices=v))
    mesh = correct_interface_radius(reorder_sliding_faces(assemble(jittered)), 1)
    (item,) = mesh.interfaces
    ids = np.unique(np.concatenate([item.inner.vof.ravel(), item.outer.vof.ravel()]))
    radii = np.hypot(*(mesh.vertices[ids] - item.center).T)
    np.testing.assert_allclose(radii, radii[0], rtol=0, atol=1e-14)
    assert radii[0] == pytest.approx(2.0, abs=1e-7)
