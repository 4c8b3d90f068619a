"""
Structured mesh generators for the verification and demonstration cases.

Every generator returns a list of :class:`SubdomainMesh` objects, one per
subdomain, ready for :func:`~slidefr.mesh.assembly.prepare_mesh` or for
writing with :func:`~slidefr.mesh.subdomain.write_subdomain`.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..geometry import polygon_area
from .subdomain import InterfaceSide, RotationSpec, SlidingFace, SubdomainMesh

__all__ = [
    "vortex_box_mesh",
    "annulus_mesh",
    "block_mesh",
    "rotating_square_mesh",
    "multi_square_mesh",
    "concentric_rings_mesh",
    "GENERATORS",
]


class _Builder:
    """Incremental subdomain builder with coordinate-keyed vertex reuse."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.vertices: List[Tuple[float, float]] = []
        self.cells: List[List[int]] = []
        self._index: Dict[Tuple[int, int], int] = {}
        self.boundary: Dict[Tuple[int, int], str] = {}
        self.sliding: List[SlidingFace] = []
        self.arcs: Dict[Tuple[int, int], Tuple[float, float]] = {}

    def vertex(self, x: float, y: float) -> int:
        key = (round(x * 1e9), round(y * 1e9))
        if key not in self._index:
            self._index[key] = len(self.vertices)
            self.vertices.append((float(x), float(y)))
        return self._index[key]

    def cell(self, ids: Sequence[int]) -> int:
        ids = list(ids)
        if polygon_area(np.array([self.vertices[i] for i in ids])) < 0.0:
            ids = [ids[0], ids[3], ids[2], ids[1]]
        self.cells.append(ids)
        return len(self.cells) - 1

    def find_face(self, cell: int, a: int, b: int) -> int:
        ids = self.cells[cell]
        for f in range(4):
            if {ids[f], ids[(f + 1) % 4]} == {a, b}:
                return f
        raise ValueError(f"Cell {cell} has no face ({a}, {b})")

    def tag(self, cell: int, a: int, b: int, tag: str) -> None:
        self.boundary[(cell, self.find_face(cell, a, b))] = tag

    def slide(self, cell: int, a: int, b: int, interface: int, side: InterfaceSide, center) -> None:
        face = self.find_face(cell, a, b)
        self.sliding.append(SlidingFace(cell, face, interface, side, (float(center[0]), float(center[1]))))

    def arc(self, cell: int, a: int, b: int, center) -> None:
        self.arcs[(cell, self.find_face(cell, a, b))] = (float(center[0]), float(center[1]))

    def build(self, rotation: Optional[RotationSpec] = None) -> SubdomainMesh:
        mesh = SubdomainMesh(
            vertices=np.array(self.vertices),
            cells=np.array(self.cells, dtype=np.int64),
            boundary=dict(self.boundary),
            sliding=list(self.sliding),
            arcs=dict(self.arcs),
            rotation=rotation or RotationSpec(),
            name=self.name,
        )
        mesh.validate()
        return mesh


def _polar(center, r: float, theta: float) -> Tuple[float, float]:
    return center[0] + r * math.cos(theta), center[1] + r * math.sin(theta)


def _ring_layers(b: _Builder, loops: Sequence[Sequence[int]]) -> List[List[int]]:
    """Cells between successive closed vertex loops of equal length."""
    layers = []
    for inner, outer in zip(loops[:-1], loops[1:]):
        n = len(inner)
        layers.append([b.cell([inner[k], outer[k], outer[(k + 1) % n], inner[(k + 1) % n]]) for k in range(n)])
    return layers


def _square_loop(center, half: float, per_side: int):
    """Counterclockwise perimeter points of an axis-aligned square from its lower-right corner."""
    return _rect_loop(center, half, half, per_side)


def _rect_loop(center, half_x: float, half_y: float, per_side: int):
    cx, cy = center
    corners = [(cx + half_x, cy - half_y), (cx + half_x, cy + half_y), (cx - half_x, cy + half_y), (cx - half_x, cy - half_y)]
    pts = []
    for k in range(4):
        p0, p1 = np.array(corners[k]), np.array(corners[(k + 1) % 4])
        for j in range(per_side):
            pts.append(tuple(p0 + (p1 - p0) * j / per_side))
    return pts


def _box_frame(b: _Builder, xs: Sequence[float], ys: Sequence[float], hole: Tuple[int, int, int, int], tags: bool = True):
    """Tensor-grid cells of ``xs`` x ``ys`` except the index block ``hole`` (i0, i1, j0, j1)."""
    i0, i1, j0, j1 = hole
    nx, ny = len(xs) - 1, len(ys) - 1
    for i in range(nx):
        for j in range(ny):
            if i0 <= i < i1 and j0 <= j < j1:
                continue
            ids = [b.vertex(xs[i], ys[j]), b.vertex(xs[i + 1], ys[j]), b.vertex(xs[i + 1], ys[j + 1]), b.vertex(xs[i], ys[j + 1])]
            c = b.cell(ids)
            if tags:
                if j == 0:
                    b.tag(c, ids[0], ids[1], "bottom")
                if i == nx - 1:
                    b.tag(c, ids[1], ids[2], "right")
                if j == ny - 1:
                    b.tag(c, ids[2], ids[3], "top")
                if i == 0:
                    b.tag(c, ids[3], ids[0], "left")


def vortex_box_mesh(scale: float = 1.0, omega: float = 0.0) -> List[SubdomainMesh]:
    """
    Square box with an embedded rotating disk: 20 inner and 52 outer cells.

    At ``scale = 1`` the box is ``[0, 10]^2`` and the disk has radius 2 about
    ``(5, 5)``. The interface carries 8 inner and 12 outer faces. Box faces are
    tagged ``bottom``, ``right``, ``top`` and ``left``.

    :param scale: Uniform length scale
    :param omega: Angular speed of the disk
    """
    center = (5.0 * scale, 5.0 * scale)
    radius = 2.0 * scale

    inner = _Builder("vortex-inner")
    a = 0.7 * scale
    grid = {(i, j): inner.vertex(center[0] + a * i, center[1] + a * j) for i in (-1, 0, 1) for j in (-1, 0, 1)}
    for i in (-1, 0):
        for j in (-1, 0):
            inner.cell([grid[(i, j)], grid[(i + 1, j)], grid[(i + 1, j + 1)], grid[(i, j + 1)]])
    ring0 = [grid[k] for k in [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]]
    ring1 = [inner.vertex(*_polar(center, 1.35 * scale, k * math.pi / 4)) for k in range(8)]
    ring2 = [inner.vertex(*_polar(center, radius, k * math.pi / 4)) for k in range(8)]
    layers = _ring_layers(inner, [ring0, ring1, ring2])
    for k, c in enumerate(layers[-1]):
        inner.slide(c, ring2[k], ring2[(k + 1) % 8], 1, InterfaceSide.INNER, center)

    outer = _Builder("vortex-outer")
    half = 3.5 * scale
    xs = [0.0, 1.5, 1.5 + 7.0 / 3.0, 1.5 + 14.0 / 3.0, 8.5, 10.0]
    xs = [x * scale for x in xs]
    _box_frame(outer, xs, xs, (1, 4, 1, 4))
    square = [outer.vertex(*p) for p in _square_loop(center, half, 3)]
    circle = [outer.vertex(*_polar(center, radius, -0.25 * math.pi + k * math.pi / 6)) for k in range(12)]
    loops = [circle]
    for layer in (1, 2):
        s = layer / 3.0
        loops.append(
            [
                outer.vertex(*(np.array(outer.vertices[c]) * (1 - s) + np.array(outer.vertices[q]) * s))
                for c, q in zip(circle, square)
            ]
        )
    loops.append(square)
    layers = _ring_layers(outer, loops)
    for k, c in enumerate(layers[0]):
        outer.slide(c, circle[k], circle[(k + 1) % 12], 1, InterfaceSide.OUTER, center)

    return [inner.build(RotationSpec(center, omega)), outer.build(RotationSpec(center, 0.0))]


def annulus_mesh(
    omega: float = 0.0,
    r_inner: float = 1.0,
    r_slide: float = 1.5,
    r_outer: float = 2.0,
    n_inner: Tuple[int, int] = (12, 2),
    n_outer: Tuple[int, int] = (16, 2),
) -> List[SubdomainMesh]:
    """
    Concentric annulus split by a sliding circle (24 + 32 cells by default).

    Walls are tagged ``inner_wall`` and ``outer_wall`` and are exact arcs.

    :param omega: Angular speed of the inner annulus
    :param n_inner: ``(azimuthal, radial)`` cells of the inner annulus
    :param n_outer: ``(azimuthal, radial)`` cells of the outer annulus
    """
    center = (0.0, 0.0)
    meshes = []
    for name, (r0, r1), (na, nr), side, wall in (
        ("annulus-inner", (r_inner, r_slide), n_inner, InterfaceSide.INNER, "inner_wall"),
        ("annulus-outer", (r_slide, r_outer), n_outer, InterfaceSide.OUTER, "outer_wall"),
    ):
        b = _Builder(name)
        radii = np.linspace(r0, r1, nr + 1)
        loops = [[b.vertex(*_polar(center, r, 2 * math.pi * k / na)) for k in range(na)] for r in radii]
        layers = _ring_layers(b, loops)
        slide_loop, slide_layer = (loops[-1], layers[-1]) if side is InterfaceSide.INNER else (loops[0], layers[0])
        wall_loop, wall_layer = (loops[0], layers[0]) if side is InterfaceSide.INNER else (loops[-1], layers[-1])
        for k in range(na):
            b.slide(slide_layer[k], slide_loop[k], slide_loop[(k + 1) % na], 1, side, center)
            b.tag(wall_layer[k], wall_loop[k], wall_loop[(k + 1) % na], wall)
            b.arc(wall_layer[k], wall_loop[k], wall_loop[(k + 1) % na], center)
        meshes.append(b.build(RotationSpec(center, omega if side is InterfaceSide.INNER else 0.0)))
    return meshes


def block_mesh(
    nx: int = 9, ny: int = 8, extent: Tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)
) -> List[SubdomainMesh]:
    """
    Conforming Cartesian block, 72 cells by default.

    :param extent: ``(x_min, y_min, x_max, y_max)``
    """
    b = _Builder("block")
    x0, y0, x1, y1 = extent
    _box_frame(b, np.linspace(x0, x1, nx + 1), np.linspace(y0, y1, ny + 1), (0, 0, 0, 0))
    return [b.build()]


def _stretched(start: float, stop: float, n: int, first: float) -> np.ndarray:
    """``n`` geometrically growing intervals from ``start`` to ``stop``."""
    length = stop - start
    if n * first >= abs(length):
        return np.linspace(start, stop, n + 1)
    lo, hi = 1.0, 10.0
    for _ in range(200):
        ratio = 0.5 * (lo + hi)
        if first * (ratio**n - 1) / (ratio - 1) > abs(length):
            hi = ratio
        else:
            lo = ratio
    steps = first * ratio ** np.arange(n)
    steps *= abs(length) / steps.sum()
    return start + np.sign(length) * np.concatenate([[0.0], np.cumsum(steps)])


def _cylinder_disk(
    b: _Builder, center, diagonal: float, radius: float, per_side: int, layers: int, interface: int
) -> List[int]:
    """O-grid between a square cylinder and its rotating disk; returns the circle loop."""
    half = diagonal / (2.0 * math.sqrt(2.0))
    sq_pts = _square_loop(center, half, per_side)
    square = [b.vertex(*p) for p in sq_pts]
    circle = [
        b.vertex(*_polar(center, radius, math.atan2(p[1] - center[1], p[0] - center[0])))
        for p in sq_pts
    ]
    loops = [square]
    for layer in range(1, layers):
        s = layer / layers
        loops.append(
            [b.vertex(*(np.array(b.vertices[q]) * (1 - s) + np.array(b.vertices[c]) * s)) for q, c in zip(square, circle)]
        )
    loops.append(circle)
    cells = _ring_layers(b, loops)
    n = len(square)
    for k in range(n):
        b.tag(cells[0][k], square[k], square[(k + 1) % n], "wall")
        b.slide(cells[-1][k], circle[k], circle[(k + 1) % n], interface, InterfaceSide.INNER, center)
    return circle


def rotating_square_mesh(
    omega: float = 0.5 * math.pi,
    diagonal: float = 1.0,
    disk_radius: float = 0.6,
    domain: float = 100.0,
    inner_per_side: int = 8,
    inner_layers: int = 3,
    outer_azimuthal: int = 48,
    outer_layers: int = 28,
) -> List[SubdomainMesh]:
    """
    Square cylinder inside a rotating disk inside a square far field.

    Defaults give 96 + 1344 cells. The cylinder surface is tagged ``wall`` and
    the box ``farfield``.
    """
    center = (0.0, 0.0)
    inner = _Builder("cylinder-inner")
    _cylinder_disk(inner, center, diagonal, disk_radius, inner_per_side, inner_layers, 1)

    outer = _Builder("cylinder-outer")
    box = [outer.vertex(*p) for p in _square_loop(center, 0.5 * domain, outer_azimuthal // 4)]
    box_pts = np.array([outer.vertices[v] for v in box])
    circle = [
        outer.vertex(*_polar(center, disk_radius, math.atan2(p[1], p[0]))) for p in box_pts
    ]
    first = 2.0 * math.pi * disk_radius / outer_azimuthal
    fractions = _stretched(0.0, 1.0, outer_layers, first / (0.5 * domain - disk_radius))
    loops = [circle]
    for s in fractions[1:-1]:
        loops.append(
            [outer.vertex(*(np.array(outer.vertices[c]) * (1 - s) + np.array(outer.vertices[q]) * s)) for c, q in zip(circle, box)]
        )
    loops.append(box)
    cells = _ring_layers(outer, loops)
    n = len(circle)
    for k in range(n):
        outer.slide(cells[0][k], circle[k], circle[(k + 1) % n], 1, InterfaceSide.OUTER, center)
        outer.tag(cells[-1][k], box[k], box[(k + 1) % n], "farfield")

    return [inner.build(RotationSpec(center, omega)), outer.build(RotationSpec(center, 0.0))]


def multi_square_mesh(
    omegas: Sequence[float] = (0.5 * math.pi, -0.5 * math.pi, 0.5 * math.pi, -0.5 * math.pi),
    diagonal: float = 1.0,
    disk_radius: float = 0.6,
    spacing: Tuple[float, float] = (1.5, 2.0),
    domain: float = 40.0,
    per_side: int = 12,
    far_cells: int = 10,
) -> List[SubdomainMesh]:
    """
    Four rotating square cylinders in two columns and two rows.

    Each cylinder sits in its own rotating disk, listed first in the output
    with interface ids 1..4 in the order lower-left, lower-right, upper-left,
    upper-right. The last mesh is the static outer subdomain.
    """
    dx, dy = spacing
    centers = [(-0.5 * dx, -0.5 * dy), (0.5 * dx, -0.5 * dy), (-0.5 * dx, 0.5 * dy), (0.5 * dx, 0.5 * dy)]
    meshes = []
    for k, (c, w) in enumerate(zip(centers, omegas)):
        b = _Builder(f"cylinder-{k + 1}")
        _cylinder_disk(b, c, diagonal, disk_radius, 8, 3, k + 1)
        meshes.append(b.build(RotationSpec(c, w)))

    outer = _Builder("cylinders-outer")
    tile_x = np.linspace(-dx, dx, 2 * per_side + 1)
    tile_y = np.linspace(-dy, dy, 2 * per_side + 1)
    far_x = _stretched(dx, 0.5 * domain, far_cells, dx / per_side)
    far_y = _stretched(dy, 0.5 * domain, far_cells, dy / per_side)
    xs = np.concatenate([-far_x[::-1], tile_x[1:-1], far_x])
    ys = np.concatenate([-far_y[::-1], tile_y[1:-1], far_y])
    _box_frame(outer, xs, ys, (far_cells, far_cells + 2 * per_side, far_cells, far_cells + 2 * per_side))
    for key in list(outer.boundary):
        outer.boundary[key] = "farfield"
    for k, c in enumerate(centers):
        rect = [outer.vertex(*p) for p in _rect_loop(c, 0.5 * dx, 0.5 * dy, per_side)]
        circle = [
            outer.vertex(*_polar(c, disk_radius, math.atan2(outer.vertices[v][1] - c[1], outer.vertices[v][0] - c[0])))
            for v in rect
        ]
        loops = [circle]
        for s in (1.0 / 3.0, 2.0 / 3.0):
            loops.append(
                [outer.vertex(*(np.array(outer.vertices[a]) * (1 - s) + np.array(outer.vertices[q]) * s)) for a, q in zip(circle, rect)]
            )
        loops.append(rect)
        cells = _ring_layers(outer, loops)
        n = len(circle)
        for j in range(n):
            outer.slide(cells[0][j], circle[j], circle[(j + 1) % n], k + 1, InterfaceSide.OUTER, c)
    meshes.append(outer.build())
    return meshes


def concentric_rings_mesh(radii: Sequence[float] = (1.0, 2.0, 3.0), omegas: Sequence[float] = (1.0, 0.0, 0.0), azimuthal: Sequence[int] = (8, 12, 16)) -> List[SubdomainMesh]:
    """
    ``n`` concentric subdomains: a disk followed by rings, one interface per radius.

    ``radii[i]`` is the outer radius of subdomain ``i``; the last subdomain's
    outer circle is tagged ``farfield``.
    """
    center = (0.0, 0.0)
    meshes = []
    for i, (r1, w, na) in enumerate(zip(radii, omegas, azimuthal)):
        b = _Builder(f"ring-{i}")
        outer_loop = [b.vertex(*_polar(center, r1, -0.25 * math.pi + 2 * math.pi * k / na)) for k in range(na)]
        if i == 0:
            a = 0.35 * r1
            inner_loop = [b.vertex(*p) for p in _square_loop(center, a, na // 4)]
            _core_grid(b, center, a, na // 4)
        else:
            inner_loop = [b.vertex(*_polar(center, radii[i - 1], -0.25 * math.pi + 2 * math.pi * k / na)) for k in range(na)]
        layers = _ring_layers(b, [inner_loop, outer_loop])
        for k in range(na):
            if i < len(radii) - 1:
                b.slide(layers[-1][k], outer_loop[k], outer_loop[(k + 1) % na], i + 1, InterfaceSide.INNER, center)
            else:
                b.tag(layers[-1][k], outer_loop[k], outer_loop[(k + 1) % na], "farfield")
                b.arc(layers[-1][k], outer_loop[k], outer_loop[(k + 1) % na], center)
            if i > 0:
                b.slide(layers[0][k], inner_loop[k], inner_loop[(k + 1) % na], i, InterfaceSide.OUTER, center)
        meshes.append(b.build(RotationSpec(center, w)))
    return meshes


def _core_grid(b: _Builder, center, half: float, per_side: int) -> None:
    xs = np.linspace(center[0] - half, center[0] + half, per_side + 1)
    ys = np.linspace(center[1] - half, center[1] + half, per_side + 1)
    for i in range(per_side):
        for j in range(per_side):
            b.cell([b.vertex(xs[i], ys[j]), b.vertex(xs[i + 1], ys[j]), b.vertex(xs[i + 1], ys[j + 1]), b.vertex(xs[i], ys[j + 1])])


GENERATORS = {
    "vortex": vortex_box_mesh,
    "annulus": annulus_mesh,
    "block": block_mesh,
    "square-cylinder": rotating_square_mesh,
    "square-cylinders": multi_square_mesh,
    "rings": concentric_rings_mesh,
}
