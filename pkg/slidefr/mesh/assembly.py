"""
Multi-subdomain assembly.

Subdomains are concatenated with running cell and vertex offsets. Faces shared
by two cells become conforming interior faces; tagged faces become boundary
faces; faces on sliding interfaces are collected per interface and side, then
reordered counterclockwise and snapped to a common radius.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import GeometryError, TopologyError
from ..geometry import (
    FACE_CORNERS,
    ElementMap,
    arc_iso_element,
    transfinite_with_arcs,
)
from .subdomain import InterfaceSide, RotationSpec, SubdomainMesh

__all__ = [
    "SlidingSide",
    "InterfaceTopology",
    "AssembledMesh",
    "assemble",
    "reorder_sliding_faces",
    "correct_interface_radius",
    "prepare_mesh",
    "interface_radius",
]

logger = logging.getLogger(__name__)

CENTER_TOLERANCE = 1e-12
RADIUS_MOVE_WARNING = 1e-10


@dataclass(frozen=True)
class SlidingSide:
    """
    Faces on one side of a sliding interface.

    After :func:`reorder_sliding_faces`, ``vof[f] = (start, end)`` runs
    counterclockwise about the interface center and ``vof[f, 1] == vof[f + 1, 0]``
    cyclically. ``flip[f]`` is set when the face's natural parameter runs
    clockwise.
    """

    subdomain: int
    cells: np.ndarray
    faces: np.ndarray
    vof: np.ndarray
    flip: np.ndarray

    @property
    def n_faces(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class InterfaceTopology:
    """Both sides of one sliding interface."""

    id: int
    center: np.ndarray
    inner: SlidingSide
    outer: SlidingSide


@dataclass(frozen=True)
class AssembledMesh:
    """
    Global mesh built from one or more subdomains.

    :param vertices: Global vertex coordinates
    :param cells: Global vertex ids per cell
    :param cell_subdomain: Subdomain index of each cell
    :param cell_offsets: First global cell id of each subdomain
    :param vertex_offsets: First global vertex id of each subdomain
    :param rotations: Rotation of each subdomain
    :param interior_faces: Rows ``(cell_l, face_l, cell_r, face_r)``
    :param boundary_faces: Rows ``(cell, face)``
    :param boundary_tags: Tag of each boundary face
    :param interfaces: Sliding interfaces
    :param arcs: ``{(cell, face): center}`` of every circular face
    :param ordered: Whether sliding sides have been reordered
    """

    vertices: np.ndarray
    cells: np.ndarray
    cell_subdomain: np.ndarray
    cell_offsets: Tuple[int, ...]
    vertex_offsets: Tuple[int, ...]
    rotations: Tuple[RotationSpec, ...]
    interior_faces: np.ndarray
    boundary_faces: np.ndarray
    boundary_tags: Tuple[str, ...]
    interfaces: Tuple[InterfaceTopology, ...] = ()
    arcs: Dict[Tuple[int, int], Tuple[float, float]] = field(default_factory=dict)
    ordered: bool = False

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_subdomains(self) -> int:
        return len(self.rotations)

    def interface(self, interface_id: int) -> InterfaceTopology:
        for item in self.interfaces:
            if item.id == interface_id:
                return item
        raise KeyError(f"No sliding interface with id {interface_id}")

    def sliding_face_keys(self) -> set:
        keys = set()
        for item in self.interfaces:
            for side in (item.inner, item.outer):
                keys.update(zip(side.cells.tolist(), side.faces.tolist()))
        return keys

    def element_map(self, cell: int, boundary_nodes: Optional[int] = None) -> ElementMap:
        """
        Mapping of one cell in its reference configuration.

        Sliding faces are always exact arcs. Other circular faces are exact
        unless ``boundary_nodes`` selects an iso-parametric K-node map.

        :param cell: Global cell id
        :param boundary_nodes: ``None`` for transfinite, else 4, 8 or 12
        """
        corners = self.vertices[self.cells[cell]]
        arcs = {f: self.arcs[(cell, f)] for f in range(4) if (cell, f) in self.arcs}
        if boundary_nodes is not None and arcs:
            sliding = self.sliding_face_keys()
            if not any((cell, f) in sliding for f in arcs):
                return arc_iso_element(corners, boundary_nodes, arcs)
        return transfinite_with_arcs(corners, arcs)


def assemble(meshes: Sequence[SubdomainMesh]) -> AssembledMesh:
    """
    Concatenate subdomains into one mesh with unique continuous numbering.

    :param meshes: One mesh per subdomain
    :return: Assembled (not yet reordered) mesh
    :raises TopologyError: For unpaired faces or interface sides
    """
    if not meshes:
        raise TopologyError("At least one subdomain is required")

    cell_offsets, vertex_offsets = [], []
    nc = nv = 0
    for mesh in meshes:
        cell_offsets.append(nc)
        vertex_offsets.append(nv)
        nc += mesh.n_cells
        nv += mesh.n_vertices

    vertices = np.vstack([m.vertices for m in meshes])
    cells = np.vstack([m.cells + vo for m, vo in zip(meshes, vertex_offsets)])
    cell_subdomain = np.concatenate(
        [np.full(m.n_cells, i, dtype=np.int64) for i, m in enumerate(meshes)]
    )

    boundary: Dict[Tuple[int, int], str] = {}
    arcs: Dict[Tuple[int, int], Tuple[float, float]] = {}
    sides: Dict[Tuple[int, InterfaceSide], List] = {}
    centers: Dict[int, List[Tuple[float, float]]] = {}
    for index, (mesh, co) in enumerate(zip(meshes, cell_offsets)):
        for (c, f), tag in mesh.boundary.items():
            boundary[(c + co, f)] = tag
        for (c, f), center in mesh.arcs.items():
            arcs[(c + co, f)] = center
        for s in mesh.sliding:
            key = (s.interface, s.side)
            owner = sides.setdefault(key, [index, []])
            if owner[0] != index:
                raise TopologyError(
                    f"Interface side {s.side.value} declared by two subdomains", interface=s.interface
                )
            owner[1].append((s.cell + co, s.face))
            arcs[(s.cell + co, s.face)] = s.center
            centers.setdefault(s.interface, []).append(s.center)

    interfaces = []
    for interface_id in sorted(centers):
        if (interface_id, InterfaceSide.INNER) not in sides or (
            interface_id,
            InterfaceSide.OUTER,
        ) not in sides:
            raise TopologyError("Sliding interface has only one side", interface=interface_id)
        c = np.asarray(centers[interface_id], dtype=float)
        if np.max(np.abs(c - c[0])) > CENTER_TOLERANCE:
            raise TopologyError("Interface sides disagree on the center", interface=interface_id)
        inner_rotation = meshes[sides[(interface_id, InterfaceSide.INNER)][0]].rotation
        if np.max(np.abs(np.asarray(inner_rotation.center, dtype=float) - c[0])) > CENTER_TOLERANCE:
            raise TopologyError(
                f"Interface center {tuple(c[0])} differs from the inner rotation center {inner_rotation.center}",
                interface=interface_id,
            )
        built = []
        for side in (InterfaceSide.INNER, InterfaceSide.OUTER):
            sub, faces = sides[(interface_id, side)]
            fc = np.array([f[0] for f in faces], dtype=np.int64)
            ff = np.array([f[1] for f in faces], dtype=np.int64)
            vof = np.array(
                [[cells[cc, f], cells[cc, (f + 1) % 4]] for cc, f in faces], dtype=np.int64
            )
            built.append(SlidingSide(sub, fc, ff, vof, np.zeros(len(fc), dtype=bool)))
        interfaces.append(InterfaceTopology(interface_id, c[0].copy(), built[0], built[1]))

    sliding_keys = {(int(cc), int(f)) for it in interfaces for s in (it.inner, it.outer) for cc, f in zip(s.cells, s.faces)}
    interior, boundary_faces, boundary_tags = _pair_faces(cells, boundary, sliding_keys)

    mesh = AssembledMesh(
        vertices=vertices,
        cells=cells,
        cell_subdomain=cell_subdomain,
        cell_offsets=tuple(cell_offsets),
        vertex_offsets=tuple(vertex_offsets),
        rotations=tuple(m.rotation for m in meshes),
        interior_faces=interior,
        boundary_faces=boundary_faces,
        boundary_tags=boundary_tags,
        interfaces=tuple(interfaces),
        arcs=arcs,
    )
    logger.info(
        f"Assembled {mesh.n_cells} cells from {len(meshes)} subdomain(s), "
        f"{len(interior)} interior faces, {len(boundary_faces)} boundary faces, "
        f"{len(interfaces)} sliding interface(s)"
    )
    return mesh


def _pair_faces(
    cells: np.ndarray, boundary: Dict[Tuple[int, int], str], sliding: set
) -> Tuple[np.ndarray, np.ndarray, Tuple[str, ...]]:
    owners: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for c, verts in enumerate(cells):
        for f in range(4):
            a, b = int(verts[f]), int(verts[(f + 1) % 4])
            owners.setdefault((min(a, b), max(a, b)), []).append((c, f))

    interior = []
    for key, items in owners.items():
        if len(items) > 2:
            raise TopologyError(f"Face {key} is shared by {len(items)} cells")
        if len(items) == 2:
            (c0, f0), (c1, f1) = items
            # conforming neighbours traverse the shared edge in opposite directions
            if cells[c0, f0] != cells[c1, (f1 + 1) % 4]:
                raise TopologyError(f"Cells {c0} and {c1} have inconsistent orientation")
            for item in items:
                if item in boundary or item in sliding:
                    raise TopologyError(f"Interior face {item} is also tagged as a boundary")
            interior.append((c0, f0, c1, f1))
        else:
            item = items[0]
            if item not in boundary and item not in sliding:
                raise TopologyError(f"Face {item} has no neighbour and no boundary tag")

    ordered = sorted(boundary)
    return (
        np.array(interior, dtype=np.int64).reshape(-1, 4),
        np.array(ordered, dtype=np.int64).reshape(-1, 2),
        tuple(boundary[k] for k in ordered),
    )


def _angle(point: np.ndarray, center: np.ndarray) -> float:
    return math.atan2(point[1] - center[1], point[0] - center[0]) % (2.0 * math.pi)


def _reorder_side(
    mesh: AssembledMesh, side: SlidingSide, center: np.ndarray, interface_id: int
) -> SlidingSide:
    vof = side.vof.copy()
    for f, (a, b) in enumerate(vof):
        pa = mesh.vertices[a] - center
        pb = mesh.vertices[b] - center
        if pa[0] * pb[1] - pa[1] * pb[0] < 0.0:
            vof[f] = (b, a)

    start_of: Dict[int, int] = {}
    for f, (a, _) in enumerate(vof):
        if int(a) in start_of:
            raise TopologyError("Sliding faces branch at a vertex", interface=interface_id)
        start_of[int(a)] = f

    angles = [_angle(mesh.vertices[a], center) for a in vof[:, 0]]
    first = int(np.argmin(angles))
    order = [first]
    current = first
    for _ in range(len(vof) - 1):
        nxt = start_of.get(int(vof[current, 1]))
        if nxt is None or nxt in order:
            raise TopologyError("Sliding faces do not form a closed loop", interface=interface_id)
        order.append(nxt)
        current = nxt
    if int(vof[current, 1]) != int(vof[first, 0]):
        raise TopologyError("Sliding faces do not form a closed loop", interface=interface_id)

    cells = side.cells[order]
    faces = side.faces[order]
    vof = vof[order]
    flip = np.array(
        [mesh.cells[c, FACE_CORNERS[f][0]] != v for c, f, v in zip(cells, faces, vof[:, 0])],
        dtype=bool,
    )
    return SlidingSide(side.subdomain, cells, faces, vof, flip)


def reorder_sliding_faces(mesh: AssembledMesh) -> AssembledMesh:
    """
    Order each side's faces counterclockwise into a chained loop.

    Faces whose vertex pair runs clockwise are reoriented first. The loop
    starts at the face with the smallest start angle.

    :param mesh: Assembled mesh
    :return: Mesh with ordered sliding sides
    :raises TopologyError: If a side has a gap or a branch
    """
    interfaces = []
    for item in mesh.interfaces:
        inner = _reorder_side(mesh, item.inner, item.center, item.id)
        outer = _reorder_side(mesh, item.outer, item.center, item.id)
        interfaces.append(replace(item, inner=inner, outer=outer))
        logger.debug(
            f"Interface {item.id}: {inner.n_faces} inner and {outer.n_faces} outer faces ordered"
        )
    return replace(mesh, interfaces=tuple(interfaces), ordered=True)


def correct_interface_radius(mesh: AssembledMesh, interface_id: int) -> AssembledMesh:
    """
    Move every vertex of an interface onto one reference radius.

    The reference radius is that of the first inner-side vertex; each vertex
    keeps its angle about the interface center.

    :param mesh: Assembled mesh
    :param interface_id: Interface to correct
    :return: Mesh with corrected vertex coordinates
    :raises GeometryError: If a vertex coincides with the center
    """
    item = mesh.interface(interface_id)
    ids = np.unique(np.concatenate([item.inner.vof.ravel(), item.outer.vof.ravel()]))
    first = item.inner.vof[0, 0]
    reference = float(np.hypot(*(mesh.vertices[first] - item.center)))
    vertices = mesh.vertices.copy()
    moved = 0.0
    for v in ids:
        d = vertices[v] - item.center
        r = float(np.hypot(*d))
        if r == 0.0:
            raise GeometryError(f"Interface vertex {v} coincides with the center")
        theta = math.atan2(d[1], d[0])
        new = item.center + reference * np.array([math.cos(theta), math.sin(theta)])
        moved = max(moved, float(np.hypot(*(new - vertices[v]))))
        vertices[v] = new
    if moved > RADIUS_MOVE_WARNING:
        logger.warning(f"Interface {interface_id}: radius correction moved a vertex by {moved:.3e}")
    return replace(mesh, vertices=vertices)


def prepare_mesh(meshes: Sequence[SubdomainMesh]) -> AssembledMesh:
    """Assemble, reorder sliding faces and correct every interface radius."""
    mesh = reorder_sliding_faces(assemble(meshes))
    for item in mesh.interfaces:
        mesh = correct_interface_radius(mesh, item.id)
    return mesh


def interface_radius(mesh: AssembledMesh, interface_id: int) -> float:
    """Radius of the first inner-side vertex of an interface."""
    item = mesh.interface(interface_id)
    return float(np.hypot(*(mesh.vertices[item.inner.vof[0, 0]] - item.center)))
