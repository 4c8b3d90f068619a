"""
Single-subdomain quadrilateral meshes and their text format.

A mesh file is a sequence of sections, each opened by a keyword and an integer
record count, one record per line. ``#`` starts a comment. ::

    VERTICES <n>      x y
    CELLS <n>         v0 v1 v2 v3            (counterclockwise, zero-based)
    BOUNDARY <n>      cell local_face tag
    SLIDING <n>       cell local_face interface side cx cy
    ARCS <n>          cell local_face cx cy
    ROTATION <0|1>    cx cy omega

``side`` is ``inner`` for the rotating disk side of an interface and ``outer``
for the surrounding side. Sliding faces are always circular arcs about
``(cx, cy)``; ``ARCS`` marks additional circular boundary faces.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..exceptions import InvertedElementError, MeshParseError
from ..geometry import FACE_CORNERS, polygon_area

__all__ = [
    "InterfaceSide",
    "RotationSpec",
    "SlidingFace",
    "SubdomainMesh",
    "parse_subdomain",
    "read_subdomain",
    "write_subdomain",
    "format_subdomain",
]

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class InterfaceSide(str, enum.Enum):
    """Which side of a sliding interface a face lies on."""

    INNER = "inner"
    OUTER = "outer"


@dataclass(frozen=True)
class RotationSpec:
    """
    Rigid rotation of a subdomain.

    :param center: Rotation center
    :param omega: Angular speed; ``0`` for a static subdomain
    """

    center: Tuple[float, float] = (0.0, 0.0)
    omega: float = 0.0


@dataclass(frozen=True)
class SlidingFace:
    """A cell face lying on a sliding interface."""

    cell: int
    face: int
    interface: int
    side: InterfaceSide
    center: Tuple[float, float]


@dataclass
class SubdomainMesh:
    """
    Quadrilateral mesh of one subdomain.

    :param vertices: Vertex coordinates, shape ``(nv, 2)``
    :param cells: Vertex ids per cell, counterclockwise, shape ``(nc, 4)``
    :param boundary: ``{(cell, local_face): tag}``
    :param sliding: Faces lying on sliding interfaces
    :param arcs: ``{(cell, local_face): center}`` for curved non-sliding faces
    :param rotation: Rigid rotation of the whole subdomain
    :param name: Label used in logs
    """

    vertices: np.ndarray
    cells: np.ndarray
    boundary: Dict[Tuple[int, int], str] = field(default_factory=dict)
    sliding: List[SlidingFace] = field(default_factory=list)
    arcs: Dict[Tuple[int, int], Tuple[float, float]] = field(default_factory=dict)
    rotation: RotationSpec = field(default_factory=RotationSpec)
    name: str = "subdomain"

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        self.cells = np.asarray(self.cells, dtype=np.int64).reshape(-1, 4)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def face_vertices(self, cell: int, face: int) -> Tuple[int, int]:
        """Vertex ids of a local face in the cell's counterclockwise order."""
        c = self.cells[cell]
        return int(c[face]), int(c[(face + 1) % 4])

    def natural_face_vertices(self, cell: int, face: int) -> Tuple[int, int]:
        """Vertex ids of a local face in its natural parameter direction."""
        a, b = FACE_CORNERS[face]
        c = self.cells[cell]
        return int(c[a]), int(c[b])

    def validate(self, path: Optional[str] = None) -> None:
        """
        Check vertex references and orientation.

        :raises MeshParseError: For out-of-range vertex ids or face indices,
            or a face listed as both boundary and sliding
        :raises InvertedElementError: For cells with non-positive area
        """
        if self.cells.size and (self.cells.min() < 0 or self.cells.max() >= self.n_vertices):
            raise MeshParseError("Cell references a vertex out of range", path=path)
        for cell, verts in enumerate(self.cells):
            if polygon_area(self.vertices[verts]) <= 0.0:
                raise InvertedElementError(
                    f"Cell in {self.name} is not counterclockwise or has zero area", element=cell
                )
        for cell, face in list(self.boundary) + [(s.cell, s.face) for s in self.sliding] + list(self.arcs):
            if not (0 <= cell < self.n_cells and 0 <= face < 4):
                raise MeshParseError(f"Face reference ({cell}, {face}) out of range", path=path)
        both = sorted(set(self.boundary) & {(s.cell, s.face) for s in self.sliding})
        if both:
            raise MeshParseError(f"Face {both[0]} is both a boundary and a sliding face", path=path)


# ---------------------------------------------------------------------------
# text format


_SECTIONS = ("VERTICES", "CELLS", "BOUNDARY", "SLIDING", "ARCS", "ROTATION")


def _records(lines: List[str]) -> List[Tuple[int, List[str]]]:
    out = []
    for number, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            out.append((number, text.split()))
    return out


def read_subdomain(path: PathLike, name: Optional[str] = None) -> SubdomainMesh:
    """
    Read a subdomain mesh file.

    :param path: Mesh file
    :param name: Optional label; defaults to the file stem
    :return: Validated mesh
    :raises MeshParseError: With the offending line number
    :raises InvertedElementError: For clockwise or degenerate cells
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise MeshParseError(f"Cannot read mesh file: {e}", path=str(path)) from e
    mesh = parse_subdomain(text, path=str(path), name=name or path.stem)
    logger.debug(f"Read {mesh.n_cells} cells and {mesh.n_vertices} vertices from {path}")
    return mesh


def parse_subdomain(text: str, path: Optional[str] = None, name: str = "subdomain") -> SubdomainMesh:
    """
    Parse the text form of a subdomain mesh.

    :param text: File contents
    :param path: Path used in error messages
    :param name: Mesh label
    :return: Validated mesh
    :raises MeshParseError: With the offending line number
    """
    records = _records(text.splitlines())
    vertices: List[List[float]] = []
    cells: List[List[int]] = []
    boundary: Dict[Tuple[int, int], str] = {}
    sliding: List[SlidingFace] = []
    arcs: Dict[Tuple[int, int], Tuple[float, float]] = {}
    rotation = RotationSpec()
    seen = set()

    i = 0
    while i < len(records):
        line, tokens = records[i]
        keyword = tokens[0].upper()
        if keyword not in _SECTIONS:
            raise MeshParseError(f"Unknown section {tokens[0]!r}", path=path, line=line)
        if keyword in seen:
            raise MeshParseError(f"Duplicate section {keyword}", path=path, line=line)
        seen.add(keyword)
        if len(tokens) != 2:
            raise MeshParseError(f"Section {keyword} needs a record count", path=path, line=line)
        try:
            count = int(tokens[1])
        except ValueError:
            raise MeshParseError(f"Invalid record count {tokens[1]!r}", path=path, line=line)
        if count < 0:
            raise MeshParseError("Negative record count", path=path, line=line)
        body = records[i + 1 : i + 1 + count]
        if len(body) < count or any(t[0].upper() in _SECTIONS for _, t in body):
            last = body[-1][0] if body else line
            raise MeshParseError(
                f"Section {keyword} declares {count} records but fewer follow", path=path, line=last
            )

        for rec_line, rec in body:
            try:
                if keyword == "VERTICES":
                    if len(rec) != 2:
                        raise ValueError("vertex records have two coordinates")
                    vertices.append([float(rec[0]), float(rec[1])])
                elif keyword == "CELLS":
                    if len(rec) != 4:
                        raise ValueError(f"cells must be quadrilaterals, got {len(rec)} vertices")
                    cells.append([int(v) for v in rec])
                elif keyword == "BOUNDARY":
                    if len(rec) != 3:
                        raise ValueError("boundary records are 'cell face tag'")
                    boundary[(int(rec[0]), int(rec[1]))] = rec[2]
                elif keyword == "SLIDING":
                    if len(rec) != 6:
                        raise ValueError("sliding records are 'cell face interface side cx cy'")
                    sliding.append(
                        SlidingFace(
                            cell=int(rec[0]),
                            face=int(rec[1]),
                            interface=int(rec[2]),
                            side=InterfaceSide(rec[3].lower()),
                            center=(float(rec[4]), float(rec[5])),
                        )
                    )
                elif keyword == "ARCS":
                    if len(rec) != 4:
                        raise ValueError("arc records are 'cell face cx cy'")
                    arcs[(int(rec[0]), int(rec[1]))] = (float(rec[2]), float(rec[3]))
                else:
                    if count > 1 or len(rec) != 3:
                        raise ValueError("rotation is a single 'cx cy omega' record")
                    rotation = RotationSpec((float(rec[0]), float(rec[1])), float(rec[2]))
            except ValueError as e:
                raise MeshParseError(f"Invalid {keyword} record: {e}", path=path, line=rec_line) from e
        i += 1 + count

    for required in ("VERTICES", "CELLS"):
        if required not in seen:
            raise MeshParseError(f"Missing {required} section", path=path)

    mesh = SubdomainMesh(
        vertices=np.array(vertices, dtype=float).reshape(-1, 2),
        cells=np.array(cells, dtype=np.int64).reshape(-1, 4),
        boundary=boundary,
        sliding=sliding,
        arcs=arcs,
        rotation=rotation,
        name=name,
    )
    mesh.validate(path)
    return mesh


def _g(value: float) -> str:
    return "%.17g" % value


def format_subdomain(mesh: SubdomainMesh) -> str:
    """Text form of a mesh; floats carry 17 significant digits."""
    out = [f"# {mesh.name}", f"VERTICES {mesh.n_vertices}"]
    out += [f"{_g(x)} {_g(y)}" for x, y in mesh.vertices]
    out.append(f"CELLS {mesh.n_cells}")
    out += [" ".join(str(int(v)) for v in cell) for cell in mesh.cells]
    out.append(f"BOUNDARY {len(mesh.boundary)}")
    out += [f"{c} {f} {tag}" for (c, f), tag in sorted(mesh.boundary.items())]
    out.append(f"SLIDING {len(mesh.sliding)}")
    out += [
        f"{s.cell} {s.face} {s.interface} {s.side.value} {_g(s.center[0])} {_g(s.center[1])}"
        for s in mesh.sliding
    ]
    out.append(f"ARCS {len(mesh.arcs)}")
    out += [f"{c} {f} {_g(cx)} {_g(cy)}" for (c, f), (cx, cy) in sorted(mesh.arcs.items())]
    rot = mesh.rotation
    out.append("ROTATION 1")
    out.append(f"{_g(rot.center[0])} {_g(rot.center[1])} {_g(rot.omega)}")
    return "\n".join(out) + "\n"


def write_subdomain(mesh: SubdomainMesh, path: PathLike) -> Path:
    """
    Write a mesh in the text format.

    :param mesh: Mesh to write
    :param path: Destination file
    :return: The path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_subdomain(mesh))
    logger.info(f"Wrote {mesh.n_cells}-cell mesh {mesh.name!r} to {path}")
    return path
