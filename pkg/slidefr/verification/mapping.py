"""
Geometric error of iso-parametric maps against exact transfinite arcs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from ..geometry import ElementMap, arc_iso_element, serendipity_nodes, transfinite_with_arcs

__all__ = ["MappingStudy", "sector_corners", "radius_error", "mapping_error_study"]

ISO_NODE_COUNTS = (4, 8, 12)


@dataclass
class MappingStudy:
    """
    ``radius`` rows hold ``{"map", "max_dr", "nodal_dr"}`` for the arc edge;
    ``coordinates`` rows hold ``{"map", "max_dx"}`` against the transfinite map.
    """

    radius: List[Dict[str, float]] = field(default_factory=list)
    coordinates: List[Dict[str, float]] = field(default_factory=list)

    def max_dr(self, name: str) -> float:
        return next(row["max_dr"] for row in self.radius if row["map"] == name)

    def max_dx(self, name: str) -> float:
        return next(row["max_dx"] for row in self.coordinates if row["map"] == name)


def sector_corners(radius: float, theta1: float, theta2: float, inner: float) -> np.ndarray:
    """
    Corners of an annular-sector element whose face 0 is the arc from
    ``theta1`` to ``theta2`` (degrees) and whose face 2 is a chord at ``inner``.
    """
    a, b = math.radians(theta1), math.radians(theta2)
    return np.array(
        [
            [radius * math.cos(a), radius * math.sin(a)],
            [radius * math.cos(b), radius * math.sin(b)],
            [inner * math.cos(b), inner * math.sin(b)],
            [inner * math.cos(a), inner * math.sin(a)],
        ]
    )


def radius_error(el: ElementMap, radius: float, xi: np.ndarray) -> np.ndarray:
    """``| |x(xi, 0)| - R |`` along face 0."""
    x, y, *_ = el.evaluate(xi, np.zeros_like(xi))
    return np.abs(np.hypot(x, y) - radius)


def _name(k: int) -> str:
    return {4: "linear", 8: "quadratic", 12: "cubic"}[k]


def mapping_error_study(
    arc: Sequence[float] = (1.0, 0.0, 10.0),
    sector: Sequence[float] = (2.0, -110.0, -70.0),
    samples: int = 100,
    grid: int = 41,
) -> MappingStudy:
    """
    Sample the edge-radius error of one arc and the interior coordinate error
    of one curved element.

    :param arc: ``(R, theta1, theta2)`` of the edge study, degrees
    :param sector: ``(R, theta1, theta2)`` of the element study, degrees
    :param samples: Points along the edge
    :param grid: Points per direction inside the element
    """
    study = MappingStudy()

    r, t1, t2 = arc
    corners = sector_corners(r, t1, t2, 0.8 * r)
    s = np.linspace(0.0, 1.0, samples)
    maps: Dict[str, ElementMap] = {"transfinite": transfinite_with_arcs(corners, {0: (0.0, 0.0)})}
    for k in ISO_NODE_COUNTS:
        maps[_name(k)] = arc_iso_element(corners, k, {0: (0.0, 0.0)})
    for name, el in maps.items():
        if name == "transfinite":
            nodal = np.array([0.0, 1.0])
        else:
            nodes = serendipity_nodes(el.k)
            nodal = nodes[nodes[:, 1] == 0.0][:, 0]
        study.radius.append(
            {
                "map": name,
                "max_dr": float(radius_error(el, r, s).max()),
                "nodal_dr": float(radius_error(el, r, nodal).max()),
            }
        )

    r, t1, t2 = sector
    corners = sector_corners(r, t1, t2, 0.5 * r)
    exact = transfinite_with_arcs(corners, {0: (0.0, 0.0)})
    xi, eta = np.meshgrid(np.linspace(0.0, 1.0, grid), np.linspace(0.0, 1.0, grid), indexing="ij")
    xt, yt, *_ = exact.evaluate(xi, eta)
    for k in ISO_NODE_COUNTS:
        x, y, *_ = arc_iso_element(corners, k, {0: (0.0, 0.0)}).evaluate(xi, eta)
        study.coordinates.append({"map": _name(k), "max_dx": float(np.max(np.hypot(x - xt, y - yt)))})
    return study
