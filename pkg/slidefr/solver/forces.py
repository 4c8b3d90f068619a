"""
Aerodynamic loads on wall boundaries.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from ..exceptions import ConfigurationError
from .discretization import Discretization
from .gas import normal_viscous_flux, pressure

__all__ = ["ForceSample", "wall_force", "force_coefficients"]


class ForceSample(NamedTuple):
    t: float
    fx: float
    fy: float
    drag: float
    lift: float


def wall_force(disc: Discretization, u: np.ndarray, t: float, tags: Sequence[str]) -> np.ndarray:
    """
    Force exerted by the fluid on the faces carrying ``tags``.

    ``F = sum_k w_k |N_k| (p n - tau . n)`` with ``n`` pointing out of the
    fluid element, i.e. into the body.

    :raises ConfigurationError: If no face carries any of the tags
    """
    index = disc.wall_faces(tags)
    if not len(index):
        raise ConfigurationError(f"No wall faces tagged {list(tags)}", key="output.force_tags")
    cells, faces = disc.boundary_face(index)
    geo = disc.geometry_at(t)
    q_face, grad_face = disc.face_state(t, u)

    normal = geo.normals[cells, faces]
    length = np.linalg.norm(normal, axis=-1)
    unit = normal / length[..., None]
    q = q_face[cells, faces]
    traction = pressure(q, disc.model)[..., None] * unit
    if grad_face is not None:
        traction = traction - normal_viscous_flux(q, grad_face[cells, faces], unit, disc.model)[..., 1:3]
    w = disc.basis.weights
    return np.einsum("k,fk,fkd->d", w, length, traction)


def force_coefficients(
    disc: Discretization,
    u: np.ndarray,
    t: float,
    tags: Sequence[str],
    reference_length: float = 1.0,
    density: float = 1.0,
    speed: float = 1.0,
    angle: float = 0.0,
) -> ForceSample:
    """
    Drag and lift coefficients for a free stream at ``angle`` radians.

    Drag is the force component along ``(cos a, sin a)``, lift along
    ``(-sin a, cos a)``; both are divided by ``0.5 rho U^2 D``.

    :param disc: Discretization holding the wall boundary
    :param u: Evolved state
    :param t: Time of ``u``
    :param tags: Wall tags forming the body
    :param reference_length: Body size ``D``
    :param density: Free-stream density
    :param speed: Free-stream speed
    :param angle: Free-stream direction
    :return: Force sample with raw components and coefficients
    """
    fx, fy = wall_force(disc, u, t, tags)
    q_ref = 0.5 * density * speed**2 * reference_length
    c, s = math.cos(angle), math.sin(angle)
    drag = (c * fx + s * fy) / q_ref
    lift = (-s * fx + c * fy) / q_ref
    return ForceSample(t, float(fx), float(fy), float(drag), float(lift))
