"""
Case presets and the assembly of a runnable case from a configuration.

Each preset is a set of configuration sections; :func:`build_case` turns a
validated :class:`~slidefr.config.RunConfig` into meshes, a fluid model,
boundary conditions, mesh motions and initial data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional

import numpy as np

from .config import RunConfig, Sections
from .exceptions import ConfigurationError
from .geometry import RigidRotation, VertexOscillation
from .mesh.assembly import AssembledMesh, prepare_mesh
from .mesh.generators import GENERATORS
from .mesh.subdomain import RotationSpec, SubdomainMesh, read_subdomain
from .solver.boundary import BoundaryCondition, BoundaryKind
from .solver.gas import FluidModel
from .verification.exact import CaseTag, ExactSolution, FreeStream, make_exact

__all__ = ["PRESETS", "CaseSetup", "load_meshes", "build_case", "exact_parameters"]

logger = logging.getLogger(__name__)

_BOX = {"bottom": "dirichlet", "right": "dirichlet", "top": "dirichlet", "left": "dirichlet"}

PRESETS: Dict[str, Sections] = {
    "euler-vortex": {
        "case": {"exact": "euler_vortex"},
        "mesh": {"generator": "vortex"},
        "solver": {"order": 4},
        "time": {"scheme": "ssp(5,4)", "dt": 1e-4, "end_time": 2.0},
        "fluid": {"mach": 0.3, "angle": math.atan(0.5)},
        "boundary": dict(_BOX),
        "rotation": {"omega.0": 5.0},
        "diagnostics": {"error": True, "error_variable": "rho"},
    },
    "taylor-couette": {
        "case": {"exact": "taylor_couette"},
        "mesh": {"generator": "annulus"},
        "solver": {"order": 4},
        "time": {"scheme": "ssp(5,4)", "dt": 1e-3, "end_time": 10.0},
        "fluid": {"mach": 0.1, "reynolds": 10.0, "prandtl": 0.72},
        "boundary": {
            "inner_wall": "dirichlet",
            "outer_wall": "noslip_isothermal",
            "outer_wall.temperature": 1.0,
        },
        "rotation": {"omega.0": 1.0},
        "diagnostics": {"error": True, "error_variable": "u"},
    },
    "flat-couette": {
        "case": {"exact": "flat_couette"},
        "mesh": {"generator": "vortex", "scale": 0.1},
        "solver": {"order": 4},
        "time": {"scheme": "ssp(5,4)", "dt": 1e-4, "end_time": 2.0},
        "fluid": {"mach": 0.8, "reynolds": 100.0, "prandtl": 0.72},
        "boundary": dict(_BOX),
        "rotation": {"omega.0": 5.0},
        "diagnostics": {"conservation": True},
    },
    "free-stream": {
        "case": {"exact": "free_stream"},
        "mesh": {"generator": "vortex", "scale": 0.1},
        "solver": {"order": 4},
        "time": {"scheme": "ssp(10,4)", "dt": 1e-3, "end_time": 20.0},
        "fluid": {"mach": 0.3},
        "boundary": dict(_BOX),
        "rotation": {"omega.0": 5.0},
        "diagnostics": {"free_stream": True},
    },
    "free-stream-conforming": {
        "case": {"exact": "free_stream"},
        "mesh": {"generator": "block"},
        "solver": {"order": 4},
        "time": {"scheme": "ssp(10,4)", "dt": 1e-3, "end_time": 20.0},
        "fluid": {"mach": 0.3},
        "boundary": dict(_BOX),
        "rotation": {"oscillation_amplitude": 0.1, "oscillation_frequency": 1.0},
        "diagnostics": {"free_stream": True},
    },
    "square-cylinder": {
        "case": {"exact": "free_stream"},
        "mesh": {"generator": "square-cylinder"},
        "solver": {"order": 3},
        "time": {"scheme": "ssp(10,4)", "dt": 1e-3, "end_time": 5.0},
        "fluid": {"mach": 0.1, "reynolds": 100.0},
        "boundary": {"wall": "noslip_adiabatic", "farfield": "characteristic_farfield"},
        "rotation": {"omega.0": 0.5 * math.pi},
        "output": {"force_tags": "wall"},
    },
    "square-cylinders": {
        "case": {"exact": "free_stream"},
        "mesh": {"generator": "square-cylinders"},
        "solver": {"order": 3},
        "time": {"scheme": "ssp(10,4)", "dt": 1e-3, "end_time": 5.0},
        "fluid": {"mach": 0.1, "reynolds": 100.0},
        "boundary": {"wall": "noslip_adiabatic", "farfield": "characteristic_farfield"},
        "output": {"force_tags": "wall"},
    },
}


@dataclass
class CaseSetup:
    """Everything a :class:`~slidefr.app.Simulation` needs besides the config."""

    meshes: List[SubdomainMesh]
    mesh: AssembledMesh
    model: FluidModel
    boundaries: Dict[str, BoundaryCondition]
    motions: List[Optional[object]]
    exact: Optional[ExactSolution]

    def initial(self, x: np.ndarray, y: np.ndarray, t: float = 0.0) -> np.ndarray:
        """
        Initial conservative field at ``t``.

        :raises ConfigurationError: Without an exact solution
        """
        if self.exact is None:
            raise ConfigurationError("No initial condition: the case has no exact solution", key="case.exact")
        return self.exact(t, x, y)


def load_meshes(config: RunConfig) -> List[SubdomainMesh]:
    """
    Subdomain meshes from files or a generator, with rotation overrides applied.

    :raises ConfigurationError: For a missing or unknown mesh source
    """
    source = config.mesh
    if source.files:
        meshes = [read_subdomain(path) for path in source.files]
    elif source.generator:
        if source.generator not in GENERATORS:
            raise ConfigurationError(
                f"Unknown mesh generator {source.generator!r}; available: {', '.join(GENERATORS)}",
                key="mesh.generator",
            )
        kwargs: Dict[str, Any] = {}
        if source.scale is not None:
            kwargs["scale"] = source.scale
        try:
            meshes = GENERATORS[source.generator](**kwargs)
        except TypeError as exc:
            raise ConfigurationError(f"Generator {source.generator!r}: {exc}", key="mesh.scale")
    else:
        raise ConfigurationError("No mesh: set [mesh] generator or files", key="mesh")

    for index, omega in config.rotation.omega.items():
        if not 0 <= index < len(meshes):
            raise ConfigurationError(f"No subdomain {index}", key=f"rotation.omega.{index}")
        m = meshes[index]
        meshes[index] = replace(m, rotation=RotationSpec(m.rotation.center, float(omega)))
    return meshes


def exact_parameters(config: RunConfig, tag: CaseTag, mesh: AssembledMesh, model: FluidModel) -> Dict[str, Any]:
    """Solution parameters implied by the configuration and the mesh."""
    fluid = config.fluid
    scale = config.mesh.scale or 1.0
    if tag is CaseTag.EULER_VORTEX:
        return {"mach": fluid.mach, "angle": fluid.angle, "center": (5.0 * scale, 5.0 * scale)}
    if tag is CaseTag.TAYLOR_COUETTE:
        return {"pressure": model.freestream_pressure(fluid.mach)}
    if tag is CaseTag.FLAT_COUETTE:
        y = mesh.vertices[:, 1]
        return {
            "pressure": model.freestream_pressure(fluid.mach),
            "y0": float(y.min()),
            "height": float(y.max() - y.min()),
        }
    return {"mach": fluid.mach, "angle": fluid.angle}


def _boundary_conditions(
    config: RunConfig, model: FluidModel, exact: Optional[ExactSolution]
) -> Dict[str, BoundaryCondition]:
    boundaries: Dict[str, BoundaryCondition] = {}
    for tag, entry in config.boundary.items():
        state: Any = None
        if entry.kind is BoundaryKind.DIRICHLET:
            if exact is None:
                raise ConfigurationError(f"Dirichlet boundary {tag!r} needs an exact solution", key=f"boundary.{tag}")
            state = exact
        elif entry.kind is BoundaryKind.CHARACTERISTIC_FARFIELD:
            stream = exact if isinstance(exact, FreeStream) else FreeStream(model, mach=config.fluid.mach, angle=config.fluid.angle)
            state = stream.state
        temperature = entry.temperature
        if entry.kind is BoundaryKind.NOSLIP_ISOTHERMAL and temperature is None:
            temperature = 1.0
        boundaries[tag] = BoundaryCondition(
            entry.kind, state=state, wall_temperature=temperature, wall_omega=entry.omega
        )
    return boundaries


def _motions(config: RunConfig, meshes: List[SubdomainMesh], mesh: AssembledMesh) -> List[Optional[object]]:
    motions: List[Optional[object]] = [
        RigidRotation(tuple(r.center), r.omega) if r.omega != 0.0 else None for r in mesh.rotations
    ]
    rot = config.rotation
    if rot.oscillation_amplitude != 0.0:
        index = rot.oscillation_subdomain
        if not 0 <= index < len(meshes):
            raise ConfigurationError(f"No subdomain {index}", key="rotation.oscillation_subdomain")
        if motions[index] is not None:
            raise ConfigurationError(
                f"Subdomain {index} cannot both rotate and oscillate", key="rotation.oscillation_subdomain"
            )
        v = meshes[index].vertices
        box = (float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max()))
        motions[index] = VertexOscillation(rot.oscillation_amplitude, rot.oscillation_frequency, box)
    return motions


def build_case(config: RunConfig, meshes: Optional[List[SubdomainMesh]] = None) -> CaseSetup:
    """
    Assemble a runnable case.

    :param config: Validated configuration
    :param meshes: Pre-built subdomain meshes overriding ``[mesh]``
    :raises ConfigurationError: For inconsistent case settings
    """
    meshes = list(meshes) if meshes is not None else load_meshes(config)
    mesh = prepare_mesh(meshes)
    model = config.fluid.to_model()
    exact = None
    if config.case.exact:
        tag = CaseTag.parse(config.case.exact)
        exact = make_exact(tag, model, **exact_parameters(config, tag, mesh, model))
    boundaries = _boundary_conditions(config, model, exact)
    motions = _motions(config, meshes, mesh)
    logger.info(
        f"Case {config.case.name or 'custom'}: {mesh.n_cells} cells in {mesh.n_subdomains} subdomain(s), "
        f"{len(mesh.interfaces)} interface(s)"
    )
    return CaseSetup(meshes, mesh, model, boundaries, motions, exact)
