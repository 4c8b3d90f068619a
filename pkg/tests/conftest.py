from __future__ import annotations

import math

import numpy as np
import pytest

from slidefr.basis import basis_for
from slidefr.mesh.assembly import prepare_mesh
from slidefr.mesh.generators import annulus_mesh, block_mesh, vortex_box_mesh
from slidefr.solver.boundary import BoundaryCondition, BoundaryKind
from slidefr.solver.gas import FluidModel
from slidefr.verification.exact import FreeStream


@pytest.fixture
def basis4():
    return basis_for(4)


@pytest.fixture
def inviscid():
    return FluidModel.from_groups(0.3)


@pytest.fixture
def viscous():
    return FluidModel.from_groups(0.8, 100.0, prandtl=0.72)


@pytest.fixture
def free_stream(inviscid):
    return FreeStream(inviscid, mach=0.3, angle=math.atan(0.5))


@pytest.fixture
def box_boundaries(free_stream):
    bc = BoundaryCondition(BoundaryKind.DIRICHLET, state=free_stream)
    return {tag: bc for tag in ("bottom", "right", "top", "left")}


@pytest.fixture
def vortex_mesh():
    return prepare_mesh(vortex_box_mesh(scale=0.1, omega=5.0))


@pytest.fixture
def annulus():
    return prepare_mesh(annulus_mesh(omega=1.0))


@pytest.fixture
def block():
    return prepare_mesh(block_mesh(nx=3, ny=2))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
