"""
slidefr
~~~~~~~~~~~~~~~~~~~

High-order flux reconstruction solver for compressible flow on rotating
subdomains coupled by dynamic mortars.

:copyright: (c) 2024-present t3tra
:license: MIT

"""

__title__ = "slidefr"
__author__ = "t3tra"
__license__ = "MIT"
__copyright__ = "Copyright 2024 t3tra"
__version__ = "0.1.0"

__path__ = __import__("pkgutil").extend_path(__path__, __name__)

import logging
from typing import NamedTuple, Literal

__all__ = [
    "exceptions",
    "types",
    "basis",
    "geometry",
    "mesh",
    "solver",
    "mortar",
    "timestepping",
    "config",
    "verification",
    "io",
    "cases",
    "Simulation",
    "StepHandler",
    "StepContext",
    "RunConfig",
    "load_config",
    "build_case",
    "PRESETS",
]

from . import exceptions
from . import types
from . import basis
from . import geometry
from . import mesh

# the mortar exchange uses the gas model; solver must be loaded first
from . import solver
from . import mortar
from . import timestepping
from . import config
from . import verification
from . import io
from . import cases
from .app import Simulation, StepHandler
from .cases import PRESETS, build_case
from .config import RunConfig, load_config
from .context import StepContext


class VersionInfo(NamedTuple):
    major: int
    minor: int
    micro: int
    releaselevel: Literal["alpha", "beta", "candidate", "final"]
    serial: int


version_info: VersionInfo = VersionInfo(
    major=0, minor=1, micro=0, releaselevel="alpha", serial=0
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

del logging, NamedTuple, Literal, VersionInfo
