"""Flux reconstruction spatial discretization, boundary conditions and loads."""

from .boundary import *
from .discretization import *
from .forces import *
from .gas import *
