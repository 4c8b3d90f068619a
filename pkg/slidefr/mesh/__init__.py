"""Subdomain meshes, assembly and generators."""

from .assembly import *
from .generators import *
from .subdomain import *
