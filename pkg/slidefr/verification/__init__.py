"""Exact solutions, error norms, mapping study and verification drivers."""

from .exact import *
from .mapping import *
from .norms import *
from .studies import *
