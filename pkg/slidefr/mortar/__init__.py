"""Dynamic mortars on sliding interfaces."""

from .connectivity import *
from .interface import *
from .projection import *
