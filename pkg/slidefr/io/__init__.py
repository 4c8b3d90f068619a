"""Snapshots, restart frames, CSV tables and run manifests."""

from .manifest import *
from .restart import *
from .snapshot import *
from .tables import *
