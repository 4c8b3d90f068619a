"""
Binary restart files.

A restart file is one frame: a fixed big-endian header followed by the evolved
state as little-endian float64. Connectivity and geometry are rebuilt from
the time on load, so the frame carries only ``(|J| Q, |J|_num)``, ``t`` and
the step count.

Layout::

    magic      4s   b"SLFR"
    version    H
    step       Q
    t          d
    elements   I
    n          H
    nvars      H
    payload    elements * n * n * nvars float64
"""

from __future__ import annotations

import logging
import os
import struct
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np

from ..exceptions import SnapshotError

__all__ = ["MAGIC", "VERSION", "RestartHeader", "Restart", "serialize_restart", "parse_restart", "write_restart", "read_restart"]

logger = logging.getLogger(__name__)

MAGIC = b"SLFR"
VERSION = 1

_HEADER = struct.Struct("!4sHQdIHH")
_PAYLOAD = np.dtype("<f8")


class RestartHeader(NamedTuple):
    version: int
    step: int
    t: float
    elements: int
    n: int
    nvars: int

    @property
    def payload_length(self) -> int:
        return self.elements * self.n * self.n * self.nvars * _PAYLOAD.itemsize


class Restart(NamedTuple):
    """Decoded restart frame."""

    step: int
    t: float
    state: np.ndarray


def serialize_restart(state: np.ndarray, t: float, step: int) -> bytes:
    """
    Encode an evolved state.

    :param state: ``(E, N, N, nvars)``
    :param t: Time of the state
    :param step: Steps taken to reach ``t``
    :raises SnapshotError: For a state that is not ``(E, N, N, nvars)``
    """
    state = np.asarray(state)
    if state.ndim != 4 or state.shape[1] != state.shape[2]:
        raise SnapshotError(f"Restart state must be (E, N, N, nvars), got {state.shape}")
    e, n, _, nvars = state.shape
    header = _HEADER.pack(MAGIC, VERSION, int(step), float(t), e, n, nvars)
    return header + np.ascontiguousarray(state, dtype=_PAYLOAD).tobytes()


def parse_restart(data: Union[bytes, bytearray], path: str | None = None) -> Restart:
    """
    Decode a restart frame.

    :param data: Raw file contents
    :param path: Path used in error messages
    :raises SnapshotError: For foreign, truncated or oversized data
    """
    if len(data) < _HEADER.size:
        raise SnapshotError("Restart file too short for header", path=path)

    magic, version, step, t, elements, n, nvars = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise SnapshotError(f"Not a restart file (magic {magic!r})", path=path)
    if version != VERSION:
        raise SnapshotError(f"Unsupported restart version {version}", path=path)
    header = RestartHeader(version, step, t, elements, n, nvars)

    pos = _HEADER.size
    if len(data) < pos + header.payload_length:
        raise SnapshotError("Restart file too short for payload", path=path)
    if len(data) > pos + header.payload_length:
        raise SnapshotError("Trailing bytes after restart payload", path=path)

    payload = np.frombuffer(bytes(data[pos:]), dtype=_PAYLOAD)
    state = payload.astype(float).reshape(elements, n, n, nvars)
    return Restart(step, t, state)


def write_restart(path: Union[str, os.PathLike], state: np.ndarray, t: float, step: int) -> Path:
    """
    :raises SnapshotError: If the file cannot be written
    """
    path = Path(path)
    data = serialize_restart(state, t, step)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as exc:
        raise SnapshotError(f"Cannot write restart: {exc}", path=str(path))
    logger.debug(f"Restart written: {path} (step {step}, t={t})")
    return path


def read_restart(path: Union[str, os.PathLike]) -> Restart:
    """
    :raises SnapshotError: If the file is unreadable or malformed
    """
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise SnapshotError(f"Cannot read restart: {exc}", path=str(path))
    return parse_restart(data, path=str(path))
