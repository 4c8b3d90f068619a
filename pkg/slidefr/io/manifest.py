"""Run manifest: configuration echo, library versions, timing and status."""

from __future__ import annotations

import json
import os
import platform
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from ..exceptions import SnapshotError
from ..types.events import RunStatus

__all__ = ["library_versions", "build_manifest", "write_manifest", "read_manifest"]

_LIBRARIES = ("numpy", "scipy", "pydantic")


def library_versions() -> Dict[str, str]:
    from .. import __version__

    versions = {"slidefr": __version__, "python": platform.python_version()}
    for name in _LIBRARIES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def build_manifest(
    config: Mapping[str, Any],
    status: RunStatus,
    wall_time: float,
    steps: int,
    t: float,
    artifacts: List[str],
    error: Optional[str] = None,
) -> Dict[str, Any]:
    return {
        "status": RunStatus(status).value,
        "exit_code": RunStatus(status).exit_code,
        "error": error,
        "steps": steps,
        "t": t,
        "wall_time": wall_time,
        "versions": library_versions(),
        "config": dict(config),
        "artifacts": sorted(artifacts),
    }


def write_manifest(path: Union[str, os.PathLike], manifest: Mapping[str, Any]) -> Path:
    """
    :raises SnapshotError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    except OSError as exc:
        raise SnapshotError(f"Cannot write manifest: {exc}", path=str(path))
    return path


def read_manifest(path: Union[str, os.PathLike]) -> Dict[str, Any]:
    """
    :raises SnapshotError: If the file is unreadable or not JSON
    """
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SnapshotError(f"Cannot read manifest: {exc}", path=str(path))
