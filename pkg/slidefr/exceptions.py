"""
Exceptions for the slidefr library.

This module contains all custom exceptions that may be raised by slidefr.
Every exception derives from :class:`SlideFRError`, and the subclasses carry
the location (element, mortar, line, step...) that triggered them.
"""

from __future__ import annotations

from typing import Any, Optional

__all__ = [
    "SlideFRError",
    "ConfigurationError",
    "InvalidOrderError",
    "MeshError",
    "MeshParseError",
    "TopologyError",
    "GeometryError",
    "InvertedElementError",
    "DegenerateFaceError",
    "InterfaceError",
    "InterfaceMisalignmentError",
    "AdmissibilityError",
    "DivergenceError",
    "SnapshotError",
]


def _context(**fields: Any) -> str:
    parts = [f"{key}={value!r}" for key, value in fields.items() if value is not None]
    return f" ({', '.join(parts)})" if parts else ""


class SlideFRError(Exception):
    """Base exception for all slidefr errors."""

    def __init__(self, message: str) -> None:
        super().__init__(message)


class ConfigurationError(SlideFRError):
    """
    Raised when a run configuration or an option value is invalid.

    :param message: Error message
    :param key: Offending configuration key, if known
    """

    def __init__(self, message: str, key: Optional[str] = None) -> None:
        super().__init__(message)
        self.key = key

    def __str__(self) -> str:
        return f"{super().__str__()}{_context(key=self.key)}"


class InvalidOrderError(ConfigurationError):
    """Raised for a polynomial order or point count outside the supported range."""


class MeshError(SlideFRError):
    """Base class for mesh ingestion and assembly failures."""


class MeshParseError(MeshError):
    """
    Raised when a mesh file cannot be parsed.

    :param message: Error message
    :param path: File being parsed
    :param line: 1-based line number of the offending record
    """

    def __init__(
        self, message: str, path: Optional[str] = None, line: Optional[int] = None
    ) -> None:
        super().__init__(message)
        self.path = path
        self.line = line

    def __str__(self) -> str:
        return f"{super().__str__()}{_context(path=self.path, line=self.line)}"


class TopologyError(MeshError):
    """
    Raised for broken face loops, unpaired faces or unpaired interface sides.

    :param message: Error message
    :param interface: Sliding interface id involved, if any
    """

    def __init__(self, message: str, interface: Optional[int] = None) -> None:
        super().__init__(message)
        self.interface = interface

    def __str__(self) -> str:
        return f"{super().__str__()}{_context(interface=self.interface)}"


class GeometryError(SlideFRError):
    """
    Raised when an element mapping is inconsistent or unusable.

    :param message: Error message
    :param element: Global element id, if known
    """

    def __init__(self, message: str, element: Optional[int] = None) -> None:
        super().__init__(message)
        self.element = element

    def __str__(self) -> str:
        return f"{super().__str__()}{_context(element=self.element)}"


class InvertedElementError(GeometryError):
    """Raised when the mapping Jacobian determinant is not positive."""


class DegenerateFaceError(GeometryError):
    """Raised when a face has zero length."""


class InterfaceError(SlideFRError):
    """
    Raised when the mortar connectivity of a sliding interface is inconsistent.

    :param message: Error message
    :param interface: Sliding interface id
    """

    def __init__(self, message: str, interface: Optional[int] = None) -> None:
        super().__init__(message)
        self.interface = interface

    def __str__(self) -> str:
        return f"{super().__str__()}{_context(interface=self.interface)}"


class InterfaceMisalignmentError(InterfaceError):
    """Raised when no face on the right side contains the first left vertex."""


class AdmissibilityError(SlideFRError):
    """
    Raised when a state has non-positive density or pressure.

    :param message: Error message
    :param element: Element id where the state was found
    :param point: Solution or flux point index inside the element
    :param mortar: Mortar id, when the state lives on a mortar
    """

    def __init__(
        self,
        message: str,
        element: Optional[int] = None,
        point: Optional[Any] = None,
        mortar: Optional[int] = None,
    ) -> None:
        super().__init__(message)
        self.element = element
        self.point = point
        self.mortar = mortar

    def __str__(self) -> str:
        return (
            f"{super().__str__()}"
            f"{_context(element=self.element, point=self.point, mortar=self.mortar)}"
        )


class DivergenceError(SlideFRError):
    """
    Raised when the solution becomes non-finite during time marching.

    :param message: Error message
    :param step: Time step index
    :param stage: Runge-Kutta stage index
    """

    def __init__(
        self, message: str, step: Optional[int] = None, stage: Optional[int] = None
    ) -> None:
        super().__init__(message)
        self.step = step
        self.stage = stage

    def __str__(self) -> str:
        return f"{super().__str__()}{_context(step=self.step, stage=self.stage)}"


class SnapshotError(SlideFRError):
    """
    Raised when an output or restart file cannot be written or read.

    :param message: Error message
    :param path: File path involved
    """

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        super().__init__(message)
        self.path = path

    def __str__(self) -> str:
        return f"{super().__str__()}{_context(path=self.path)}"
