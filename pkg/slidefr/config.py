"""
Run configuration.

A configuration is a set of INI sections of flat ``key = value`` pairs::

    [case]
    name = euler-vortex

    [solver]
    order = 4

    [time]
    scheme = ssp(5,4)
    dt = 1e-4
    end_time = 2

    [boundary]
    left = dirichlet
    outer_wall = noslip_isothermal
    outer_wall.temperature = 1.0

    [rotation]
    omega.0 = 5

Sections are merged in order (preset, file, ``--set`` overrides) and the
result is validated by :class:`RunConfig`.
"""

from __future__ import annotations

import configparser
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, MutableMapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .exceptions import ConfigurationError
from .mortar.interface import ViscousMethod
from .solver.boundary import BoundaryKind
from .solver.gas import FluidModel, SoundSpeedPolicy
from .timestepping import RKScheme, parse_scheme

__all__ = [
    "SECTIONS",
    "Sections",
    "CaseConfig",
    "MeshConfig",
    "SolverConfig",
    "TimeConfig",
    "FluidConfig",
    "BoundaryEntry",
    "RotationConfig",
    "OutputConfig",
    "DiagnosticsConfig",
    "RunConfig",
    "read_ini",
    "parse_override",
    "merge_sections",
    "load_config",
]

SECTIONS = ("case", "mesh", "solver", "time", "fluid", "boundary", "rotation", "output", "diagnostics")

Sections = Dict[str, Dict[str, Any]]


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CaseConfig(_Section):
    #: preset the configuration started from
    name: Optional[str] = None
    #: analytic solution used for initial, boundary and error data
    exact: Optional[str] = None


class MeshConfig(_Section):
    generator: Optional[str] = None
    files: List[str] = Field(default_factory=list)
    scale: Optional[float] = Field(None, gt=0.0)

    @field_validator("files", mode="before")
    @classmethod
    def split_files(cls, value: Any) -> Any:
        return _split_list(value)

    @model_validator(mode="after")
    def check_mesh_source(self) -> MeshConfig:
        if self.generator and self.files:
            raise ValueError("give either a generator or mesh files, not both")
        return self


class SolverConfig(_Section):
    #: polynomial degree P; the element carries P + 1 points per direction
    order: int = Field(4, ge=1, le=20)
    viscous_method: ViscousMethod = ViscousMethod.FLUXES
    sound_speed: SoundSpeedPolicy = SoundSpeedPolicy.AVERAGE
    gcl: bool = True
    workers: int = Field(1, ge=1)
    boundary_nodes: Optional[int] = None

    @field_validator("viscous_method", mode="before")
    @classmethod
    def parse_viscous_method(cls, value: Any) -> Any:
        if isinstance(value, str):
            text = value.strip()
            if text.isdigit():
                return int(text)
            try:
                return ViscousMethod[text.upper()]
            except KeyError:
                raise ValueError(f"unknown viscous method {value!r}")
        return value

    @field_validator("boundary_nodes")
    @classmethod
    def check_boundary_nodes(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value not in (4, 8, 12):
            raise ValueError("boundary_nodes must be 4, 8 or 12")
        return value


class TimeConfig(_Section):
    scheme: str = "ssp(5,4)"
    dt: float = Field(1e-3, gt=0.0)
    end_time: float = Field(1.0, ge=0.0)
    start_time: float = 0.0

    @field_validator("scheme")
    @classmethod
    def normalize_scheme(cls, value: str) -> str:
        return parse_scheme(value).name

    @property
    def rk(self) -> RKScheme:
        return parse_scheme(self.scheme)


class FluidConfig(_Section):
    gamma: float = Field(1.4, gt=1.0)
    mach: float = Field(0.3, gt=0.0)
    #: ``None`` gives inviscid flow
    reynolds: Optional[float] = Field(None, gt=0.0)
    prandtl: float = Field(0.72, gt=0.0)
    gas_constant: Optional[float] = Field(None, gt=0.0)
    angle: float = 0.0

    def to_model(self) -> FluidModel:
        return FluidModel.from_groups(
            self.mach, self.reynolds, prandtl=self.prandtl, gamma=self.gamma, gas_constant=self.gas_constant
        )


class BoundaryEntry(_Section):
    kind: BoundaryKind
    temperature: Optional[float] = Field(None, gt=0.0)
    omega: Optional[float] = None


class RotationConfig(_Section):
    #: angular speed per subdomain index, overriding the mesh
    omega: Dict[int, float] = Field(default_factory=dict)
    oscillation_amplitude: float = 0.0
    oscillation_frequency: float = 1.0
    oscillation_subdomain: int = 0


class OutputConfig(_Section):
    directory: str = "output"
    #: steps between snapshots; 0 writes only the initial and final fields
    cadence: int = Field(0, ge=0)
    vtk: bool = False
    restart_every: int = Field(0, ge=0)
    force_tags: List[str] = Field(default_factory=list)
    reference_length: float = Field(1.0, gt=0.0)

    @field_validator("force_tags", mode="before")
    @classmethod
    def split_force_tags(cls, value: Any) -> Any:
        return _split_list(value)


class DiagnosticsConfig(_Section):
    conservation: bool = False
    mortar_dump: bool = False
    free_stream: bool = False
    error: bool = False
    error_variable: str = "rho"
    #: steps between monitor samples
    every: int = Field(1, ge=1)

    @field_validator("error_variable")
    @classmethod
    def check_error_variable(cls, value: str) -> str:
        if value not in ("rho", "u", "v", "p"):
            raise ValueError("error_variable must be one of rho, u, v, p")
        return value


class RunConfig(_Section):
    """
    Validated run configuration.

    :raises ConfigurationError: Via :func:`load_config` for any invalid value
    """

    case: CaseConfig = Field(default_factory=CaseConfig)
    mesh: MeshConfig = Field(default_factory=MeshConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    time: TimeConfig = Field(default_factory=TimeConfig)
    fluid: FluidConfig = Field(default_factory=FluidConfig)
    boundary: Dict[str, BoundaryEntry] = Field(default_factory=dict)
    rotation: RotationConfig = Field(default_factory=RotationConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    diagnostics: DiagnosticsConfig = Field(default_factory=DiagnosticsConfig)

    @property
    def n_points(self) -> int:
        return self.solver.order + 1

    @property
    def n_steps(self) -> int:
        span = self.time.end_time - self.time.start_time
        return max(0, math.ceil(span / self.time.dt - 1e-9))

    def sections(self) -> Sections:
        """Flat sections that reproduce this configuration."""
        data = self.model_dump(mode="json")
        out: Sections = {}
        for name in SECTIONS:
            value = data[name]
            flat: Dict[str, Any] = {}
            if name == "boundary":
                for tag, entry in value.items():
                    flat[tag] = entry["kind"]
                    for key in ("temperature", "omega"):
                        if entry[key] is not None:
                            flat[f"{tag}.{key}"] = entry[key]
            elif name == "rotation":
                for sub, omega in value.pop("omega").items():
                    flat[f"omega.{sub}"] = omega
                flat.update(value)
            else:
                flat = {k: (", ".join(v) if isinstance(v, list) else v) for k, v in value.items() if v is not None}
            out[name] = flat
        return out


# ---------------------------------------------------------------------------
# loading


def read_ini(path: Union[str, Path]) -> Sections:
    """
    Raw sections of a configuration file.

    :raises ConfigurationError: For unreadable files or unknown sections
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # type: ignore[assignment]
    try:
        with open(path, "r", encoding="utf-8") as fp:
            parser.read_file(fp)
    except OSError as exc:
        raise ConfigurationError(f"Cannot read configuration: {exc}", key=str(path))
    except configparser.Error as exc:
        raise ConfigurationError(f"Malformed configuration: {exc}", key=str(path))
    sections: Sections = {}
    for name in parser.sections():
        if name not in SECTIONS:
            raise ConfigurationError(f"Unknown section [{name}]", key=name)
        sections[name] = dict(parser.items(name))
    return sections


def parse_override(text: str) -> Sections:
    """
    ``section.key=value`` as a one-entry section mapping.

    :raises ConfigurationError: For a malformed override
    """
    target, sep, value = text.partition("=")
    section, dot, key = target.strip().partition(".")
    if not sep or not dot or not key:
        raise ConfigurationError(f"Override {text!r} is not section.key=value", key=target.strip() or None)
    if section not in SECTIONS:
        raise ConfigurationError(f"Unknown section [{section}]", key=section)
    return {section: {key.strip(): value.strip()}}


def merge_sections(*layers: Optional[Mapping[str, Mapping[str, Any]]]) -> Sections:
    """Later layers override earlier ones key by key."""
    out: Sections = {}
    for layer in layers:
        for name, values in (layer or {}).items():
            out.setdefault(name, {}).update(values)
    return out


def _structure(sections: Mapping[str, Mapping[str, Any]]) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    for name, values in sections.items():
        if name not in SECTIONS:
            raise ConfigurationError(f"Unknown section [{name}]", key=name)
        if name == "boundary":
            entries: Dict[str, MutableMapping[str, Any]] = {}
            for key, value in values.items():
                tag, _, attr = key.partition(".")
                entries.setdefault(tag, {})[attr or "kind"] = value
            data[name] = entries
        elif name == "rotation":
            rotation: Dict[str, Any] = {"omega": {}}
            for key, value in values.items():
                head, _, index = key.partition(".")
                if head == "omega" and index:
                    try:
                        rotation["omega"][int(index)] = value
                    except ValueError:
                        raise ConfigurationError(f"Subdomain index {index!r} is not an integer", key=f"rotation.{key}")
                else:
                    rotation[key] = value
            data[name] = rotation
        else:
            data[name] = dict(values)
    return data


def _error_key(error: Mapping[str, Any]) -> str:
    return ".".join(str(part) for part in error.get("loc", ()))


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Iterable[str] = (),
    presets: Optional[Mapping[str, Sections]] = None,
    preset: Optional[str] = None,
) -> RunConfig:
    """
    Merge preset, file and overrides into a validated configuration.

    The preset is ``preset`` if given, else ``[case] name`` from the file or
    the overrides.

    :param path: INI file
    :param overrides: ``section.key=value`` strings
    :param presets: Available presets by name
    :param preset: Preset to start from
    :raises ConfigurationError: For any invalid section, key or value
    """
    file_sections = read_ini(path) if path is not None else {}
    override_sections = merge_sections(*(parse_override(o) for o in overrides))
    name = preset or override_sections.get("case", {}).get("name") or file_sections.get("case", {}).get("name")
    base: Sections = {}
    if name:
        if presets is None or name not in presets:
            raise ConfigurationError(f"Unknown case preset {name!r}", key="case.name")
        base = merge_sections(presets[name], {"case": {"name": name}})
    sections = merge_sections(base, file_sections, override_sections)
    try:
        return RunConfig.model_validate(_structure(sections))
    except ConfigurationError:
        raise
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigurationError(f"Invalid configuration: {first.get('msg')}", key=_error_key(first))
