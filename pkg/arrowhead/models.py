from __future__ import annotations

import enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .assembly.mesh import BoundaryCondition, Mesh1D, Space1D


class Command(str, enum.Enum):
    SOLVE1D = "solve1d"
    SOLVE2D = "solve2d"
    SCALING1D = "scaling1d"
    SCALING2D = "scaling2d"
    BURGERS = "burgers"
    PCG_TABLE = "pcg-table"
    SPECTRUM_CHECK = "spectrum-check"


class Manufactured(str, enum.Enum):
    SIN = "sin"
    INDICATOR = "indicator"
    ZERO = "zero"


class InitialCondition(str, enum.Enum):
    INDICATOR = "indicator"
    BUMP = "bump"


def _strictly_increasing(v: list[float]) -> list[float]:
    if any(b <= a for a, b in zip(v, v[1:])):
        raise ValueError("breakpoints must be strictly increasing")
    return v


class SpaceSpec(BaseModel):
    """JSON-compatible description of a hat-bubble space."""

    model_config = ConfigDict(frozen=True)

    breakpoints: list[float] = Field(min_length=2)
    degree: int = Field(ge=2)
    bc: BoundaryCondition = BoundaryCondition.DIRICHLET

    @field_validator("breakpoints")
    @classmethod
    def _increasing(cls, v: list[float]) -> list[float]:
        return _strictly_increasing(v)

    @classmethod
    def uniform(cls, n: int, degree: int, bc: BoundaryCondition = BoundaryCondition.DIRICHLET,
                a: float = -1.0, b: float = 1.0) -> "SpaceSpec":
        mesh = Mesh1D.uniform(a, b, n)
        return cls(breakpoints=[float(x) for x in mesh.breakpoints], degree=degree, bc=bc)

    def to_space(self) -> Space1D:
        return Space1D.from_description(self.model_dump())


class ExperimentSpec(BaseModel):
    """Validated parameters of one CLI run."""

    model_config = ConfigDict(frozen=True)

    command: Command
    n: int = Field(2, ge=1)
    degree: int = Field(8, ge=2)
    omega: float = Field(0.0, ge=0.0)
    eps: float = Field(1e-10, gt=0.0, lt=1.0)
    bc: BoundaryCondition = BoundaryCondition.DIRICHLET
    breakpoints: Optional[list[float]] = None
    seed: int = 0
    timings: bool = True
    out: Optional[Path] = None

    @field_validator("breakpoints")
    @classmethod
    def _increasing(cls, v: Optional[list[float]]) -> Optional[list[float]]:
        if v is not None and len(v) < 2:
            raise ValueError("a mesh needs at least two breakpoints")
        return v if v is None else _strictly_increasing(v)

    @model_validator(mode="after")
    def _definite(self) -> "ExperimentSpec":
        if self.omega == 0 and not self.bc.definite:
            raise ValueError("the Neumann problem needs omega > 0")
        return self

    @model_validator(mode="after")
    def _element_count(self) -> "ExperimentSpec":
        if self.breakpoints is not None and len(self.breakpoints) - 1 != self.n:
            raise ValueError(f"{len(self.breakpoints)} breakpoints do not make {self.n} elements")
        return self

    def space_spec(self) -> SpaceSpec:
        """The mesh given by ``breakpoints``, or ``n`` uniform elements on [-1, 1]."""
        if self.breakpoints is None:
            return SpaceSpec.uniform(self.n, self.degree, self.bc)
        return SpaceSpec(breakpoints=self.breakpoints, degree=self.degree, bc=self.bc)

    def space(self) -> Space1D:
        return self.space_spec().to_space()

    def parameters(self) -> dict:
        """Row label for the CSV output."""
        params = {"n": self.n, "p": self.degree, "omega": self.omega, "eps": self.eps, "bc": self.bc.value}
        if self.breakpoints is not None:
            params["breakpoints"] = list(self.breakpoints)
        return params
