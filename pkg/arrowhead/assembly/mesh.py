from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class Mesh1D:
    """Strictly increasing breakpoints ``x_0 < ... < x_n`` splitting an interval into elements."""

    breakpoints: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float).reshape(-1)
        if bp.size < 2:
            raise ValueError("a mesh needs at least two breakpoints")
        if not np.all(np.isfinite(bp)):
            raise ValueError("breakpoints must be finite")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)

    @classmethod
    def uniform(cls, a: float, b: float, n: int) -> "Mesh1D":
        if n < 1:
            raise ValueError(f"element count must be positive, got {n}")
        return cls(np.linspace(a, b, n + 1))

    @classmethod
    def from_sequence(cls, points: Sequence[float]) -> "Mesh1D":
        return cls(np.asarray(points, dtype=float))

    @property
    def n(self) -> int:
        return self.breakpoints.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def h(self) -> float:
        return float(self.widths.min())

    @property
    def a(self) -> float:
        return float(self.breakpoints[0])

    @property
    def b(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def length(self) -> float:
        return self.b - self.a

    def element_points(self, t) -> np.ndarray:
        """Images of reference points ``t`` in [-1, 1] on every element; shape (n, len(t))."""
        t = np.asarray(t, dtype=float).reshape(-1)
        left = self.breakpoints[:-1, None]
        return left + (t[None, :] + 1.0) * (self.widths[:, None] / 2.0)

    def locate(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Element index and reference coordinate of each point."""
        x = np.asarray(x, dtype=float).reshape(-1)
        tol = 1e-12 * max(1.0, abs(self.a), abs(self.b))
        if np.any(x < self.a - tol) or np.any(x > self.b + tol):
            raise ValueError(f"points outside the mesh interval [{self.a}, {self.b}]")
        e = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1, 0, self.n - 1)
        t = 2.0 * (x - self.breakpoints[e]) / self.widths[e] - 1.0
        return e, np.clip(t, -1.0, 1.0)


class BoundaryCondition(str, enum.Enum):
    """Which boundary hats the space keeps.

    ``FULL`` keeps both and imposes the natural (zero Neumann) condition; the mixed members keep one.
    """

    DIRICHLET = "dirichlet"
    FULL = "full"
    NEUMANN_DIRICHLET = "neumann-dirichlet"
    DIRICHLET_NEUMANN = "dirichlet-neumann"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            key = value.strip().lower()
            if key == "neumann":
                return cls.FULL
            for member in cls:
                if member.value == key:
                    return member
        return None

    @property
    def keep_left(self) -> bool:
        return self in (BoundaryCondition.FULL, BoundaryCondition.NEUMANN_DIRICHLET)

    @property
    def keep_right(self) -> bool:
        return self in (BoundaryCondition.FULL, BoundaryCondition.DIRICHLET_NEUMANN)

    @property
    def definite(self) -> bool:
        """Whether the unshifted weak Laplacian is positive definite."""
        return not (self.keep_left and self.keep_right)


@dataclass(eq=False)
class Space1D:
    """Hat functions plus bubbles ``W_0 .. W_{p-2}`` on every element of a mesh.

    Unknowns are ordered degree-major, element-minor: the hat block first, then one block of
    ``n`` coefficients per bubble degree.
    """

    mesh: Mesh1D
    degree: int
    bc: BoundaryCondition = BoundaryCondition.DIRICHLET
    _operators: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 2:
            raise ValueError(f"degree must be an integer >= 2, got {self.degree}")
        self.degree = int(self.degree)
        self.bc = BoundaryCondition(self.bc)

    @classmethod
    def from_description(cls, desc: Mapping[str, Any]) -> "Space1D":
        """Build from ``{"breakpoints": [...], "degree": p, "bc": "dirichlet"}``."""
        try:
            mesh = Mesh1D.from_sequence(desc["breakpoints"])
            degree = desc["degree"]
        except KeyError as e:
            raise ValueError(f"space description is missing {e.args[0]!r}") from None
        return cls(mesh, degree, BoundaryCondition(desc.get("bc", "dirichlet")))

    @property
    def n(self) -> int:
        return self.mesh.n

    @property
    def hat_nodes(self) -> np.ndarray:
        """Mesh nodes whose hat functions belong to the space."""
        first = 0 if self.bc.keep_left else 1
        last = self.n if self.bc.keep_right else self.n - 1
        return np.arange(first, last + 1)

    @property
    def hat_count(self) -> int:
        return self.hat_nodes.size

    @property
    def bubble_blocks(self) -> int:
        return self.degree - 1

    @property
    def dim(self) -> int:
        return self.hat_count + self.bubble_blocks * self.n

    @property
    def legendre_dim(self) -> int:
        """Length of a piecewise-Legendre vector of degrees 0..p."""
        return (self.degree + 1) * self.n

    def block_offset(self, block: int) -> int:
        if block < 0 or block > self.bubble_blocks:
            raise IndexError(f"block {block} out of range 0..{self.bubble_blocks}")
        return 0 if block == 0 else self.hat_count + (block - 1) * self.n

    def block_size(self, block: int) -> int:
        self.block_offset(block)
        return self.hat_count if block == 0 else self.n

    def interlace_index(self, block: int, element: int) -> int:
        """Global index of entry ``element`` of ``block`` (block 0 holds the hats)."""
        size = self.block_size(block)
        if element < 0 or element >= size:
            raise IndexError(f"entry {element} out of range for block {block} of size {size}")
        return self.block_offset(block) + element

    def deinterlace_index(self, index: int) -> tuple[int, int]:
        if index < 0 or index >= self.dim:
            raise IndexError(f"index {index} out of range 0..{self.dim - 1}")
        m = self.hat_count
        if index < m:
            return 0, index
        block, element = divmod(index - m, self.n)
        return block + 1, element

    def operators(self, omega: float = 0.0):
        """Assembled operators, cached per shift."""
        from .operators import assemble_operators

        key = float(omega)
        if key not in self._operators:
            self._operators[key] = assemble_operators(self, key)
        return self._operators[key]


def interlace(blocks: np.ndarray) -> np.ndarray:
    """Flatten ``(degree, element, ...)`` blocks into degree-major, element-minor order."""
    blocks = np.asarray(blocks)
    return blocks.reshape((blocks.shape[0] * blocks.shape[1],) + blocks.shape[2:])


def deinterlace(vec: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`interlace` for ``n`` elements."""
    vec = np.asarray(vec)
    if vec.shape[0] % n:
        raise ValueError(f"length {vec.shape[0]} is not a whole number of {n}-element blocks")
    return vec.reshape((vec.shape[0] // n, n) + vec.shape[1:])
