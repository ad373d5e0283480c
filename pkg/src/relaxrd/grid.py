"""Uniform Cartesian grids in one and two dimensions with ghost-cell boundaries.

Arrays carry ``G`` ghost layers on every side of every axis.  Axis 0 of a 2D
array is ``y`` and axis 1 is ``x`` (C order, so rows are contiguous in ``x``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NEUMANN = "neumann"
PERIODIC = "periodic"
DIRICHLET = "dirichlet"
_KINDS = (NEUMANN, PERIODIC, DIRICHLET)


@dataclass(frozen=True)
class Grid:
    """Cell-centred uniform grid.

    ``lower``, ``upper`` and ``m`` are ordered as ``(x,)`` or ``(x, y)``.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    m: tuple[int, ...]
    ghost: int

    @property
    def dim(self) -> int:
        return len(self.m)

    @property
    def h(self) -> tuple[float, ...]:
        return tuple((b - a) / n for a, b, n in zip(self.lower, self.upper, self.m))

    def centers(self, axis: int = 0) -> np.ndarray:
        """Interior cell centres ``x_j = a - h/2 + j h`` for ``j = 1..m``."""
        a, h, n = self.lower[axis], self.h[axis], self.m[axis]
        return a - 0.5 * h + h * np.arange(1, n + 1)

    def centers_with_ghosts(self, axis: int = 0) -> np.ndarray:
        a, h, n, G = self.lower[axis], self.h[axis], self.m[axis], self.ghost
        return a - 0.5 * h + h * np.arange(1 - G, n + G + 1)

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Interior coordinate arrays shaped like the interior field."""
        if self.dim == 1:
            return (self.centers(0),)
        X, Y = np.meshgrid(self.centers(0), self.centers(1), indexing="xy")
        return X, Y

    @property
    def shape(self) -> tuple[int, ...]:
        """Interior array shape in storage order (``(mx,)`` or ``(my, mx)``)."""
        return tuple(reversed(self.m))

    @property
    def padded_shape(self) -> tuple[int, ...]:
        return tuple(n + 2 * self.ghost for n in self.shape)

    @property
    def interior(self) -> tuple[slice, ...]:
        G = self.ghost
        return tuple(slice(G, G + n) for n in self.shape)

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.h))

    def storage_axis(self, axis: int) -> int:
        """Array axis holding grid axis ``axis`` (x is the last array axis)."""
        return self.dim - 1 - axis

    def with_ghost(self, ghost: int) -> "Grid":
        return build_grid(list(zip(self.lower, self.upper)), self.m, ghost)


def build_grid(bounds: Sequence[tuple[float, float]], m: int | Sequence[int], ghost: int = 1) -> Grid:
    """Build a grid from per-axis ``(a, b)`` intervals and cell counts."""
    if isinstance(bounds[0], (int, float)):
        bounds = [tuple(bounds)]  # type: ignore[list-item]
    ms = (m,) * len(bounds) if isinstance(m, (int, np.integer)) else tuple(m)
    if len(ms) != len(bounds):
        raise ValueError("need one cell count per axis")
    if len(bounds) not in (1, 2):
        raise ValueError("only 1D and 2D grids are supported")
    for (a, b), n in zip(bounds, ms):
        if not b > a:
            raise ValueError(f"inverted or empty interval [{a}, {b}]")
        if int(n) != n or n < 1:
            raise ValueError(f"cell count must be a positive integer, got {n}")
    if int(ghost) != ghost or ghost < 1:
        raise ValueError(f"ghost width must be >= 1, got {ghost}")
    return Grid(
        lower=tuple(float(a) for a, _ in bounds),
        upper=tuple(float(b) for _, b in bounds),
        m=tuple(int(n) for n in ms),
        ghost=int(ghost),
    )


@dataclass(frozen=True)
class BoundaryCondition:
    """One boundary kind per face.

    ``faces`` holds ``(kind, value)`` pairs ordered
    ``x_low, x_high[, y_low, y_high]``; ``value`` only matters for Dirichlet.
    """

    faces: tuple[tuple[str, float], ...]

    def __post_init__(self):
        for kind, value in self.faces:
            if kind not in _KINDS:
                raise ValueError(f"unknown boundary kind {kind!r}")
            if kind == DIRICHLET and not np.isfinite(value):
                raise ValueError("Dirichlet value must be finite")
        for lo, hi in zip(self.faces[::2], self.faces[1::2]):
            if (lo[0] == PERIODIC) != (hi[0] == PERIODIC):
                raise ValueError("periodic boundaries must be paired on an axis")

    @classmethod
    def uniform(cls, kind: str, dim: int = 1, value: float = 0.0) -> "BoundaryCondition":
        return cls(faces=((kind, float(value)),) * (2 * dim))

    def face(self, axis: int, side: int) -> tuple[str, float]:
        return self.faces[2 * axis + side]

    def kinds(self) -> set[str]:
        return {k for k, _ in self.faces}


@dataclass
class Field:
    """Cell values of one scalar unknown, ghost layers included."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.padded_shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid {self.grid.padded_shape}"
            )

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.padded_shape))

    @classmethod
    def from_interior(cls, grid: Grid, interior: np.ndarray) -> "Field":
        f = cls.zeros(grid)
        f.values[grid.interior] = interior
        return f

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.grid.interior]

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())


def fill_ghosts(f: Field, bc: BoundaryCondition) -> Field:
    """Populate the ghost layers of ``f`` in place and return it.

    Neumann is an even reflection about the face, Dirichlet an odd reflection
    about the boundary value, periodic a wrap-around copy.
    """
    fill_ghost_array(f.values, f.grid.ghost, bc, f.grid.dim)
    return f


def fill_ghost_array(a: np.ndarray, G: int, bc: BoundaryCondition, dim: int) -> np.ndarray:
    if len(bc.faces) != 2 * dim:
        raise ValueError("boundary condition does not match grid dimension")
    # x first, then y; the y pass fills corners from already-filled rows
    for axis in range(dim):
        ax = dim - 1 - axis
        b = np.moveaxis(a, ax, -1)
        n = b.shape[-1] - 2 * G
        if n < G:
            raise ValueError(f"{n} interior cells cannot supply {G} ghost layers")
        for side in (0, 1):
            kind, value = bc.face(axis, side)
            if side == 0:
                ghost = slice(0, G)
                mirror = slice(2 * G - 1, G - 1, -1)
                wrap = slice(n, n + G)
            else:
                ghost = slice(n + G, n + 2 * G)
                mirror = slice(n + G - 1, n - 1, -1)
                wrap = slice(G, 2 * G)
            if kind == PERIODIC:
                b[..., ghost] = b[..., wrap]
            elif kind == NEUMANN:
                b[..., ghost] = b[..., mirror]
            else:
                b[..., ghost] = 2.0 * value - b[..., mirror]
    return a
