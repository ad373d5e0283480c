"""Boundary-extrapolated reconstruction and central gradients.

Reconstruction follows the finite-difference flux form: the input values are
treated as cell averages of an auxiliary function whose face values are
returned.  Fed with point values of a flux, the conservative difference of
the result approximates the flux derivative to the formal order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels

PCM = "pcm"
ENO = "eno"
WENO5 = "weno5"

ENO_TIE_TOL = 1e-12
ENO_BIAS = 2.0
WENO_EPS = 1e-6


@dataclass(frozen=True)
class ReconstructionScheme:
    kind: str
    order: int
    weno_eps: float = WENO_EPS
    tie_tol: float = ENO_TIE_TOL
    eno_bias: float = ENO_BIAS

    def __post_init__(self):
        if self.kind == PCM and self.order != 1:
            raise ValueError("PCM has order 1")
        if self.kind == WENO5 and self.order != 5:
            raise ValueError("WENO5 has order 5")
        if self.kind == ENO and not 2 <= self.order <= 6:
            raise ValueError(f"ENO order must be in 2..6, got {self.order}")
        if self.eno_bias < 1.0:
            raise ValueError("ENO bias must be >= 1")
        if self.kind not in (PCM, ENO, WENO5):
            raise ValueError(f"unknown reconstruction {self.kind!r}")

    @property
    def radius(self) -> int:
        """Ghost layers needed to reconstruct both states on every boundary face."""
        if self.kind == PCM:
            return 1
        if self.kind == WENO5:
            return 3
        return self.order

    def __str__(self):
        if self.kind == PCM:
            return "PCM"
        return "WENO5" if self.kind == WENO5 else f"ENO{self.order}"


def scheme_from_name(name: str) -> ReconstructionScheme:
    """Parse ``pcm``, ``weno5`` or ``enoN``."""
    key = name.strip().lower()
    if key == "pcm":
        return ReconstructionScheme(PCM, 1)
    if key == "weno5":
        return ReconstructionScheme(WENO5, 5)
    if key.startswith("eno") and key[3:].isdigit():
        return ReconstructionScheme(ENO, int(key[3:]))
    raise ValueError(f"unknown reconstruction {name!r}")


@lru_cache(maxsize=None)
def face_coefficients(r: int, shift: int) -> tuple[Fraction, ...]:
    """Weights giving the right-face value of cell ``j`` from cells ``j-shift .. j-shift+r-1``.

    Obtained by differentiating the polynomial interpolant of the primitive.
    """
    if not 0 <= shift < r:
        raise ValueError("shift out of range")
    xi = Fraction(shift + 1)
    nodes = [Fraction(l) for l in range(r + 1)]
    dL = []
    for l, xl in enumerate(nodes):
        others = [xm for m, xm in enumerate(nodes) if m != l]
        denom = Fraction(1)
        for xm in others:
            denom *= xl - xm
        # derivative of prod(x - xm) at xi
        total = Fraction(0)
        for skip in range(len(others)):
            term = Fraction(1)
            for m, xm in enumerate(others):
                if m != skip:
                    term *= xi - xm
            total += term
        dL.append(total / denom)
    return tuple(sum(dL[l] for l in range(k + 1, r + 1)) for k in range(r))


@lru_cache(maxsize=None)
def eno_coefficient_table(r: int) -> np.ndarray:
    return np.array([[float(c) for c in face_coefficients(r, s)] for s in range(r)])


def eno_stencil_select(window, j: int, r: int, tie_tol: float = ENO_TIE_TOL, scale: float | None = None,
                       bias: float = ENO_BIAS) -> int:
    """Start offset ``s - j`` of the ENO stencil for the right face of cell ``j``.

    ``window`` must contain cells ``j-r+1 .. j+r-1``.  The stencil grows one
    cell at a time.  The preferred side keeps it centred on cell ``j``,
    leaning left on even counts; the other side is taken only when its
    undivided difference is smaller by the factor ``bias`` plus ``tie_tol``
    times the data scale.  Right states are built on reversed data, so left
    is always upwind.  With ``bias = 1`` this is plain ENO with near-ties
    resolved to the preferred side.

    Plain ENO follows smooth monotone data to fully one-sided stencils, whose
    linearisation amplifies the odd-even mode; the bias keeps smooth regions
    on the stable upwind-centred stencil and still avoids jumps.
    """
    q = np.asarray(window, dtype=float)
    if j - r + 1 < 0 or j + r - 1 >= q.size:
        raise ValueError("window does not span all candidate stencils")
    if scale is None:
        scale = float(np.max(np.abs(q)))
    atol = tie_tol * scale
    s = j
    for lev in range(1, r):
        a = abs(np.diff(q[s - 1 : s + lev], lev)[0])
        b = abs(np.diff(q[s : s + lev + 1], lev)[0])
        if abs(2 * (j - s) + 2 - lev) <= abs(2 * (j - s) - lev):
            go_left = not a > bias * b + atol
        else:
            go_left = b > bias * a + atol
        s -= int(go_left)
    return s - j


def _lines(values: np.ndarray, axis: int) -> tuple[np.ndarray, tuple[int, ...]]:
    moved = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    lead = moved.shape[:-1]
    return np.ascontiguousarray(moved.reshape(-1, moved.shape[-1])), lead


def _left_states(lines: np.ndarray, scheme: ReconstructionScheme, j0: int, j1: int, backend) -> np.ndarray:
    if scheme.kind == PCM:
        return lines[:, j0:j1].copy()
    scale = float(np.max(np.abs(lines))) if lines.size else 0.0
    if scheme.kind == WENO5:
        eps = scheme.weno_eps * scale * scale if scale > 0 else scheme.weno_eps
        return backend.weno5_left(lines, j0, j1, eps)
    return backend.eno_left(
        lines, scheme.order, j0, j1, scheme.tie_tol * scale, eno_coefficient_table(scheme.order), scheme.eno_bias
    )


def reconstruct_faces(values, scheme: ReconstructionScheme, ghost: int, axis: int = -1,
                      side: str = "both", backend=None):
    """Boundary-extrapolated states on the ``m + 1`` interior-bounding faces.

    ``values`` carries ``ghost`` layers on each end of ``axis``.  Returns
    ``(left, right)`` where ``left[k]`` is extrapolated from the cell left of
    face ``k`` and ``right[k]`` from the cell to its right.  With ``side``
    equal to ``"left"`` or ``"right"`` only that state is computed and the
    other is ``None``.
    """
    if ghost < scheme.radius:
        raise ValueError(f"{scheme} needs {scheme.radius} ghost layers, got {ghost}")
    backend = backend or kernels.backend
    lines, lead = _lines(values, axis)
    n = lines.shape[1]
    m = n - 2 * ghost
    if m < 1:
        raise ValueError("no interior cells")
    j0, j1 = ghost - 1, ghost + m
    left = right = None
    if side in ("both", "left"):
        left = _left_states(lines, scheme, j0, j1, backend)
        left = np.moveaxis(left.reshape(lead + (m + 1,)), -1, axis)
    if side in ("both", "right"):
        rev = np.ascontiguousarray(lines[:, ::-1])
        right = _left_states(rev, scheme, j0, j1, backend)[:, ::-1]
        right = np.moveaxis(right.reshape(lead + (m + 1,)), -1, axis)
    if side not in ("both", "left", "right"):
        raise ValueError(f"bad side {side!r}")
    return left, right


def weno5_nonlinear_weights(values, ghost: int, eps: float = WENO_EPS):
    """WENO5 nonlinear weights for the left states of a 1D array (diagnostics)."""
    from . import _kernels_py

    lines, _ = _lines(values, -1)
    scale = float(np.max(np.abs(lines)))
    m = lines.shape[1] - 2 * ghost
    return _kernels_py.weno5_weights(lines, ghost - 1, ghost + m, eps * scale * scale)[:, 0, :]


WENO5_LINEAR_WEIGHTS = (0.1, 0.6, 0.3)


@dataclass(frozen=True)
class GradientOperator:
    """Central difference ``f'(x_j) ~ (1/h) sum_k c_k (f_{j+k} - f_{j-k})``."""

    order: int

    def __post_init__(self):
        if self.order < 2 or self.order % 2:
            raise ValueError(f"gradient order must be even and >= 2, got {self.order}")

    @property
    def radius(self) -> int:
        return self.order // 2

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return central_coefficients(self.order)

    def stencil(self) -> tuple[Fraction, ...]:
        """Full antisymmetric row ``(-c_R, ..., -c_1, 0, c_1, ..., c_R)``."""
        c = self.coefficients
        return tuple(-x for x in reversed(c)) + (Fraction(0),) + c

    @classmethod
    def for_time_order(cls, p: int) -> "GradientOperator":
        """Smallest even order not below ``2p``."""
        q = 2 * p
        return cls(q if q >= 2 else 2)


@lru_cache(maxsize=None)
def central_coefficients(order: int) -> tuple[Fraction, ...]:
    R = order // 2
    # sum_k c_k * 2 k^(2i-1) = delta_{i1}, i = 1..R
    A = [[Fraction(2 * k ** (2 * i - 1)) for k in range(1, R + 1)] for i in range(1, R + 1)]
    rhs = [Fraction(1 if i == 1 else 0) for i in range(1, R + 1)]
    # Gauss elimination over the rationals
    for col in range(R):
        piv = next(r for r in range(col, R) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        for row in range(R):
            if row != col and A[row][col] != 0:
                f = A[row][col] / A[col][col]
                A[row] = [x - f * y for x, y in zip(A[row], A[col])]
                rhs[row] -= f * rhs[col]
    return tuple(rhs[i] / A[i][i] for i in range(R))


def central_gradient(values, op: GradientOperator, h: float, ghost: int, axis: int = -1) -> np.ndarray:
    """Central derivative along ``axis``.

    The result keeps ``ghost - op.radius`` layers beyond the interior on each
    end of ``axis``.
    """
    R = op.radius
    if ghost < R:
        raise ValueError(f"order-{op.order} gradient needs {R} ghost layers, got {ghost}")
    a = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    n = a.shape[-1]
    out = np.zeros(a.shape[:-1] + (n - 2 * R,))
    for k, c in enumerate(op.coefficients, start=1):
        out += float(c) * (a[..., R + k : n - R + k] - a[..., R - k : n - R - k])
    out /= h
    return np.moveaxis(out, -1, axis)
