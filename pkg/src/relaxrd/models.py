"""Problem definitions for ``u_t = D Lap(p(u)) + g(u)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import NEUMANN, PERIODIC, BoundaryCondition

Array = np.ndarray
SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    p: Callable[[Array], Array]
    dp: Callable[[Array], Array]
    g: Callable[[Array], Array]
    D: float
    bounds: tuple[tuple[float, float], ...]
    u0: Callable[..., Array]
    bc: BoundaryCondition
    params: dict = field(default_factory=dict)
    degenerate: bool = False
    steady_states: tuple[float, ...] = ()
    exact: Optional[Callable[..., Array]] = None
    # largest step keeping explicit absorption overshoot below tolerance; None if unbounded
    reaction_dt: Optional[Callable[[float], float]] = None

    @property
    def dim(self) -> int:
        return len(self.bounds)


def _signed_power(u, k):
    return np.sign(u) * np.abs(u) ** k


def make_problem(name, p, g, D=1.0, bounds=((0.0, 1.0),), u0=None, bc=None, dp=None, **kw) -> ProblemSpec:
    """Generic constructor for user supplied ``p`` and ``g``.

    Without ``dp`` the derivative of ``p`` is taken by central differences.
    """
    if D <= 0:
        raise ValueError("diffusivity must be positive")
    if dp is None:
        def dp(u, _p=p):
            u = np.asarray(u, dtype=float)
            step = 1e-6 * np.maximum(1.0, np.abs(u))
            return (_p(u + step) - _p(u - step)) / (2 * step)
    dim = len(bounds)
    if u0 is None:
        u0 = lambda *x: np.zeros_like(x[0])
    if bc is None:
        bc = BoundaryCondition.uniform(NEUMANN, dim)
    return ProblemSpec(name=name, p=p, dp=dp, g=g, D=float(D), bounds=tuple(bounds), u0=u0, bc=bc, **kw)


def heat_problem(D: float = 1.0, bounds=(0.0, 2.0)) -> ProblemSpec:
    """Periodic heat equation with ``u0 = sin(pi x)`` and its separable exact solution."""
    if D <= 0:
        raise ValueError("diffusivity must be positive")
    a, b = bounds
    k = 2 * np.pi / (b - a)

    def exact(x, t):
        return np.exp(-D * k * k * t) * np.sin(k * (x - a))

    return ProblemSpec(
        name="heat",
        p=lambda u: np.asarray(u, dtype=float),
        dp=lambda u: np.ones_like(np.asarray(u, dtype=float)),
        g=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
        D=float(D),
        bounds=((float(a), float(b)),),
        u0=lambda x: exact(x, 0.0),
        bc=BoundaryCondition.uniform(PERIODIC, 1),
        params={"D": D},
        exact=exact,
    )


def fisher_problem(k: float = 1.0, D: float = 1.0, c: float = 2.0, bounds=(-50.0, 200.0)) -> ProblemSpec:
    """Fisher-Kolmogoroff ``u_t = k u (1-u) + D u_xx`` started from the travelling-wave profile.

    The two-term wave expansion dips below zero far ahead of the front for
    small ``c``; the initial datum is its positive part.
    """
    if k <= 0 or D <= 0:
        raise ValueError("k and D must be positive")
    from .validation import fk_wave_profile

    def u0(x):
        return np.maximum(fk_wave_profile(np.asarray(x, dtype=float), c).value, 0.0)

    return ProblemSpec(
        name="fisher",
        p=lambda u: np.asarray(u, dtype=float),
        dp=lambda u: np.ones_like(np.asarray(u, dtype=float)),
        g=lambda u: k * u * (1.0 - u),
        D=float(D),
        bounds=(tuple(map(float, bounds)),),
        u0=u0,
        bc=BoundaryCondition.uniform(NEUMANN, 1),
        params={"k": k, "D": D, "c": c},
        steady_states=(0.0, 1.0),
    )


def min_wave_speed(k: float, D: float) -> float:
    return 2.0 * np.sqrt(k * D)


def two_front_initial_data(x, x0: float = -1.0, x1: float = 1.0, width: float = SQRT2):
    """Sharp fronts at ``x0`` (state 1 on the left) and ``x1`` (state 1 on the right).

    With ``width = sqrt(2)`` each piece is the exact sharp travelling wave of
    the porous-Fisher equation with ``p = q = m = 1``, moving inward at speed
    ``1/sqrt(2)``.
    """
    x = np.asarray(x, dtype=float)
    left = np.where(x < x0, 1.0 - np.exp(np.minimum(x - x0, 0.0) / width), 0.0)
    right = np.where(x > x1, 1.0 - np.exp(np.minimum(x1 - x, 0.0) / width), 0.0)
    return left + right


def porous_fisher_problem(p_exp: float = 1.0, q: float = 1.0, m: float = 1.0, bounds=(-8.0, 8.0),
                          x0: float = -1.0, x1: float = 1.0) -> ProblemSpec:
    """``u_t = u^p (1 - u^q) + (u^m u_x)_x`` with the diffusion written as ``Lap(u^(m+1)/(m+1))``."""
    if min(p_exp, q, m) < 0:
        raise ValueError("exponents must be non-negative")
    if not x0 < x1:
        raise ValueError("front positions must satisfy x0 < x1")

    def g(u):
        return _signed_power(u, p_exp) * (1.0 - _signed_power(u, q))

    return ProblemSpec(
        name="porous_fisher",
        p=lambda u: _signed_power(u, m + 1.0) / (m + 1.0),
        dp=lambda u: np.abs(u) ** m,
        g=g,
        D=1.0,
        bounds=(tuple(map(float, bounds)),),
        u0=lambda x: two_front_initial_data(x, x0, x1),
        bc=BoundaryCondition.uniform(NEUMANN, 1),
        params={"p_exp": p_exp, "q": q, "m": m, "x0": x0, "x1": x1},
        degenerate=m > 0,
        steady_states=(0.0, 1.0),
    )


def cross_initial_data(x, y):
    """``1`` at the origin, else ``[1 - (x^2+y^2)^2 / sqrt(x^6+y^6)]_+``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    den = np.sqrt(x**6 + y**6)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 1.0 - (x * x + y * y) ** 2 / den
    return np.where(den > 0, np.maximum(val, 0.0), 1.0)


@dataclass(frozen=True)
class RingBump:
    """Annulus ``[1 - ((r-R)/W)^2]_+`` plus a paraboloid bump on it."""

    radius: float = 1.0
    width: float = 0.35
    bump_amplitude: float = 0.4
    bump_angle: float = 0.0
    bump_width: float = 0.3

    def center(self) -> tuple[float, float]:
        return self.radius * np.cos(self.bump_angle), self.radius * np.sin(self.bump_angle)

    def extent(self) -> float:
        """Radius of a disc containing the support."""
        bump = self.radius + self.bump_width if self.bump_amplitude else 0.0
        return max(self.radius + self.width, bump)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r = np.hypot(x, y)
        ring = np.maximum(1.0 - ((r - self.radius) / self.width) ** 2, 0.0)
        bx, by = self.center()
        d2 = ((x - bx) ** 2 + (y - by) ** 2) / self.bump_width**2
        return ring + self.bump_amplitude * np.maximum(1.0 - d2, 0.0)


def ring_with_bump_initial_data(radius=1.0, width=0.35, bump_amplitude=0.4, bump_angle=0.0,
                                bump_width=0.3, domain_half_width: float | None = 2.0) -> RingBump:
    if radius <= 0 or width <= 0 or bump_width <= 0 or bump_amplitude < 0:
        raise ValueError("ring and bump sizes must be positive")
    rb = RingBump(radius, width, bump_amplitude, bump_angle, bump_width)
    if domain_half_width is not None and rb.extent() >= domain_half_width:
        raise ValueError("initial support leaves the computational domain")
    return rb


def pme_absorption_problem(m: float = 2.0, p_exp: float = 0.5, c: float = 5.0, bounds=(-2.0, 2.0),
                           initial: str = "cross", ring: RingBump | None = None,
                           positivity_tol: float = 1e-9) -> ProblemSpec:
    """Porous medium with strong absorption ``u_t = Lap(u^m) - c u^p`` on a square.

    The absorption is extended by zero for ``u <= 0``.  ``reaction_dt`` bounds
    the step so that one explicit absorption update cannot carry a cell below
    ``-positivity_tol`` times the data scale.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0 < p_exp < 1:
        raise ValueError("finite-time extinction needs 0 < p < 1")
    if c <= 0:
        raise ValueError("absorption coefficient must be positive")
    if initial == "cross":
        u0 = cross_initial_data
    elif initial == "ring_bump":
        lo, hi = bounds
        u0 = ring if ring is not None else ring_with_bump_initial_data(domain_half_width=min(-lo, hi))
    else:
        raise ValueError(f"unknown initial datum {initial!r}")

    def g(u):
        u = np.asarray(u, dtype=float)
        return -c * np.maximum(u, 0.0) ** p_exp

    def reaction_dt(scale):
        # max_u (dt c u^p - u) = (1-p)/p (dt c p)^(1/(1-p)) <= tol
        tol = positivity_tol * scale
        return (tol * p_exp / (1.0 - p_exp)) ** (1.0 - p_exp) / (c * p_exp)

    b = tuple(map(float, bounds))
    return ProblemSpec(
        name="pme_absorption",
        p=lambda u: _signed_power(u, m),
        dp=lambda u: m * np.abs(u) ** (m - 1.0),
        g=g,
        D=1.0,
        bounds=(b, b),
        u0=u0,
        bc=BoundaryCondition.uniform(NEUMANN, 2),
        params={"m": m, "p_exp": p_exp, "c": c, "initial": initial},
        degenerate=True,
        steady_states=(0.0,),
        reaction_dt=reaction_dt if positivity_tol > 0 else None,
    )


PROBLEMS = {
    "heat": heat_problem,
    "fisher": fisher_problem,
    "porous_fisher": porous_fisher_problem,
    "pme_absorption": pme_absorption_problem,
}

PROBLEM_HELP = {
    "heat": "u_t = D u_xx, periodic, u0 = sin(pi x) on [0,2]; exact solution known",
    "fisher": "u_t = k u(1-u) + D u_xx from the travelling-wave profile of speed c",
    "porous_fisher": "u_t = u^p (1-u^q) + (u^m u_x)_x, two merging sharp fronts",
    "pme_absorption": "u_t = Lap(u^m) - c u^p on [-2,2]^2, cross or ring_bump datum",
}
