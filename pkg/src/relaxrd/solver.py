"""Relaxed IMEX time stepping for ``u_t = D Lap(p(u)) + g(u)``.

In the relaxed limit every Runge-Kutta stage alternates a relaxation step,
which sets ``w = p(u)`` and ``v_d = -D d_d w``, with an upwind transport step
for ``u`` written in the characteristic variables ``U``, ``V`` of the linear
relaxation system.  Only ``u`` is advanced; ``v`` and ``w`` are regenerated at
every stage, so the implicit tableau enters only through the requirement that
each stage be relaxed and the update is driven by the explicit tableau.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

import numpy as np

from .grid import BoundaryCondition, Field, Grid, build_grid, fill_ghost_array
from .imex import TableauPair, tableau
from .models import ProblemSpec
from .reconstruction import GradientOperator, ReconstructionScheme, central_gradient, reconstruct_faces

log = logging.getLogger(__name__)

DEGENERACY_FLOOR = 1e-12


class NumericalFailure(RuntimeError):
    """Non-finite value produced during a step."""

    def __init__(self, message, time=None, cell=None):
        super().__init__(message)
        self.time = time
        self.cell = cell


@dataclass(frozen=True)
class SchemeConfig:
    reconstruction: ReconstructionScheme
    tableau: TableauPair
    gradient: GradientOperator
    cfl: float = 0.5
    phi: Optional[float] = None
    dt_floor: float = DEGENERACY_FLOOR

    @classmethod
    def build(cls, reconstruction, tableau_id: str, cfl: float = 0.5, phi=None, gradient_order=None,
              dt_floor: float = DEGENERACY_FLOOR, eno_bias: Optional[float] = None) -> "SchemeConfig":
        from .reconstruction import scheme_from_name

        rec = scheme_from_name(reconstruction) if isinstance(reconstruction, str) else reconstruction
        if eno_bias is not None:
            rec = replace(rec, eno_bias=float(eno_bias))
        tab = tableau(tableau_id)
        grad = GradientOperator(gradient_order) if gradient_order else GradientOperator.for_time_order(tab.order)
        if cfl <= 0:
            raise ValueError("CFL constant must be positive")
        if phi is not None and phi <= 0:
            raise ValueError("phi must be positive")
        return cls(rec, tab, grad, float(cfl), None if phi is None else float(phi), dt_floor)

    @property
    def ghost(self) -> int:
        return self.reconstruction.radius + self.gradient.radius

    def describe(self) -> str:
        return f"{self.tableau.name}+{self.reconstruction}+grad{self.gradient.order}"


@dataclass
class CharState:
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray


def to_characteristic(u, v, w, phi: float) -> CharState:
    """Characteristic variables for the eigenvalues ``phi``, ``-phi`` and ``0``."""
    if phi <= 0:
        raise ValueError("phi must be positive")
    u, v, w = (np.asarray(a, dtype=float) for a in (u, v, w))
    return CharState(U=(v + phi * w) / (2 * phi), V=(phi * w - v) / (2 * phi), W=u - w)


def from_characteristic(cs: CharState, phi: float):
    if phi <= 0:
        raise ValueError("phi must be positive")
    w = cs.U + cs.V
    return cs.U + cs.V + cs.W, phi * (cs.U - cs.V), w


def numerical_flux(U_left, V_right, phi: float):
    """Upwind flux ``(phi U^-, -phi V^+, 0)`` of the linear relaxation system."""
    U_left = np.asarray(U_left, dtype=float)
    return phi * U_left, -phi * np.asarray(V_right, dtype=float), np.zeros_like(U_left)


def relaxation_step(u_padded, prob: ProblemSpec, grad: GradientOperator, grid: Grid):
    """Relaxed values ``w = p(u)`` and ``v_d = -D d_d w`` from ghost-filled ``u``.

    ``w`` has the padded shape; each ``v[d]`` loses ``grad.radius`` layers on
    both ends of its own axis.
    """
    w = prob.p(np.asarray(u_padded, dtype=float))
    v = [
        -prob.D * central_gradient(w, grad, grid.h[d], grid.ghost, axis=grid.storage_axis(d))
        for d in range(grid.dim)
    ]
    return w, v


@dataclass
class StageData:
    """Per-stage quantities the transport update needs."""

    fluxes: list[np.ndarray]  # u-flux on the faces of each axis
    reaction: np.ndarray


class RelaxedOperator:
    """Semi-discrete relaxed operator for one problem on one grid."""

    def __init__(self, prob: ProblemSpec, grid: Grid, scheme: SchemeConfig, phi: float, backend=None):
        if grid.ghost < scheme.ghost:
            raise ValueError(f"grid has {grid.ghost} ghost layers, scheme needs {scheme.ghost}")
        if grid.dim != prob.dim:
            raise ValueError("grid and problem dimensions differ")
        if phi <= 0:
            raise ValueError("phi must be positive")
        self.prob = prob
        self.grid = grid
        self.scheme = scheme
        self.phi = float(phi)
        self.backend = backend
        self._pad = np.zeros(grid.padded_shape)

    def padded(self, u_int: np.ndarray) -> np.ndarray:
        a = self._pad
        a[self.grid.interior] = u_int
        fill_ghost_array(a, self.grid.ghost, self.prob.bc, self.grid.dim)
        return a

    def stage(self, u_int: np.ndarray) -> StageData:
        """Relax ``u`` and build the upwind face fluxes along every axis."""
        grid, sch, phi = self.grid, self.scheme, self.phi
        G, R = grid.ghost, sch.gradient.radius
        Gr = G - R
        w, vs = relaxation_step(self.padded(u_int), self.prob, sch.gradient, grid)
        fluxes = []
        for d in range(grid.dim):
            ax = grid.storage_axis(d)
            # keep this axis' reconstruction ghosts, drop the rest
            sl_w = [slice(G, -G)] * grid.dim
            sl_w[ax] = slice(R, w.shape[ax] - R)
            sl_v = [slice(G, -G)] * grid.dim
            sl_v[ax] = slice(None)
            wd = w[tuple(sl_w)]
            vd = vs[d][tuple(sl_v)]
            U = (vd + phi * wd) / (2 * phi)
            V = (phi * wd - vd) / (2 * phi)
            Ul, _ = reconstruct_faces(U, sch.reconstruction, Gr, axis=ax, side="left", backend=self.backend)
            _, Vr = reconstruct_faces(V, sch.reconstruction, Gr, axis=ax, side="right", backend=self.backend)
            fluxes.append(phi * (Ul - Vr))
        return StageData(fluxes=fluxes, reaction=self.prob.g(u_int))

    def flux_divergence(self, data: StageData) -> np.ndarray:
        div = np.zeros(self.grid.shape)
        for d, F in enumerate(data.fluxes):
            ax = self.grid.storage_axis(d)
            div += np.diff(F, axis=ax) / self.grid.h[d]
        return div

    def rhs(self, u_int: np.ndarray) -> np.ndarray:
        data = self.stage(u_int)
        return -self.flux_divergence(data) + data.reaction


def transport_stage(u_n: np.ndarray, stages: list[Optional[StageData]], weights, dt: float, grid: Grid,
                    t: float | None = None) -> np.ndarray:
    """``u_n - dt/h sum_k a_k (F_{j+1/2} - F_{j-1/2})^(k) + dt sum_k a_k g(u^(k))``."""
    out = np.array(u_n, dtype=float, copy=True)
    for a, data in zip(weights, stages):
        if a == 0.0 or data is None:
            continue
        for d, F in enumerate(data.fluxes):
            out -= (a * dt / grid.h[d]) * np.diff(F, axis=grid.storage_axis(d))
        out += (a * dt) * data.reaction
    bad = ~np.isfinite(out)
    if bad.any():
        cell = tuple(int(i) for i in np.argwhere(bad)[0][::-1])
        raise NumericalFailure(f"non-finite value at cell {cell}" + (f", t={t:.6g}" if t is not None else ""),
                               time=t, cell=cell)
    return out


@dataclass
class RelaxedState:
    u: Field
    t: float = 0.0
    w: Optional[np.ndarray] = None
    v: list = field(default_factory=list)


def step(state: RelaxedState, op: RelaxedOperator, dt: float) -> RelaxedState:
    """Advance one step with the explicit tableau driving the transport stages."""
    tab = op.scheme.tableau
    grid = op.grid
    u_n = state.u.interior.copy()
    needed = tab.needed_stages()
    stages: list[Optional[StageData]] = []
    for i in range(tab.stages):
        if not needed[i]:
            stages.append(None)
            continue
        if i == 0:
            u_i = u_n
        else:
            u_i = transport_stage(u_n, stages, tab.a_ex[i, :i], dt, grid, state.t)
        stages.append(op.stage(u_i))
    u_new = transport_stage(u_n, stages, tab.b_ex, dt, grid, state.t)
    return RelaxedState(Field.from_interior(grid, u_new), state.t + dt)


def max_dp(prob: ProblemSpec, u: np.ndarray) -> float:
    lo, hi = float(np.min(u)), float(np.max(u))
    probe = np.concatenate([np.ravel(u), [lo, hi]])
    return float(np.max(np.abs(prob.dp(probe))))


def select_dt(grid: Grid, prob: ProblemSpec, cfg: SchemeConfig, u, phi: float | None = None,
              scale: float | None = None) -> float:
    """Parabolic step ``cfl h^2 / (2 d D max|p'|)``, capped by ``cfl h / phi`` and the reaction bound."""
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        raise ValueError("empty solution range")
    if not np.all(np.isfinite(u)):
        raise ValueError("non-finite solution range")
    h = min(grid.h)
    dpmax = max(max_dp(prob, u), cfg.dt_floor)
    dt = cfg.cfl * h * h / (2 * grid.dim * prob.D * dpmax)
    if phi is not None:
        dt = min(dt, cfg.cfl * h / phi)
    if prob.reaction_dt is not None:
        dt = min(dt, prob.reaction_dt(scale if scale is not None else max(float(np.max(np.abs(u))), 1e-300)))
    return dt


def parabolic_phi(prob: ProblemSpec, u, dt: float) -> float:
    """``sqrt(D max|p'| / dt)``: keeps ``dt phi / h`` of order one under the parabolic step."""
    return float(np.sqrt(prob.D * max(max_dp(prob, np.asarray(u)), DEGENERACY_FLOOR) / dt))


def choose_phi(prob: ProblemSpec, u, grid: Grid, dt: float | None = None, override: float | None = None) -> float:
    """Relaxation speed used for upwinding.

    The default is grid independent: ``phi = D max(max|p'|, 1) k1`` with
    ``k1 = 2 pi / L`` the fundamental wavenumber of the shortest domain side.
    The upwind dissipation scales like ``phi h``, so ``phi`` has to stay
    bounded under refinement; ``dt`` is accepted for interface symmetry and
    only used by :func:`parabolic_phi`.
    """
    if override is not None:
        if override <= 0:
            raise ValueError("phi must be positive")
        return float(override)
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        raise ValueError("empty solution range")
    L = min(b - a for a, b in zip(grid.lower, grid.upper))
    return float(2.0 * np.pi * prob.D * max(max_dp(prob, u), 1.0) / L)


@dataclass
class RunResult:
    state: RelaxedState
    steps: int
    phi: float
    status: str = "completed"
    t_extinct: Optional[float] = None
    min_u: float = np.inf
    dt_history: list = field(default_factory=list)


def make_grid(prob: ProblemSpec, m, scheme: SchemeConfig) -> Grid:
    ms = (m,) * prob.dim if np.isscalar(m) else tuple(m)
    return build_grid(prob.bounds, ms, scheme.ghost)


def initial_state(prob: ProblemSpec, grid: Grid) -> RelaxedState:
    u0 = prob.u0(*grid.mesh())
    return RelaxedState(Field.from_interior(grid, u0), 0.0)


def integrate(prob: ProblemSpec, grid: Grid, scheme: SchemeConfig, T: float,
              stop_times: Iterable[float] = (), on_stop: Callable[[RelaxedState], None] | None = None,
              extinction_rel: float | None = None, on_step: Callable[[RelaxedState], None] | None = None,
              dt_fixed: float | None = None, state: RelaxedState | None = None, backend=None,
              max_steps: int | None = None) -> RunResult:
    """Run from ``t = 0`` (or ``state``) to ``T``.

    The step is truncated to land exactly on every time in ``stop_times``, where
    ``on_stop`` is called.  With ``extinction_rel`` the run ends as soon as
    ``max u`` falls below that fraction of its initial maximum.
    """
    if T <= 0:
        raise ValueError("final time must be positive")
    state = state or initial_state(prob, grid)
    u0 = state.u.interior
    scale = float(np.max(np.abs(u0))) or 1.0
    phi = choose_phi(prob, u0, grid, override=scheme.phi)
    op = RelaxedOperator(prob, grid, scheme, phi, backend=backend)
    stops = sorted({float(s) for s in stop_times if state.t <= s <= T} | {float(T)})
    result = RunResult(state=state, steps=0, phi=phi, min_u=float(np.min(u0)))
    threshold = extinction_rel * float(np.max(u0)) if extinction_rel else None
    k = 0
    if on_stop and stops and stops[0] == state.t:
        on_stop(state)
        k = 1
    eps_t = 1e-12 * max(T, 1.0)
    while k < len(stops):
        target = stops[k]
        u = state.u.interior
        dt = dt_fixed if dt_fixed is not None else select_dt(grid, prob, scheme, u, phi, scale)
        last = state.t + dt >= target - eps_t
        if last:
            dt = target - state.t
        state = step(state, op, dt)
        if last:
            state.t = target
        result.steps += 1
        result.min_u = min(result.min_u, float(np.min(state.u.interior)))
        if on_step:
            on_step(state)
        if last:
            if on_stop:
                on_stop(state)
            k += 1
        if threshold is not None and float(np.max(state.u.interior)) < threshold:
            result.status = "extinct"
            result.t_extinct = state.t
            if on_stop and not last:
                on_stop(state)
            break
        if max_steps is not None and result.steps >= max_steps:
            result.status = "max_steps"
            break
    result.state = state
    return result
