import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from relaxrd.grid import NEUMANN, PERIODIC, BoundaryCondition, build_grid
from relaxrd.imex import TABLEAU_IDS
from relaxrd.models import fisher_problem, heat_problem, make_problem
from relaxrd.reconstruction import GradientOperator
from relaxrd.solver import (
    CharState,
    NumericalFailure,
    RelaxedOperator,
    SchemeConfig,
    StageData,
    choose_phi,
    from_characteristic,
    initial_state,
    integrate,
    make_grid,
    numerical_flux,
    parabolic_phi,
    relaxation_step,
    select_dt,
    step,
    to_characteristic,
    transport_stage,
)

SCHEMES = [("pcm", "IMEX111"), ("weno5", "ARS222"), ("eno3", "ARS222"), ("eno6", "ARS443")]


def periodic_problem(dim, p=lambda u: u, dp=None):
    bounds = ((0.0, 1.0),) * dim
    return make_problem("periodic", p=p, dp=dp, g=lambda u: np.zeros_like(u), bounds=bounds,
                        bc=BoundaryCondition.uniform(PERIODIC, dim))


@settings(max_examples=100, deadline=None)
@given(arrays(float, (3, 8), elements=st.floats(-10, 10)), st.floats(0.1, 100))
def test_characteristic_round_trip(uvw, phi):
    u, v, w = uvw
    back = from_characteristic(to_characteristic(u, v, w, phi), phi)
    for a, b in zip(back, (u, v, w)):
        assert np.abs(a - b).max() < 1e-12


def test_characteristic_rejects_bad_phi():
    with pytest.raises(ValueError):
        to_characteristic(1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        from_characteristic(CharState(1.0, 1.0, 1.0), -1.0)


def test_numerical_flux_components():
    fu, fv, fw = numerical_flux([1.0, 2.0], [3.0, 4.0], 2.0)
    np.testing.assert_array_equal(fu, [2, 4])
    np.testing.assert_array_equal(fv, [-6, -8])
    np.testing.assert_array_equal(fw, [0, 0])


def test_relaxation_consistency_linear_data():
    prob = make_problem("lin", p=lambda u: 3.0 * u, g=lambda u: 0 * u, D=0.5, bounds=((0.0, 1.0),))
    grad = GradientOperator(6)
    grid = build_grid(prob.bounds, 20, ghost=3)
    u = 2.0 + 1.5 * grid.centers_with_ghosts()
    w, (v,) = relaxation_step(u, prob, grad, grid)
    assert np.abs(w - 3.0 * u).max() == 0.0
    assert np.abs(v + 0.5 * 3.0 * 1.5).max() < 1e-12


@pytest.mark.parametrize("rec,tab", SCHEMES)
@pytest.mark.parametrize("dim", [1, 2])
def test_mass_conservation_periodic(rec, tab, dim):
    prob = periodic_problem(dim, p=lambda u: u * np.abs(u), dp=lambda u: 2 * np.abs(u))
    sch = SchemeConfig.build(rec, tab)
    grid = make_grid(prob, 24, sch)
    rng = np.random.default_rng(3)
    st0 = initial_state(prob, grid)
    st0.u.values[grid.interior] = rng.uniform(0.2, 1.0, grid.shape)
    u0 = st0.u.interior.copy()
    op = RelaxedOperator(prob, grid, sch, choose_phi(prob, u0, grid))
    state = st0
    for _ in range(100):
        state = step(state, op, select_dt(grid, prob, sch, state.u.interior, op.phi))
    drift = abs(state.u.interior.sum() - u0.sum()) / u0.sum()
    assert drift < 1e-10
    assert not np.allclose(state.u.interior, u0)


@pytest.mark.parametrize("rec,tab", SCHEMES)
def test_constant_steady_states_fixed(rec, tab):
    prob = fisher_problem(c=10.0, bounds=(0.0, 1.0))
    sch = SchemeConfig.build(rec, tab)
    grid = make_grid(prob, 30, sch)
    for c in (0.0, 1.0):
        st0 = initial_state(prob, grid)
        st0.u.values[:] = c
        op = RelaxedOperator(prob, grid, sch, 1.0)
        state = st0
        for _ in range(5):
            state = step(state, op, 1e-3)
        assert np.abs(state.u.interior - c).max() <= 1e-12


@pytest.mark.parametrize("tab", TABLEAU_IDS)
def test_every_tableau_preserves_constants(tab):
    prob = periodic_problem(2)
    sch = SchemeConfig.build("eno4", tab)
    grid = make_grid(prob, 12, sch)
    st0 = initial_state(prob, grid)
    st0.u.values[:] = 0.7
    state = step(st0, RelaxedOperator(prob, grid, sch, 3.0), 1e-3)
    assert np.abs(state.u.interior - 0.7).max() <= 1e-12


def test_pure_reaction_euler_stage():
    grid = build_grid([(0.0, 1.0)], 4)
    u = np.full(4, 0.5)
    data = StageData(fluxes=[np.zeros(5)], reaction=u * (1 - u))
    out = transport_stage(u, [data], [1.0], 0.1, grid)
    np.testing.assert_allclose(out, 0.525, rtol=0, atol=1e-15)


def test_transport_stage_reports_nan_cell():
    grid = build_grid([(0.0, 1.0)], 4)
    F = np.zeros(5)
    F[3] = np.nan
    with pytest.raises(NumericalFailure) as err:
        transport_stage(np.zeros(4), [StageData([F], np.zeros(4))], [1.0], 0.1, grid, t=0.25)
    assert err.value.cell == (2,) and err.value.time == 0.25


def test_select_dt_examples():
    sch = SchemeConfig.build("pcm", "IMEX111", cfl=0.5)
    lin = make_problem("lin", p=lambda u: u, dp=lambda u: np.ones_like(u), g=lambda u: 0 * u)
    grid = build_grid([(0.0, 1.0)], 10)
    assert select_dt(grid, lin, sch, np.linspace(0, 1, 10)) == pytest.approx(0.0025)
    sq = make_problem("sq", p=lambda u: u * u, dp=lambda u: 2 * u, g=lambda u: 0 * u)
    assert select_dt(grid, sq, sch, np.linspace(0, 1, 10)) == pytest.approx(0.00125)
    dt0 = select_dt(grid, sq, sch, np.zeros(10))
    assert np.isfinite(dt0) and dt0 == pytest.approx(0.5 * 0.01 / (2 * 1e-12))
    assert select_dt(grid, lin, sch, np.ones(10), phi=1000.0) == pytest.approx(0.5 * 0.1 / 1000)
    with pytest.raises(ValueError):
        select_dt(grid, lin, sch, np.array([]))


def test_phi_formulas():
    lin = make_problem("lin", p=lambda u: u, dp=lambda u: np.ones_like(u), g=lambda u: 0 * u)
    assert parabolic_phi(lin, np.ones(3), 0.0025) == pytest.approx(20.0)
    lin2 = make_problem("lin", p=lambda u: u, dp=lambda u: np.ones_like(u), g=lambda u: 0 * u, D=2.0)
    assert parabolic_phi(lin2, np.ones(3), 0.0025) == pytest.approx(20.0 * np.sqrt(2))
    grid = build_grid([(0.0, 2.0)], 10)
    assert choose_phi(lin, np.ones(3), grid) == pytest.approx(np.pi)
    assert choose_phi(lin, np.ones(3), grid, override=7.0) == 7.0
    with pytest.raises(ValueError):
        choose_phi(lin, np.ones(3), grid, override=-1.0)


@pytest.mark.parametrize("rec,tab,order", [("pcm", "IMEX111", 1), ("weno5", "ARS222", 5), ("eno6", "ARS443", 6)])
def test_phi_insensitivity(rec, tab, order):
    prob = heat_problem()
    diffs = []
    for m in (50, 100):
        sch = SchemeConfig.build(rec, tab)
        grid = make_grid(prob, m, sch)
        phi = choose_phi(prob, prob.u0(grid.centers()), grid)
        a = integrate(prob, grid, sch, 0.05).state.u.interior
        b = integrate(prob, grid, SchemeConfig.build(rec, tab, phi=2 * phi), 0.05).state.u.interior
        diffs.append(np.abs(a - b).max())
    assert np.log2(diffs[0] / diffs[1]) > order - 0.5


def test_one_step_matches_method_of_lines_oracle():
    prob = heat_problem()
    sch = SchemeConfig.build("eno6", "ARS443")
    grid = make_grid(prob, 100, sch)
    st0 = initial_state(prob, grid)
    u, h = st0.u.interior, grid.h[0]
    op = RelaxedOperator(prob, grid, sch, choose_phi(prob, u, grid))
    dt = select_dt(grid, prob, sch, u, op.phi)
    relaxed = step(st0, op, dt).u.interior

    c = [-49 / 18, 3 / 2, -3 / 20, 1 / 90]

    def lap(f):
        return (c[0] * f + sum(ck * (np.roll(f, k) + np.roll(f, -k)) for k, ck in enumerate(c[1:], 1))) / h**2

    v, n = u.copy(), 20
    s = dt / n
    for _ in range(n):
        k1 = lap(v)
        k2 = lap(v + s / 2 * k1)
        k3 = lap(v + s / 2 * k2)
        k4 = lap(v + s * k3)
        v = v + s / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    assert np.abs(relaxed - v).max() < 1e-9


def test_integrate_hits_stop_times_and_validates():
    prob = heat_problem()
    sch = SchemeConfig.build("pcm", "IMEX111")
    grid = make_grid(prob, 20, sch)
    seen = []
    res = integrate(prob, grid, sch, 0.1, stop_times=[0.0, 0.0123, 0.05, 0.2], on_stop=lambda s: seen.append(s.t))
    assert seen == [0.0, 0.0123, 0.05, 0.1]
    assert res.state.t == 0.1 and res.status == "completed"
    with pytest.raises(ValueError):
        integrate(prob, grid, sch, 0.0)
    short = integrate(prob, grid, sch, 0.1, max_steps=3)
    assert short.status == "max_steps" and short.steps == 3


def test_integrate_stops_at_extinction():
    prob = make_problem("decay", p=lambda u: u, dp=lambda u: np.ones_like(u),
                        g=lambda u: -50.0 * u, u0=lambda x: 1.0 + 0 * x, bc=BoundaryCondition.uniform(NEUMANN))
    sch = SchemeConfig.build("pcm", "IMEX111")
    grid = make_grid(prob, 10, sch)
    res = integrate(prob, grid, sch, 10.0, extinction_rel=1e-6)
    assert res.status == "extinct"
    dt = 0.5 * grid.h[0] ** 2 / 2
    n = int(np.ceil(np.log(1e-6) / np.log(1 - 50.0 * dt)))  # explicit Euler decay of a constant
    assert res.t_extinct == pytest.approx(n * dt)


def test_operator_checks_ghosts():
    prob = heat_problem()
    sch = SchemeConfig.build("eno6", "ARS443")
    with pytest.raises(ValueError):
        RelaxedOperator(prob, build_grid(prob.bounds, 20, ghost=2), sch, 1.0)
    with pytest.raises(ValueError):
        SchemeConfig.build("pcm", "IMEX111", cfl=0.0)


def test_2d_heat_dimension_by_dimension():
    k = 2 * np.pi

    def exact(x, y, t):
        return np.exp(-2 * k * k * t) * np.sin(k * x) * np.sin(k * y)

    prob = make_problem("heat2d", p=lambda u: u, dp=lambda u: np.ones_like(u), g=lambda u: 0 * u,
                        bounds=((0.0, 1.0), (0.0, 1.0)), u0=lambda x, y: exact(x, y, 0.0),
                        bc=BoundaryCondition.uniform(PERIODIC, 2))
    sch = SchemeConfig.build("weno5", "ARS222")
    errs = []
    for m in (16, 32):
        grid = make_grid(prob, m, sch)
        u = integrate(prob, grid, sch, 0.01).state.u.interior
        errs.append(np.abs(u - exact(*grid.mesh(), 0.01)).max())
    assert np.log2(errs[0] / errs[1]) > 3.0
