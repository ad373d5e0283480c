import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relaxrd.grid import build_grid
from relaxrd.models import (
    PROBLEM_HELP,
    PROBLEMS,
    RingBump,
    cross_initial_data,
    fisher_problem,
    heat_problem,
    make_problem,
    min_wave_speed,
    pme_absorption_problem,
    porous_fisher_problem,
    ring_with_bump_initial_data,
    two_front_initial_data,
)
from relaxrd.validation import symmetry_deviation


def test_registry_is_documented():
    assert set(PROBLEMS) == set(PROBLEM_HELP)


def test_heat_exact_matches_datum():
    prob = heat_problem()
    x = np.linspace(0, 2, 9)
    np.testing.assert_allclose(prob.u0(x), np.sin(np.pi * x), atol=1e-15)
    assert prob.exact(0.5, 0.1) == pytest.approx(np.exp(-np.pi**2 * 0.1))
    with pytest.raises(ValueError):
        heat_problem(D=0)


def test_fisher_datum_and_states():
    prob = fisher_problem(c=2.0)
    x = np.linspace(-50, 200, 1001)
    u = prob.u0(x)
    assert u.min() >= 0 and u[0] == pytest.approx(1, abs=1e-8)
    for s in prob.steady_states:
        assert prob.g(np.array([s]))[0] == 0
    assert min_wave_speed(1.0, 1.0) == 2.0
    with pytest.raises(ValueError):
        fisher_problem(k=-1)


def test_porous_fisher_terms():
    prob = porous_fisher_problem()
    u = np.linspace(0, 1.2, 13)
    np.testing.assert_allclose(prob.p(u), u**2 / 2)
    np.testing.assert_allclose(prob.dp(u), u)
    np.testing.assert_allclose(prob.g(u), u * (1 - u))
    assert prob.degenerate and prob.g(np.array([0.0, 1.0])).tolist() == [0.0, 0.0]
    with pytest.raises(ValueError):
        porous_fisher_problem(x0=1, x1=-1)


def test_two_fronts_are_sharp_waves():
    x = np.linspace(-4, 4, 801)
    u = two_front_initial_data(x)
    assert np.all(u[np.abs(x) <= 1] == 0)
    assert u.min() >= 0 and u.max() < 1
    # the sharp porous-Fisher wave 1 - exp(z/sqrt2) solves c U' + (U U')' + U(1-U) = 0 with c = 1/sqrt2
    z = np.linspace(-6, -0.01, 2000)
    U = 1 - np.exp(z / np.sqrt(2))
    Uz = -np.exp(z / np.sqrt(2)) / np.sqrt(2)
    Uzz = Uz / np.sqrt(2)
    res = (1 / np.sqrt(2)) * Uz + (Uz**2 + U * Uzz) + U * (1 - U)
    assert np.abs(res).max() < 1e-14


def test_cross_datum():
    assert cross_initial_data(0.0, 0.0) == 1.0
    x = np.linspace(-2, 2, 101)
    X, Y = np.meshgrid(x, x)
    u = cross_initial_data(X, Y)
    assert 0 <= u.min() and u.max() <= 1
    assert u[np.hypot(X, Y) > 1.5].max() == 0
    # along the axes the support reaches r = 1, along diagonals it is shorter
    assert cross_initial_data(0.9, 0.0) > 0 and cross_initial_data(0.9 / np.sqrt(2), 0.9 / np.sqrt(2)) == 0


def test_ring_bump_is_asymmetric():
    rb = ring_with_bump_initial_data()
    grid = build_grid([(-2, 2), (-2, 2)], 100)
    u = rb(*grid.mesh())
    assert symmetry_deviation(u, grid) > 0.1
    plain = RingBump(bump_amplitude=0.0)
    assert symmetry_deviation(plain(*grid.mesh()), grid) < symmetry_deviation(u, grid) / 3
    with pytest.raises(ValueError):
        ring_with_bump_initial_data(radius=1.8)
    with pytest.raises(ValueError):
        ring_with_bump_initial_data(width=-1)


def test_pme_problem_validation():
    with pytest.raises(ValueError):
        pme_absorption_problem(p_exp=1.5)
    with pytest.raises(ValueError):
        pme_absorption_problem(m=0.5)
    with pytest.raises(ValueError):
        pme_absorption_problem(initial="square")
    prob = pme_absorption_problem()
    assert prob.dim == 2 and prob.g(np.array([-1.0]))[0] == 0
    np.testing.assert_allclose(prob.dp(np.array([0.5])), [1.0])
    assert pme_absorption_problem(positivity_tol=0).reaction_dt is None


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(1e-3, 1.0))
def test_reaction_dt_bounds_euler_overshoot(u, scale):
    prob = pme_absorption_problem()
    dt = prob.reaction_dt(scale)
    after = u + dt * prob.g(np.array([u]))[0]
    assert after >= -1e-9 * scale * (1 + 1e-12)


def test_make_problem_numerical_derivative():
    prob = make_problem("cubic", p=lambda u: u**3, g=lambda u: 0 * u)
    np.testing.assert_allclose(prob.dp(np.array([0.5, 2.0])), [0.75, 12.0], rtol=1e-8)
    with pytest.raises(ValueError):
        make_problem("bad", p=lambda u: u, g=lambda u: u, D=0)
