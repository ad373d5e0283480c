from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from relaxrd import kernels
from relaxrd.reconstruction import (
    WENO5_LINEAR_WEIGHTS,
    GradientOperator,
    central_coefficients,
    central_gradient,
    eno_coefficient_table,
    eno_stencil_select,
    face_coefficients,
    reconstruct_faces,
    scheme_from_name,
    weno5_nonlinear_weights,
)

ALL_SCHEMES = ["pcm", "eno2", "eno3", "eno4", "eno5", "eno6", "weno5"]
needs_compiled = pytest.mark.skipif(not kernels.compiled_available(), reason="compiled kernels not built")


def cell_averages(F, a, b, m, G):
    """Exact averages from the primitive ``F`` on ``m`` cells plus ``G`` ghosts."""
    h = (b - a) / m
    edges = a + h * np.arange(-G, m + G + 1)
    return (F(edges[1:]) - F(edges[:-1])) / h, edges[G : G + m + 1]


def test_face_coefficients_known_row():
    assert face_coefficients(3, 2) == (Fraction(1, 3), Fraction(-7, 6), Fraction(11, 6))
    assert face_coefficients(2, 0) == (Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("r", range(1, 7))
def test_face_coefficients_sum_to_one(r):
    for s in range(r):
        assert sum(face_coefficients(r, s)) == 1


def test_scheme_names():
    assert str(scheme_from_name("ENO6")) == "ENO6" and scheme_from_name("eno6").radius == 6
    assert scheme_from_name("weno5").radius == 3 and scheme_from_name("pcm").radius == 1
    for bad in ("eno1", "eno7", "weno3", "muscl"):
        with pytest.raises(ValueError):
            scheme_from_name(bad)


@pytest.mark.parametrize("name", ALL_SCHEMES)
def test_polynomial_exactness(name):
    sch = scheme_from_name(name)
    # ENO r is exact for degree r-1; WENO5 blends three exact quadratics
    deg = 2 if sch.kind == "weno5" else sch.order - 1
    rng = np.random.default_rng(deg)
    coef = rng.uniform(-1, 1, deg + 1)
    prim = np.polynomial.Polynomial(coef).integ()
    G = sch.radius
    q, faces = cell_averages(prim, -1.0, 1.0, 24, G)
    left, right = reconstruct_faces(q, sch, G)
    exact = np.polynomial.Polynomial(coef)(faces)
    scale = np.abs(exact).max()
    assert np.abs(left - exact).max() < 1e-12 * scale
    assert np.abs(right - exact).max() < 1e-12 * scale


@pytest.mark.parametrize("name,order", [("pcm", 1), ("eno3", 3), ("eno6", 6), ("weno5", 5)])
def test_face_error_order(name, order):
    sch = scheme_from_name(name)
    errs = []
    for m in (40, 80):
        q, faces = cell_averages(lambda x: -np.cos(x), 0.0, 2 * np.pi, m, sch.radius)
        left, _ = reconstruct_faces(q, sch, sch.radius)
        errs.append(np.abs(left - np.sin(faces)).max())
    assert np.log2(errs[0] / errs[1]) > order - 0.3


def test_eno_step_stays_on_one_side():
    sch = scheme_from_name("eno4")
    G = sch.radius
    x = np.arange(40 + 2 * G)
    q = np.where(x < 20 + G, 0.0, 1.0)
    left, right = reconstruct_faces(q, sch, G)
    # every face except the one at the jump sees only constant data
    jump = 20
    for k in range(41):
        if k != jump:
            assert abs(left[k] - q[G - 1 + k]) < 1e-15 and abs(right[k] - q[G + k]) < 1e-15
    assert abs(left[jump]) < 1e-15 and abs(right[jump] - 1.0) < 1e-15


def test_eno_tie_break_is_centred_then_upwind():
    # constant data: every level ties, the stencil stays centred on the cell
    assert eno_stencil_select(np.ones(5), 2, 3) == -1
    assert eno_stencil_select(np.ones(11), 5, 6) == -3
    assert eno_stencil_select(np.ones(3), 1, 2) == -1
    # a strict winner is followed
    q = np.array([0.0, 0.0, 0.0, 1.0, 8.0])
    assert eno_stencil_select(q, 2, 3) == -2


def test_eno_tie_tolerance_uses_scale():
    q = np.array([0.0, 0.0, 1e-14, 0.0, 0.0])
    assert eno_stencil_select(q + 1.0, 2, 2) == eno_stencil_select(np.ones(5), 2, 2)
    assert eno_stencil_select(q, 2, 2, scale=1.0) == -1
    near = np.array([0.0, 0.0, 2e-14, 3e-14, 0.0])
    assert eno_stencil_select(near, 2, 2, scale=1.0, bias=1.0) == -1
    assert eno_stencil_select(near, 2, 2, scale=1.0, tie_tol=1e-16, bias=1.0) == 0


def test_eno_bias_keeps_smooth_data_upwind_centred():
    # smooth data decaying to the right: plain ENO drifts fully right, the bias does not
    q = np.exp(-0.3 * np.arange(11.0))
    assert eno_stencil_select(q, 5, 6, bias=1.0) == 0
    assert eno_stencil_select(q, 5, 6) == -3
    # a genuine jump still beats the bias
    step = np.where(np.arange(11) < 5, 0.0, 1.0)
    assert eno_stencil_select(step, 5, 6) == 0
    assert eno_stencil_select(step[::-1], 5, 6) == -5


def test_weno_weights_smooth_and_jump():
    x = np.linspace(0, 1, 60)
    w = weno5_nonlinear_weights(np.sin(x), ghost=3)
    np.testing.assert_allclose(w.mean(axis=1), WENO5_LINEAR_WEIGHTS, atol=1e-3)
    step = np.where(np.arange(20) < 10, 0.0, 1.0)
    wj = weno5_nonlinear_weights(step, ghost=3)
    assert wj[:, 9 - 2].min() < 1e-6  # a candidate spanning the jump is switched off


def test_reconstruct_needs_ghosts():
    with pytest.raises(ValueError):
        reconstruct_faces(np.zeros(20), scheme_from_name("eno6"), 3)
    with pytest.raises(ValueError):
        reconstruct_faces(np.zeros(20), scheme_from_name("pcm"), 1, side="middle")


def test_axis_handling_2d():
    sch = scheme_from_name("weno5")
    rng = np.random.default_rng(1)
    q = rng.standard_normal((7, 16))
    l0, r0 = reconstruct_faces(q.T, sch, 3, axis=0)
    l1, r1 = reconstruct_faces(q, sch, 3, axis=1)
    np.testing.assert_array_equal(l0.T, l1)
    np.testing.assert_array_equal(r0.T, r1)
    assert l1.shape == (7, 11)


def test_central_coefficients():
    assert central_coefficients(2) == (Fraction(1, 2),)
    assert central_coefficients(6) == (Fraction(3, 4), Fraction(-3, 20), Fraction(1, 60))
    assert GradientOperator.for_time_order(3).order == 6 and GradientOperator.for_time_order(1).order == 2
    with pytest.raises(ValueError):
        GradientOperator(3)
    assert sum(GradientOperator(4).stencil()) == 0


@pytest.mark.parametrize("order", [2, 4, 6])
def test_central_gradient_order(order):
    op = GradientOperator(order)
    errs = []
    for m in (40, 80):
        h = 2 * np.pi / m
        x = h * np.arange(-op.radius, m + op.radius)
        d = central_gradient(np.sin(x), op, h, op.radius)
        errs.append(np.abs(d - np.cos(x[op.radius : -op.radius])).max())
    assert np.log2(errs[0] / errs[1]) > order - 0.2


@needs_compiled
@settings(max_examples=60, deadline=None)
@given(arrays(float, (3, 30), elements=st.floats(-1e3, 1e3)), st.integers(2, 6), st.sampled_from([1.0, 2.0, 3.5]))
def test_backends_agree_eno(q, r, bias):
    py, cy = kernels.get_backend("numpy"), kernels.get_backend("cython")
    tab = eno_coefficient_table(r)
    atol = 1e-12 * float(np.abs(q).max())
    a = py.eno_left(q, r, r - 1, 30 - r, atol, tab, bias)
    b = cy.eno_left(q, r, r - 1, 30 - r, atol, tab, bias)
    np.testing.assert_array_equal(a, b)


@needs_compiled
@settings(max_examples=60, deadline=None)
@given(arrays(float, (3, 30), elements=st.floats(-1e3, 1e3)))
def test_backends_agree_weno(q):
    py, cy = kernels.get_backend("numpy"), kernels.get_backend("cython")
    eps = 1e-6 * max(float(np.abs(q).max()), 1.0) ** 2
    np.testing.assert_allclose(py.weno5_left(q, 2, 27, eps), cy.weno5_left(q, 2, 27, eps), rtol=1e-13, atol=1e-10)


def test_get_backend():
    assert kernels.get_backend("numpy").NAME == "numpy"
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
