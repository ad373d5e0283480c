"""Vectorised NumPy reconstruction kernels (fallback backend).

Both functions return, for each line of ``q`` and each cell ``j`` in
``[j0, j1)``, the value at the cell's right face extrapolated from stencils
containing ``j``.  The compiled backend implements the same arithmetic in the
same order.
"""
import numpy as np

NAME = "numpy"


def eno_left(q, r, j0, j1, atol, coef, bias=1.0):
    q = np.ascontiguousarray(q, dtype=float)
    nl, n = q.shape
    cells = np.arange(j0, j1)
    s = np.broadcast_to(cells, (nl, cells.size)).copy()
    diff = q
    for lev in range(1, r):
        diff = diff[:, 1:] - diff[:, :-1]
        a = np.take_along_axis(diff, s - 1, axis=1)
        b = np.take_along_axis(diff, s, axis=1)
        aa = np.abs(a)
        bb = np.abs(b)
        # preferred growth keeps the stencil centred on cell j, leaning upwind (left);
        # the other side wins only if smaller by the bias factor
        pref_left = np.abs(2 * (cells - s) + 2 - lev) <= np.abs(2 * (cells - s) - lev)
        go_left = np.where(pref_left, ~(aa > bias * bb + atol), bb > bias * aa + atol)
        s -= go_left
    shift = cells - s
    out = np.zeros((nl, cells.size))
    c = coef[shift]
    for k in range(r):
        out += c[..., k] * np.take_along_axis(q, s + k, axis=1)
    return out


def weno5_left(q, j0, j1, eps):
    q = np.ascontiguousarray(q, dtype=float)
    qmm = q[:, j0 - 2 : j1 - 2]
    qm = q[:, j0 - 1 : j1 - 1]
    q0 = q[:, j0:j1]
    qp = q[:, j0 + 1 : j1 + 1]
    qpp = q[:, j0 + 2 : j1 + 2]

    p0 = (2.0 * qmm - 7.0 * qm + 11.0 * q0) / 6.0
    p1 = (-qm + 5.0 * q0 + 2.0 * qp) / 6.0
    p2 = (2.0 * q0 + 5.0 * qp - qpp) / 6.0

    b0 = 13.0 / 12.0 * (qmm - 2.0 * qm + q0) ** 2 + 0.25 * (qmm - 4.0 * qm + 3.0 * q0) ** 2
    b1 = 13.0 / 12.0 * (qm - 2.0 * q0 + qp) ** 2 + 0.25 * (qm - qp) ** 2
    b2 = 13.0 / 12.0 * (q0 - 2.0 * qp + qpp) ** 2 + 0.25 * (3.0 * q0 - 4.0 * qp + qpp) ** 2

    a0 = 0.1 / (eps + b0) ** 2
    a1 = 0.6 / (eps + b1) ** 2
    a2 = 0.3 / (eps + b2) ** 2
    return (a0 * p0 + a1 * p1 + a2 * p2) / (a0 + a1 + a2)


def weno5_weights(q, j0, j1, eps):
    """Nonlinear WENO5 weights, shape ``(3, lines, cells)``."""
    q = np.ascontiguousarray(q, dtype=float)
    qmm = q[:, j0 - 2 : j1 - 2]
    qm = q[:, j0 - 1 : j1 - 1]
    q0 = q[:, j0:j1]
    qp = q[:, j0 + 1 : j1 + 1]
    qpp = q[:, j0 + 2 : j1 + 2]
    b0 = 13.0 / 12.0 * (qmm - 2.0 * qm + q0) ** 2 + 0.25 * (qmm - 4.0 * qm + 3.0 * q0) ** 2
    b1 = 13.0 / 12.0 * (qm - 2.0 * q0 + qp) ** 2 + 0.25 * (qm - qp) ** 2
    b2 = 13.0 / 12.0 * (q0 - 2.0 * qp + qpp) ** 2 + 0.25 * (3.0 * q0 - 4.0 * qp + qpp) ** 2
    a = np.stack([0.1 / (eps + b0) ** 2, 0.6 / (eps + b1) ** 2, 0.3 / (eps + b2) ** 2])
    return a / a.sum(axis=0)
