"""Reference solutions, error norms and solution features."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid


@dataclass
class WaveProfile:
    value: np.ndarray
    valid: bool


def fk_wave_profile(z, c: float) -> WaveProfile:
    """Two-term large-speed expansion of the Fisher-Kolmogoroff travelling wave.

    ``valid`` is False below the minimum speed ``c = 2`` (``k = D = 1``).
    """
    s = np.asarray(z, dtype=float) / c
    log_sig = -np.logaddexp(0.0, s)  # log 1/(1+e^s)
    log_1m = -np.logaddexp(0.0, -s)  # log e^s/(1+e^s)
    sig = np.exp(log_sig)
    bell = np.exp(log_sig + log_1m)
    val = sig + bell * (np.log(4.0) + log_sig + log_1m) / (c * c)
    return WaveProfile(val, bool(c >= 2.0))


@dataclass(frozen=True)
class WaveReference:
    c: float

    def __call__(self, x, t=0.0):
        return fk_wave_profile(np.asarray(x) - self.c * t, self.c).value


def fk_slope(c: float) -> float:
    """Slope of the wave at its inflection point, ``-1/(4c)``."""
    if c < 2:
        raise ValueError("slope law holds for c >= 2")
    return -1.0 / (4.0 * c)


def max_gradient(values, h: float) -> tuple[float, int]:
    """Largest absolute centred-difference slope over interior cells of a 1D array."""
    u = np.asarray(values, dtype=float)
    if u.ndim != 1 or u.size < 3:
        raise ValueError("need at least 3 cells")
    slope = np.abs(u[2:] - u[:-2]) / (2.0 * h)
    k = int(np.argmax(slope))
    return float(slope[k]), k + 1


@dataclass
class ErrorReport:
    l1: float
    l2: float
    linf: float
    h: float


def error_norms(numeric, reference, grid: Grid, t: float | None = None) -> ErrorReport:
    """Discrete norms of ``numeric - reference`` over interior cells.

    ``reference`` is an array of the same shape or a callable evaluated at the
    cell centres (with ``t`` when given).
    """
    num = np.asarray(numeric, dtype=float)
    if callable(reference):
        pts = grid.mesh()
        ref = reference(*pts, t) if t is not None else reference(*pts)
    else:
        ref = np.asarray(reference, dtype=float)
    if num.shape != grid.shape or np.shape(ref) != grid.shape:
        raise ValueError(f"grid mismatch: {num.shape} vs {np.shape(ref)} on {grid.shape}")
    e = np.abs(num - ref)
    vol = grid.cell_volume
    return ErrorReport(
        l1=float(vol * e.sum()), l2=float(np.sqrt(vol * (e * e).sum())), linf=float(e.max()), h=max(grid.h)
    )


@dataclass
class RateTable:
    rates: list[float | None]
    notes: list[str] = field(default_factory=list)


def convergence_rate(errors, spacings) -> RateTable:
    """Observed orders ``log(e_i/e_{i+1}) / log(h_i/h_{i+1})`` for consecutive pairs."""
    errors = [float(e) for e in errors]
    spacings = [float(h) for h in spacings]
    if len(errors) < 2 or len(errors) != len(spacings):
        raise ValueError("need at least two (error, h) pairs")
    rates: list[float | None] = []
    notes = []
    for i in range(len(errors) - 1):
        e0, e1 = errors[i], errors[i + 1]
        if e0 <= 0 or e1 <= 0:
            rates.append(None)
            notes.append(f"pair {i}: non-positive error excluded")
            continue
        rates.append(float(np.log(e0 / e1) / np.log(spacings[i] / spacings[i + 1])))
    return RateTable(rates, notes)


def fitted_rate(errors, spacings) -> float:
    """Least-squares slope of ``log e`` against ``log h``."""
    e = np.asarray(errors, dtype=float)
    h = np.asarray(spacings, dtype=float)
    if np.any(e <= 0):
        raise ValueError("errors must be positive")
    return float(np.polyfit(np.log(h), np.log(e), 1)[0])


def front_positions(values, x, level: float) -> list[float]:
    """Linearly interpolated positions where a 1D profile crosses ``level``."""
    u = np.asarray(values, dtype=float) - level
    x = np.asarray(x, dtype=float)
    out = []
    for j in range(u.size - 1):
        a, b = u[j], u[j + 1]
        if a == 0.0:
            out.append(float(x[j]))
        elif a * b < 0.0:
            out.append(float(x[j] + (x[j + 1] - x[j]) * a / (a - b)))
    if u.size and u[-1] == 0.0:
        out.append(float(x[-1]))
    return out


def wave_speed(times, positions, t_min: float = 0.0) -> float:
    """Slope of a least-squares line through ``(t, position)`` for ``t >= t_min``."""
    t = np.asarray(times, dtype=float)
    xpos = np.asarray(positions, dtype=float)
    keep = t >= t_min
    if keep.sum() < 2:
        raise ValueError("need at least two samples for a speed fit")
    return float(np.polyfit(t[keep], xpos[keep], 1)[0])


def contact_time(times, crossings_per_time, before: int = 2) -> float | None:
    """First time at which the number of level crossings drops below ``before``."""
    for t, xs in zip(times, crossings_per_time):
        if len(xs) < before:
            return float(t)
    return None


def extinction_time(times, max_u, threshold: float | None = None, rel: float = 1e-6) -> float | None:
    """First sample time with ``max_u < threshold``; ``None`` if never reached.

    The default threshold is ``rel`` times the first sample.
    """
    t = np.asarray(times, dtype=float)
    mu = np.asarray(max_u, dtype=float)
    if t.size and np.any(np.diff(t) < 0):
        raise ValueError("times must be non-decreasing")
    if threshold is None:
        threshold = rel * float(mu[0])
    hit = np.nonzero(mu < threshold)[0]
    return float(t[hit[0]]) if hit.size else None


def symmetry_deviation(values, grid: Grid, relative: bool = True) -> float:
    """Distance of a 2D field from its angular average at matching radii.

    Cells are binned by radius in shells one mesh width thick; the shell
    means, placed at the mean radius of their cells, are interpolated
    linearly back to every cell's own radius.  The result is the max
    deviation, divided by ``max |f|`` when ``relative`` (so it stays
    meaningful while the solution decays).
    """
    f = np.asarray(values, dtype=float)
    if grid.dim != 2 or grid.m[0] != grid.m[1] or grid.lower != grid.lower[::-1] \
            or grid.upper != grid.upper[::-1] or not np.isclose(grid.lower[0], -grid.upper[0]):
        raise ValueError("symmetry deviation needs a square grid centred at the origin")
    X, Y = grid.mesh()
    r = np.hypot(X, Y).ravel()
    bins = np.floor(r / grid.h[0]).astype(int)
    flat = f.ravel()
    counts = np.bincount(bins)
    used = counts > 0
    r_mean = np.bincount(bins, weights=r)[used] / counts[used]
    f_mean = np.bincount(bins, weights=flat)[used] / counts[used]
    avg = np.interp(r, r_mean, f_mean)
    dev = float(np.max(np.abs(flat - avg)))
    if relative:
        scale = float(np.max(np.abs(flat)))
        return dev / scale if scale > 0 else 0.0
    return dev


def check_slope_law(c: float, slope: float, rel_tol: float = 0.05) -> bool:
    if c <= 2:
        warnings.warn("slope law is not expected to hold at the minimum speed")
    return abs(slope - abs(fk_slope(c))) <= rel_tol * abs(fk_slope(c))


def _lagrange_1d(xf, uf, xc, degree: int, axis: int):
    """Interpolate along ``axis`` with local Lagrange polynomials on ``degree + 1`` nearest nodes."""
    n = xf.size
    k = min(degree + 1, n)
    uf = np.moveaxis(uf, axis, -1)
    out = np.empty(uf.shape[:-1] + (xc.size,))
    starts = np.clip(np.searchsorted(xf, xc) - k // 2, 0, n - k)
    for i, (x, s) in enumerate(zip(xc, starts)):
        nodes = xf[s : s + k]
        w = np.ones(k)
        for a in range(k):
            for b in range(k):
                if a != b:
                    w[a] *= (x - nodes[b]) / (nodes[a] - nodes[b])
        out[..., i] = uf[..., s : s + k] @ w
    return np.moveaxis(out, -1, axis)


def interpolate_reference(fine, fine_grid: Grid, coarse_grid: Grid, degree: int = 7) -> np.ndarray:
    """Sample a fine-grid solution at the coarse cell centres, axis by axis."""
    u = np.asarray(fine, dtype=float)
    if u.shape != fine_grid.shape or fine_grid.dim != coarse_grid.dim:
        raise ValueError("reference does not match its grid")
    for d in range(fine_grid.dim):
        u = _lagrange_1d(fine_grid.centers(d), u, coarse_grid.centers(d), degree, fine_grid.storage_axis(d))
    return u
