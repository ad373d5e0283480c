"""Command-line runner driven by INI configuration files.

A configuration has four sections::

    [problem]
    id = fisher
    c = 4

    [grid]
    m = 1000

    [scheme]
    reconstruction = eno6
    tableau = ARS443

    [output]
    T = 10
    every = 2

Keys in ``[problem]`` other than ``id`` and ``bc`` are passed to the problem
constructor.  Exit codes: 0 ok, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import dataclasses
import inspect
import logging
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import kernels, models
from .grid import DIRICHLET, NEUMANN, PERIODIC, BoundaryCondition, Grid
from .solver import NumericalFailure, RunResult, SchemeConfig, integrate, make_grid
from .validation import (
    contact_time,
    convergence_rate,
    error_norms,
    fitted_rate,
    front_positions,
    interpolate_reference,
    max_gradient,
    symmetry_deviation,
    wave_speed,
)

log = logging.getLogger("relaxrd")

ENV_OUTPUT_DIR = "RELAXRD_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "relaxrd_output"
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2

SECTIONS = {
    "problem": None,  # open: constructor keywords
    "grid": {"m", "grids", "reference_m"},
    "scheme": {"reconstruction", "tableau", "cfl", "phi", "gradient_order", "dt_floor", "eno_bias"},
    "output": {"t", "times", "every", "directory", "front_level", "extinction", "positivity_tol"},
}
RING_KEYS = ("ring_radius", "ring_width", "bump_amplitude", "bump_angle", "bump_width")


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<config>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


@dataclass
class RunConfig:
    problem_id: str
    problem_params: dict
    bc: Optional[str]
    m: tuple[int, ...]
    reconstruction: str
    tableau: str
    cfl: float
    phi: Optional[float]
    gradient_order: Optional[int]
    dt_floor: float
    T: float
    times: tuple[float, ...]
    output_dir: Optional[Path]
    front_level: float = 0.5
    extinction: Optional[float] = None
    positivity_tol: float = 1e-8
    grids: tuple[int, ...] = ()
    reference_m: Optional[int] = None
    eno_bias: Optional[float] = None
    source: str = "<config>"
    lines: dict = field(default_factory=dict, repr=False)

    def line(self, section: str, key: Optional[str] = None) -> Optional[int]:
        return self.lines.get((section, key))

    def problem(self) -> models.ProblemSpec:
        return build_problem(self)

    def scheme(self) -> SchemeConfig:
        return SchemeConfig.build(self.reconstruction, self.tableau, self.cfl, self.phi,
                                  self.gradient_order, self.dt_floor, self.eno_bias)


# ---------------------------------------------------------------- parsing

_KEY_RE = re.compile(r"^\s*([^=:\s\[][^=:]*?)\s*[=:]")
_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")


def _line_map(text: str) -> dict:
    """``(section, key) -> line`` and ``(section, None) -> header line``."""
    out, section = {}, None
    for n, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith(("#", ";")) or not raw.strip():
            continue
        sec = _SECTION_RE.match(raw)
        if sec:
            section = sec.group(1).strip().lower()
            out.setdefault((section, None), n)
            continue
        key = _KEY_RE.match(raw)
        if key and section is not None and not raw[:1].isspace():
            out[(section, key.group(1).strip().lower())] = n
    return out


def _floats(text: str) -> list[float]:
    return [float(s) for s in re.split(r"[,\s]+", text.strip()) if s]


def parse_config(text: str, source: str = "<config>", overrides=()) -> RunConfig:
    """Parse configuration ``text`` after applying ``section.key=value`` overrides."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        if isinstance(exc, configparser.ParsingError) and exc.errors:
            line, bad = exc.errors[0]
            raise ConfigError(f"cannot parse line {bad.strip()!r}", line, source) from None
        raise ConfigError(str(exc).splitlines()[0], line, source) from None
    lines = _line_map(text)
    for i, item in enumerate(overrides, start=1):
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r} is not of the form section.key=value", None, f"--override #{i}")
        lhs, value = item.split("=", 1)
        sec, key = (s.strip().lower() for s in lhs.split(".", 1))
        if sec not in SECTIONS:
            raise ConfigError(f"unknown section {sec!r}", None, f"--override #{i}")
        if not cp.has_section(sec):
            cp.add_section(sec)
        cp.set(sec, key, value.strip())
        lines[(sec, key)] = None
    for sec in cp.sections():
        if sec not in SECTIONS:
            raise ConfigError(f"unknown section [{sec}]", lines.get((sec, None)), source)
        allowed = SECTIONS[sec]
        for key in cp[sec]:
            if allowed is not None and key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{sec}]", lines.get((sec, key)), source)

    def get(sec, key, conv=str, default=None, required=False):
        if not cp.has_option(sec, key):
            if required:
                raise ConfigError(f"missing required key {key!r} in [{sec}]", lines.get((sec, None)), source)
            return default
        raw = cp.get(sec, key)
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {sec}.{key}: {raw!r} ({exc})", lines.get((sec, key)), source) from None

    def where(sec, key=None):
        return lines.get((sec, key), lines.get((sec, None)))

    def ints(text):
        vals = _floats(text)
        if not vals or any(v != int(v) or v < 1 for v in vals):
            raise ValueError("expected positive integers")
        return tuple(int(v) for v in vals)

    pid = get("problem", "id", required=True).strip().lower()
    if pid not in models.PROBLEMS:
        raise ConfigError(f"unknown problem {pid!r}; known: {', '.join(models.PROBLEMS)}", where("problem", "id"), source)
    params = {k: v for k, v in cp["problem"].items() if k not in ("id", "bc")}
    T = get("output", "t", float, required=True)
    if not T > 0:
        raise ConfigError("final time T must be positive", where("output", "t"), source)
    times = get("output", "times", _floats)
    every = get("output", "every", float)
    if times is not None and every is not None:
        raise ConfigError("give either times or every, not both", where("output", "every"), source)
    if every is not None:
        if every <= 0:
            raise ConfigError("every must be positive", where("output", "every"), source)
        n = int(np.floor(T / every + 1e-9))
        times = [round(k * every, 12) for k in range(n + 1)]
        if times[-1] < T:
            times.append(T)
    if times is None:
        times = [0.0, T]
    if any(b < a for a, b in zip(times, times[1:])):
        raise ConfigError("output times must be non-decreasing", where("output", "times"), source)
    if min(times) < 0 or max(times) > T:
        raise ConfigError("output times must lie in [0, T]", where("output", "times"), source)
    m = get("grid", "m", ints)
    grids = get("grid", "grids", ints, default=())
    if m is None and not grids:
        raise ConfigError("missing required key 'm' in [grid]", lines.get(("grid", None)), source)
    phi = get("scheme", "phi", float)
    cfl = get("scheme", "cfl", float, 0.5)
    if cfl <= 0:
        raise ConfigError("cfl must be positive", where("scheme", "cfl"), source)
    if phi is not None and phi <= 0:
        raise ConfigError("phi must be positive", where("scheme", "phi"), source)
    cfg = RunConfig(
        problem_id=pid,
        problem_params=params,
        bc=get("problem", "bc"),
        m=m or (grids[0],),
        reconstruction=get("scheme", "reconstruction", str, "pcm"),
        tableau=get("scheme", "tableau", str, "IMEX111"),
        cfl=cfl,
        phi=phi,
        gradient_order=get("scheme", "gradient_order", int),
        dt_floor=get("scheme", "dt_floor", float, 1e-12),
        eno_bias=get("scheme", "eno_bias", float),
        T=T,
        times=tuple(sorted(set(float(t) for t in times))),
        output_dir=Path(get("output", "directory")) if cp.has_option("output", "directory") else None,
        front_level=get("output", "front_level", float, 0.5),
        extinction=get("output", "extinction", float),
        positivity_tol=get("output", "positivity_tol", float, 1e-8),
        grids=grids,
        reference_m=get("grid", "reference_m", int),
        source=source,
        lines=lines,
    )
    _check_buildable(cfg)
    return cfg


def load_config(path, overrides=()) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(p)) from None
    return parse_config(text, str(p), overrides)


def _coerce(name: str, raw: str, default):
    if isinstance(default, str):
        return raw.strip()
    if isinstance(default, tuple):
        return tuple(_floats(raw))
    if isinstance(default, (int, float)) and not isinstance(default, bool):
        return float(raw)
    raise ValueError(f"parameter {name!r} cannot be set from a config file")


def _bc_from_text(text: str, dim: int) -> BoundaryCondition:
    kind, _, value = text.strip().lower().partition(":")
    if kind not in (NEUMANN, PERIODIC, DIRICHLET):
        raise ValueError(f"unknown boundary kind {kind!r}")
    return BoundaryCondition.uniform(kind, dim, float(value) if value else 0.0)


def build_problem(cfg: RunConfig) -> models.ProblemSpec:
    ctor = models.PROBLEMS[cfg.problem_id]
    sig = inspect.signature(ctor)
    kwargs, ring = {}, {}
    for key, raw in cfg.problem_params.items():
        line = cfg.lines.get(("problem", key))
        try:
            if key in RING_KEYS and cfg.problem_id == "pme_absorption":
                ring[key] = float(raw)
                continue
            if key not in sig.parameters or key == "ring":
                raise ValueError(f"unknown parameter {key!r} for problem {cfg.problem_id!r}")
            kwargs[key] = _coerce(key, raw, sig.parameters[key].default)
        except ValueError as exc:
            raise ConfigError(str(exc), line, cfg.source) from None
    try:
        if ring:
            b = kwargs.get("bounds", sig.parameters["bounds"].default)
            names = {"ring_radius": "radius", "ring_width": "width"}
            kwargs["ring"] = models.ring_with_bump_initial_data(
                **{names.get(k, k): v for k, v in ring.items()}, domain_half_width=min(-b[0], b[1])
            )
        prob = ctor(**kwargs)
        if cfg.bc:
            prob = dataclasses.replace(prob, bc=_bc_from_text(cfg.bc, prob.dim))
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc), cfg.lines.get(("problem", None)), cfg.source) from None
    return prob


def _check_buildable(cfg: RunConfig) -> None:
    prob = build_problem(cfg)
    try:
        scheme = cfg.scheme()
    except (ValueError, RuntimeError) as exc:
        text = str(exc)
        hints = {"eno_bias": ("bias",), "tableau": ("tableau", "imex"), "reconstruction": ("reconstruction",),
                 "gradient_order": ("gradient",)}
        key = next((k for k, words in hints.items() if any(w in text.lower() for w in words)), None)
        line = cfg.lines.get(("scheme", key)) or cfg.lines.get(("scheme", None))
        raise ConfigError(text, line, cfg.source) from None
    key = "grids" if cfg.grids else "m"
    line = cfg.lines.get(("grid", key), cfg.lines.get(("grid", None)))
    for m in (cfg.grids or (cfg.m,)):
        ms = m if isinstance(m, tuple) else (m,)
        if len(ms) not in (1, prob.dim):
            raise ConfigError(f"give 1 or {prob.dim} cell counts, got {len(ms)}", line, cfg.source)
        if min(ms) < scheme.ghost:
            raise ConfigError(f"{min(ms)} cells cannot supply the {scheme.ghost} ghost layers "
                              f"{scheme.describe()} needs", line, cfg.source)


def resolve_output_dir(cfg: RunConfig, flag: Optional[str]) -> Path:
    """``--output-dir``, then ``[output] directory``, then the environment, then a default."""
    if flag:
        return Path(flag)
    if cfg.output_dir is not None:
        return cfg.output_dir
    return Path(os.environ.get(ENV_OUTPUT_DIR) or DEFAULT_OUTPUT_DIR)


# ---------------------------------------------------------------- output

def _fmt(x: float) -> str:
    return "%.16e" % x


def write_grid_file(path: Path, grid: Grid, u: np.ndarray) -> None:
    cols = [c.ravel() for c in grid.mesh()] + [np.asarray(u).ravel()]
    header = "x u" if grid.dim == 1 else "x y u"
    np.savetxt(path, np.column_stack(cols), fmt="%.16e", header=header, comments="")


def _gradient_max(u: np.ndarray, grid: Grid) -> float:
    if grid.dim == 1:
        return max_gradient(u, grid.h[0])[0] if u.size >= 3 else 0.0
    gy, gx = np.gradient(u, grid.h[1], grid.h[0])
    return float(np.max(np.hypot(gx, gy)))


def _symmetric_domain(grid: Grid) -> bool:
    try:
        symmetry_deviation(np.zeros(grid.shape), grid)
    except ValueError:
        return False
    return True


@dataclass
class Sample:
    t: float
    mass: float
    max_u: float
    min_u: float
    max_grad: float
    fronts: list = field(default_factory=list)
    sym: Optional[float] = None
    err: Optional[tuple[float, float]] = None
    l1: float = 0.0


def _sample(u, t, grid, prob, level, with_sym) -> Sample:
    vol = grid.cell_volume
    s = Sample(t, float(u.sum() * vol), float(u.max()), float(u.min()), _gradient_max(u, grid))
    s.l1 = float(np.abs(u).sum() * vol)
    if grid.dim == 1:
        s.fronts = front_positions(u, grid.centers(0), level)
    if with_sym:
        s.sym = symmetry_deviation(u, grid)
    if prob.exact is not None:
        e = error_norms(u, prob.exact, grid, t)
        s.err = (e.l1, e.linf)
    return s


def _write_series(path: Path, samples: list[Sample], dim: int) -> None:
    cols = ["t", "mass", "max_u", "min_u", "max_gradient"]
    has_err = any(s.err is not None for s in samples)
    has_sym = any(s.sym is not None for s in samples)
    if has_err:
        cols += ["err_l1", "err_linf"]
    if has_sym:
        cols.append("symmetry_deviation")
    if dim == 1:
        cols.append("front_positions")
    rows = [" ".join(cols)]
    for s in samples:
        vals = [_fmt(v) for v in (s.t, s.mass, s.max_u, s.min_u, s.max_grad)]
        if has_err:
            vals += [_fmt(v) for v in s.err]
        if has_sym:
            vals.append(_fmt(s.sym))
        if dim == 1:
            vals.append(",".join(_fmt(x) for x in s.fronts) or "none")
        rows.append(" ".join(vals))
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def _is_conservative(prob: models.ProblemSpec) -> bool:
    probe = np.linspace(-1.0, 2.0, 31)
    return bool(np.all(prob.g(probe) == 0)) and prob.bc.kinds() == {PERIODIC}


def _summary_lines(cfg, prob, scheme, grid, result: RunResult, samples, status) -> list[str]:
    first, last = samples[0], samples[-1]
    u0max = first.max_u
    lines = [
        f"problem = {prob.name}",
        "parameters = " + ", ".join(f"{k}={v}" for k, v in sorted(prob.params.items())),
        f"scheme = {scheme.describe()}",
    ]
    if scheme.reconstruction.kind == "eno":
        lines.append(f"eno_bias = {scheme.reconstruction.eno_bias}")
    lines += [
        f"kernel_backend = {kernels.BACKEND}",
        "cells = " + "x".join(str(n) for n in grid.m),
        f"ghost = {grid.ghost}",
        f"cfl = {scheme.cfl}",
        f"phi = {_fmt(result.phi)}",
        f"steps = {result.steps}",
        f"status = {status}",
        f"t_final = {_fmt(result.state.t)}",
        f"min_u = {_fmt(result.min_u)}",
        f"max_u_initial = {_fmt(u0max)}",
    ]
    if first.min_u >= 0:
        bound = -cfg.positivity_tol * u0max
        ok = result.min_u >= bound
        lines.append(f"positivity = {'ok' if ok else 'violated'} (min u {_fmt(result.min_u)}, bound {_fmt(bound)})")
    # relative to the initial L1 norm, which stays meaningful for zero-mean data
    drift = (last.mass - first.mass) / first.l1 if first.l1 else last.mass - first.mass
    lines.append(f"mass_initial = {_fmt(first.mass)}")
    lines.append(f"mass_final = {_fmt(last.mass)}")
    tag = "conservation_drift" if _is_conservative(prob) else "mass_change"
    lines.append(f"{tag} = {_fmt(drift)}")
    if last.err is not None:
        lines.append(f"error_l1_final = {_fmt(last.err[0])}")
        lines.append(f"error_linf_final = {_fmt(last.err[1])}")
    if grid.dim == 1:
        tracked = [(s.t, max(s.fronts)) for s in samples if s.fronts]
        late = [(t, x) for t, x in tracked if t >= 0.5 * cfg.T]
        if len(late) >= 2:
            tt, xx = zip(*late)
            lines.append(f"front_speed = {_fmt(wave_speed(tt, xx))}")
        if len(first.fronts) >= 2:
            tc = contact_time([s.t for s in samples], [s.fronts for s in samples], before=len(first.fronts))
            lines.append(f"contact_time = {_fmt(tc) if tc is not None else 'none'}")
    if last.sym is not None:
        lines.append(f"symmetry_deviation_initial = {_fmt(first.sym)}")
        lines.append(f"symmetry_deviation_min = {_fmt(min(s.sym for s in samples))}")
    return lines


# ---------------------------------------------------------------- commands

def run(cfg: RunConfig, output_dir: Path) -> int:
    prob = cfg.problem()
    scheme = cfg.scheme()
    grid = make_grid(prob, cfg.m if len(cfg.m) > 1 else cfg.m[0], scheme)
    output_dir.mkdir(parents=True, exist_ok=True)
    with_sym = grid.dim == 2 and _symmetric_domain(grid)
    samples: list[Sample] = []

    def on_stop(state):
        u = state.u.interior
        k = len(samples)
        write_grid_file(output_dir / f"u_{k:04d}_t{state.t:.6f}.txt", grid, u)
        samples.append(_sample(u, state.t, grid, prob, cfg.front_level, with_sym))

    extinction = cfg.extinction
    if extinction is None and prob.steady_states == (0.0,):
        extinction = 1e-6
    t0 = time.perf_counter()
    status, code, result = "completed", EXIT_OK, None
    try:
        result = integrate(prob, grid, scheme, cfg.T, stop_times=cfg.times, on_stop=on_stop,
                           extinction_rel=extinction)
        if result.status == "extinct":
            status = f"extinct at t_ext={result.t_extinct:.10g}"
    except NumericalFailure as exc:
        status, code = f"failed: {exc}", EXIT_NUMERICAL
        log.error("numerical failure: %s", exc)
    if samples:
        _write_series(output_dir / "series.txt", samples, grid.dim)
    if result is not None:
        text = _summary_lines(cfg, prob, scheme, grid, result, samples, status)
    else:
        text = [f"problem = {prob.name}", f"scheme = {scheme.describe()}", f"status = {status}"]
    (output_dir / "summary.txt").write_text("\n".join(text) + "\n", encoding="utf-8")
    log.info("%s in %.2fs, outputs in %s", status, time.perf_counter() - t0, output_dir)
    print(f"status: {status}")
    return code


@dataclass
class ConvergenceRow:
    m: int
    h: float
    l1: float
    l2: float
    linf: float


def _final_solution(prob, scheme, m, T):
    grid = make_grid(prob, m, scheme)
    res = integrate(prob, grid, scheme, T)
    return grid, res.state.u.interior.copy()


def convergence_table(prob, scheme: SchemeConfig, grids, T: float, reference_m: Optional[int] = None,
                      jobs: int = 1) -> list[ConvergenceRow]:
    """Errors at ``T`` on each grid against the exact solution or a fine-grid run."""
    grids = [int(m) for m in grids]
    if len(grids) < 3:
        raise ValueError("a convergence study needs at least 3 grids")
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        sols = list(pool.map(lambda m: _final_solution(prob, scheme, m, T), grids))
        ref = None
        if prob.exact is None:
            ref = pool.submit(_final_solution, prob, scheme, reference_m or 4 * max(grids), T).result()
    rows = []
    for m, (grid, u) in zip(grids, sols):
        if ref is None:
            e = error_norms(u, prob.exact, grid, T)
        else:
            e = error_norms(u, interpolate_reference(ref[1], ref[0], grid), grid)
        rows.append(ConvergenceRow(m, max(grid.h), e.l1, e.l2, e.linf))
    return rows


def _rate_text(e0: float, e1: float, h0: float, h1: float) -> str:
    if e0 == 0 and e1 == 0:
        return "exact"
    if e0 <= 0 or e1 <= 0:
        return "n/a"
    return "%.4f" % convergence_rate([e0, e1], [h0, h1]).rates[0]


def format_rate_table(rows: list[ConvergenceRow]) -> str:
    out = ["m h L1 L2 Linf rate_L1 rate_L2 rate_Linf"]
    for i, r in enumerate(rows):
        vals = [str(r.m)] + [_fmt(v) for v in (r.h, r.l1, r.l2, r.linf)]
        if i == 0:
            vals += ["-"] * 3
        else:
            p = rows[i - 1]
            vals += [_rate_text(getattr(p, n), getattr(r, n), p.h, r.h) for n in ("l1", "l2", "linf")]
        out.append(" ".join(vals))
    return "\n".join(out) + "\n"


def converge(cfg: RunConfig, output_dir: Path, grids=None, jobs: int = 1) -> int:
    grids = tuple(grids or cfg.grids)
    if len(grids) < 3:
        raise ConfigError("a convergence study needs at least 3 grids",
                          cfg.lines.get(("grid", "grids"), cfg.lines.get(("grid", None))), cfg.source)
    prob = cfg.problem()
    scheme = cfg.scheme()
    output_dir.mkdir(parents=True, exist_ok=True)
    try:
        rows = convergence_table(prob, scheme, grids, cfg.T, cfg.reference_m, jobs)
    except NumericalFailure as exc:
        log.error("numerical failure: %s", exc)
        print(f"status: failed: {exc}")
        return EXIT_NUMERICAL
    (output_dir / "convergence.txt").write_text(format_rate_table(rows), encoding="utf-8")
    lines = [f"problem = {prob.name}", f"scheme = {scheme.describe()}", f"T = {_fmt(cfg.T)}",
             "reference = " + ("exact" if prob.exact is not None else f"m={cfg.reference_m or 4 * max(grids)}")]
    for norm in ("l1", "l2", "linf"):
        errs = [getattr(r, norm) for r in rows]
        if all(e > 0 for e in errs):
            lines.append(f"fitted_rate_{norm} = {fitted_rate(errs, [r.h for r in rows]):.4f}")
        else:
            lines.append(f"fitted_rate_{norm} = " + ("exact" if not any(errs) else "n/a"))
    (output_dir / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(format_rate_table(rows), end="")
    return EXIT_OK


def list_problems() -> int:
    for pid, ctor in models.PROBLEMS.items():
        params = ", ".join(
            f"{n}={p.default!r}" for n, p in inspect.signature(ctor).parameters.items() if n != "ring"
        )
        print(f"{pid}: {models.PROBLEM_HELP[pid]}")
        print(f"    parameters: {params}")
        if pid == "pme_absorption":
            print("    ring_bump keys: " + ", ".join(RING_KEYS))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relaxrd", description="Relaxed IMEX/ENO solver for reaction-diffusion problems.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (("run", "run one configuration"),
                            ("converge", "convergence study over several grids"),
                            ("validate-config", "check a configuration without running it")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True)
        sp.add_argument("--override", action="append", default=[], metavar="SECTION.KEY=VALUE")
        if name != "validate-config":
            sp.add_argument("--output-dir", default=None)
        if name == "converge":
            sp.add_argument("--grids", default=None, help="comma separated cell counts")
            sp.add_argument("--jobs", type=int, default=1)
    sub.add_parser("list-problems", help="show available problems and parameters")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "list-problems":
        return list_problems()
    try:
        cfg = load_config(args.config, args.override)
        if args.command == "validate-config":
            scheme = cfg.scheme()
            print(f"ok: {cfg.problem_id} on {'x'.join(map(str, cfg.m))} cells, {scheme.describe()}, "
                  f"ghost {scheme.ghost}, T={cfg.T:g}, {len(cfg.times)} output times")
            return EXIT_OK
        out = resolve_output_dir(cfg, args.output_dir)
        if args.command == "run":
            return run(cfg, out)
        grids = None
        if args.grids:
            try:
                grids = [int(s) for s in args.grids.split(",")]
            except ValueError:
                raise ConfigError(f"bad --grids value {args.grids!r}", None, "--grids") from None
        return converge(cfg, out, grids, args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
