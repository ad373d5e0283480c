"""Implicit/explicit Butcher tableau pairs and their order conditions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TableauPair:
    """Diagonally implicit part ``(a, b)`` paired with explicit part ``(a_ex, b_ex)``."""

    name: str
    a: np.ndarray
    b: np.ndarray
    a_ex: np.ndarray
    b_ex: np.ndarray
    order: int

    def __post_init__(self):
        for attr in ("a", "b", "a_ex", "b_ex"):
            arr = np.array(getattr(self, attr), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, attr, arr)
        nu = self.stages
        if self.a.shape != (nu, nu) or self.a_ex.shape != (nu, nu) or self.b_ex.shape != (nu,):
            raise ValueError("tableau shapes are inconsistent")
        if np.any(np.triu(self.a_ex) != 0):
            raise ValueError("explicit part must be strictly lower triangular")
        if np.any(np.triu(self.a, 1) != 0):
            raise ValueError("implicit part must be lower triangular")
        if np.any(np.diag(self.a) < 0):
            raise ValueError("implicit diagonal must be non-negative")

    @property
    def stages(self) -> int:
        return self.b.size

    @property
    def c(self) -> np.ndarray:
        return self.a.sum(axis=1)

    @property
    def c_ex(self) -> np.ndarray:
        return self.a_ex.sum(axis=1)

    def needed_stages(self) -> list[bool]:
        """Stages whose explicit operator evaluation is used by a later stage or the update."""
        used = self.b_ex != 0
        for k in range(self.stages):
            used[k] |= bool(np.any(self.a_ex[k + 1 :, k] != 0))
        return used.tolist()


@dataclass
class OrderCheck:
    passed: bool
    residuals: dict[str, float] = field(default_factory=dict)
    violated: list[str] = field(default_factory=list)


def check_order_conditions(t: TableauPair, p: int, tol: float = 1e-12) -> OrderCheck:
    """Evaluate classical and coupling order conditions up to order ``p``.

    Every mix of weights, matrices and abscissae from the two parts is checked,
    which covers both single-method conditions and the additive coupling ones.
    """
    if p not in (1, 2, 3):
        raise ValueError("only orders 1..3 are supported")
    parts = {"I": (t.a, t.b, t.c), "E": (t.a_ex, t.b_ex, t.c_ex)}
    res: dict[str, float] = {}
    for s in "IE":
        res[f"sum b[{s}] = 1"] = float(parts[s][1].sum() - 1.0)
    if p >= 2:
        for s, n in itertools.product("IE", repeat=2):
            res[f"b[{s}].c[{n}] = 1/2"] = float(parts[s][1] @ parts[n][2] - 0.5)
    if p >= 3:
        for s, n, m in itertools.product("IE", repeat=3):
            b, cn, cm = parts[s][1], parts[n][2], parts[m][2]
            res[f"b[{s}].(c[{n}] c[{m}]) = 1/3"] = float(b @ (cn * cm) - 1.0 / 3.0)
            res[f"b[{s}].A[{n}].c[{m}] = 1/6"] = float(b @ parts[n][0] @ cm - 1.0 / 6.0)
    violated = [k for k, v in res.items() if abs(v) >= tol]
    return OrderCheck(passed=not violated, residuals=res, violated=violated)


def _imex111() -> TableauPair:
    return TableauPair("IMEX111", a=[[1.0]], b=[1.0], a_ex=[[0.0]], b_ex=[1.0], order=1)


def _ars222() -> TableauPair:
    g = 1.0 - 1.0 / np.sqrt(2.0)
    d = 1.0 - 1.0 / (2.0 * g)
    a = [[0, 0, 0], [0, g, 0], [0, 1 - g, g]]
    a_ex = [[0, 0, 0], [g, 0, 0], [d, 1 - d, 0]]
    return TableauPair("ARS222", a=a, b=[0, 1 - g, g], a_ex=a_ex, b_ex=[d, 1 - d, 0], order=2)


def _ars443() -> TableauPair:
    a = [
        [0, 0, 0, 0, 0],
        [0, 1 / 2, 0, 0, 0],
        [0, 1 / 6, 1 / 2, 0, 0],
        [0, -1 / 2, 1 / 2, 1 / 2, 0],
        [0, 3 / 2, -3 / 2, 1 / 2, 1 / 2],
    ]
    a_ex = [
        [0, 0, 0, 0, 0],
        [1 / 2, 0, 0, 0, 0],
        [11 / 18, 1 / 18, 0, 0, 0],
        [5 / 6, -5 / 6, 1 / 2, 0, 0],
        [1 / 4, 7 / 4, 3 / 4, -7 / 4, 0],
    ]
    return TableauPair(
        "ARS443", a=a, b=[0, 3 / 2, -3 / 2, 1 / 2, 1 / 2],
        a_ex=a_ex, b_ex=[1 / 4, 7 / 4, 3 / 4, -7 / 4, 0], order=3,
    )


_BUILDERS = {"IMEX111": _imex111, "ARS222": _ars222, "ARS443": _ars443}
TABLEAU_IDS = tuple(_BUILDERS)


def tableau(scheme_id: str) -> TableauPair:
    """Return a shipped tableau pair after gating it on its design order."""
    key = scheme_id.strip().upper()
    if key not in _BUILDERS:
        raise ValueError(f"unknown IMEX scheme {scheme_id!r}; choose from {', '.join(TABLEAU_IDS)}")
    t = _BUILDERS[key]()
    check = check_order_conditions(t, t.order)
    if not check.passed:
        raise RuntimeError(f"{key} fails order conditions: {check.violated}")
    return t
