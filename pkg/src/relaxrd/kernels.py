"""Backend selection for the reconstruction kernels.

The compiled extension is used when it was built; otherwise, or when
``RELAXRD_PURE_PYTHON=1`` is set, the NumPy implementation is used.
"""
import os

from . import _kernels_py

_FORCE_PY = os.environ.get("RELAXRD_PURE_PYTHON", "").strip() not in ("", "0")

try:
    if _FORCE_PY:
        raise ImportError("pure-python backend forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

backend = _compiled if _compiled is not None else _kernels_py
BACKEND = backend.NAME


def get_backend(name=None):
    """Return the kernel module called ``name`` (``"cython"`` or ``"numpy"``)."""
    if name is None:
        return backend
    if name == "numpy":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def compiled_available() -> bool:
    return _compiled is not None
