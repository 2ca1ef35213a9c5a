"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
twin. Set ``KANMI_BACKEND=python`` (or ``cython``) to force one.
"""
import os

from . import _pykernels

BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels


def _select():
    wanted = os.environ.get("KANMI_BACKEND", "").strip().lower()
    if wanted:
        if wanted not in ("python", "cython"):
            raise ImportError(f"unknown KANMI_BACKEND {wanted!r}")
        if wanted not in BACKENDS:
            raise ImportError("KANMI_BACKEND=cython but the extension is not built")
        return wanted
    return "cython" if "cython" in BACKENDS else "python"


BACKEND = _select()


def get(name=None):
    """Kernel module for ``name`` (default: the selected backend)."""
    return BACKENDS[name or BACKEND]
