"""Select the kernel implementation at import time.

The compiled extension is used when it was built; otherwise the numpy
fallback. Set ``TWOLEVEL_BACKEND=python`` to force the fallback, or
``TWOLEVEL_BACKEND=cython`` to make a missing extension an import error.
"""
import os

_choice = os.environ.get("TWOLEVEL_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "python", "cython"):
    raise ImportError(f"TWOLEVEL_BACKEND must be auto, python or cython, not {_choice!r}")

kernels = None
if _choice != "python":
    try:
        from . import _ckernels as kernels
    except ImportError:
        if _choice == "cython":
            raise
if kernels is None:
    from . import _pykernels as kernels

BACKEND = "cython" if kernels.__name__.endswith("_ckernels") else "python"


def load(name):
    """Import a specific backend module by name ("cython" or "python")."""
    if name == "cython":
        from . import _ckernels
        return _ckernels
    if name == "python":
        from . import _pykernels
        return _pykernels
    raise ValueError(f"unknown backend {name!r}")
