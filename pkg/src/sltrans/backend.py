"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the
pure-Python kernel is the fallback.  ``SLTRANS_BACKEND=python`` or
``SLTRANS_BACKEND=compiled`` forces a choice (the latter raises if the
extension is unavailable), which the benchmark and the backend-equivalence
tests rely on.
"""

import os

from . import _kernel_py


def _load(name: str):
    if name == "python":
        return _kernel_py
    from . import _kernel  # may raise ImportError
    return _kernel


_forced = os.environ.get("SLTRANS_BACKEND", "").strip().lower()
if _forced in ("python", "compiled"):
    kernel = _load(_forced)
elif _forced:
    raise ValueError(f"SLTRANS_BACKEND must be 'python' or 'compiled', got {_forced!r}")
else:
    try:
        kernel = _load("compiled")
    except ImportError:
        kernel = _kernel_py

BACKEND = "compiled" if kernel.COMPILED else "python"


def get_kernel(name: str | None = None):
    """The active kernel module, or a specific one by name."""
    if name is None:
        return kernel
    return _load(name)
