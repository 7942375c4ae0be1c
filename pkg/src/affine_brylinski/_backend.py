"""Select the compiled GF(p) kernel when available, else the numpy fallback.

Set ``AFFINE_BRYLINSKI_PURE=1`` to force the fallback.
"""

import os

from . import _modcore_py

BACKEND = "python"
rref_mod = _modcore_py.rref_mod

if not os.environ.get("AFFINE_BRYLINSKI_PURE"):
    try:
        from . import _modcore  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _modcore = None
    else:
        BACKEND = "cython"
        rref_mod = _modcore.rref_mod


def kernels() -> dict:
    """All importable implementations, keyed by name."""
    out = {"python": _modcore_py.rref_mod}
    try:
        from . import _modcore  # type: ignore[attr-defined]
        out["cython"] = _modcore.rref_mod
    except ImportError:
        pass
    return out
