"""numba shim.

Set ``FOBOSON_DISABLE_JIT=1`` to force the pure-numpy kernels; they are
also used when numba is not importable.
"""
import os
import warnings

_flag = os.environ.get("FOBOSON_DISABLE_JIT", "").strip().lower()
DISABLED = _flag not in ("", "0", "false", "no")

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kw):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

if not HAS_NUMBA and not DISABLED:  # pragma: no cover
    warnings.warn("numba is not available, theta kernels fall back to numpy", RuntimeWarning)

USE_JIT = HAS_NUMBA and not DISABLED
