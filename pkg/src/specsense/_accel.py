"""Numba acceleration switch.

Hot kernels are compiled with numba by default. Setting SPECSENSE_NO_NUMBA=1
(or the standard NUMBA_DISABLE_JIT=1) selects the pure NumPy/Python fallback
path instead; results are identical either way, only speed differs.
"""

import os


def numba_enabled() -> bool:
    if os.environ.get("SPECSENSE_NO_NUMBA", "0") == "1":
        return False
    if os.environ.get("NUMBA_DISABLE_JIT", "0") == "1":
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = numba_enabled()

if NUMBA_ENABLED:
    from numba import njit
else:
    def njit(*args, **kwargs):
        # signature-compatible no-op decorator
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap
