"""Numba availability and the env switch for the pure-numpy fallback.

Set ``WAVECAUCHY_NUMBA=0`` to force the numpy implementations of the hot
kernels; default is to JIT-compile them when numba imports cleanly.
"""

import os
import warnings

ENV_FLAG = "WAVECAUCHY_NUMBA"


def env_wants_numba() -> bool:
    value = os.environ.get(ENV_FLAG, "1").strip().lower()
    return value not in {"0", "false", "off", "no"}


try:  # pragma: no cover - exercised indirectly via _kernels
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        import numba
        from numba import njit, prange  # noqa: F401

    # the portable threading layer; avoids TBB/OMP version probing at first
    # parallel call
    numba.config.THREADING_LAYER = "workqueue"
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

    prange = range  # type: ignore[assignment]

USE_NUMBA = HAVE_NUMBA and env_wants_numba()
