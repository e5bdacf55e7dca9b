"""Kernel backend selection.

The env flag HYPERGCL_BACKEND picks the implementation of the hot kernels:

    HYPERGCL_BACKEND=numba   jitted kernels (default when numba imports)
    HYPERGCL_BACKEND=numpy   pure-numpy fallback

Both backends expose the same functions; see benchmarks/bench_kernels.py
for a speed comparison.
"""

import logging
import os

from .errors import ConfigError

logger = logging.getLogger(__name__)

_CHOICE = os.environ.get("HYPERGCL_BACKEND", "").strip().lower()

if _CHOICE not in ("", "numba", "numpy"):
    raise ConfigError(f"HYPERGCL_BACKEND must be 'numba' or 'numpy', got {_CHOICE!r}")

if _CHOICE == "numpy":
    from . import _kernels_numpy as kernels
elif _CHOICE == "numba":
    from . import _kernels_numba as kernels
else:
    try:
        from . import _kernels_numba as kernels
    except ImportError:
        logger.warning("numba unavailable; falling back to pure-numpy kernels")
        from . import _kernels_numpy as kernels

K = kernels


def backend_name():
    return K.NAME
