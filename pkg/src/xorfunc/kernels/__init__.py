"""Backend selection for the hot kernels.

Two interchangeable backends implement the same set of functions:

* ``numba`` -- the loop kernels in ``_loops`` compiled with ``@njit``
  (``nogil=True`` so shard workers can overlap).
* ``numpy`` -- vectorized numpy for the data-parallel kernels plus the
  same ``_loops`` code run as plain Python for the sequential ones
  (peeling, assignment).  Slow, but it has no compiler dependency and
  is bit-for-bit identical to the numba backend.

The backend is fixed once per process: set ``XORFUNC_NO_NUMBA=1`` to
force the numpy fallback.  ``benchmarks/compare_backends.py`` runs the
same workload under both flags.
"""

import os

_BACKEND = None


def backend_name() -> str:
    """Name of the selected backend ("numba" or "numpy")."""
    return get_kernels().name


def _numba_disabled() -> bool:
    return os.environ.get("XORFUNC_NO_NUMBA", "").strip() in ("1", "true", "yes")


def get_kernels():
    """Return the kernel namespace, importing and (if numba) compiling lazily.

    Deliberately lazy so that pure-math entry points (``xorfunc.bounds``,
    the ``bounds`` CLI subcommand) never pay the JIT compilation cost.
    """
    global _BACKEND
    if _BACKEND is None:
        if not _numba_disabled():
            try:
                from . import _numba_backend as mod
            except ImportError:
                from . import _numpy_backend as mod
        else:
            from . import _numpy_backend as mod
        _BACKEND = mod.KERNELS
    return _BACKEND
