"""Pure numpy/Python fallback backend.

Data-parallel kernels come from the vectorized module; inherently
sequential ones (peeling, assignment, slab writes) are the shared loop
kernels executed as plain Python.  The fallback is bit-identical to the
numba backend, just slower on the sequential parts.
"""

import functools

import numpy as np

from . import _vector
from ._loops import make_kernels


def _pyjit(func):
    # numpy warns on uint64 *scalar* overflow even though the wraparound
    # is exactly what the mixing functions want; arrays wrap silently.
    @functools.wraps(func)
    def wrapper(*args):
        with np.errstate(over="ignore"):
            return func(*args)

    return wrapper


KERNELS = make_kernels(_pyjit)
KERNELS.name = "numpy"
KERNELS.sign_batch = _vector.sign_batch
KERNELS.shard_local_batch = _vector.shard_local_batch
KERNELS.edges_from_locals = _vector.edges_from_locals
KERNELS.filter_hash_batch = _vector.filter_hash_batch
KERNELS.build_incidence = _vector.build_incidence
KERNELS.find_core = _vector.find_core
KERNELS.slab_get_batch = _vector.slab_get_batch
KERNELS.query_batch = _vector.query_batch
KERNELS.filter_query_batch = _vector.filter_query_batch
