"""Kernels compiled with numba (nogil, so shard workers overlap)."""

import numba

from ._loops import make_kernels


def _jit(func):
    return numba.njit(func, nogil=True)


KERNELS = make_kernels(_jit)
KERNELS.name = "numba"
