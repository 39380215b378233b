"""Shared 64-bit constants for the mixing functions.

Stored as ``np.uint64`` so that numba-compiled kernels see properly
typed unsigned constants (mixing a plain Python int literal with a
uint64 operand would promote to float64 under numba's rules).
"""

import numpy as np

MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
MASK32 = np.uint64(0xFFFFFFFF)

# MurmurHash3 x64 128 block constants.
MM3_C1 = np.uint64(0x87C37B91114253D5)
MM3_C2 = np.uint64(0x4CF5AB832479917F)
MM3_F1 = np.uint64(0xFF51AFD7ED558CCD)
MM3_F2 = np.uint64(0xC4CEB9FE1A85EC53)
MM3_N1 = np.uint64(0x52DCE729)
MM3_N2 = np.uint64(0x38495AB5)

# Three independent xorshift-multiply finalizers for the per-edge vertex
# offsets, plus a fourth for filter hashes.  All are published avalanche
# mixers and all map 0 -> 0.
# A: MurmurHash3 fmix64.
MIX_A1 = MM3_F1
MIX_A2 = MM3_F2
# B: splitmix64 finalizer (Stafford mix13).
MIX_B1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_B2 = np.uint64(0x94D049BB133111EB)
# C: Stafford mix01.
MIX_C1 = np.uint64(0x7FB5D329728EA185)
MIX_C2 = np.uint64(0x81DADEF4BC2DD44D)
# D: Evensen's "moremur".
MIX_D1 = np.uint64(0x3C79AC492BA7B653)
MIX_D2 = np.uint64(0x1C69B3F74AC4AE35)

U0 = np.uint64(0)
U1 = np.uint64(1)
U2 = np.uint64(2)
U3 = np.uint64(3)
U5 = np.uint64(5)
U8 = np.uint64(8)
U27 = np.uint64(27)
U28 = np.uint64(28)
U29 = np.uint64(29)
U30 = np.uint64(30)
U31 = np.uint64(31)
U32 = np.uint64(32)
U33 = np.uint64(33)
U63 = np.uint64(63)
U64C = np.uint64(64)
