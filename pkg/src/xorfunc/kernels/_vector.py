"""Vectorized numpy implementations of the data-parallel kernels.

Used by the numpy backend in place of the (slow, plain-Python) loop
versions.  Signatures mirror ``_loops`` so the backends are drop-in
replacements; outputs are bit-identical.
"""

import numpy as np

from ._consts import (
    MASK32,
    MIX_A1,
    MIX_A2,
    MIX_B1,
    MIX_B2,
    MIX_C1,
    MIX_C2,
    MIX_D1,
    MIX_D2,
    MM3_C1,
    MM3_C2,
    U0,
    U1,
    U8,
    U27,
    U30,
    U31,
    U32,
    U33,
    U63,
    U64C,
)


def _fmix_a(z):
    z = z ^ (z >> U33)
    z = z * MIX_A1
    z = z ^ (z >> U33)
    z = z * MIX_A2
    return z ^ (z >> U33)


def _fmix_b(z):
    z = z ^ (z >> U30)
    z = z * MIX_B1
    z = z ^ (z >> U27)
    z = z * MIX_B2
    return z ^ (z >> U31)


def _fmix_c(z):
    z = z ^ (z >> U31)
    z = z * MIX_C1
    z = z ^ (z >> U27)
    z = z * MIX_C2
    return z ^ (z >> U33)


def _fmix_d(z):
    z = z ^ (z >> U27)
    z = z * MIX_D1
    z = z ^ (z >> U33)
    z = z * MIX_D2
    return z ^ (z >> U27)


def _mul_hi(a, b):
    alo = a & MASK32
    ahi = a >> U32
    blo = b & MASK32
    bhi = b >> U32
    t = alo * blo
    w = ahi * blo + (t >> U32)
    w2 = alo * bhi + (w & MASK32)
    return ahi * bhi + (w >> U32) + (w2 >> U32)


def _sign_arrays(keys, seed):
    seed = np.uint64(seed)
    k1 = keys * MM3_C1
    k1 = (k1 << U31) | (k1 >> U33)
    k1 = k1 * MM3_C2
    h1 = (seed ^ U8) ^ k1
    h2 = np.uint64(int(seed) ^ 8)
    h1 = h1 + h2
    h2 = h2 + h1
    h1 = _fmix_a(h1)
    h2 = _fmix_a(h2)
    h1 = h1 + h2
    h2 = h2 + h1
    return h1, h2


def sign_batch(keys, seed, hi, lo):
    h1, h2 = _sign_arrays(keys, seed)
    hi[:] = h1
    lo[:] = h2


def shard_local_batch(hi, lo, h, shard, local):
    if h == U0:
        shard[:] = 0
        local[:] = hi
    else:
        sh = U64C - h
        shard[:] = (hi >> sh).astype(np.uint32)
        local[:] = (hi << h) | (lo >> sh)


def _edges(local, kind, nseg, segsize, part):
    if kind == U1:
        seg = _mul_hi(local, nseg)
        a = seg * segsize + _mul_hi(_fmix_a(local), segsize)
        b = (seg + U1) * segsize + _mul_hi(_fmix_b(local), segsize)
        c = (seg + U1 + U1) * segsize + _mul_hi(_fmix_c(local), segsize)
    else:
        a = _mul_hi(_fmix_a(local), part)
        b = part + _mul_hi(_fmix_b(local), part)
        c = part + part + _mul_hi(_fmix_c(local), part)
    return a, b, c


def edges_from_locals(locs, kind, nseg, segsize, part, v0, v1, v2):
    a, b, c = _edges(locs, kind, nseg, segsize, part)
    v0[:] = a.astype(np.uint32)
    v1[:] = b.astype(np.uint32)
    v2[:] = c.astype(np.uint32)


def filter_hash_batch(locs, mask, out):
    out[:] = _fmix_d(locs) & mask


def build_incidence(v0, v1, v2, locs, values, by_index, degside, xor_pay, xor_val):
    nv = degside.shape[0]
    deg = np.bincount(v0, minlength=nv).astype(np.uint32)
    deg += np.bincount(v1, minlength=nv).astype(np.uint32)
    deg += np.bincount(v2, minlength=nv).astype(np.uint32)
    degside += deg << 2
    if by_index == U1:
        pay = np.arange(v0.shape[0], dtype=np.uint64)
    else:
        pay = locs
    np.bitwise_xor.at(xor_pay, v0, pay)
    np.bitwise_xor.at(xor_pay, v1, pay)
    np.bitwise_xor.at(xor_pay, v2, pay)
    if by_index == U0:
        np.bitwise_xor.at(xor_val, v0, values)
        np.bitwise_xor.at(xor_val, v1, values)
        np.bitwise_xor.at(xor_val, v2, values)


def find_core(locs, kind, nseg, segsize, part, degside, out_mask):
    a, b, c = _edges(locs, kind, nseg, segsize, part)
    deg = degside >> 2
    alive = (deg[a] >= 1) & (deg[b] >= 1) & (deg[c] >= 1)
    out_mask[:] = alive.astype(np.uint8)
    return int(alive.sum())


def _slab_gather(words, idx, bbits, mask):
    bit = idx * bbits
    w = (bit >> np.uint64(6)).astype(np.int64)
    off = bit & U63
    val = words[w] >> off
    w1 = np.minimum(w + 1, words.shape[0] - 1)
    sh = (U64C - off) & U63
    spill = np.where(off + bbits > U64C, words[w1] << sh, U0)
    return (val | spill) & mask


def slab_get_batch(words, idx, bbits, mask, out):
    out[:] = _slab_gather(words, idx, bbits, mask)


def _query_values(keys, seed, h, use_lo, kind, nseg, segsize, part,
                  shard_vertices, words, bbits, mask):
    h1, h2 = _sign_arrays(keys, seed)
    if use_lo == U0:
        h2 = np.zeros_like(h1)
    if h == U0:
        base = np.uint64(0)
        local = h1
    else:
        sh = U64C - h
        base = (h1 >> sh) * shard_vertices
        local = (h1 << h) | (h2 >> sh)
    a, b, c = _edges(local, kind, nseg, segsize, part)
    got = _slab_gather(words, base + a, bbits, mask)
    got ^= _slab_gather(words, base + b, bbits, mask)
    got ^= _slab_gather(words, base + c, bbits, mask)
    return got, local


def query_batch(keys, seed, h, use_lo, kind, nseg, segsize, part,
                shard_vertices, words, bbits, mask, out):
    got, _ = _query_values(keys, seed, h, use_lo, kind, nseg, segsize, part,
                           shard_vertices, words, bbits, mask)
    out[:] = got


def filter_query_batch(keys, seed, h, use_lo, kind, nseg, segsize, part,
                       shard_vertices, words, bbits, mask, out):
    got, local = _query_values(keys, seed, h, use_lo, kind, nseg, segsize, part,
                               shard_vertices, words, bbits, mask)
    out[:] = (got == (_fmix_d(local) & mask)).astype(np.uint8)
