"""Loop kernels shared by both backends.

``make_kernels(jit)`` builds the whole kernel set with ``jit`` applied to
every function; the numba backend passes ``numba.njit``, the numpy
backend an identity wrapper.  Keeping the kernels inside a factory lets
cross-calls resolve to the jitted closures, so the same source serves
both backends.

Conventions (important for numba typing):

* every value taking part in 64-bit unsigned arithmetic is ``uint64``;
  bare int literals never touch uint64 expressions (they would promote
  to float64 under numba's unification rules);
* vertex indices fit ``uint32``; per-vertex state is a packed uint32
  ``degside`` word: degree in the high 30 bits, peel side in the low 2;
* slab words are little-endian uint64; a b-bit read touches at most two
  words.
"""

from types import SimpleNamespace

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
    U2,
    U8,
    U27,
    U30,
    U31,
    U32,
    U33,
    U63,
    U64C,
)

_DEG1 = np.uint32(4)  # one unit of degree in the packed degside word


def make_kernels(jit):
    # ---- scalar mixing helpers ------------------------------------------

    @jit
    def mul_hi(a, b):
        alo = a & MASK32
        ahi = a >> U32
        blo = b & MASK32
        bhi = b >> U32
        t = alo * blo
        w = ahi * blo + (t >> U32)
        w2 = alo * bhi + (w & MASK32)
        return ahi * bhi + (w >> U32) + (w2 >> U32)

    @jit
    def fmix_a(z):
        z ^= z >> U33
        z *= MIX_A1
        z ^= z >> U33
        z *= MIX_A2
        z ^= z >> U33
        return z

    @jit
    def fmix_b(z):
        z ^= z >> U30
        z *= MIX_B1
        z ^= z >> U27
        z *= MIX_B2
        z ^= z >> U31
        return z

    @jit
    def fmix_c(z):
        z ^= z >> U31
        z *= MIX_C1
        z ^= z >> U27
        z *= MIX_C2
        z ^= z >> U33
        return z

    @jit
    def fmix_d(z):
        z ^= z >> U27
        z *= MIX_D1
        z ^= z >> U33
        z *= MIX_D2
        z ^= z >> U27
        return z

    @jit
    def sign1(key, seed):
        # MurmurHash3 x64 128 specialised to one 8-byte little-endian block.
        k1 = key * MM3_C1
        k1 = (k1 << U31) | (k1 >> U33)
        k1 *= MM3_C2
        h1 = seed ^ k1 ^ U8
        h2 = seed ^ U8
        h1 = h1 + h2
        h2 = h2 + h1
        h1 = fmix_a(h1)
        h2 = fmix_a(h2)
        h1 = h1 + h2
        h2 = h2 + h1
        return h1, h2

    @jit
    def edge3(local, kind, nseg, segsize, part):
        if kind == U1:
            seg = mul_hi(local, nseg)
            a = seg * segsize + mul_hi(fmix_a(local), segsize)
            b = (seg + U1) * segsize + mul_hi(fmix_b(local), segsize)
            c = (seg + U2) * segsize + mul_hi(fmix_c(local), segsize)
        else:
            a = mul_hi(fmix_a(local), part)
            b = part + mul_hi(fmix_b(local), part)
            c = part + part + mul_hi(fmix_c(local), part)
        return a, b, c

    @jit
    def sget(words, idx, bbits, mask):
        bit = idx * bbits
        w = bit >> np.uint64(6)
        off = bit & U63
        val = words[w] >> off
        if off + bbits > U64C:
            val |= words[w + U1] << (U64C - off)
        return val & mask

    @jit
    def sset(words, idx, bbits, mask, value):
        value = value & mask
        bit = idx * bbits
        w = bit >> np.uint64(6)
        off = bit & U63
        words[w] = (words[w] & ~(mask << off)) | (value << off)
        if off + bbits > U64C:
            sh = U64C - off
            words[w + U1] = (words[w + U1] & ~(mask >> sh)) | (value >> sh)

    # ---- batch kernels ---------------------------------------------------

    @jit
    def sign_batch(keys, seed, hi, lo):
        for i in range(keys.shape[0]):
            h1, h2 = sign1(keys[i], seed)
            hi[i] = h1
            lo[i] = h2

    @jit
    def shard_local_batch(hi, lo, h, shard, local):
        n = hi.shape[0]
        if h == U0:
            for i in range(n):
                shard[i] = np.uint32(0)
                local[i] = hi[i]
        else:
            sh = U64C - h
            for i in range(n):
                shard[i] = np.uint32(hi[i] >> sh)
                local[i] = (hi[i] << h) | (lo[i] >> sh)

    @jit
    def edges_from_locals(locs, kind, nseg, segsize, part, v0, v1, v2):
        for i in range(locs.shape[0]):
            a, b, c = edge3(locs[i], kind, nseg, segsize, part)
            v0[i] = np.uint32(a)
            v1[i] = np.uint32(b)
            v2[i] = np.uint32(c)

    @jit
    def filter_hash_batch(locs, mask, out):
        for i in range(locs.shape[0]):
            out[i] = fmix_d(locs[i]) & mask

    @jit
    def build_incidence(v0, v1, v2, locs, values, by_index, degside, xor_pay, xor_val):
        for i in range(v0.shape[0]):
            if by_index == U1:
                pay = np.uint64(i)
                val = U0
            else:
                pay = locs[i]
                val = values[i]
            a = v0[i]
            b = v1[i]
            c = v2[i]
            degside[a] += _DEG1
            degside[b] += _DEG1
            degside[c] += _DEG1
            xor_pay[a] ^= pay
            xor_pay[b] ^= pay
            xor_pay[c] ^= pay
            if by_index == U0:
                xor_val[a] ^= val
                xor_val[b] ^= val
                xor_val[c] ^= val

    # ---- peeling ----------------------------------------------------------
    #
    # Stack-based visit, pre-loaded with every initial degree-1 vertex.
    # The XOR-compressed incidence slot of a degree-1 vertex holds exactly
    # the one incident edge (its local signature, or its index when peeling
    # by index).  The slot of the vertex an edge was peeled from is left in
    # place and only the degree is zeroed, so the peeled edge stays
    # recoverable (this is what the low-memory assignment relies on).

    @jit
    def peel_high(degside, xor_pay, xor_val, locs, values, by_index,
                  kind, nseg, segsize, part,
                  stack, out_pay, out_val, out_side):
        nv = degside.shape[0]
        sp = 0
        for v in range(nv):
            if degside[v] >> 2 == 1:
                stack[sp] = np.uint32(v)
                sp += 1
        peeled = 0
        while sp > 0:
            sp -= 1
            v = stack[sp]
            if degside[v] >> 2 != 1:
                continue
            pay = xor_pay[v]
            if by_index == U1:
                local = locs[pay]
                val = values[pay]
            else:
                local = pay
                val = xor_val[v]
            a, b, c = edge3(local, kind, nseg, segsize, part)
            uv = np.uint64(v)
            if a == uv:
                side = U0
            elif b == uv:
                side = U1
            else:
                side = U2
            out_pay[peeled] = local
            out_val[peeled] = val
            out_side[peeled] = np.uint8(side)
            peeled += 1

            if a == uv:
                degside[a] = np.uint32(side)
            else:
                d = (degside[a] >> 2) - 1
                degside[a] = np.uint32(d << 2)
                xor_pay[a] ^= pay
                if by_index == U0:
                    xor_val[a] ^= val
                if d == 1:
                    stack[sp] = np.uint32(a)
                    sp += 1
            if b == uv:
                degside[b] = np.uint32(side)
            else:
                d = (degside[b] >> 2) - 1
                degside[b] = np.uint32(d << 2)
                xor_pay[b] ^= pay
                if by_index == U0:
                    xor_val[b] ^= val
                if d == 1:
                    stack[sp] = np.uint32(b)
                    sp += 1
            if c == uv:
                degside[c] = np.uint32(side)
            else:
                d = (degside[c] >> 2) - 1
                degside[c] = np.uint32(d << 2)
                xor_pay[c] ^= pay
                if by_index == U0:
                    xor_val[c] ^= val
                if d == 1:
                    stack[sp] = np.uint32(c)
                    sp += 1
        return peeled

    @jit
    def peel_low(degside, xor_pay, xor_val, locs, by_index,
                 kind, nseg, segsize, part, vec):
        # One uint32 vector holds both stacks: the visit stack grows up
        # from 0, the peeled-vertex stack grows down from the end.  Total
        # occupancy never exceeds the vertex count, so they cannot meet.
        nv = degside.shape[0]
        sp = 0
        ep = nv
        for v in range(nv):
            if degside[v] >> 2 == 1:
                vec[sp] = np.uint32(v)
                sp += 1
        while sp > 0:
            sp -= 1
            v = vec[sp]
            if degside[v] >> 2 != 1:
                continue
            pay = xor_pay[v]
            if by_index == U1:
                local = locs[pay]
                val = U0
            else:
                local = pay
                val = xor_val[v]
            a, b, c = edge3(local, kind, nseg, segsize, part)
            uv = np.uint64(v)
            if a == uv:
                side = U0
            elif b == uv:
                side = U1
            else:
                side = U2
            ep -= 1
            vec[ep] = v

            if a == uv:
                degside[a] = np.uint32(side)
            else:
                d = (degside[a] >> 2) - 1
                degside[a] = np.uint32(d << 2)
                xor_pay[a] ^= pay
                if by_index == U0:
                    xor_val[a] ^= val
                if d == 1:
                    vec[sp] = np.uint32(a)
                    sp += 1
            if b == uv:
                degside[b] = np.uint32(side)
            else:
                d = (degside[b] >> 2) - 1
                degside[b] = np.uint32(d << 2)
                xor_pay[b] ^= pay
                if by_index == U0:
                    xor_val[b] ^= val
                if d == 1:
                    vec[sp] = np.uint32(b)
                    sp += 1
            if c == uv:
                degside[c] = np.uint32(side)
            else:
                d = (degside[c] >> 2) - 1
                degside[c] = np.uint32(d << 2)
                xor_pay[c] ^= pay
                if by_index == U0:
                    xor_val[c] ^= val
                if d == 1:
                    vec[sp] = np.uint32(c)
                    sp += 1
        return ep

    # ---- assignment ---------------------------------------------------------
    #
    # Replaying the peel order backwards, the peeled vertex of each edge is
    # still zero in the slab, so XOR-ing all three slab cells with the edge
    # value yields the wanted cell value with no side branch.

    @jit
    def assign_high(out_pay, out_val, out_side, peeled,
                    kind, nseg, segsize, part, words, bbits, mask):
        for j in range(peeled - 1, -1, -1):
            local = out_pay[j]
            val = out_val[j]
            a, b, c = edge3(local, kind, nseg, segsize, part)
            w = val ^ sget(words, a, bbits, mask) ^ sget(words, b, bbits, mask) \
                ^ sget(words, c, bbits, mask)
            side = out_side[j]
            if side == 0:
                sset(words, a, bbits, mask, w)
            elif side == 1:
                sset(words, b, bbits, mask, w)
            else:
                sset(words, c, bbits, mask, w)

    @jit
    def assign_low(vec, ep, degside, xor_pay, xor_val, locs, values, by_index,
                   kind, nseg, segsize, part, words, bbits, mask):
        nv = degside.shape[0]
        for i in range(ep, nv):
            v = vec[i]
            pay = xor_pay[v]
            if by_index == U1:
                local = locs[pay]
                val = values[pay]
            else:
                local = pay
                val = xor_val[v]
            a, b, c = edge3(local, kind, nseg, segsize, part)
            w = val ^ sget(words, a, bbits, mask) ^ sget(words, b, bbits, mask) \
                ^ sget(words, c, bbits, mask)
            sset(words, np.uint64(v), bbits, mask, w)

    @jit
    def find_core(locs, kind, nseg, segsize, part, degside, out_mask):
        # After the visit stops, an edge is unpeeled iff none of its
        # vertices had its degree (virtually) zeroed.
        count = 0
        for i in range(locs.shape[0]):
            a, b, c = edge3(locs[i], kind, nseg, segsize, part)
            if degside[a] >> 2 >= 1 and degside[b] >> 2 >= 1 and degside[c] >> 2 >= 1:
                out_mask[i] = np.uint8(1)
                count += 1
            else:
                out_mask[i] = np.uint8(0)
        return count

    @jit
    def verify_edges(locs, values, kind, nseg, segsize, part, words, bbits, mask):
        fails = 0
        for i in range(locs.shape[0]):
            a, b, c = edge3(locs[i], kind, nseg, segsize, part)
            got = sget(words, a, bbits, mask) ^ sget(words, b, bbits, mask) \
                ^ sget(words, c, bbits, mask)
            if got != values[i] & mask:
                fails += 1
        return fails

    # ---- queries -------------------------------------------------------------

    @jit
    def query_batch(keys, seed, h, use_lo, kind, nseg, segsize, part,
                    shard_vertices, words, bbits, mask, out):
        for i in range(keys.shape[0]):
            h1, h2 = sign1(keys[i], seed)
            if use_lo == U0:
                h2 = U0
            if h == U0:
                base = U0
                local = h1
            else:
                sh = U64C - h
                base = (h1 >> sh) * shard_vertices
                local = (h1 << h) | (h2 >> sh)
            a, b, c = edge3(local, kind, nseg, segsize, part)
            out[i] = sget(words, base + a, bbits, mask) \
                ^ sget(words, base + b, bbits, mask) \
                ^ sget(words, base + c, bbits, mask)

    @jit
    def filter_query_batch(keys, seed, h, use_lo, kind, nseg, segsize, part,
                           shard_vertices, words, bbits, mask, out):
        for i in range(keys.shape[0]):
            h1, h2 = sign1(keys[i], seed)
            if use_lo == U0:
                h2 = U0
            if h == U0:
                base = U0
                local = h1
            else:
                sh = U64C - h
                base = (h1 >> sh) * shard_vertices
                local = (h1 << h) | (h2 >> sh)
            a, b, c = edge3(local, kind, nseg, segsize, part)
            got = sget(words, base + a, bbits, mask) \
                ^ sget(words, base + b, bbits, mask) \
                ^ sget(words, base + c, bbits, mask)
            if got == fmix_d(local) & mask:
                out[i] = np.uint8(1)
            else:
                out[i] = np.uint8(0)

    @jit
    def slab_get_batch(words, idx, bbits, mask, out):
        for i in range(idx.shape[0]):
            out[i] = sget(words, idx[i], bbits, mask)

    @jit
    def slab_set_batch(words, idx, bbits, mask, values):
        for i in range(idx.shape[0]):
            sset(words, idx[i], bbits, mask, values[i])

    return SimpleNamespace(
        mul_hi=mul_hi,
        fmix_a=fmix_a,
        fmix_b=fmix_b,
        fmix_c=fmix_c,
        fmix_d=fmix_d,
        sign1=sign1,
        edge3=edge3,
        sget=sget,
        sset=sset,
        sign_batch=sign_batch,
        shard_local_batch=shard_local_batch,
        edges_from_locals=edges_from_locals,
        filter_hash_batch=filter_hash_batch,
        build_incidence=build_incidence,
        peel_high=peel_high,
        peel_low=peel_low,
        assign_high=assign_high,
        assign_low=assign_low,
        find_core=find_core,
        verify_edges=verify_edges,
        query_batch=query_batch,
        filter_query_batch=filter_query_batch,
        slab_get_batch=slab_get_batch,
        slab_set_batch=slab_set_batch,
    )
