"""Pure-Python scalar reference implementations.

These are the ground truth the batch kernels are tested against, and the
path used for signing arbitrary byte-string keys (the batch kernels only
handle 64-bit integer keys).  Everything operates on plain Python ints
masked to 64 bits.
"""

M64 = 0xFFFFFFFFFFFFFFFF

_MM3_C1 = 0x87C37B91114253D5
_MM3_C2 = 0x4CF5AB832479917F


def _rotl64(x: int, r: int) -> int:
    return ((x << r) | (x >> (64 - r))) & M64


def fmix64(k: int) -> int:
    """MurmurHash3 64-bit finalizer."""
    k ^= k >> 33
    k = (k * 0xFF51AFD7ED558CCD) & M64
    k ^= k >> 33
    k = (k * 0xC4CEB9FE1A85EC53) & M64
    k ^= k >> 33
    return k


def mix_b(z: int) -> int:
    """splitmix64 finalizer (Stafford mix13)."""
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & M64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & M64
    z ^= z >> 31
    return z


def mix_c(z: int) -> int:
    """Stafford mix01 finalizer."""
    z ^= z >> 31
    z = (z * 0x7FB5D329728EA185) & M64
    z ^= z >> 27
    z = (z * 0x81DADEF4BC2DD44D) & M64
    z ^= z >> 33
    return z


def mix_d(z: int) -> int:
    """Evensen's moremur finalizer."""
    z ^= z >> 27
    z = (z * 0x3C79AC492BA7B653) & M64
    z ^= z >> 33
    z = (z * 0x1C69B3F74AC4AE35) & M64
    z ^= z >> 27
    return z


def murmur3_x64_128(data: bytes, seed: int) -> tuple[int, int]:
    """Seeded MurmurHash3 x64 variant producing a 128-bit signature.

    Differs from the reference C++ only in accepting a full 64-bit seed.
    """
    length = len(data)
    h1 = seed & M64
    h2 = seed & M64
    nblocks = length // 16
    for i in range(nblocks):
        off = i * 16
        k1 = int.from_bytes(data[off : off + 8], "little")
        k2 = int.from_bytes(data[off + 8 : off + 16], "little")
        k1 = (k1 * _MM3_C1) & M64
        k1 = _rotl64(k1, 31)
        k1 = (k1 * _MM3_C2) & M64
        h1 ^= k1
        h1 = _rotl64(h1, 27)
        h1 = (h1 + h2) & M64
        h1 = (h1 * 5 + 0x52DCE729) & M64
        k2 = (k2 * _MM3_C2) & M64
        k2 = _rotl64(k2, 33)
        k2 = (k2 * _MM3_C1) & M64
        h2 ^= k2
        h2 = _rotl64(h2, 31)
        h2 = (h2 + h1) & M64
        h2 = (h2 * 5 + 0x38495AB5) & M64

    tail = data[nblocks * 16 :]
    k1 = 0
    k2 = 0
    tlen = len(tail)
    if tlen > 8:
        k2 = int.from_bytes(tail[8:], "little")
        k2 = (k2 * _MM3_C2) & M64
        k2 = _rotl64(k2, 33)
        k2 = (k2 * _MM3_C1) & M64
        h2 ^= k2
    if tlen > 0:
        k1 = int.from_bytes(tail[:8], "little")
        k1 = (k1 * _MM3_C1) & M64
        k1 = _rotl64(k1, 31)
        k1 = (k1 * _MM3_C2) & M64
        h1 ^= k1

    h1 ^= length
    h2 ^= length
    h1 = (h1 + h2) & M64
    h2 = (h2 + h1) & M64
    h1 = fmix64(h1)
    h2 = fmix64(h2)
    h1 = (h1 + h2) & M64
    h2 = (h2 + h1) & M64
    return h1, h2


def sign_u64(key: int, seed: int) -> tuple[int, int]:
    """128-bit signature of a 64-bit integer key (its 8-byte LE form)."""
    h1 = seed & M64
    h2 = seed & M64
    k1 = (key * _MM3_C1) & M64
    k1 = _rotl64(k1, 31)
    k1 = (k1 * _MM3_C2) & M64
    h1 ^= k1
    h1 ^= 8
    h2 ^= 8
    h1 = (h1 + h2) & M64
    h2 = (h2 + h1) & M64
    h1 = fmix64(h1)
    h2 = fmix64(h2)
    h1 = (h1 + h2) & M64
    h2 = (h2 + h1) & M64
    return h1, h2


def mul_hi(a: int, b: int) -> int:
    """High 64 bits of the 128-bit product of two 64-bit values."""
    return ((a & M64) * (b & M64)) >> 64


def fixed_point_map(x: int, m: int) -> int:
    """Map a 64-bit word to [0, m) monotonically: floor(x * m / 2^64)."""
    if m < 1:
        raise ValueError("range size must be >= 1")
    return mul_hi(x, m)


def local_signature(hi: int, lo: int, h: int) -> int:
    """The 64 bits immediately below the h sharding bits."""
    if h == 0:
        return hi
    if h == 64:
        return lo
    return ((hi << h) & M64) | (lo >> (64 - h))


def shard_of(hi: int, h: int) -> int:
    """Shard index: the top h bits of the signature."""
    if h == 0:
        return 0
    return hi >> (64 - h)


def edge_from_local(local: int, kind: int, num_segments: int, segment_size: int,
                    part_size: int) -> tuple[int, int, int]:
    """Derive the three edge vertices from a local signature.

    kind 0: tripartite layout, one vertex per third of the vertex range.
    kind 1: segmented layout; a monotone fixed-point map picks the start
    segment so that signature-sorted order is also segment order.
    """
    if kind == 1:
        seg = mul_hi(local, num_segments)
        v0 = seg * segment_size + mul_hi(fmix64(local), segment_size)
        v1 = (seg + 1) * segment_size + mul_hi(mix_b(local), segment_size)
        v2 = (seg + 2) * segment_size + mul_hi(mix_c(local), segment_size)
    else:
        v0 = mul_hi(fmix64(local), part_size)
        v1 = part_size + mul_hi(mix_b(local), part_size)
        v2 = 2 * part_size + mul_hi(mix_c(local), part_size)
    return v0, v1, v2


def filter_fingerprint(local: int, b: int) -> int:
    """b-bit filter hash: low bits of an independent remix of the local."""
    return mix_d(local) & ((1 << b) - 1)


def slab_get(words, idx: int, b: int) -> int:
    """Read the idx-th b-bit value from a packed little-endian word array."""
    bit = idx * b
    w = bit >> 6
    off = bit & 63
    val = int(words[w]) >> off
    if off + b > 64:
        val |= int(words[w + 1]) << (64 - off)
    return val & ((1 << b) - 1)


def slab_set(words, idx: int, b: int, value: int) -> None:
    """Write a b-bit value at index idx in a packed word array."""
    mask = (1 << b) - 1
    value &= mask
    bit = idx * b
    w = bit >> 6
    off = bit & 63
    words[w] = (int(words[w]) & ~((mask << off) & M64) & M64) | ((value << off) & M64)
    if off + b > 64:
        sh = 64 - off
        words[w + 1] = (int(words[w + 1]) & ~(mask >> sh) & M64) | (value >> sh)
