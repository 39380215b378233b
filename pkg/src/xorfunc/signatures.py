"""Key signing, shard assignment, sorting/dedup, and disk spill.

Keys are reduced once to 128-bit signatures (64-bit integer keys via
their 8-byte little-endian form); everything downstream works on
signatures only.  The top h bits of the high word select the shard; the
64 bits immediately below them form the local signature that drives
edge generation and filter fingerprints, so shard bits never leak into
per-shard randomness.

Sorting is by the raw (hi, lo) pair.  Because the segment of an edge is
a monotone fixed-point image of the local signature, signature order is
also segment order, which is what gives the generation phase its
locality.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DuplicateLocalSignature, DuplicateSignatureConflict
from .kernels import get_kernels
from .kernels import pyref

MASK64 = 0xFFFFFFFFFFFFFFFF


class Signature(NamedTuple):
    hi: int
    lo: int


class ShardAssignment(NamedTuple):
    shard: int
    local: int


def sign(key: bytes | int, seed: int, sig_bits: int = 128) -> Signature:
    """128-bit signature of one key under the given global seed.

    Integer keys hash via their 8-byte little-endian serialization.
    With sig_bits=64 the low word is zero and all per-shard randomness
    comes from the high word.
    """
    if sig_bits not in (64, 128):
        raise ValueError("sig_bits must be 64 or 128")
    if isinstance(key, (bytes, bytearray, memoryview)):
        hi, lo = pyref.murmur3_x64_128(bytes(key), seed)
    else:
        hi, lo = pyref.sign_u64(int(key) & MASK64, seed)
    if sig_bits == 64:
        lo = 0
    return Signature(hi, lo)


def assign_shard(sig: Signature, h: int) -> ShardAssignment:
    """Split a signature into (shard, local signature) using h top bits."""
    if not 0 <= h <= 64:
        raise ValueError("shard bits h must be in [0, 64]")
    return ShardAssignment(
        pyref.shard_of(sig.hi, h),
        pyref.local_signature(sig.hi, sig.lo, h),
    )


def fixed_point_map(x: int, m: int) -> int:
    """Monotone map of a 64-bit word onto [0, m): floor(x * m / 2^64)."""
    return pyref.fixed_point_map(x & MASK64, m)


def sign_batch(keys, seed: int, sig_bits: int = 128) -> tuple[np.ndarray, np.ndarray]:
    """Sign a batch of keys; returns (hi, lo) uint64 arrays.

    Accepts a uint64 array (fast path) or any iterable of byte strings /
    ints (scalar path).
    """
    if isinstance(keys, np.ndarray) and keys.dtype == np.uint64:
        k = get_kernels()
        hi = np.empty(keys.shape[0], np.uint64)
        lo = np.empty(keys.shape[0], np.uint64)
        k.sign_batch(keys, np.uint64(seed), hi, lo)
    else:
        sigs = [sign(key, seed) for key in keys]
        hi = np.array([s.hi for s in sigs], dtype=np.uint64)
        lo = np.array([s.lo for s in sigs], dtype=np.uint64)
    if sig_bits == 64:
        lo = np.zeros_like(hi)
    elif sig_bits != 128:
        raise ValueError("sig_bits must be 64 or 128")
    return hi, lo


def shard_local_batch(hi: np.ndarray, lo: np.ndarray, h: int) -> tuple[np.ndarray, np.ndarray]:
    """Vector version of assign_shard over signature arrays."""
    if not 0 <= h <= 32:
        raise ValueError("batch shard assignment supports h in [0, 32]")
    k = get_kernels()
    shard = np.empty(hi.shape[0], np.uint32)
    local = np.empty(hi.shape[0], np.uint64)
    k.shard_local_batch(hi, lo, np.uint64(h), shard, local)
    return shard, local


def _local_dup_mask(hi: np.ndarray, lo: np.ndarray, h: int) -> np.ndarray:
    """Adjacent-pair mask of equal (shard, local) keys on sorted arrays."""
    if h == 0:
        return hi[1:] == hi[:-1]
    keep_lo = lo >> np.uint64(64 - h) if h < 64 else lo
    return (hi[1:] == hi[:-1]) & (keep_lo[1:] == keep_lo[:-1])


@dataclass
class DedupReport:
    removed: int
    n: int


def sort_dedup(
    hi: np.ndarray,
    lo: np.ndarray,
    values: np.ndarray | None = None,
    h: int = 0,
    mode: str = "function",
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None, DedupReport]:
    """Sort signatures and collapse duplicates.

    Function mode: equal signatures with equal values collapse to one;
    equal signatures with different values raise
    DuplicateSignatureConflict (retry with a new seed), and distinct
    signatures colliding on (shard, local) raise DuplicateLocalSignature
    (use wider signatures).  Filter mode: a filter's behaviour depends
    on a key only through (shard, local), so duplicates of that key
    collapse silently.
    """
    if mode not in ("function", "filter"):
        raise ValueError("mode must be 'function' or 'filter'")
    order = np.lexsort((lo, hi))
    hi = hi[order]
    lo = lo[order]
    if values is not None:
        values = values[order]
    n = hi.shape[0]
    if n <= 1:
        return hi, lo, values, DedupReport(0, n)

    same_local = _local_dup_mask(hi, lo, h)
    if mode == "filter":
        keep = np.empty(n, dtype=bool)
        keep[0] = True
        keep[1:] = ~same_local
        removed = int(same_local.sum())
        return hi[keep], lo[keep], None, DedupReport(removed, n - removed)

    same_sig = (hi[1:] == hi[:-1]) & (lo[1:] == lo[:-1])
    if values is None:
        raise ValueError("function mode needs values")
    if same_sig.any():
        conflict = same_sig & (values[1:] != values[:-1])
        if conflict.any():
            i = int(np.flatnonzero(conflict)[0]) + 1
            raise DuplicateSignatureConflict(
                f"signature {hi[i]:016x}{lo[i]:016x} maps to values "
                f"{int(values[i - 1])} and {int(values[i])}; retry with a new seed"
            )
    cross = same_local & ~same_sig
    if cross.any():
        i = int(np.flatnonzero(cross)[0]) + 1
        raise DuplicateLocalSignature(
            f"two distinct signatures share shard/local bits at h={h}; "
            "use sig_bits=128 or fewer shard bits"
        )
    keep = np.empty(n, dtype=bool)
    keep[0] = True
    keep[1:] = ~same_sig
    removed = int(same_sig.sum())
    return hi[keep], lo[keep], values[keep], DedupReport(removed, n - removed)


# ---------------------------------------------------------------------------
# Disk spill
# ---------------------------------------------------------------------------

RECORD_FUNCTION = np.dtype([("hi", "<u8"), ("lo", "<u8"), ("value", "<u8")])
RECORD_FILTER = np.dtype([("hi", "<u8"), ("lo", "<u8")])

_MAX_OPEN_BUCKETS = 128


class SpillStore:
    """Per-shard spill buckets of fixed-width little-endian records.

    Layout: ``shard-{i:05d}.bin`` holding 16-byte signatures, plus an
    8-byte value for functions, and a ``manifest.json`` with n, h, seed
    and the value width.  Records append in input order; buckets are
    re-read as (hi, lo[, value]) column arrays.
    """

    def __init__(self, directory: str | Path, h: int, seed: int,
                 value_bits: int = 0, with_values: bool = False):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.h = h
        self.seed = seed
        self.value_bits = value_bits
        self.with_values = with_values
        self.shards = 1 << h
        self.n = 0
        self._handles: dict[int, object] = {}
        for s in range(self.shards):
            # Materialize every bucket so zero-key inputs still spill
            # the full layout.
            self.bucket_path(s).write_bytes(b"")

    def bucket_path(self, shard: int) -> Path:
        return self.directory / f"shard-{shard:05d}.bin"

    def _handle(self, shard: int):
        fh = self._handles.get(shard)
        if fh is None:
            if len(self._handles) >= _MAX_OPEN_BUCKETS:
                self.flush()
            fh = open(self.bucket_path(shard), "ab")
            self._handles[shard] = fh
        return fh

    def append_batch(self, hi: np.ndarray, lo: np.ndarray,
                     values: np.ndarray | None = None) -> None:
        n = hi.shape[0]
        if n == 0:
            return
        if self.with_values:
            rec = np.empty(n, RECORD_FUNCTION)
            rec["value"] = values
        else:
            rec = np.empty(n, RECORD_FILTER)
        rec["hi"] = hi
        rec["lo"] = lo
        if self.h == 0:
            self._handle(0).write(rec.tobytes())
        else:
            shard = (hi >> np.uint64(64 - self.h)).astype(np.int64)
            order = np.argsort(shard, kind="stable")
            shard_sorted = shard[order]
            rec = rec[order]
            bounds_idx = np.searchsorted(shard_sorted, np.arange(self.shards + 1))
            for s in range(self.shards):
                a, b = bounds_idx[s], bounds_idx[s + 1]
                if b > a:
                    self._handle(s).write(rec[a:b].tobytes())
        self.n += n

    def flush(self) -> None:
        for fh in self._handles.values():
            fh.close()
        self._handles.clear()

    def finalize(self) -> None:
        self.flush()
        manifest = {
            "n": self.n,
            "h": self.h,
            "seed": self.seed,
            "value_bits": self.value_bits,
            "with_values": self.with_values,
            "record_bytes": 24 if self.with_values else 16,
        }
        (self.directory / "manifest.json").write_text(json.dumps(manifest, indent=2))

    def read_shard(self, shard: int):
        dtype = RECORD_FUNCTION if self.with_values else RECORD_FILTER
        raw = np.fromfile(self.bucket_path(shard), dtype=dtype)
        values = raw["value"].copy() if self.with_values else None
        return raw["hi"].copy(), raw["lo"].copy(), values

    def shard_sizes(self) -> list[int]:
        rec = 24 if self.with_values else 16
        return [os.path.getsize(self.bucket_path(s)) // rec for s in range(self.shards)]

    def cleanup(self) -> None:
        self.flush()
        for s in range(self.shards):
            p = self.bucket_path(s)
            if p.exists():
                p.unlink()
        m = self.directory / "manifest.json"
        if m.exists():
            m.unlink()


def spill_to_disk(
    batches: Iterable[tuple[np.ndarray, np.ndarray, np.ndarray | None]],
    directory: str | Path,
    h: int,
    seed: int,
    value_bits: int = 0,
    with_values: bool = False,
) -> SpillStore:
    """Stream signature batches into per-shard spill buckets."""
    store = SpillStore(directory, h, seed, value_bits, with_values)
    for hi, lo, values in batches:
        store.append_batch(hi, lo, values)
    store.finalize()
    return store
