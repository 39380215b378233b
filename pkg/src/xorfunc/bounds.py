"""Closed-form shard-count mathematics.

Everything here is pure scalar math: Lambert's W, the balls-and-bins
bound that keeps the max/mean shard load below 1 + epsilon, duplicate-edge
shard bounds for the two edge layouts, and the birthday-probability
helper they rest on.  ``resolve_shard_bits`` combines all constraints
into the number of sharding bits a build should use.

Sharding is a balls-and-bins process: with n keys in s shards, the
maximum load stays within (1 + epsilon) of the mean when

    ln s <= W(n * epsilon^2 / (2 * alpha^2))

so the shard count is driven by Lambert's W of the epsilon budget.
Duplicate edges impose a second, construction-specific ceiling: the
probability that any shard draws the same edge twice must stay below a
global budget eta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

LN2 = math.log(2.0)

#: Fixed hypergraph arity; every equation has three variables.
ARITY = 3

#: Peelability threshold of random 3-hypergraphs; expansion factors at or
#: above this make unsharded tripartite graphs peelable w.h.p.
GAMMA_3 = 1.2217

#: Default expansion factors and space budgets for the two constructions.
C_MWHC = 1.23
C_FUSE = 1.105
C_FUSE_SMALL = 1.12
EPSILON_MWHC = 0.01
EPSILON_FUSE = 0.001
DEFAULT_ETA = 1e-3
DEFAULT_ALPHA = 1.0

#: Hard ceiling on sharding bits (a few thousand shards); beyond this the
#: construction-time memory win is negligible next to the structure size.
DEFAULT_CAP_BITS = 13

#: Segmented-construction shards are never smaller than this many keys.
FUSE_MIN_SHARD_KEYS = 10_000_000

#: Empirical segment-size estimate constants: lg(segment) for a shard of
#: m keys is seg_alpha * ln(m) * ln(ln(m)) + seg_beta.
SEG_ALPHA = 0.41
SEG_BETA = -3.0


@dataclass(frozen=True)
class EpsilonCostParams:
    """Inputs of the balls-and-bins shard bound."""

    n: int
    epsilon: float
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class DupBoundParams:
    """Inputs of the duplicate-edge shard bounds."""

    n: int
    c: float
    eta: float
    k: int = ARITY
    seg_alpha: float = SEG_ALPHA
    seg_beta: float = SEG_BETA

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.c <= 1.0:
            raise ValueError("expansion factor c must exceed 1")
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must be in (0, 1)")
        if self.k != ARITY:
            raise ValueError("only arity-3 hypergraphs are supported")


def lambert_w0(x: float) -> float:
    """Principal branch of Lambert's W: the w >= 0 with w * e^w = x.

    Halley iteration from a log-based initial guess; accurate to roughly
    machine precision (relative error well under 1e-12) for x >= 0.
    """
    if x < 0.0:
        raise ValueError("lambert_w0 requires x >= 0")
    if x == 0.0:
        return 0.0
    if x > math.e:
        w = math.log(x)
        w -= math.log(w)
    else:
        w = math.log1p(x) * 0.7
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        step = f / denom
        w -= step
        if abs(step) <= 1e-16 * max(1.0, abs(w)):
            break
    return w


def birthday_no_dup_prob(t: int, n: int) -> float:
    """Upper bound e^(-t(t-1)/2n) on the no-duplicate probability.

    Probability that t uniform draws from a universe of size n are all
    distinct; the bound is a close approximation when t << n.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.exp(-t * (t - 1) / (2.0 * n))


def max_shard_bits_balls_bins(p: EpsilonCostParams) -> int:
    """Largest h with ln(2^h) <= W(n * eps^2 / (2 * alpha^2)).

    Uses the exact W-based bound rather than its log approximation, so
    marginal cases resolve correctly.  Equality is accepted.
    """
    w = lambert_w0(p.n * p.epsilon * p.epsilon / (2.0 * p.alpha * p.alpha))
    h = int(math.floor(w / LN2 + 1e-12))
    while h > 0 and h * LN2 > w:
        h -= 1
    return max(h, 0)


def max_shards_mwhc_dup(p: DupBoundParams) -> int:
    """Largest power-of-two S <= sqrt(-2n (c/3)^3 ln(1 - eta)).

    Keeps the probability that any shard of a tripartite construction
    draws a duplicate edge below eta overall.
    """
    bound = math.sqrt(-2.0 * p.n * (p.c / 3.0) ** 3 * math.log1p(-p.eta))
    if bound < 2.0:
        return 1
    h = int(math.floor(math.log2(bound)))
    while 2.0 ** (h + 1) <= bound:
        h += 1
    while h > 0 and 2.0**h > bound:
        h -= 1
    return 1 << h


def fuse_segment_bits(n: float, seg_alpha: float = SEG_ALPHA,
                      seg_beta: float = SEG_BETA) -> float:
    """lg(segment size) estimate for a segmented graph of n keys.

    Grows like log n * log log n; larger segments than the plain-log
    estimate, which is what makes fine sharding possible.
    """
    if n < 3:
        raise ValueError("segment estimate needs n >= 3")
    ln_n = math.log(n)
    return seg_alpha * ln_n * math.log(ln_n) + seg_beta


def fuse_segment_bits_log(n: float) -> float:
    """Alternative lg(segment size) estimate log_3.33(n) + 2.25.

    Grows like log n; exposed for comparison experiments and used for
    unsharded small-to-medium builds.
    """
    if n < 2:
        raise ValueError("segment estimate needs n >= 2")
    return math.log(n) / math.log(3.33) + 2.25


def _fuse_shard_ok(n: int, shards: int, p: DupBoundParams) -> bool:
    """Per-shard duplicate-edge condition for S shards of n/S keys each.

    Requires lg(segment(n/S)) >= 0.5 * lg(-n / (2c ln(1-eta))).
    """
    m = n / shards
    if m < 3:
        return False
    rhs = 0.5 * math.log2(-n / (2.0 * p.c * math.log1p(-p.eta)))
    return fuse_segment_bits(m, p.seg_alpha, p.seg_beta) >= rhs


def fuse_dup_shard_bound(p: DupBoundParams) -> float:
    """Closed-form real-valued shard bound S <= n * exp(-X / W(X)).

    X = (0.5 * lg(-n / (2c ln(1-eta))) - seg_beta) / seg_alpha.  Requires
    an accurately computed W; log approximations of W visibly misplace
    this bound.  Returns +inf when the condition does not constrain S.
    """
    rhs = 0.5 * math.log2(-p.n / (2.0 * p.c * math.log1p(-p.eta)))
    x = (rhs - p.seg_beta) / p.seg_alpha
    if x <= 0:
        return math.inf
    w = lambert_w0(x)
    if w <= 0:
        return math.inf
    return p.n * math.exp(-x / w)


def max_shards_fuse_dup(p: DupBoundParams) -> int:
    """Largest power-of-two shard count under the segmented dup bound.

    Evaluates the per-shard condition directly (it is algebraically
    identical to the closed form in ``fuse_dup_shard_bound``), so the
    returned S always satisfies the condition and 2S always violates it.
    """
    h = 0
    while h < 62 and _fuse_shard_ok(p.n, 1 << (h + 1), p):
        h += 1
    return 1 << h


_HUGE_H = 63


@dataclass(frozen=True)
class ShardBitsReport:
    """Per-constraint shard-bit ceilings and the binding minimum."""

    n: int
    construction: str
    h: int
    h_balls_bins: int
    h_duplicate: int
    h_min_shard: int
    h_sanity: int
    h_cap: int
    binding: str
    expected_shard_keys: float = field(default=0.0)

    @property
    def shards(self) -> int:
        return 1 << self.h


def resolve_shard_bits(
    n: int,
    epsilon: float,
    construction: str = "fuse",
    c: float | None = None,
    eta: float = DEFAULT_ETA,
    alpha: float = DEFAULT_ALPHA,
    cap_bits: int = DEFAULT_CAP_BITS,
    min_fuse_shard_keys: int = FUSE_MIN_SHARD_KEYS,
) -> ShardBitsReport:
    """Combine every shard-count constraint into the bit count to use.

    h = min of: the balls-and-bins bound, the construction's duplicate
    bound, the minimum-shard-size cap (segmented shards never fall below
    ``min_fuse_shard_keys`` keys), a sanity floor keeping expected shard
    size at least 2 / epsilon^2, and a global cap of a few thousand
    shards.
    """
    if construction not in ("mwhc", "fuse"):
        raise ValueError(f"unknown construction {construction!r}")
    if c is None:
        c = C_MWHC if construction == "mwhc" else C_FUSE
    bb = max_shard_bits_balls_bins(EpsilonCostParams(n, epsilon, alpha))
    dup_params = DupBoundParams(n, c, eta)
    if construction == "mwhc":
        s_dup = max_shards_mwhc_dup(dup_params)
        h_min = _HUGE_H
    else:
        s_dup = max_shards_fuse_dup(dup_params)
        h_min = int(math.floor(math.log2(n / min_fuse_shard_keys))) if n >= 2 * min_fuse_shard_keys else 0
    h_dup = s_dup.bit_length() - 1
    h_sanity = max(0, int(math.floor(math.log2(n * epsilon * epsilon / 2.0))) if n * epsilon * epsilon > 2.0 else 0)

    candidates = [
        ("duplicate-edges", h_dup),
        ("balls-and-bins", bb),
        ("min-shard-size", h_min),
        ("shard-size-sanity", h_sanity),
        ("global-cap", cap_bits),
    ]
    binding, h = min(candidates, key=lambda kv: kv[1])
    return ShardBitsReport(
        n=n,
        construction=construction,
        h=h,
        h_balls_bins=bb,
        h_duplicate=h_dup,
        h_min_shard=h_min,
        h_sanity=h_sanity,
        h_cap=cap_bits,
        binding=binding,
        expected_shard_keys=n / (1 << h),
    )
