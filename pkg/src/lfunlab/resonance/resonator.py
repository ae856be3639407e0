"""Resonator coefficient systems and the parameter choices that size them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..characters import CharacterSet
from ..modarith import ModulusContext, sieve_primes

MAX_CUTOFF = 10**8
LOG4 = math.log(4.0)


class ResonanceError(ValueError):
    """Parameters outside the range where a pipeline is defined."""


def log_nu(z: float, nu: int = 1) -> float:
    """Iterated logarithm with floor 2 at every level.

    log_1 z = max(2, log z) and log_nu z = max(2, log(log_{nu-1} z)).
    """
    if z < 1:
        raise ValueError("log_nu needs z >= 1")
    if nu < 1:
        raise ValueError("nu must be >= 1")
    v = max(2.0, math.log(z))
    for _ in range(nu - 1):
        v = max(2.0, math.log(v))
    return v


@dataclass(frozen=True)
class ResonanceConfig:
    delta: float = 1.0
    kappa: float = 0.3
    eta: float = 0.02
    c: float = 1.0
    euler_cutoff: int = 10**6  # X2, replaces q^4 in L(1, chi; q^4)
    truncation_cutoff: int = 10**5  # support cutoff for materialized r_n
    X_override: float | None = None
    Y_override: float | None = None

    def __post_init__(self):
        if self.delta <= 0 or self.kappa <= 0 or self.eta <= 0 or self.c <= 0:
            raise ValueError("delta, kappa, eta, c must be positive")
        if not self.kappa < self.delta / ((1 + self.delta) * LOG4):
            raise ValueError("kappa must satisfy 0 < kappa < delta / ((1 + delta) log 4)")
        if not (self.eta < 2 and 1 + 6 * self.eta < (1 + self.delta) * (1 - self.kappa * LOG4)):
            raise ValueError("eta must satisfy 0 < eta < 2 and 1 + 6 eta < (1 + delta)(1 - kappa log 4)")
        if self.euler_cutoff < 2 or not 1 <= self.truncation_cutoff <= MAX_CUTOFF:
            raise ValueError("cutoffs out of range")

    def X_for(self, H: int) -> float:
        """X = kappa log H log log H (floored logs), unless overridden."""
        if self.X_override is not None:
            return float(self.X_override)
        return self.kappa * log_nu(H, 1) * log_nu(H, 2)

    def Y_for(self, H: int) -> float:
        if self.Y_override is not None:
            return float(self.Y_override)
        return 0.5 * self.kappa * log_nu(H, 1) * log_nu(H, 2)


@dataclass(frozen=True)
class Resonator:
    mode: str  # thm11 | thm12 | thm13
    support_bound: int
    prime_weights: dict[int, float] = field(default_factory=dict)
    counts: dict[int, int] = field(default_factory=dict)
    params: dict[str, float] = field(default_factory=dict)
    # materialized coefficients r_n for n <= cutoff (prime-weight modes)
    n: np.ndarray = field(default=None, repr=False)
    r: np.ndarray = field(default=None, repr=False)

    def coefficient(self, m: int) -> float:
        if self.mode == "thm13":
            return math.sqrt(self.counts.get(m, 0))
        out = 1.0
        for p, w in self.prime_weights.items():
            while m % p == 0:
                m //= p
                out *= w
        return out if m == 1 else 0.0

    @property
    def total_mass(self) -> float:
        """sum_n r_n over the untruncated support (prime-weight modes)."""
        if self.mode == "thm13":
            return float(sum(math.sqrt(c) for c in self.counts.values()))
        return math.prod(1.0 / (1.0 - w) for w in self.prime_weights.values())

    @property
    def tail_bound(self) -> float:
        """sum_{n > cutoff} r_n: the untruncated mass minus what was materialized."""
        if self.mode == "thm13" or self.r is None:
            return 0.0
        return max(0.0, self.total_mass - math.fsum(self.r))


def _smooth_coefficients(weights: dict[int, float], cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """All n <= cutoff built from the weighted primes, with r_n = prod r_p^{v_p(n)}."""
    nums = np.array([1], dtype=np.int64)
    vals = np.array([1.0])
    for p, w in sorted(weights.items()):
        if w == 0:
            continue
        parts_n, parts_v = [nums], [vals]
        pk, wk = p, w
        while pk <= cutoff:
            keep = nums <= cutoff // pk
            parts_n.append(nums[keep] * pk)
            parts_v.append(vals[keep] * wk)
            pk *= p
            wk *= w
        nums = np.concatenate(parts_n)
        vals = np.concatenate(parts_v)
    order = np.argsort(nums, kind="stable")
    return nums[order], vals[order]


def build_resonator(mode: str, ctx: ModulusContext | None, params: dict, cutoff: int = 10**5) -> Resonator:
    """Resonator for one of the three pipelines.

    thm11: params {"X"}; r_p = 1 - p/X for p <= X.
    thm12: params {"Y"}; r_p = 1/2 for p <= Y.
    thm13: params {"M"} (iterable of positive integers); r(m)^2 counts M in each
    residue class m mod q.
    """
    if cutoff < 1 or cutoff > MAX_CUTOFF:
        raise ResonanceError(f"cutoff {cutoff} outside [1, {MAX_CUTOFF}]")
    if mode == "thm13":
        if ctx is None:
            raise ResonanceError("thm13 needs a modulus context")
        M = sorted({int(m) for m in params["M"]})
        if not M or M[0] < 1:
            raise ResonanceError("M must be a nonempty set of positive integers")
        res = np.array([m % ctx.q for m in M], dtype=np.int64)
        if np.any(res == 0):
            raise ResonanceError("elements of M must be coprime to q")
        uniq, cnt = np.unique(res, return_counts=True)
        counts = {int(m): int(c) for m, c in zip(uniq, cnt)}
        return Resonator(
            mode="thm13",
            support_bound=int(max(M)),
            counts=counts,
            params={"h": float(params.get("h", len(M))), "size": float(len(M))},
        )
    if mode == "thm11":
        X = float(params["X"])
        if X <= 2:
            raise ResonanceError("thm11 needs X > 2")
        primes = sieve_primes(int(math.floor(X))).primes
        weights = {int(p): 1.0 - p / X for p in primes}
        extra = {"X": X}
    elif mode == "thm12":
        Y = float(params["Y"])
        if Y <= 2:
            raise ResonanceError("thm12 needs Y > 2")
        primes = sieve_primes(int(math.floor(Y))).primes
        weights = {int(p): 0.5 for p in primes}
        extra = {"Y": Y}
    else:
        raise ResonanceError(f"unknown resonator mode {mode!r}")
    if ctx is not None:
        weights.pop(ctx.q, None)
    weights = {p: w for p, w in weights.items() if w > 0}
    if weights and min(weights) > cutoff:
        raise ResonanceError("cutoff is below the smallest supported prime")
    n, r = _smooth_coefficients(weights, cutoff)
    n.setflags(write=False)
    r.setflags(write=False)
    return Resonator(
        mode=mode,
        support_bound=int(n[-1]),
        prime_weights=weights,
        params=extra,
        n=n,
        r=r,
    )


def residue_mass(ctx: ModulusContext, R: Resonator) -> np.ndarray:
    """w[a] = sum of r_n over materialized n = a (mod q); w[0] is zero."""
    w = np.zeros(ctx.q)
    if R.mode == "thm13":
        for m, c in sorted(R.counts.items()):
            w[m] += math.sqrt(c)
        return w
    res = R.n % ctx.q
    np.add.at(w, res, R.r)
    w[0] = 0.0
    return w


def resonator_series(chars: CharacterSet, R: Resonator) -> np.ndarray:
    """R(chi) = sum_a w[a] chi(a) with the materialized (truncated) coefficients."""
    ctx = chars.ctx
    w = residue_mass(ctx, R)
    W = w[ctx.gpow]  # index order
    full = ctx.order * np.fft.ifft(W)
    return full[chars.array()]


def resonator_product(chars: CharacterSet, R: Resonator) -> np.ndarray:
    """R(chi) = prod_p (1 - r_p chi(p))^-1, the untruncated prime-weight resonator."""
    if R.mode == "thm13":
        return resonator_series(chars, R)
    ctx = chars.ctx
    e = chars.array()
    if not R.prime_weights:
        return np.ones(len(e), dtype=complex)
    p = np.array(sorted(R.prime_weights), dtype=np.int64)
    w = np.array([R.prime_weights[int(x)] for x in p])
    k = ctx.ind[p % ctx.q]
    chi_p = ctx.roots[(e[:, None] * k[None, :]) % ctx.order]
    return np.exp(-np.log1p(-w[None, :] * chi_p).sum(axis=1))
