"""Auxiliary sums of the resonance arguments."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..characters import CharacterSet, character_set
from ..modarith import ModulusContext, iter_prime_segments, sieve_primes
from .resonator import Resonator, ResonanceError, build_resonator, log_nu


# -- sum over p <= X of -log(1 - r_p^2), r_p = 1 - p/X -------------------------


def lemma_q2_product(X: float) -> tuple[float, float]:
    """(exact, main_term) for log prod_{p <= X} (1 - (1 - p/X)^2)^-1.

    1 - r_p^2 = (p/X)(2 - p/X) is used directly so small r_p loses nothing.
    main_term = (2 - log 4) X / log X.
    """
    if X <= 2:
        if X == 2:
            return 0.0, (2 - math.log(4)) * X / math.log(X)
        raise ValueError("need X > 2")
    parts = []
    for seg in iter_prime_segments(1, int(math.floor(X))):
        u = seg.astype(float) / X
        parts.append(float(-np.log(u * (2 - u)).sum()))
    exact = math.fsum(parts)
    return exact, (2 - math.log(4)) * X / math.log(X)


# -- exceptional set ----------------------------------------------------------


@dataclass(frozen=True)
class ExceptionalSetReport:
    E: CharacterSet
    threshold: float
    prime_sums: np.ndarray  # sum_{P1 < p <= P2} chi_e(p)/p for every e
    shape: float  # (log q)^(2c) (log log q)^3


def _class_weights(ctx: ModulusContext, P1: int, P2: int, compensated: bool) -> np.ndarray:
    """W[k] = sum of 1/p over primes P1 < p <= P2 with ind(p) = k (p != q)."""
    n = ctx.order
    if not compensated:
        W = np.zeros(n)
        for seg in iter_prime_segments(P1, P2):
            seg = seg[seg != ctx.q]
            W += np.bincount(ctx.ind[seg % ctx.q], weights=1.0 / seg, minlength=n)
        return W
    buckets: list[list[float]] = [[] for _ in range(n)]
    for seg in iter_prime_segments(P1, P2):
        seg = seg[seg != ctx.q]
        k = ctx.ind[seg % ctx.q]
        order = np.argsort(k, kind="stable")
        ks, inv = k[order], 1.0 / seg[order]
        cuts = np.flatnonzero(np.diff(ks)) + 1
        for grp_k, grp in zip(np.split(ks, cuts), np.split(inv, cuts)):
            if len(grp):
                buckets[int(grp_k[0])].append(math.fsum(grp))
    return np.array([math.fsum(b) for b in buckets])


def exceptional_prime_sums(ctx: ModulusContext, P1: int, P2: int, compensated: bool = False) -> np.ndarray:
    W = _class_weights(ctx, P1, P2, compensated)
    if not compensated:
        return ctx.order * np.fft.ifft(W)
    # direct character-by-character sums with compensated accumulation
    n = ctx.order
    k = np.arange(n)
    out = np.empty(n, dtype=complex)
    for e in range(n):
        ang = 2 * np.pi * ((e * k) % n) / n
        out[e] = complex(math.fsum(W * np.cos(ang)), math.fsum(W * np.sin(ang)))
    return out


def exceptional_set(
    ctx: ModulusContext, c: float, P1: int, P2: int, compensated: bool = False
) -> ExceptionalSetReport:
    """E = {chi : |sum_{P1 < p <= P2} chi(p)/p| >= (log q)^-c}."""
    if not 2 <= P1 < P2:
        raise ValueError("need 2 <= P1 < P2")
    if P2 > 10**8:
        raise ValueError("P2 above 10^8 is outside the desk-scale range")
    sums = exceptional_prime_sums(ctx, P1, P2, compensated)
    thr = math.log(ctx.q) ** (-c)
    members = np.flatnonzero(np.abs(sums) >= thr)
    E = character_set(ctx, members.tolist(), label="E")
    shape = math.log(ctx.q) ** (2 * c) * math.log(math.log(ctx.q)) ** 3
    return ExceptionalSetReport(E=E, threshold=thr, prime_sums=sums, shape=shape)


# -- gcd / lcm correlation ------------------------------------------------------


def gcd_lcm_correlation(M, theta: float, chunk: int = 1024) -> float:
    """sum_{i, j in M} (gcd(i, j) / lcm(i, j))^theta, using gcd/lcm = gcd^2/(ij)."""
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    arr = np.unique(np.asarray(list(M), dtype=np.int64))
    if len(arr) == 0:
        raise ValueError("M must be nonempty")
    if arr[0] < 1:
        raise ValueError("elements of M must be positive")
    fa = arr.astype(float)
    parts = []
    for i in range(0, len(arr), chunk):
        rows = arr[i : i + chunk]
        g = np.gcd(rows[:, None], arr[None, :]).astype(float)
        ratio = (g / fa[i : i + chunk, None]) * (g / fa[None, :])
        parts.append(float(np.sum(ratio**theta)))
    return math.fsum(parts)


# -- the multiplicative set M --------------------------------------------------


def largest_prime_envelope(h: int, gamma: float = 0.5) -> float:
    """exp((log log h)^gamma) (log h) log log h with floored logarithms."""
    l2 = log_nu(max(h, 1), 2)
    return math.exp(l2**gamma) * log_nu(max(h, 1), 1) * l2


def _dyadic_blocks(y: float) -> list[list[int]]:
    primes = sieve_primes(int(math.floor(y))).primes.tolist()
    blocks: dict[int, list[int]] = {}
    for p in primes:
        blocks.setdefault(int(math.floor(math.log2(p - 0.5))), []).append(p)
    return [blocks[j] for j in sorted(blocks)]


def build_set_M(h: int, ctx: ModulusContext, block_params=None, gamma: float = 0.5) -> tuple[list[int], Resonator]:
    """A multiplicative set M with #M <= h and its residue-count resonator.

    Primes up to the largest-prime envelope are grouped into dyadic blocks
    (2^j, 2^(j+1)]. From block j up to block_params[j] distinct primes are
    chosen (default 2 per block), and M holds the h smallest products.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    y = largest_prime_envelope(h, gamma)
    blocks = _dyadic_blocks(y)
    if block_params is None:
        block_params = [2] * len(blocks)
    if len(block_params) < len(blocks):
        block_params = list(block_params) + [0] * (len(blocks) - len(block_params))
    products = [1]
    for primes, k in zip(blocks, block_params):
        primes = [p for p in primes if p != ctx.q]
        options = [1]
        for r in range(1, min(k, len(primes)) + 1):
            options += [math.prod(c) for c in itertools.combinations(primes, r)]
        merged = sorted({a * b for a in products for b in options})
        # the h smallest survive: every option includes the empty product 1
        products = merged[:h]
    M = products[:h]
    if not M:
        raise ResonanceError("empty construction")
    R = build_resonator("thm13", ctx, {"M": M, "h": h})
    return M, R
