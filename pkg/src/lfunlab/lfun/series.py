"""Truncated Dirichlet series and products: Euler products, prime sums, Gauss sums, mollifiers."""

from __future__ import annotations

import math

import numpy as np

from ..characters import Character, char_eval
from ..modarith import ModulusContext, mobius_table, sieve_primes
from .oracle import LValue

_EPS = np.finfo(float).eps


def _primes_coprime(q: int, X: float) -> np.ndarray:
    p = sieve_primes(int(math.floor(X))).primes if X >= 2 else np.zeros(0, dtype=np.int64)
    return p[p != q]


def finite_euler_product(chi: Character, X: float, sigma: float = 1.0) -> LValue:
    """prod_{p <= X, p != q} (1 - chi(p) p^-sigma)^-1, evaluated prime by prime."""
    p = _primes_coprime(chi.q, X)
    if len(p) == 0:
        return LValue(s=complex(sigma), value=1 + 0j, method="euler_product", est_error=0.0)
    z = char_eval(chi, p) * np.exp(-sigma * np.log(p.astype(float)))
    logs = -np.log1p(-z)
    val = complex(np.exp(logs.sum()))
    err = abs(val) * 4 * _EPS * len(p)
    return LValue(s=complex(sigma), value=val, method="euler_product", est_error=float(err))


def euler_product_logs(ctx: ModulusContext, X: float, sigma: float = 1.0) -> np.ndarray:
    """log prod_{p <= X} (1 - chi_e(p) p^-sigma)^-1 for every exponent e.

    Expands -log(1 - z) = sum_j z^j / j and groups each power by index class, so
    every j costs one FFT over Z/(q-1).
    """
    n = ctx.order
    p = _primes_coprime(ctx.q, X)
    out = np.zeros(n, dtype=complex)
    if len(p) == 0:
        return out
    ind = ctx.ind[p % ctx.q]
    logp = np.log(p.astype(float))
    j = 1
    while True:
        w = np.exp(-j * sigma * logp)
        keep = w > 1e-19
        if not keep.any():
            break
        W = np.bincount((j * ind[keep]) % n, weights=w[keep] / j, minlength=n)
        out += n * np.fft.ifft(W)
        j += 1
    return out


def prime_sum_S(chi: Character, sigma: float, X: float) -> complex:
    """sum_{p <= X, p != q} chi(p) / p^sigma."""
    p = _primes_coprime(chi.q, X)
    if len(p) == 0:
        return 0j
    return complex((char_eval(chi, p) * np.exp(-sigma * np.log(p.astype(float)))).sum())


def prime_sums_all(ctx: ModulusContext, sigma: float, X: float) -> np.ndarray:
    """sum_{p <= X} chi_e(p) p^-sigma for every e, via one FFT."""
    n = ctx.order
    p = _primes_coprime(ctx.q, X)
    W = np.bincount(ctx.ind[p % ctx.q], weights=np.exp(-sigma * np.log(p.astype(float))), minlength=n)
    return n * np.fft.ifft(W)


def lambda_sum(chi: Character, sigma: float, t: float, X: float) -> complex:
    """sum_{2 <= n <= X} Lambda(n) chi(n) / (n^(sigma+it) log n), over prime powers."""
    if X < 2:
        return 0j
    s = complex(sigma, t)
    total = 0j
    p = _primes_coprime(chi.q, X)
    k = 1
    while len(p):
        pk = p.astype(float) ** k
        terms = char_eval(chi, p) ** k * np.exp(-s * k * np.log(p.astype(float))) / k
        total += complex(terms.sum())
        k += 1
        p = p[pk * p <= X]
    return total


def gauss_sum(chi: Character) -> complex:
    q = chi.q
    n = np.arange(1, q)
    return complex((char_eval(chi, n) * np.exp(2j * np.pi * n / q)).sum())


def root_number(chi: Character) -> complex:
    """epsilon(chi) = tau(chi) / (i^kappa sqrt(q)), kappa = 0 for even, 1 for odd."""
    kappa = 0 if chi.parity == 1 else 1
    return gauss_sum(chi) / ((1j) ** kappa * math.sqrt(chi.q))


def mollifier_coeffs(X: float, N: int) -> np.ndarray:
    """a_n = sum_{d | n, d <= X} mu(d) for n = 1..N (returned array is indexed from 1; a[0] unused)."""
    if N < 1 or X < 1:
        raise ValueError("need X >= 1 and N >= 1")
    a = np.zeros(N + 1, dtype=np.int64)
    D = min(int(X), N)
    mu = mobius_table(D)
    for d in range(1, D + 1):
        if mu[d]:
            a[d::d] += mu[d]
    return a


def mollifier_poly(chi: Character, s: complex, X: float) -> complex:
    """M_X(s, chi) = sum_{n <= X} mu(n) chi(n) n^-s."""
    D = int(X)
    if D < 1:
        return 0j
    mu = mobius_table(D)
    n = np.arange(1, D + 1)
    keep = mu[1:] != 0
    n = n[keep]
    return complex((mu[1:][keep] * char_eval(chi, n) * np.exp(-complex(s) * np.log(n.astype(float)))).sum())
