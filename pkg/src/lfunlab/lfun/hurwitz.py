"""Hurwitz zeta by Euler-Maclaurin summation with an explicit remainder bound.

zeta(s, a) = sum_{n<N} (n+a)^-s + (N+a)^(1-s)/(s-1) + (N+a)^-s / 2
             + sum_{k=1}^{6} B_2k/(2k)! (s)_(2k-1) (N+a)^(-s-2k+1) + R

with |R| <= 4 |(s)_12| / (2 pi)^12 * (N+a)^(-sigma-11) / (sigma+11).
The shift N is the smallest value with N + a >= 20 whose bound is below the target.
"""

from __future__ import annotations

import math

import numpy as np

TARGET_ABS_ERROR = 1e-13
MIN_SHIFT = 20.0
_M = 6  # correction terms, through B_12
_BERNOULLI_2K = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730]
_COEF = [b / math.factorial(2 * k + 2) for k, b in enumerate(_BERNOULLI_2K)]


class PoleError(ValueError):
    pass


def _poch_abs(s: complex, n: int) -> float:
    return float(np.prod([abs(s + j) for j in range(n)]))


def remainder_bound(s: complex, shifted: float) -> float:
    """Bound on the Euler-Maclaurin remainder at shifted argument N + a."""
    sigma = s.real
    denom = sigma + 2 * _M - 1
    if denom <= 0:
        return math.inf
    return 4 * _poch_abs(s, 2 * _M) / (2 * math.pi) ** (2 * _M) * shifted ** (-sigma - 2 * _M + 1) / denom


def choose_shift(s: complex, a_min: float, target: float = TARGET_ABS_ERROR) -> int:
    N = max(0, math.ceil(MIN_SHIFT - a_min))
    while remainder_bound(s, N + a_min) > target:
        N += 4
        if N > 100000:
            raise ArithmeticError(f"Euler-Maclaurin shift does not converge for s={s}")
    return N


def hurwitz_zeta_array(s: complex, a, target: float = TARGET_ABS_ERROR) -> tuple[np.ndarray, float]:
    """zeta(s, a) for an array of a in (0, 1]; returns (values, absolute error bound)."""
    s = complex(s)
    if s == 1:
        raise PoleError("hurwitz_zeta has a pole at s = 1")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if np.any(a <= 0):
        raise ValueError("a must be positive")
    N = choose_shift(s, float(a.min()), target)
    total = np.zeros(a.shape, dtype=complex)
    for n in range(N):
        total += np.exp(-s * np.log(n + a))
    x = N + a
    logx = np.log(x)
    xs = np.exp(-s * logx)  # x^-s
    total += x * xs / (s - 1) + 0.5 * xs
    poch = s  # (s)_(2k-1), starting at k = 1
    xpow = xs / x  # x^(-s-1)
    for k, c in enumerate(_COEF):
        total += c * poch * xpow
        poch *= (s + 2 * k + 1) * (s + 2 * k + 2)
        xpow /= x * x
    return total, remainder_bound(s, N + float(a.min()))


def hurwitz_zeta(s: complex, a: float) -> complex:
    vals, _ = hurwitz_zeta_array(s, [a])
    return complex(vals[0])


def digamma(x) -> np.ndarray:
    """psi(x) for positive real x (shift to x >= 20, asymptotic series through B_12)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    acc = np.zeros_like(x)
    while True:
        small = x < MIN_SHIFT
        if not small.any():
            break
        acc[small] -= 1.0 / x[small]
        x = np.where(small, x + 1.0, x)
    inv2 = 1.0 / (x * x)
    series = np.zeros_like(x)
    for k in range(_M, 0, -1):
        series = (series + _BERNOULLI_2K[k - 1] / (2 * k)) * inv2
    return acc + np.log(x) - 0.5 / x - series


def hurwitz_grid(
    s_values, a, target: float = TARGET_ABS_ERROR, finite_part_at_one: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """zeta(s_i, a_j) for a vector of s and a vector of a.

    Returns a (len(s), len(a)) array and per-row error bounds. With
    ``finite_part_at_one`` a row with s = 1 holds the constant Laurent term
    -psi(a) instead of raising.
    """
    s_values = np.atleast_1d(np.asarray(s_values, dtype=complex))
    a = np.atleast_1d(np.asarray(a, dtype=float))
    at_one = s_values == 1
    if at_one.any():
        if not finite_part_at_one:
            raise PoleError("hurwitz_zeta has a pole at s = 1")
        out = np.empty((len(s_values), len(a)), dtype=complex)
        errs = np.full(len(s_values), 1e-15)
        out[at_one] = -digamma(a)
        if (~at_one).any():
            out[~at_one], errs[~at_one] = hurwitz_grid(s_values[~at_one], a, target)
        return out, errs
    a_min = float(a.min())
    shifts = [choose_shift(complex(s), a_min, target) for s in s_values]
    N = max(shifts)
    S = s_values[:, None]
    total = np.zeros((len(s_values), len(a)), dtype=complex)
    for n in range(N):
        total += np.exp(-S * np.log(n + a)[None, :])
    x = (N + a)[None, :]
    xs = np.exp(-S * np.log(x))
    total += x * xs / (S - 1) + 0.5 * xs
    poch = S.copy()
    xpow = xs / x
    for k, c in enumerate(_COEF):
        total += c * poch * xpow
        poch = poch * (S + 2 * k + 1) * (S + 2 * k + 2)
        xpow = xpow / (x * x)
    errs = np.array([remainder_bound(complex(s), N + a_min) for s in s_values])
    return total, errs
