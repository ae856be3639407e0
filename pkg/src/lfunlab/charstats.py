"""Character-sum statistics: mean values over character sets, the double sum
over pairs of characters, zero-density totals over subgroups, and the spacing
statistics of primitive-root powers g^n mod q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .characters import Character, CharacterSet, product_set
from .lfun.zeros import count_zeros
from .modarith import ModulusContext


def _alpha_array(N: int, alpha) -> np.ndarray:
    if alpha is None:
        return np.ones(N, dtype=complex)
    a = np.asarray(alpha, dtype=complex)
    if a.shape != (N,):
        raise ValueError(f"alpha must have length N={N}")
    if np.any(np.abs(a) > 1 + 1e-12):
        raise ValueError("coefficients must satisfy |alpha_n| <= 1")
    return a


def character_sums_all(ctx: ModulusContext, N: int, alpha=None) -> np.ndarray:
    """T[e] = sum_{n <= N} alpha_n chi_e(n) for every exponent e (one FFT)."""
    if not 1 <= N <= ctx.q:
        raise ValueError("need 1 <= N <= q")
    a = _alpha_array(N, alpha)
    n = np.arange(1, N + 1)
    unit = n % ctx.q != 0
    k = ctx.ind[n[unit] % ctx.q]
    Z = np.zeros(ctx.order, dtype=complex)
    np.add.at(Z, k, a[unit])
    T = ctx.order * np.fft.ifft(Z)
    # the principal column is a plain sum; take it without FFT rounding
    T[0] = complex(math.fsum(a[unit].real), math.fsum(a[unit].imag))
    return T


# -- mean value M(alpha, A, N) --------------------------------------------------


@dataclass(frozen=True)
class MeanValueReport:
    A: int
    N: int
    M: float
    K: float
    envelope: float
    ratio: float


def mean_value_envelope(A: int, N: int, q: int, K: float) -> float:
    """K^1/2 (N^1/2 + N A^-1/2 + A^-3/8 N^1/2 q^1/4), unit constant."""
    return math.sqrt(K) * (math.sqrt(N) + N / math.sqrt(A) + A ** (-3 / 8) * math.sqrt(N) * q**0.25)


def mean_value_M(A: CharacterSet, N: int, alpha=None) -> MeanValueReport:
    """M = (1/#A) sum_{chi in A} |sum_{n <= N} alpha_n chi(n)|."""
    ctx = A.ctx
    if N > ctx.q:
        raise ValueError("N must not exceed q")
    if len(A) == 0:
        raise ValueError("A must be nonempty")
    T = character_sums_all(ctx, N, alpha)
    M = math.fsum(np.abs(T[A.array()])) / len(A)
    K = float(product_set(A).K)
    env = mean_value_envelope(len(A), N, ctx.q, K)
    return MeanValueReport(A=len(A), N=N, M=M, K=K, envelope=env, ratio=M / env)


# -- double sum over pairs of characters ------------------------------------


def hb_envelope(N: int, R: int, q: int) -> float:
    """N^2 R + N R^2 + N R^(5/4) q^(1/2), unit constant."""
    return N * N * R + N * R * R + N * R**1.25 * math.sqrt(q)


def hb_double_sum(chars, N: int, alpha=None) -> float:
    """sum_{r, s} |sum_{n <= N} alpha_n chi_r(n) conj(chi_s)(n)|^2 over distinct characters."""
    chars = list(chars)
    if not chars:
        raise ValueError("need at least one character")
    ctx = chars[0].ctx
    if any(c.ctx is not ctx for c in chars):
        raise ValueError("characters must share a modulus context")
    e = np.array([c.e for c in chars], dtype=np.int64)
    if len(np.unique(e)) != len(e):
        raise ValueError("characters must be distinct")
    T2 = np.abs(character_sums_all(ctx, N, alpha)) ** 2
    d = (e[:, None] - e[None, :]) % ctx.order
    return math.fsum(T2[d].ravel())


# -- zero density over a subgroup ---------------------------------------------


@dataclass(frozen=True)
class ZeroDensityAggregate:
    sigma: float
    T: float
    per_char: dict[int, int]
    total: int
    bound_envelope: float
    margin: float = 0.0


def zero_density_envelope(H: int, q: int, sigma: float) -> float:
    """Subgroup zero-density envelope, unit constant, split at H = q^(2/3)."""
    if H >= q ** (2 / 3):
        return H ** ((7 - 6 * sigma) / (6 - 4 * sigma))
    return H ** ((4 - 3 * sigma) / (6 - 4 * sigma)) * q ** ((1 - sigma) / (3 - 2 * sigma))


def zero_density_aggregate(H: CharacterSet, sigma: float, T: float) -> ZeroDensityAggregate:
    if sigma <= 0.5:
        raise ValueError("sigma must exceed 1/2")
    if not 0 < T <= 10:
        raise ValueError("T must lie in (0, 10]")
    if H.ctx.q > 500:
        raise ValueError("zero counting is limited to q <= 500")
    counts, margin = count_zeros(H.ctx, H.exponents, sigma, -T, T)
    return ZeroDensityAggregate(
        sigma=sigma,
        T=T,
        per_char=counts,
        total=int(sum(counts.values())),
        bound_envelope=zero_density_envelope(len(H), H.ctx.q, sigma),
        margin=float(min(margin.values())),
    )


# -- powers of a primitive root ------------------------------------------------


@dataclass(frozen=True)
class SpacingReport:
    q: int
    g: int
    N: int
    Hlen: int
    statistic: str  # f | V | R2
    values: dict = field(default_factory=dict)
    reference: float = 0.0


def _power_positions(ctx: ModulusContext) -> np.ndarray:
    """pos[r] = the n in [1, q-1] with g^n = r; pos[0] = q (never reached)."""
    pos = ctx.ind.copy()
    pos[pos == 0] = ctx.order
    pos[0] = ctx.q
    return pos


def _hit_indicator(ctx: ModulusContext, N: int) -> np.ndarray:
    if not 1 <= N <= ctx.order:
        raise ValueError("need 1 <= N <= q-1")
    return (_power_positions(ctx) <= N).astype(np.int64)


def window_count_f(ctx: ModulusContext, a: int, Hlen: int, N: int) -> int:
    """#{n in [1, N] : g^n = a + h (mod q) for some h in [1, Hlen]}."""
    if not 0 <= a < ctx.q:
        raise ValueError("need 0 <= a < q")
    if not 1 <= Hlen <= ctx.q:
        raise ValueError("need 1 <= Hlen <= q")
    b = _hit_indicator(ctx, N)
    r = (a + np.arange(1, Hlen + 1)) % ctx.q
    return int(b[r].sum())


def window_counts_all(ctx: ModulusContext, Hlen: int, N: int) -> np.ndarray:
    """f(a, Hlen, N) for a = 0..q-1 by a circular sliding window."""
    if not 1 <= Hlen <= ctx.q:
        raise ValueError("need 1 <= Hlen <= q")
    b = _hit_indicator(ctx, N)
    c = np.concatenate([[0], np.cumsum(np.concatenate([b, b]))])
    a = np.arange(ctx.q)
    return c[a + Hlen + 1] - c[a + 1]


def variance_numerator(ctx: ModulusContext, Hlen: int, N: int) -> int:
    """q * sum_a f(a)^2 - (H N)^2, an exact integer; V = this / q^2."""
    f = window_counts_all(ctx, Hlen, N)
    s2 = sum(int(x) * int(x) for x in f)
    return ctx.q * s2 - (Hlen * N) ** 2


def variance_V(ctx: ModulusContext, Hlen: int, N: int) -> float:
    """V(H, N) = (1/q) sum_a (f(a, H, N) - HN/q)^2."""
    return variance_numerator(ctx, Hlen, N) / ctx.q**2


def variance_sum(ctx: ModulusContext, Hlen: int, N: int) -> float:
    """sum_a (f(a, H, N) - HN/q)^2 = q V(H, N), the normalization with mean HN."""
    return variance_numerator(ctx, Hlen, N) / ctx.q


def r2_window(q: int, Hscale: float, alpha: float, gamma: float) -> tuple[int, int]:
    """Integer window (lo, hi] for (q/H)[alpha, alpha + gamma], clipped to [1, q-1]."""
    lo = math.floor(q / Hscale * alpha)
    hi = math.floor(q / Hscale * (alpha + gamma))
    return max(lo, 0), min(hi, q - 1)


def pair_difference_counts(ctx: ModulusContext, N: int) -> np.ndarray:
    """C[d] = #{(m, n) in [1, N]^2 : g^m - g^n = d (mod q)} via an FFT autocorrelation."""
    x = np.zeros(ctx.q)
    x[ctx.gpow[np.arange(1, N + 1) % ctx.order]] = 1.0
    F = np.fft.rfft(x)
    C = np.fft.irfft(F * np.conj(F), n=ctx.q)
    Ci = np.rint(C).astype(np.int64)
    if np.abs(C - Ci).max() > 0.25:
        raise ArithmeticError("autocorrelation rounding failed")
    return Ci


def pair_correlation_R2(ctx: ModulusContext, N: int, Hscale: float, alpha_window: float, gamma: float) -> float:
    """R_2(J, N) for J = [alpha, alpha + gamma]; 0 when the integer window is empty."""
    if not 1 <= N <= ctx.order:
        raise ValueError("need 1 <= N <= q-1")
    # J may extend past 1: the dilated window is clipped to [1, q-1] instead
    if gamma < 0 or alpha_window < 0:
        raise ValueError("J = [alpha, alpha + gamma] needs alpha >= 0 and gamma >= 0")
    lo, hi = r2_window(ctx.q, Hscale, alpha_window, gamma)
    if hi <= lo:
        return 0.0
    C = pair_difference_counts(ctx, N)
    return int(C[lo + 1 : hi + 1].sum()) / N


def spacing_report(ctx: ModulusContext, statistic: str, N: int, Hlen: int, **kw) -> SpacingReport:
    """Bundle one spacing statistic with its reference value."""
    if statistic == "f":
        f = window_counts_all(ctx, Hlen, N)
        vals = {"sum_f": int(f.sum()), "max_f": int(f.max()), "min_f": int(f.min())}
        ref = Hlen * N / ctx.q
    elif statistic == "V":
        num = variance_numerator(ctx, Hlen, N)
        vals = {
            "V": num / ctx.q**2,
            "variance_sum": num / ctx.q,
            "ratio_to_HN": (num / ctx.q) / (Hlen * N),
        }
        ref = float(Hlen * N)
    elif statistic == "R2":
        alpha, gamma = kw.get("alpha", 0.0), kw.get("gamma", 1.0)
        lo, hi = r2_window(ctx.q, Hlen, alpha, gamma)
        vals = {
            "R2": pair_correlation_R2(ctx, N, Hlen, alpha, gamma),
            "alpha": alpha,
            "gamma": gamma,
            "window_lo": lo,
            "window_hi": hi,
            "degenerate": hi <= lo,
        }
        ref = gamma
    else:
        raise ValueError("statistic must be f, V or R2")
    return SpacingReport(q=ctx.q, g=ctx.g, N=N, Hlen=Hlen, statistic=statistic, values=vals, reference=ref)
