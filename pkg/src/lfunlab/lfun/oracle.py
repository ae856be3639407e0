"""Reference values of L(s, chi) from the Hurwitz decomposition

    L(s, chi) = q^-s * sum_{a=1}^{q-1} chi(a) zeta(s, a/q).

Ordering the residues as a = g^k turns the character sum into a discrete Fourier
transform, so one pass produces L(s, chi_e) for every exponent e at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..characters import Character
from ..modarith import ModulusContext
from .hurwitz import PoleError, hurwitz_grid

ORACLE_TARGET = 1e-10
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LValue:
    s: complex
    value: complex
    method: str
    est_error: float

    def __abs__(self):
        return abs(self.value)


class PrecisionError(ArithmeticError):
    """The oracle could not certify its own accuracy target."""


def _dft_over_index(ctx: ModulusContext, Z: np.ndarray) -> np.ndarray:
    # sum_k Z[..., k] exp(2 pi i e k / (q-1)) for every e
    n = ctx.order
    return n * np.fft.ifft(Z, axis=-1)


def l_values_grid(ctx: ModulusContext, s_values) -> tuple[np.ndarray, np.ndarray]:
    """L(s_i, chi_e) for each s_i and every exponent e = 0..q-2.

    Returns the (len(s), q-1) value array and per-row error bounds. Column 0 (the
    principal character) is meaningless at s = 1: there the Hurwitz values are
    replaced by their finite parts -psi(a/q), which is exact for every
    non-principal character because the pole cancels against sum chi(a) = 0.
    """
    s_values = np.atleast_1d(np.asarray(s_values, dtype=complex))
    a = ctx.gpow.astype(float) / ctx.q
    Z, zerr = hurwitz_grid(s_values, a, finite_part_at_one=True)
    scale = np.exp(-s_values * np.log(ctx.q))[:, None]
    vals = scale * _dft_over_index(ctx, Z)
    mag = np.abs(scale[:, 0]) * np.abs(Z).sum(axis=1)
    err = np.abs(scale[:, 0]) * ctx.order * zerr + 8 * _EPS * mag * np.log2(max(ctx.order, 2))
    return vals, err


def l_values(ctx: ModulusContext, s: complex) -> tuple[np.ndarray, float]:
    vals, err = l_values_grid(ctx, [s])
    return vals[0], float(err[0])


def l_oracle(chi: Character, s: complex) -> LValue:
    s = complex(s)
    if s.real <= 0:
        raise ValueError("l_oracle expects Re s > 0")
    if chi.is_principal and s == 1:
        raise PoleError("L(s, chi_0) has a pole at s = 1")
    ctx = chi.ctx
    a = ctx.gpow.astype(float) / ctx.q
    Z, zerr = hurwitz_grid([s], a, finite_part_at_one=True)
    w = ctx.roots[(chi.e * np.arange(ctx.order)) % ctx.order]
    scale = np.exp(-s * np.log(ctx.q))
    terms = w * Z[0]
    val = complex(scale * terms.sum())
    # numpy sums pairwise: rounding grows like log2(n) eps sum|x|
    rounding = (2 + np.log2(ctx.order)) * _EPS * np.abs(terms).sum()
    err = abs(scale) * (ctx.order * float(zerr[0]) + rounding)
    if err > ORACLE_TARGET and ctx.q <= 10**4:
        raise PrecisionError(f"oracle error bound {err:.3g} above target at q={ctx.q}, s={s}")
    return LValue(s=s, value=val, method="oracle", est_error=float(err))
