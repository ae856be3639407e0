"""Resonance pipelines at s = 1, at real sigma in (1/2, 1), and at s = 1/2.

Each pipeline evaluates the two quadratic forms over a subgroup, the analytic
lower bound their ratio must exceed, and the exhaustive maximum the ratio must
stay below. All three chains are exact finite inequalities, so at desk scale
they are checked rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..characters import Character, CharacterSet, even_subgroup_plus, subgroup
from ..lfun.oracle import l_values
from ..lfun.series import euler_product_logs, prime_sums_all
from ..modarith import ModulusContext, sieve_primes
from .resonator import (
    ResonanceConfig,
    ResonanceError,
    Resonator,
    build_resonator,
    resonator_product,
    resonator_series,
)
from .sums import build_set_M

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ResonanceReport:
    mode: str  # sigma1 | sigma_interior | half_line
    q: int
    H: int
    S1: float
    S2: float
    ratio: float
    lower_bound: float
    witness: Character
    exhaustive_max: float
    truncation_error: float
    ratio_nonprincipal: float  # the same ratio with chi_0 removed from both forms
    params: dict = field(default_factory=dict)

    @property
    def chain_ok(self) -> bool:
        """ratio >= lower_bound - truncation_error."""
        return self.ratio >= self.lower_bound - self.truncation_error

    @property
    def max_ok(self) -> bool:
        """exhaustive max >= ratio - truncation_error, with chi_0 kept in the ratio."""
        return self.exhaustive_max >= self.ratio - self.truncation_error

    @property
    def max_ok_nonprincipal(self) -> bool:
        return self.exhaustive_max >= self.ratio_nonprincipal - self.truncation_error

    @property
    def verified(self) -> bool:
        return self.chain_ok and self.max_ok


def _subgroup_checked(ctx: ModulusContext, H: int) -> CharacterSet:
    if H < 2:
        raise ResonanceError("subgroup must contain a non-principal character")
    return subgroup(ctx, H)


def _argmax_nonprincipal(exps: np.ndarray, values: np.ndarray) -> tuple[int, float]:
    mask = exps != 0
    idx = np.flatnonzero(mask)
    best = idx[np.argmax(values[idx])]
    return int(exps[best]), float(values[best])


def _primes_upto(X: float, q: int) -> np.ndarray:
    p = sieve_primes(int(math.floor(X))).primes if X >= 2 else np.zeros(0, dtype=np.int64)
    return p[p != q]


def resonance_sigma1(ctx: ModulusContext, H: int, cfg: ResonanceConfig = ResonanceConfig()) -> ResonanceReport:
    """Resonance at s = 1 with L(1, chi; q^4) replaced by L(1, chi; X2).

    S1 = sum_H L(1, chi; X2) |R(chi)|^2 and S2 = sum_H |R(chi)|^2 with the
    untruncated resonator prod_{p <= X} (1 - r_p chi(p))^-1. Positivity of the
    Euler-product coefficients gives S1/S2 >= prod_{p <= X}(1 - r_p/p)^-1.
    """
    chars = _subgroup_checked(ctx, H)
    X = cfg.X_for(H)
    if X < 3:
        raise ResonanceError(f"subgroup too small: X = {X:.4g} < 3 for H = {H}")
    R = build_resonator("thm11", ctx, {"X": X}, cutoff=cfg.truncation_cutoff)
    X2 = cfg.euler_cutoff
    exps = chars.array()
    Lx = np.exp(euler_product_logs(ctx, X2, 1.0)[exps])
    R2 = np.abs(resonator_product(chars, R)) ** 2
    S1c = complex(np.sum(Lx * R2))
    S2 = float(np.sum(R2))
    ratio = abs(S1c) / S2
    nonp = exps != 0
    ratio_np = abs(complex(np.sum(Lx[nonp] * R2[nonp]))) / float(np.sum(R2[nonp]))
    p = _primes_upto(X, ctx.q)
    bound = float(np.exp(-np.log1p(-np.array([R.prime_weights.get(int(x), 0.0) for x in p]) / p).sum())) if len(p) else 1.0
    e_star, best = _argmax_nonprincipal(exps, np.abs(Lx))
    # the chain is exact for the finite products used; only rounding remains
    err = 64 * _EPS * len(exps) * max(ratio, bound, best) * (1 + math.log(X2))
    return ResonanceReport(
        mode="sigma1",
        q=ctx.q,
        H=H,
        S1=abs(S1c),
        S2=S2,
        ratio=ratio,
        lower_bound=bound,
        witness=Character(ctx, e_star),
        exhaustive_max=best,
        truncation_error=err,
        ratio_nonprincipal=ratio_np,
        params={"X": X, "X2": float(X2), "kappa": cfg.kappa, "delta": cfg.delta},
    )


def b_sigma(sigma: float, form: str = "theorem") -> float:
    """Exponent in the conditional subgroup-size threshold (log q)^((1+delta) b(sigma)).

    The theorem statement gives 8(1-sigma)/(2 sigma - 1); its proof uses
    8/(2 sigma - 1). ``form`` picks one.
    """
    if not 0.5 < sigma < 1:
        raise ValueError("sigma must lie in (1/2, 1)")
    if form == "theorem":
        return 8 * (1 - sigma) / (2 * sigma - 1)
    if form == "proof":
        return 8 / (2 * sigma - 1)
    raise ValueError("form must be 'theorem' or 'proof'")


def resonance_sigma_interior(
    ctx: ModulusContext,
    H: int,
    sigma: float,
    cfg: ResonanceConfig = ResonanceConfig(),
    b_form: str = "theorem",
) -> ResonanceReport:
    """Resonance for the prime sums S_chi(sigma, X) = sum_{p <= X} chi(p) p^-sigma.

    r_p = 1/2 for p <= Y. The prime-sum cutoff X is cfg.euler_cutoff (the
    analytic choice (log q)^(4/eta) is out of reach). The chain is
    |S1|/S2 >= sum_{p <= Y} r_p p^-sigma.
    """
    if not 0.5 < sigma < 1:
        raise ValueError("sigma must lie in (1/2, 1)")
    chars = _subgroup_checked(ctx, H)
    Y = cfg.Y_for(H)
    if Y < 2:
        raise ResonanceError(f"subgroup too small: Y = {Y:.4g} < 2 for H = {H}")
    Xs = float(cfg.euler_cutoff)
    if Xs < Y:
        raise ResonanceError("prime-sum cutoff must be at least Y")
    R = build_resonator("thm12", ctx, {"Y": max(Y, 2.0 + 1e-12)}, cutoff=cfg.truncation_cutoff)
    exps = chars.array()
    S = prime_sums_all(ctx, sigma, Xs)[exps]
    R2 = np.abs(resonator_product(chars, R)) ** 2
    S1c = complex(np.sum(S * R2))
    S2 = float(np.sum(R2))
    ratio = abs(S1c) / S2
    nonp = exps != 0
    ratio_np = abs(complex(np.sum(S[nonp] * R2[nonp]))) / float(np.sum(R2[nonp]))
    p = _primes_upto(Y, ctx.q)
    bound = float(np.sum(0.5 * p.astype(float) ** -sigma))
    e_star, best = _argmax_nonprincipal(exps, np.abs(S))
    err = 64 * _EPS * len(exps) * max(ratio, bound, best) * (1 + math.log(Xs))
    lq = math.log(ctx.q)
    return ResonanceReport(
        mode="sigma_interior",
        q=ctx.q,
        H=H,
        S1=abs(S1c),
        S2=S2,
        ratio=ratio,
        lower_bound=bound,
        witness=Character(ctx, e_star),
        exhaustive_max=best,
        truncation_error=err,
        ratio_nonprincipal=ratio_np,
        params={
            "sigma": sigma,
            "Y": Y,
            "X": Xs,
            "b_sigma": b_sigma(sigma, b_form),
            "b_form": b_form,
            "unconditional_range": bool(H >= ctx.q ** ((2 - 2 * sigma) * (2 - sigma) + cfg.delta)),
            "grh_range": bool(math.log(H) >= (1 + cfg.delta) * b_sigma(sigma, b_form) * math.log(lq)),
        },
    )


def resonance_half_line(
    ctx: ModulusContext,
    H: int,
    h: int,
    block_params=None,
    M=None,
) -> ResonanceReport:
    """Resonance at s = 1/2 over the even subgroup H+ of order H/2.

    Here S1 = sum |R(chi)|^2 is the resonator mass and S2 = sum |L(1/2, chi)|^2 |R(chi)|^2,
    both over H+ without chi_0, so S2/S1 is a weighted mean of |L(1/2, chi)|^2.
    L-values come from the Hurwitz oracle. ``ratio`` is S2/S1 with chi_0
    removed. ``ratio_nonprincipal`` repeats it, and the params record the
    forms with chi_0 kept.
    """
    if H % 2 or ctx.order % H:
        raise ValueError("H must be an even divisor of q-1")
    if h < 1 or h > ctx.q:
        raise ResonanceError("need 1 <= h <= q")
    plus = even_subgroup_plus(ctx, H)
    if len(plus) < 2:
        raise ResonanceError("H+ has no non-principal character")
    if M is None:
        M, R = build_set_M(h, ctx, block_params)
    else:
        R = build_resonator("thm13", ctx, {"M": M, "h": h})
    exps = plus.array()
    Lh, lerr = l_values(ctx, 0.5)
    L2 = np.abs(Lh[exps]) ** 2
    R2 = np.abs(resonator_series(plus, R)) ** 2
    nonp = exps != 0
    S1 = float(np.sum(R2[nonp]))
    S2 = float(np.sum(L2[nonp] * R2[nonp]))
    ratio = S2 / S1 if S1 > 0 else 0.0
    e_star, best = _argmax_nonprincipal(exps, L2)
    full_R2 = np.abs(resonator_series(subgroup(ctx, ctx.order), R)) ** 2
    mass = sum(R.counts.values())
    err = 2 * float(np.abs(Lh[exps]).max()) * lerr + 64 * _EPS * len(exps) * max(ratio, best)
    return ResonanceReport(
        mode="half_line",
        q=ctx.q,
        H=H,
        S1=S1,
        S2=S2,
        ratio=ratio,
        lower_bound=0.0,
        witness=Character(ctx, e_star),
        exhaustive_max=best,
        truncation_error=err,
        ratio_nonprincipal=ratio,
        params={
            "h": h,
            "size_M": len(M),
            "mass": mass,
            "R_chi0_sq": float(R2[~nonp][0]),
            "R_chi0_bound": float(min(ctx.q - 1, h) * h),
            "S1_full_group": math.fsum(full_R2),
            "S1_full_group_bound": float((ctx.q - 1) * h),
            "S1_with_chi0": float(np.sum(R2)),
            "S2_with_chi0": float(np.sum(L2 * R2)),
        },
    )
