"""Zero counting for L(s, chi) in rectangles [sigma, 1.5] x [t_lo, t_hi].

The count is the winding number of L around the rectangle: the change in arg L
is accumulated over sampled boundary points, which is the integral of L'/L
evaluated by tracking the continuous argument. Segments are bisected until
no step turns the argument by more than MAX_STEP_TURN. The winding number is
accepted only when it lies within WINDING_SLACK of an integer.

All characters in a set share the Hurwitz evaluations, so a subgroup is
counted in one pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from ..characters import Character, CharacterSet
from ..modarith import ModulusContext
from .oracle import l_values_grid
from .series import root_number

RIGHT_EDGE = 1.5
# Hurwitz evaluation needs Re s > 0 and s = 0 is a trivial zero of every even
# character, so the left edge is clamped here (see zero_count_rect).
SIGMA_FLOOR = 0.05
MAX_STEP_TURN = math.pi / 4
WINDING_SLACK = 0.1
NEAR_ZERO = 1e-6
_INITIAL_SPACING = 0.05
_MAX_POINTS = 200_000


class ZeroCountError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ZeroCountReport:
    sigma: float
    T: float
    count: int
    contour_margin: float
    e: int = 0
    t_range: tuple[float, float] = (0.0, 0.0)


def _perimeter(sigma: float, t_lo: float, t_hi: float, spacing: float) -> np.ndarray:
    corners = [
        complex(sigma, t_lo),
        complex(RIGHT_EDGE, t_lo),
        complex(RIGHT_EDGE, t_hi),
        complex(sigma, t_hi),
        complex(sigma, t_lo),
    ]
    pts = []
    for z0, z1 in zip(corners[:-1], corners[1:]):
        m = max(4, int(math.ceil(abs(z1 - z0) / spacing)))
        pts.append(z0 + (z1 - z0) * np.arange(m) / m)
    pts.append(np.array([corners[-1]]))
    return np.concatenate(pts)


def _eval(ctx: ModulusContext, s: np.ndarray, cols: np.ndarray) -> np.ndarray:
    out = np.empty((len(s), len(cols)), dtype=complex)
    chunk = max(1, 2_000_000 // max(ctx.q, 1))
    for i in range(0, len(s), chunk):
        vals, _ = l_values_grid(ctx, s[i : i + chunk])
        out[i : i + chunk] = vals[:, cols]
    return out


def _winding(
    ctx: ModulusContext, exps: np.ndarray, sigma: float, t_lo: float, t_hi: float
) -> tuple[np.ndarray, np.ndarray]:
    s = _perimeter(sigma, t_lo, t_hi, _INITIAL_SPACING)
    L = _eval(ctx, s, exps)
    for _ in range(40):
        if np.abs(L).min() < NEAR_ZERO:
            raise ZeroCountError("contour passes through a zero")
        turn = np.abs(np.angle(L[1:] / L[:-1])).max(axis=1)
        bad = np.flatnonzero(turn > MAX_STEP_TURN)
        if len(bad) == 0:
            wind = np.angle(L[1:] / L[:-1]).sum(axis=0) / (2 * np.pi)
            if np.all(np.abs(wind - np.rint(wind)) <= WINDING_SLACK):
                return np.rint(wind).astype(int), np.abs(L).min(axis=0)
            bad = np.arange(len(s) - 1)  # refine everywhere
        if len(s) + len(bad) > _MAX_POINTS:
            break
        mid = 0.5 * (s[bad] + s[bad + 1])
        Lmid = _eval(ctx, mid, exps)
        s = np.insert(s, bad + 1, mid)
        L = np.insert(L, bad + 1, Lmid, axis=0)
    raise ZeroCountError("argument tracking did not converge")


_NUDGES = (0.0, 1.3e-3, -1.7e-3, 3.1e-3, -3.7e-3, 7.3e-3)


def count_zeros(
    ctx: ModulusContext, exponents, sigma: float, t_lo: float, t_hi: float
) -> tuple[dict[int, int], dict[int, float]]:
    """Zeros with Re s >= sigma and t_lo <= Im s <= t_hi for each exponent.

    The principal character's pole at s = 1 is added back when it lies inside.
    Edges are nudged by a few thousandths when the contour meets a zero.
    """
    exps = np.asarray(sorted(set(int(e) % ctx.order for e in exponents)), dtype=np.int64)
    if len(exps) == 0:
        return {}, {}
    left = max(float(sigma), SIGMA_FLOOR)
    last_err = None
    for k, nudge in enumerate(_NUDGES):
        lo = t_lo - abs(nudge) if k else t_lo
        hi = t_hi + nudge
        sig = left + abs(nudge) if left > SIGMA_FLOOR else left
        # the principal character's pole sits on Im s = 0; keep edges off it
        if 0 in exps and (lo == 0 or hi == 0):
            lo, hi = (lo - 1e-3 if lo == 0 else lo), (hi + 1e-3 if hi == 0 else hi)
        try:
            wind, margin = _winding(ctx, exps, sig, lo, hi)
        except ZeroCountError as err:
            last_err = err
            continue
        counts = {int(e): int(w) for e, w in zip(exps, wind)}
        if 0 in counts and lo < 0 < hi:
            counts[0] += 1
        if any(c < 0 for c in counts.values()):
            raise ZeroCountError(f"negative winding number {counts}")
        return counts, {int(e): float(m) for e, m in zip(exps, margin)}
    raise ZeroCountError(f"zero counting failed after nudging: {last_err}")


def zero_count_rect(chi: Character, sigma: float, T: float, t_range=None) -> ZeroCountReport:
    """N(sigma, T, chi): zeros with Re s >= sigma and |Im s| <= T.

    ``t_range`` replaces [-T, T] by an explicit (t_lo, t_hi) window. The left
    edge is clamped at SIGMA_FLOOR, so sigma <= SIGMA_FLOOR counts the nontrivial
    zeros with real part at least SIGMA_FLOOR.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    lo, hi = t_range if t_range is not None else (-T, T)
    counts, margin = count_zeros(chi.ctx, [chi.e], sigma, lo, hi)
    return ZeroCountReport(
        sigma=float(sigma),
        T=float(T),
        count=counts[chi.e],
        contour_margin=margin[chi.e],
        e=chi.e,
        t_range=(float(lo), float(hi)),
    )


def zero_counts_set(chars: CharacterSet, sigma: float, T: float) -> dict[int, int]:
    counts, _ = count_zeros(chars.ctx, chars.exponents, sigma, -T, T)
    return counts


# -- critical line ----------------------------------------------------------


def hardy_z(chi: Character, t) -> np.ndarray:
    """Real-valued rotation of L(1/2 + it, chi) for non-principal chi.

    With Lambda(s) = (q/pi)^((s+kappa)/2) Gamma((s+kappa)/2) L(s, chi), the
    functional equation makes eps(chi)^(-1/2) Lambda(1/2 + it) real.
    """
    if chi.is_principal:
        raise ValueError("hardy_z needs a non-principal character")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    kappa = 0 if chi.parity == 1 else 1
    s = 0.5 + 1j * t
    L = np.empty(len(t), dtype=complex)
    chunk = max(1, 2_000_000 // chi.q)
    for i in range(0, len(t), chunk):
        vals, _ = l_values_grid(chi.ctx, s[i : i + chunk])
        L[i : i + chunk] = vals[:, chi.e]
    phase = 0.5 * t * math.log(chi.q / math.pi) + loggamma((s + kappa) / 2).imag
    phase -= 0.5 * np.angle(root_number(chi))
    return (np.exp(1j * phase) * L).real


def sign_change_count(chi: Character, T: float, dt: float = 0.01) -> int:
    """Zeros on the critical line with |t| <= T, counted as sign changes of hardy_z."""
    m = int(math.ceil(2 * T / dt))
    t = np.linspace(-T, T, m + 1)
    Z = hardy_z(chi, t)
    sgn = np.sign(Z)
    return int(np.count_nonzero(sgn[1:] * sgn[:-1] < 0))
