"""The weight W_0 and the second-moment identity it produces for even characters.

    W_0(x) = 1/(2 pi i) int_(2) Gamma(1/4 + s/2)^2 / (Gamma(1/4)^2 s) x^-s ds,
    |L(1/2, chi)|^2 = 2 sum_{k, l} chi(k) conj(chi)(l) (kl)^-1/2 W_0(pi k l / q).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import loggamma

from ..characters import Character, char_eval
from ..lfun.afe import QuadratureError

W0_HEIGHT = 40.0
W0_STEP = 0.05
_LG14 = float(loggamma(0.25).real)


def _w0_kernel(c: float, height: float, step: float):
    J = int(round(height / step))
    v = np.arange(-J, J + 1) * step
    s = c + 1j * v
    k = np.exp(2 * loggamma(0.25 + s / 2) - 2 * _LG14) / s
    return s, k


def w0_weight(x, abscissa: float = 2.0, height: float = W0_HEIGHT, step: float = W0_STEP) -> tuple[np.ndarray, float]:
    """W_0 at an array of x > 0 by the trapezoid rule on Re s = abscissa.

    Returns (values, error estimate). The estimate combines the h vs 2h
    difference, the truncated tail beyond |Im s| = height and rounding.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise ValueError("x must be positive")
    if abscissa <= 0:
        raise ValueError("abscissa must be positive (right of the pole at s = 0)")
    s, k = _w0_kernel(abscissa, height, step)
    phase = np.exp(-np.outer(np.log(x), s))
    terms = phase * k[None, :]
    fine = terms.sum(axis=1) * step / (2 * np.pi)
    coarse = terms[:, ::2].sum(axis=1) * 2 * step / (2 * np.pi)
    scale = x ** (-abscissa)
    # |Gamma|^2 decays like exp(-pi |v| / 2): the tail is about 2/pi times the edge value
    tail = scale * float(np.abs(k[[0, -1]]).max()) * 2 / np.pi / (2 * np.pi)
    rounding = 16 * np.finfo(float).eps * np.abs(terms).sum(axis=1) * step / (2 * np.pi)
    err = float((np.abs(fine - coarse) + tail + rounding).max())
    if not np.all(np.isfinite(fine)) or err > 1e-6:
        raise QuadratureError(f"W_0 quadrature did not converge (err ~ {err:.2e})")
    return fine.real, err


def w0_moment(chi: Character, tol: float = 1e-10) -> tuple[float, int]:
    """2 sum_{k,l} chi(k) conj(chi)(l) (kl)^-1/2 W_0(pi k l / q), grouped by n = kl.

    The series stops at the first n where W_0(pi n / q) < tol and stays below.
    Returns (value, number of n used).
    """
    if chi.parity != 1:
        raise ValueError("the moment identity needs an even character")
    q = chi.q
    # locate the cutoff on a coarse grid, then evaluate every n below it
    n_cut = q
    while True:
        w, _ = w0_weight([math.pi * n_cut / q])
        if abs(w[0]) < tol:
            break
        n_cut *= 2
    n = np.arange(1, n_cut + 1)
    W = np.concatenate([w0_weight(math.pi * n[i : i + 4096] / q)[0] for i in range(0, len(n), 4096)])
    chi_n = char_eval(chi, n)
    # c_n = sum_{kl = n} chi(k) conj(chi(l)), a Dirichlet convolution
    c = np.zeros(n_cut + 1, dtype=complex)
    cn = np.conj(chi_n)
    for k in range(1, n_cut + 1):
        if chi_n[k - 1] == 0:
            continue
        m = n_cut // k
        c[k : k * m + 1 : k] += chi_n[k - 1] * cn[:m]
    val = 2 * np.sum(c[1:] * W / np.sqrt(n))
    return float(val.real), int(n_cut)
