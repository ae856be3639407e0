"""The resonator mass S2 = sum_{chi in H} |R(chi)|^2 evaluated two ways.

Character form: sum the squared moduli of R(chi) over the subgroup.
Kernel form: orthogonality turns the same quantity into
    H * sum_{h in Ker H} sum_{hm = n (mod q)} r_m r_n
      = H * sum_{h in Ker H} sum_a w[a] w[h a mod q],
where w[a] collects the coefficients r_n with n = a (mod q).
"""

from __future__ import annotations

import math

import numpy as np

from ..characters import CharacterSet, kernel
from ..modarith import ModulusContext
from .resonator import Resonator, residue_mass, resonator_series


def _require_subgroup(ctx: ModulusContext, H: CharacterSet) -> int:
    if not H.is_subgroup:
        raise ValueError("the kernel form needs a subgroup")
    h = len(H)
    if ctx.order % h or H.exponents != tuple(range(0, ctx.order, ctx.order // h)):
        raise ValueError("character set is not the subgroup of its order")
    return h


def s2_kernel_form(ctx: ModulusContext, H: CharacterSet, R: Resonator) -> float:
    order = _require_subgroup(ctx, H)
    w = residue_mass(ctx, R)
    a = np.arange(1, ctx.q, dtype=np.int64)
    total = []
    for h in kernel(ctx, order):
        total.append(float(np.dot(w[1:], w[(h * a) % ctx.q])))
    return order * math.fsum(total)


def s2_character_form(ctx: ModulusContext, H: CharacterSet, R: Resonator) -> float:
    vals = resonator_series(H, R)
    return math.fsum(np.abs(vals) ** 2)


def s2_diagonal_lower_bound(H: CharacterSet, R: Resonator) -> float:
    """H * sum_m r_m^2 over the materialized coefficients (the h = 1, m = n terms)."""
    if R.mode == "thm13":
        return len(H) * float(sum(R.counts.values()))
    return len(H) * math.fsum(R.r**2)
