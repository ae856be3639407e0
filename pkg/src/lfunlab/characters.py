"""Dirichlet characters modulo a prime, identified by exponent.

chi_e(g**k) = exp(2 pi i e k / (q-1)). Sets of characters are sets of exponents in
Z/(q-1), so products of characters are sums of exponents and conjugation is negation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from fractions import Fraction
from typing import Iterable

import numpy as np

from .modarith import ModulusContext


@dataclass(frozen=True)
class Character:
    ctx: ModulusContext
    e: int

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % self.ctx.order)

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def is_principal(self) -> bool:
        return self.e == 0

    @property
    def order(self) -> int:
        return self.ctx.order // gcd(self.e, self.ctx.order)

    @property
    def parity(self) -> int:
        """chi(-1), which is (-1)**e because ind(-1) = (q-1)/2."""
        return -1 if self.e % 2 else 1

    def conj(self) -> "Character":
        return Character(self.ctx, -self.e)

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.ctx, self.e + other.e)

    def __call__(self, n):
        return char_eval(self, n)

    def values(self) -> np.ndarray:
        """Array of chi(n) for n = 0..q-1."""
        return char_table(self.ctx, self.e)


def char_table(ctx: ModulusContext, e: int) -> np.ndarray:
    vals = np.zeros(ctx.q, dtype=complex)
    vals[1:] = ctx.roots[(e * ctx.ind[1:]) % ctx.order]
    return vals


def char_eval(chi: Character, n):
    """chi(n) for an integer or an integer array."""
    ctx = chi.ctx
    if np.isscalar(n):
        r = int(n) % ctx.q
        if r == 0:
            return 0j
        return complex(ctx.roots[(chi.e * int(ctx.ind[r])) % ctx.order])
    r = np.asarray(n, dtype=np.int64) % ctx.q
    out = np.zeros(r.shape, dtype=complex)
    nz = r != 0
    out[nz] = ctx.roots[(chi.e * ctx.ind[r[nz]]) % ctx.order]
    return out


@dataclass(frozen=True)
class CharacterSet:
    ctx: ModulusContext
    exponents: tuple[int, ...]
    is_subgroup: bool = False
    label: str = ""

    @property
    def order(self) -> int:
        return len(self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self):
        return (Character(self.ctx, e) for e in self.exponents)

    def __contains__(self, chi) -> bool:
        e = chi.e if isinstance(chi, Character) else int(chi)
        return (e % self.ctx.order) in set(self.exponents)

    def array(self) -> np.ndarray:
        return np.asarray(self.exponents, dtype=np.int64)

    def split_parity(self) -> tuple["CharacterSet", "CharacterSet"]:
        even = tuple(e for e in self.exponents if e % 2 == 0)
        odd = tuple(e for e in self.exponents if e % 2 == 1)
        return (
            CharacterSet(self.ctx, even, self.is_subgroup, self.label + "+"),
            CharacterSet(self.ctx, odd, False, self.label + "-"),
        )


def character_set(ctx: ModulusContext, exponents: Iterable[int], label: str = "") -> CharacterSet:
    exps = tuple(sorted({int(e) % ctx.order for e in exponents}))
    return CharacterSet(ctx, exps, False, label)


def subgroup(ctx: ModulusContext, H: int) -> CharacterSet:
    """The unique subgroup of order H: exponents divisible by (q-1)/H."""
    if H < 1 or ctx.order % H:
        raise ValueError(f"H={H} does not divide q-1={ctx.order}")
    d = ctx.order // H
    return CharacterSet(ctx, tuple(range(0, ctx.order, d)), True, f"H{H}")


def full_group(ctx: ModulusContext) -> CharacterSet:
    return subgroup(ctx, ctx.order)


def interval(ctx: ModulusContext, base: int, A: int) -> CharacterSet:
    """Consecutive powers {chi^a : a = 1..A} of chi = chi_base."""
    return character_set(ctx, (base * a for a in range(1, A + 1)), label=f"I{base}x{A}")


def kernel(ctx: ModulusContext, H: int) -> np.ndarray:
    """Residues n with chi(n) = 1 for every chi in the subgroup of order H, ascending."""
    if H < 1 or ctx.order % H:
        raise ValueError(f"H={H} does not divide q-1={ctx.order}")
    return np.sort(ctx.gpow[::H])


def even_subgroup_plus(ctx: ModulusContext, H: int) -> CharacterSet:
    """The H/2 even characters of the subgroup of order H (exponents divisible by 2(q-1)/H)."""
    if H % 2:
        raise ValueError("H must be even")
    if ctx.order % H:
        raise ValueError(f"H={H} does not divide q-1={ctx.order}")
    d = 2 * ctx.order // H
    return CharacterSet(ctx, tuple(range(0, ctx.order, d)), True, f"H{H}+")


# -- product sets and covering -----------------------------------------------


@dataclass(frozen=True)
class DoublingReport:
    A: int
    product_size: int
    K: Fraction


def difference_counts(S: CharacterSet) -> np.ndarray:
    """D[d] = #{(e1, e2) in S x S : e1 - e2 = d mod (q-1)}."""
    m = S.ctx.order
    a = S.array()
    return np.bincount(((a[:, None] - a[None, :]) % m).ravel(), minlength=m)


def product_set(A: CharacterSet) -> DoublingReport:
    if not A.exponents:
        raise ValueError("product_set needs a nonempty set")
    a = A.array()
    sums = np.unique((a[:, None] + a[None, :]) % A.ctx.order)
    return DoublingReport(A=len(a), product_size=len(sums), K=Fraction(len(sums), len(a)))


@dataclass(frozen=True)
class CoverReport:
    counts: dict[int, int]
    threshold: Fraction
    ok: bool
    U_size: int
    bound: Fraction  # 2K - 1


def verify_cover(A: CharacterSet, U: CharacterSet) -> CoverReport:
    """Count representations chi = chi1 * conj(chi2) * eta with chi1, chi2 in A, eta in U."""
    D = difference_counts(A)
    m = A.ctx.order
    u = U.array()
    counts = {}
    for e in A.exponents:
        counts[e] = int(D[(e - u) % m].sum()) if len(u) else 0
    thr = Fraction(len(A), 2)
    K = product_set(A).K
    return CoverReport(
        counts=counts,
        threshold=thr,
        ok=bool(counts) and all(c >= thr for c in counts.values()),
        U_size=len(u),
        bound=2 * K - 1,
    )


class CoverSearchError(RuntimeError):
    """Greedy selection ran out of useful candidates (says nothing about existence)."""


def greedy_cover(A: CharacterSet) -> CharacterSet:
    """Greedy witness for the covering lemma.

    Each step adds the eta that adds the most still-needed representations,
    ties broken by smallest exponent.
    """
    if not A.exponents:
        raise ValueError("greedy_cover needs a nonempty set")
    m = A.ctx.order
    D = difference_counts(A)
    a = A.array()
    need = np.full(len(a), len(a) / 2.0)
    have = np.zeros(len(a))
    # gain[i, eta] = D[a_i - eta]
    gain = D[(a[:, None] - np.arange(m)[None, :]) % m].astype(float)
    chosen: list[int] = []
    while np.any(have < need):
        deficit = np.clip(need - have, 0, None)
        score = np.minimum(gain, deficit[:, None]).sum(axis=0)
        score[chosen] = -1
        best = int(np.argmax(score))
        if score[best] <= 0:
            raise CoverSearchError(f"no candidate improves coverage after {len(chosen)} picks")
        chosen.append(best)
        have += gain[:, best]
    return character_set(A.ctx, chosen, label="U")
