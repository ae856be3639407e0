import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfunlab.characters import (
    Character,
    char_eval,
    character_set,
    even_subgroup_plus,
    full_group,
    greedy_cover,
    interval,
    kernel,
    product_set,
    subgroup,
    verify_cover,
)
from lfunlab.modarith import build_context, divisors

from oracles import char_value, trial_division_primes

PRIMES = trial_division_primes(499)[1:]


@st.composite
def character_and_n(draw):
    q = draw(st.sampled_from(PRIMES[:40]))
    e = draw(st.integers(0, q - 2))
    n = draw(st.integers(0, 10**6))
    return q, e, n


@given(character_and_n())
@settings(max_examples=150, deadline=None)
def test_eval_matches_power_walk(args):
    q, e, n = args
    ctx = build_context(q)
    assert abs(char_eval(Character(ctx, e), n) - char_value(q, ctx.g, e, n)) < 1e-12


@given(character_and_n(), st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_complete_multiplicativity(args, m):
    q, e, n = args
    chi = Character(build_context(q), e)
    assert abs(chi(n * m) - chi(n) * chi(m)) < 1e-12


def test_eval_examples():
    ctx = build_context(13)
    assert chi_close(Character(ctx, 3)(3), 1)
    assert all(Character(ctx, e)(1) == 1 for e in range(12))
    assert all(Character(ctx, 0)(n) == 1 for n in range(1, 13))
    assert Character(ctx, 5)(26) == 0


def chi_close(a, b):
    return abs(a - b) < 1e-12


def test_order_and_algebra():
    ctx = build_context(13)
    for e in range(12):
        chi = Character(ctx, e)
        assert chi.order == 12 // math.gcd(e, 12)
        assert (chi * chi.conj()).is_principal
        assert chi_close(chi.conj()(5), chi(5).conjugate())
        assert chi_close(chi(5) ** chi.order, 1)


def test_parity():
    for q in trial_division_primes(200)[1:]:
        ctx = build_context(q)
        for e in range(q - 1):
            chi = Character(ctx, e)
            assert abs(chi(q - 1) - (-1) ** e) < 1e-9
            assert chi.parity == (-1) ** e


def test_subgroup_examples():
    ctx = build_context(13)
    assert subgroup(ctx, 1).exponents == (0,)
    assert subgroup(ctx, 12).exponents == tuple(range(12))
    assert subgroup(ctx, 4).exponents == (0, 3, 6, 9)
    with pytest.raises(ValueError):
        subgroup(ctx, 5)


def test_subgroups_are_closed():
    for q in (13, 101, 499):
        ctx = build_context(q)
        for H in divisors(q - 1):
            S = subgroup(ctx, H)
            s = set(S.exponents)
            assert len(S) == H and S.is_subgroup
            assert all((a + b) % (q - 1) in s for a in s for b in list(s)[:5])


def test_kernel_examples():
    ctx = build_context(13)
    assert kernel(ctx, 12).tolist() == [1]
    assert kernel(ctx, 1).tolist() == list(range(1, 13))
    assert kernel(ctx, 4).tolist() == [1, 3, 9]
    for H in divisors(12):
        K = kernel(ctx, H)
        assert len(K) == 12 // H
        for chi in subgroup(ctx, H):
            assert all(chi_close(chi(int(n)), 1) for n in K)


def test_even_subgroup_examples():
    ctx = build_context(13)
    assert even_subgroup_plus(ctx, 6).exponents == (0, 4, 8)
    assert even_subgroup_plus(ctx, 12).exponents == (0, 2, 4, 6, 8, 10)
    assert even_subgroup_plus(build_context(101), 2).exponents == (0,)
    assert all(chi.parity == 1 for chi in even_subgroup_plus(ctx, 6))
    with pytest.raises(ValueError):
        even_subgroup_plus(ctx, 3)


def test_product_set_examples():
    ctx = build_context(101)
    for H in divisors(100):
        assert product_set(subgroup(ctx, H)).K == 1
    rep = product_set(interval(ctx, 1, 3))
    assert rep.product_size == 5 and rep.K == Fraction(5, 3)
    assert product_set(character_set(ctx, [17])).K == 1


def test_verify_cover_examples():
    ctx = build_context(101)
    A = subgroup(ctx, 20)
    rep = verify_cover(A, character_set(ctx, [0]))
    assert rep.ok and set(rep.counts.values()) == {20}
    I = interval(ctx, 1, 3)
    quotients = character_set(ctx, [a - b for a in I.exponents for b in I.exponents])
    assert verify_cover(I, quotients).ok
    empty = verify_cover(I, character_set(ctx, []))
    assert not empty.ok and set(empty.counts.values()) == {0}


def test_greedy_cover_examples():
    ctx = build_context(499)
    assert greedy_cover(subgroup(ctx, 83)).exponents == (0,)
    assert greedy_cover(character_set(ctx, [0])).exponents == (0,)
    # for a singleton {chi}, chi1 * conj(chi2) is principal, so eta must be chi itself
    assert greedy_cover(character_set(ctx, [5])).exponents == (5,)
    for A in (3, 7, 20, 64):
        U = greedy_cover(interval(ctx, 1, A))
        assert verify_cover(interval(ctx, 1, A), U).ok
        assert len(U) <= 3


@given(st.sampled_from(PRIMES), st.integers(1, 64), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_greedy_cover_always_verifies(q, size, seed):
    ctx = build_context(q)
    rng = np.random.default_rng(seed)
    A = character_set(ctx, rng.choice(q - 1, size=min(size, q - 1), replace=False).tolist())
    U = greedy_cover(A)
    assert verify_cover(A, U).ok
