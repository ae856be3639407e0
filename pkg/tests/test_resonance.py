import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfunlab.characters import even_subgroup_plus, subgroup
from lfunlab.lfun import l_values
from lfunlab.modarith import build_context, divisors
from lfunlab.resonance import (
    ResonanceConfig,
    ResonanceError,
    b_sigma,
    build_resonator,
    build_set_M,
    exceptional_set,
    gcd_lcm_correlation,
    lemma_q2_product,
    log_nu,
    resonance_half_line,
    resonance_sigma1,
    resonance_sigma_interior,
    s2_character_form,
    s2_diagonal_lower_bound,
    s2_kernel_form,
    w0_moment,
    w0_weight,
)

from oracles import trial_division_primes


# -- parameters and resonators ---------------------------------------------------


def test_log_nu_floors():
    assert log_nu(1.0) == 2 and log_nu(math.e**5) == pytest.approx(5)
    assert log_nu(10**100, 2) == pytest.approx(math.log(100 * math.log(10)))
    assert log_nu(10.0, 2) == 2


def test_config_constraints():
    ResonanceConfig(delta=1.0, kappa=0.3, eta=0.02)
    with pytest.raises(ValueError):
        ResonanceConfig(delta=1.0, kappa=0.4)
    with pytest.raises(ValueError):
        ResonanceConfig(delta=0.1, kappa=0.05, eta=0.5)


def test_resonator_examples():
    R = build_resonator("thm11", None, {"X": 100}, cutoff=10**4)
    assert R.coefficient(4) == pytest.approx(0.98**2, abs=1e-15)
    assert R.coefficient(101) == 0 and R.prime_weights.get(101, 0) == 0
    R12 = build_resonator("thm12", None, {"Y": 4}, cutoff=10**4)
    assert R12.coefficient(6) == 0.25 and R12.coefficient(1) == 1
    with pytest.raises(ValueError):
        build_resonator("thm11", None, {"X": 2})


@given(st.sampled_from(["thm11", "thm12"]), st.integers(1, 300), st.integers(1, 300))
@settings(max_examples=150, deadline=None)
def test_complete_multiplicativity(mode, m, n):
    key = "X" if mode == "thm11" else "Y"
    R = build_resonator(mode, None, {key: 23.5}, cutoff=10**5)
    assert R.coefficient(m * n) == pytest.approx(R.coefficient(m) * R.coefficient(n), rel=1e-12, abs=0)
    table = dict(zip(R.n.tolist(), R.r.tolist()))
    assert table.get(m * n, 0.0) == pytest.approx(R.coefficient(m * n), rel=1e-12, abs=0)


def test_tail_bound_shrinks_with_cutoff():
    small = build_resonator("thm12", None, {"Y": 11}, cutoff=10**3)
    large = build_resonator("thm12", None, {"Y": 11}, cutoff=10**5)
    assert 0 <= large.tail_bound < small.tail_bound


# -- S2 in two forms -----------------------------------------------------------------


def test_s2_unit_resonator():
    ctx = build_context(101)
    R = build_resonator("thm13", ctx, {"M": [1], "h": 1})
    for H in (4, 20, 100):
        A = subgroup(ctx, H)
        assert s2_kernel_form(ctx, A, R) == pytest.approx(H, abs=1e-12)
        assert s2_character_form(ctx, A, R) == pytest.approx(H, abs=1e-12)


def test_s2_forms_agree_q13():
    ctx = build_context(13)
    A = subgroup(ctx, 4)
    R = build_resonator("thm12", ctx, {"Y": 4}, cutoff=10**4)
    a, b = s2_kernel_form(ctx, A, R), s2_character_form(ctx, A, R)
    assert abs(a - b) <= 1e-10 * b
    assert b >= s2_diagonal_lower_bound(A, R)


@given(st.sampled_from([13, 37, 101, 199]), st.data())
@settings(max_examples=20, deadline=None)
def test_s2_diagonal_bound(q, data):
    ctx = build_context(q)
    H = data.draw(st.sampled_from(divisors(q - 1)))
    X = data.draw(st.floats(3.0, 40.0))
    R = build_resonator("thm11", ctx, {"X": X}, cutoff=5000)
    A = subgroup(ctx, H)
    val = s2_kernel_form(ctx, A, R)
    assert val >= s2_diagonal_lower_bound(A, R) * (1 - 1e-12)
    assert abs(val - s2_character_form(ctx, A, R)) <= 1e-8 * val


# -- pipelines -------------------------------------------------------------------------


def test_sigma1_small_subgroup_reported():
    ctx = build_context(101)
    with pytest.raises(ResonanceError):
        resonance_sigma1(ctx, 4)
    rep = resonance_sigma1(ctx, 4, ResonanceConfig(X_override=3.0))
    # only r_2 = 1/3 survives at X = 3
    assert rep.lower_bound == pytest.approx(1 / (1 - 1 / 6), rel=1e-15)
    assert rep.chain_ok and rep.S2 > 0 and rep.ratio == pytest.approx(rep.S1 / rep.S2)


def test_sigma1_chain_q499():
    ctx = build_context(499)
    for H in divisors(498):
        if H < 4:
            continue
        rep = resonance_sigma1(ctx, H, ResonanceConfig(X_override=max(ResonanceConfig().X_for(H), 3.0)))
        assert rep.chain_ok
        assert rep.max_ok_nonprincipal
        assert not rep.witness.is_principal and rep.witness.e in subgroup(ctx, H)


def test_b_sigma_forms():
    assert b_sigma(0.75) == pytest.approx(4.0)
    assert b_sigma(0.75, "proof") == pytest.approx(16.0)
    with pytest.raises(ValueError):
        b_sigma(0.5)


@pytest.mark.parametrize("q", [101, 499])
def test_sigma_interior_chain(q):
    ctx = build_context(q)
    cfg_base = ResonanceConfig(euler_cutoff=10**5)
    for H in divisors(q - 1):
        if H < 4:
            continue
        cfg = ResonanceConfig(euler_cutoff=10**5, Y_override=max(cfg_base.Y_for(H), 3.0))
        rep = resonance_sigma_interior(ctx, H, 0.75, cfg)
        assert rep.chain_ok and rep.max_ok_nonprincipal
        assert rep.params["b_form"] == "theorem"


def test_half_line_uniform_resonator():
    ctx = build_context(101)
    rep = resonance_half_line(ctx, 20, 1)
    assert rep.params["size_M"] == 1
    L2 = np.abs(l_values(ctx, 0.5)[0]) ** 2
    plus = [e for e in even_subgroup_plus(ctx, 20).exponents if e]
    assert rep.ratio == pytest.approx(float(np.mean(L2[plus])), rel=1e-12)
    assert rep.params["R_chi0_sq"] <= rep.params["R_chi0_bound"]
    with pytest.raises(ResonanceError):
        resonance_half_line(ctx, 20, 102)
    with pytest.raises(ValueError):
        resonance_half_line(ctx, 5, 1)


# -- sums ----------------------------------------------------------------------------


def test_lemma_q2_small():
    assert lemma_q2_product(2)[0] == 0
    exact, main = lemma_q2_product(4)
    assert exact == pytest.approx(math.log(4 / 3) + math.log(16 / 15), abs=1e-12)
    assert main == pytest.approx((2 - math.log(4)) * 4 / math.log(4))
    direct = math.fsum(-math.log(1 - (1 - p / 1000) ** 2) for p in trial_division_primes(1000))
    assert lemma_q2_product(1000)[0] == pytest.approx(direct, rel=1e-13)


def test_exceptional_set_examples():
    ctx = build_context(101)
    P1, P2 = 100, 10**4
    recip = math.fsum(1 / p for p in trial_division_primes(P2) if p > P1 and p != 101)
    empty = exceptional_set(ctx, -3.0, P1, P2)
    assert empty.threshold > recip and len(empty.E) == 0
    for c in (0.5, 1.0, 2.0, 4.0):
        rep = exceptional_set(ctx, c, P1, P2)
        assert (0 in rep.E) == (recip >= rep.threshold)
        assert abs(rep.prime_sums[0] - recip) < 1e-12


def test_exceptional_set_dual_pass():
    ctx = build_context(499)
    fast = exceptional_set(ctx, 1.0, 10**3, 10**6)
    slow = exceptional_set(ctx, 1.0, 10**3, 10**6, compensated=True)
    assert fast.E.exponents == slow.E.exponents
    assert np.abs(fast.prime_sums - slow.prime_sums).max() < 1e-12


def test_gcd_lcm_examples():
    assert gcd_lcm_correlation({1}, 0.5) == 1
    assert gcd_lcm_correlation({1, 2}, 0.5) == pytest.approx(2 + 2 * math.sqrt(0.5), abs=1e-14)


@given(st.sets(st.integers(1, 10**6), min_size=1, max_size=25), st.sampled_from([1 / 3, 0.5, 1.0]))
@settings(max_examples=60, deadline=None)
def test_gcd_lcm_matches_brute_force(M, theta):
    brute = math.fsum((math.gcd(i, j) / math.lcm(i, j)) ** theta for i in M for j in M)
    got = gcd_lcm_correlation(M, theta)
    assert got == pytest.approx(brute, rel=1e-12)
    assert got >= len(M)


def test_build_set_M():
    ctx = build_context(10007)
    M, R = build_set_M(1, ctx)
    assert M == [1] and R.counts == {1: 1}
    for h in (10, 100, 1000):
        M, R = build_set_M(h, ctx)
        assert sum(R.counts.values()) == len(M) <= h
        assert len(set(M)) == len(M)
    growth = []
    for h in (10**2, 10**3, 10**4):
        M, _ = build_set_M(h, ctx)
        growth.append(gcd_lcm_correlation(M, 0.5) / len(M))
    assert growth[0] < growth[1] < growth[2]


# -- W0 --------------------------------------------------------------------------------


def test_w0_examples():
    (small,), _ = w0_weight(np.array([1e-4]))
    assert 0.9 <= small <= 1.1
    (big,), _ = w0_weight(np.array([100.0]))
    assert abs(big) <= 10 / (1 + 100.0**2)


def test_w0_moment_needs_even_character():
    from lfunlab.characters import Character

    ctx = build_context(101)
    with pytest.raises(ValueError):
        w0_moment(Character(ctx, 1))
