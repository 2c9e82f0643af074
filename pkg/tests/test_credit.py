import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from frbdyn.core import Policy, deposit_rate, dm_utility, mechanism_for
from frbdyn.credit import (
    MONEY_CREDIT,
    PURE_CREDIT,
    PURE_MONEY,
    chi_c,
    chi_hat_c,
    credit_map_step,
    debt_limit_stationary,
    find_credit_three_cycle,
    find_credit_two_cycle,
    iota_d,
    mu_tilde,
    omega,
    q_tilde,
)
from frbdyn.cycles import chi_m, eq_map, find_three_cycle, find_two_cycle
from frbdyn.errors import DomainError, NoCycleError
from frbdyn.steady import solve_steady


def test_toy_coexistence_boundary(toy, toy_policy):
    assert q_tilde(toy, toy_policy) == pytest.approx(0.98113, abs=1e-5)
    mt = mu_tilde(toy, toy_policy)
    assert mt == pytest.approx(0.163537, abs=1e-6)
    # independent evaluation: rho q / (alpha sigma [u(q) - q]) with u(q) = 2 sqrt(q)
    q = q_tilde(toy, toy_policy)
    assert mt == pytest.approx(toy.rho * q / (0.25 * (2 * np.sqrt(q) - q)), rel=1e-12)


@pytest.mark.parametrize("form", ["closed", "recursive"])
def test_regime_flips_at_mu_tilde(toy, toy_policy, form):
    mt = mu_tilde(toy, toy_policy)
    below = debt_limit_stationary(toy.replace(mu=mt - 1e-8), toy_policy, form)
    above = debt_limit_stationary(toy.replace(mu=mt + 1e-8), toy_policy, form)
    assert below.regime == MONEY_CREDIT and above.regime == PURE_CREDIT


def test_zero_monitoring_is_pure_money(toy, toy_policy):
    cs = debt_limit_stationary(toy, toy_policy)
    ss = solve_steady(toy, toy_policy)
    assert cs.regime == PURE_MONEY and cs.b_bar == 0.0
    assert cs.z == pytest.approx(ss.z_s, abs=1e-12) and cs.q_tilde == pytest.approx(ss.q_s, abs=1e-12)


def test_toy_money_credit_fixed_point(toy, toy_policy):
    p = toy.replace(mu=0.1)
    cs = debt_limit_stationary(p, toy_policy, "recursive")
    assert cs.regime == MONEY_CREDIT
    assert cs.b_bar == pytest.approx(0.59552, abs=1e-5)
    assert cs.z == pytest.approx(0.36901, abs=1e-5)
    z_now, b_now = credit_map_step(cs.z, cs.b_bar, p, toy_policy)
    assert abs(z_now - cs.z) < 1e-9 and abs(b_now - cs.b_bar) < 1e-9


@given(mu=st.floats(0.0, 1.0), chi=st.floats(0.02, 1.0), i=st.floats(0.005, 0.15))
@pytest.mark.parametrize("form", ["closed", "recursive"])
def test_omega_fixed_point_and_regime(toy, mu, chi, i, form):
    p, pol = toy.replace(mu=mu), Policy(i, chi)
    cs = debt_limit_stationary(p, pol, form)
    mt = mu_tilde(p, pol)
    if cs.regime != PURE_MONEY or mu == 0.0:
        assert abs(omega(cs.b_bar, p, pol, form) - cs.b_bar) < 1e-10
    if cs.regime == MONEY_CREDIT:
        assert 0 <= cs.b_bar < cs.q_tilde and 0 < mu < min(1.0, mt)
    if mu >= mt:
        assert cs.regime == PURE_CREDIT
    if form == "closed" and 0 < mu < min(1.0, mt):
        assert cs.regime == MONEY_CREDIT


def test_money_balance_vanishes_at_boundary(toy, toy_policy):
    mt = mu_tilde(toy, toy_policy)
    mus = mt * np.linspace(0.05, 0.999999, 30)
    zs = [debt_limit_stationary(toy.replace(mu=m), toy_policy).z for m in mus]
    assert np.all(np.diff(zs) < 0) and zs[-1] < 1e-4


def test_iota_d_oracle(toy, toy_policy):
    z, b = 0.7, 0.2
    p_star = mechanism_for(toy).p_star

    def g(x):
        prem = (z * (1 + x) + b) ** -0.5 - 1.0
        return 0.1 / (0.1 - 0.9 * 0.5 * prem) - 1.0 - x

    ref = brentq(g, 0.0, (p_star - b) / z - 1.0, xtol=1e-15)
    assert iota_d(z, b, toy, toy_policy) == pytest.approx(ref, abs=1e-12)
    assert iota_d(0.9, 0.2, toy, toy_policy) == 0.0
    with pytest.raises(DomainError):
        iota_d(0.5, -0.1, toy, toy_policy)


def test_unconstrained_branch(toy, toy_policy):
    p = toy.replace(mu=0.3)
    z_next, b_next = 0.8, 0.4
    z_now, b_now = credit_map_step(z_next, b_next, p, toy_policy)
    beta, gamma = 0.96, 0.96 * 1.05
    s_star = dm_utility(1.0, p) - 1.0
    assert z_now == pytest.approx(z_next / 1.05, abs=1e-15)
    hand = beta * b_next + 0.1 * 0.3 * (-gamma * z_now + beta * z_next) + beta * 0.5 * 0.3 * 0.5 * s_star
    assert b_now == pytest.approx(hand, abs=1e-15)


@pytest.mark.parametrize("i", np.linspace(0.045, 0.15, 10))
def test_reduction_to_money_only(toy, i):
    pol = Policy(i, 0.2)
    for z in np.linspace(0.3, 1.2, 10):
        assert iota_d(z, 0.0, toy, pol) == pytest.approx(deposit_rate(z, toy, pol), abs=1e-12)
        z_now, b_now = credit_map_step(z, 0.0, toy, pol)
        assert z_now == pytest.approx(eq_map(z, toy, pol), abs=1e-12)
        assert b_now == 0.0
    # with i above rho the credit thresholds use the same rate as the money-only ones
    assert chi_c(toy, pol) == pytest.approx(chi_m(toy, pol), abs=1e-12)


def test_threshold_rate_switch(toy):
    low = Policy(0.02, 0.1)
    assert chi_c(toy, low) != pytest.approx(chi_m(toy, low))
    assert chi_c(toy, low) == pytest.approx(chi_m(toy, Policy(toy.rho, 0.1)), rel=1e-12)
    assert chi_hat_c(toy, low) < chi_c(toy, low)
    # at the Friedman rule rho still binds, so the threshold stays defined
    assert chi_c(toy, Policy(0.0, 0.1)) == pytest.approx(chi_c(toy, low), rel=1e-12)


def test_credit_cycles_reduce_at_zero_monitoring(cyclic):
    for chi, money, credit in [(0.87, find_two_cycle, find_credit_two_cycle),
                               (0.95, find_three_cycle, find_credit_three_cycle)]:
        pol = Policy(0.05, chi)
        m = money(cyclic, pol)
        c = credit(cyclic, pol)
        np.testing.assert_allclose([s.z for s in c.states], m.points, atol=1e-12)
        assert all(s.b_bar == 0.0 for s in c.states)
        assert max(c.residuals) < 1e-8
        q_star = mechanism_for(cyclic).q_star
        assert c.liquidity[0] < q_star <= min(c.liquidity[1:])


def test_credit_cycles_with_monitoring_do_not_close(toy, cyclic):
    pol = Policy(0.05, 0.5 * chi_c(toy, Policy(0.05, 0.1)))
    with pytest.raises(NoCycleError):
        find_credit_two_cycle(toy.replace(mu=0.1), pol)
    with pytest.raises(NoCycleError):
        find_credit_two_cycle(cyclic.replace(mu=0.1), Policy(0.05, 0.87))
