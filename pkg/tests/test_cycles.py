import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import fsolve

from frbdyn.core import ModelParams, Policy, mechanism_for
from frbdyn.cycles import (
    chi_hat_m,
    chi_m,
    cycle_existence_set,
    eq_map,
    find_cycle,
    find_sunspot,
    find_three_cycle,
    find_two_cycle,
    orbit_samples,
    simulate_backward,
    slope_at_steady,
    sunspot_near_cycle,
)
from frbdyn.errors import (
    DegenerateInputError,
    DomainError,
    NoCycleError,
    NoSunspotError,
    OrbitVerificationError,
    SingularSlopeError,
)
from frbdyn.steady import solve_steady

draws = st.tuples(st.floats(0.01, 0.10), st.floats(0.2, 1.0),
                  st.floats(0.1, 3.0).filter(lambda e: abs(e - 1) > 0.05),
                  st.floats(0.02, 0.98))


def newton_orbit(f, guess):
    """Solve z_k = f(z_{k+1}) cyclically with a generic nonlinear solver."""
    n = len(guess)

    def F(z):
        return [z[k] - f(z[(k + 1) % n]) for k in range(n)]

    sol, info, ok, msg = fsolve(F, guess, xtol=1e-14, full_output=True)
    assert ok == 1, msg
    return np.sort(sol)


def test_toy_thresholds(toy, toy_policy):
    assert chi_m(toy, toy_policy) == pytest.approx(0.131191, abs=1e-6)
    assert chi_hat_m(toy, toy_policy) == pytest.approx(0.089576, abs=1e-6)
    assert slope_at_steady(toy, toy_policy) == pytest.approx(0.22195, abs=1e-5)


@given(d=draws)
def test_slope_matches_central_difference(d):
    i, a, eta, chi = d
    p = ModelParams(0.96, 0.5, a, 0.5, 3.0, 1.0, eta)
    pol = Policy(i, chi)
    zs = solve_steady(p, pol).z_s
    h = 1e-6 * zs
    fd = (eq_map(zs + h, p, pol) - eq_map(zs - h, p, pol)) / (2 * h)
    try:
        s = slope_at_steady(p, pol)
    except SingularSlopeError:
        return
    assert s == pytest.approx(fd, rel=1e-5, abs=1e-9)


@given(d=draws)
def test_threshold_ordering(d):
    i, a, eta, chi = d
    p = ModelParams(0.96, 0.5, a, 0.5, 3.0, 1.0, eta)
    pol = Policy(i, chi)
    assert chi_hat_m(p, pol) < chi_m(p, pol)


@given(eta=st.floats(0.1, 0.95), chi=st.floats(0.02, 1.0), a=st.floats(0.2, 1.0))
def test_map_increasing_for_mild_curvature(eta, chi, a):
    p = ModelParams(0.96, 0.5, a, 0.5, 3.0, 1.0, eta)
    pol = Policy(0.05, chi)
    z = np.linspace(0.05, 1.3, 60) * mechanism_for(p).p_star
    fz = [eq_map(x, p, pol) for x in z]
    assert np.all(np.diff(fz) > 0)


def test_toy_orbit_does_not_close(toy):
    # below the closed-form threshold the semi-analytic candidate still misses the map
    with pytest.raises(OrbitVerificationError):
        find_two_cycle(toy, Policy(0.05, 0.05))
    assert cycle_existence_set(toy, Policy(0.05, 0.05), 2) == []


def test_above_threshold_raises(toy):
    pol = Policy(0.05, 0.5)
    with pytest.raises(NoCycleError) as err:
        find_two_cycle(toy, pol)
    assert not isinstance(err.value, OrbitVerificationError)


def test_two_cycle_matches_newton_oracle(cyclic):
    pol = Policy(0.05, 0.87)
    cyc = find_two_cycle(cyclic, pol)
    oracle = newton_orbit(lambda z: eq_map(z, cyclic, pol), [0.96, 1.015])
    np.testing.assert_allclose(cyc.points, oracle, rtol=1e-10)
    assert max(cyc.residuals) < 1e-10
    p_star = mechanism_for(cyclic).p_star
    assert cyc.points[0] < p_star <= cyc.points[1]
    assert not cyc.chaotic


def test_three_cycle_matches_newton_oracle(cyclic):
    pol = Policy(0.05, 0.95)
    cyc = find_three_cycle(cyclic, pol)
    oracle = newton_orbit(lambda z: eq_map(z, cyclic, pol), [0.955, 1.0, 1.05])
    np.testing.assert_allclose(cyc.points, oracle, rtol=1e-10)
    assert cyc.chaotic
    assert sum(z < mechanism_for(cyclic).p_star for z in cyc.points) == 1


def test_existence_sets(cyclic):
    pol = Policy(0.05, 0.87)
    (lo2, hi2), = cycle_existence_set(cyclic, pol, 2)
    (lo3, hi3), = cycle_existence_set(cyclic, pol, 3)
    assert lo2 == pytest.approx(0.70168, abs=1e-4) and hi2 == pytest.approx(1.0)
    assert lo3 == pytest.approx(0.92581, abs=1e-4)
    assert lo2 < lo3
    find_two_cycle(cyclic, Policy(0.05, lo2 + 1e-3))
    with pytest.raises(OrbitVerificationError):
        find_two_cycle(cyclic, Policy(0.05, lo2 - 1e-3))


def test_sunspot_near_cycle(cyclic):
    ss = sunspot_near_cycle(cyclic, Policy(0.05, 0.87))
    assert max(ss.residuals) < 1e-10
    assert 0 < ss.zeta1 < 1 and 0 < ss.zeta2 < 1
    assert ss.zeta1 + ss.zeta2 < 1


@given(inset=st.floats(0.05, 0.95), chi=st.floats(0.75, 0.99))
def test_sunspot_family(cyclic, inset, chi):
    ss = sunspot_near_cycle(cyclic, Policy(0.05, chi), inset=inset)
    assert max(ss.residuals) < 1e-10 and ss.zeta1 + ss.zeta2 < 1


def test_sunspot_input_errors(cyclic, toy, toy_policy):
    pol = Policy(0.05, 0.87)
    with pytest.raises(DegenerateInputError):
        find_sunspot(0.97, 0.97, cyclic, pol)
    with pytest.raises(NoSunspotError):
        find_sunspot(0.9, 0.95, toy, toy_policy)


def test_invalid_period(cyclic):
    with pytest.raises(ValueError):
        find_cycle(cyclic, Policy(0.05, 0.87), 4)


def test_backward_simulation(toy, toy_policy):
    zs = solve_steady(toy, toy_policy).z_s
    path = simulate_backward(zs, 20, toy, toy_policy)
    assert path.complete and np.allclose(path.values, zs, rtol=1e-12)
    # the map is increasing with slope below one, so backward iterates settle on z_s
    low = simulate_backward(0.2, 200, toy, toy_policy)
    assert low.complete and low.values[-1] == 0.2
    assert np.all(np.diff(low.values) <= 0) and low.values[0] == pytest.approx(zs, rel=1e-10)
    with pytest.raises(DomainError):
        eq_map(-0.1, toy, toy_policy)


def test_orbit_samples_settle_on_cycle(cyclic):
    pol = Policy(0.05, 0.87)
    zs = orbit_samples(cyclic, pol, n_burn=400, n_keep=10)
    pts = find_two_cycle(cyclic, pol).points
    # the steady state repels (slope below -1) and iterates stay in a bounded band
    assert slope_at_steady(cyclic, pol) < -1
    assert len(zs) == 10
    assert zs.min() > 0.9 * pts[0] and zs.max() < 1.1 * pts[1]
