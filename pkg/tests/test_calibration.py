import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import root

from frbdyn import presets
from frbdyn.calibration import CalibrationTargets, calibrate, moments, sigma_sweep
from frbdyn.core import ModelParams, Policy
from frbdyn.credit import MONEY_CREDIT, debt_limit_stationary
from frbdyn.errors import CalibrationError, DomainError

FIXED = dict(beta=presets.BETA, B=presets.B_LEVEL, sigma=0.5, mu=0.0)


def model1_targets():
    return CalibrationTargets(presets.ZY_TARGET, presets.ELASTICITY_NO_CREDIT,
                              presets.I_BAR, presets.CHI_BAR)


def fd_moments(params, pol, form, h=1e-6):
    def at(i):
        m = moments(params, Policy(i, pol.chi), form)
        return np.array([m.q, m.z, m.b_bar, np.log(m.Z)])

    return (at(pol.i + h) - at(pol.i - h)) / (2 * h)


def test_model1_moments_at_reference_parameters(model1):
    m = moments(model1, presets.benchmark_policy())
    assert m.Z == pytest.approx(0.2578, abs=1e-4)
    assert m.elasticity == pytest.approx(-0.1012, abs=5e-4)


def test_model1_calibration():
    res = calibrate(model1_targets(), FIXED)
    C, eta = res
    assert C == pytest.approx(0.995638, abs=1e-6)
    assert eta == pytest.approx(0.056375, abs=1e-6)
    assert max(map(abs, res.residuals)) < 1e-8


def test_calibration_agrees_with_scipy_root():
    targets = model1_targets()
    goal = np.array([targets.zy_ratio, targets.elasticity])

    def F(x):
        p = ModelParams.from_matching(FIXED["beta"], 0.5, FIXED["B"], x[0], x[1])
        m = moments(p, targets.policy)
        return np.array([m.Z, m.elasticity]) - goal

    ref = root(F, [0.99, 0.06])
    assert ref.success and np.max(np.abs(F(ref.x))) < 1e-10
    np.testing.assert_allclose(tuple(calibrate(targets, FIXED)), ref.x, atol=1e-7)


def test_model2_legacy_reproduction():
    targets = CalibrationTargets(presets.ZY_TARGET, presets.ELASTICITY_WITH_CREDIT,
                                 presets.I_BAR, presets.CHI_BAR)
    fixed = dict(FIXED, mu=1.0)
    p = presets.benchmark_params(mu=1.0, C=presets.WITH_CREDIT_CE[0], eta=presets.WITH_CREDIT_CE[1])
    m = moments(p, targets.policy, omega_form="closed", derivative="legacy")
    assert m.Z == pytest.approx(0.2582, abs=1e-4)
    assert m.elasticity == pytest.approx(-0.1000, abs=1e-4)
    C, eta = calibrate(targets, fixed, start=presets.WITH_CREDIT_CE, omega_form="closed",
                       derivative="legacy")
    assert C == pytest.approx(1.0110, abs=5e-4) and eta == pytest.approx(0.0282, abs=5e-4)


@given(C=st.floats(0.8, 1.2), eta=st.floats(0.03, 0.6), i=st.floats(0.01, 0.12),
       chi=st.floats(0.01, 0.9), mu=st.floats(0.0, 1.0))
@pytest.mark.parametrize("form", ["closed", "recursive"])
def test_exact_derivatives_match_finite_differences(C, eta, i, chi, mu, form):
    p = ModelParams.from_matching(presets.BETA, 0.5, presets.B_LEVEL, C, eta, mu)
    pol = Policy(i, chi)
    h = 1e-6
    try:
        states = [debt_limit_stationary(p, Policy(x, chi), form).regime for x in (i - h, i, i + h)]
        m = moments(p, pol, form)
    except DomainError:
        return
    if mu > 0 and any(r != MONEY_CREDIT for r in states):
        return
    fd = fd_moments(p, pol, form, h)
    got = np.array([m.dq_di, m.dz_di, m.db_di, m.dlogZ_di])
    np.testing.assert_allclose(got, fd, rtol=1e-5, atol=1e-8)
    assert m.elasticity == pytest.approx(i * m.dlogZ_di, rel=1e-12)


@given(C=st.floats(0.9, 1.1), eta=st.floats(0.03, 0.3))
def test_round_trip(C, eta):
    truth = ModelParams.from_matching(FIXED["beta"], 0.5, FIXED["B"], C, eta)
    pol = presets.benchmark_policy()
    m = moments(truth, pol)
    targets = CalibrationTargets(m.Z, m.elasticity, pol.i, pol.chi)
    got = calibrate(targets, FIXED, tol=1e-12)
    assert got.C == pytest.approx(C, abs=1e-6) and got.eta == pytest.approx(eta, abs=1e-6)


def test_sigma_sweep_prefers_half():
    rows = sigma_sweep(model1_targets(), FIXED, reference=presets.MONEY_ONLY_CE)
    best = min(rows, key=lambda r: r["distance"])
    assert best["sigma"] == 0.5
    assert [r["sigma"] for r in rows] == [0.3, 0.4, 0.5, 0.6, 0.7]


def test_target_validation():
    with pytest.raises(DomainError):
        CalibrationTargets(0.25, 0.1, 0.05, 0.03)
    with pytest.raises(DomainError):
        CalibrationTargets(-0.25, -0.1, 0.05, 0.03)


def test_iteration_budget_exhausted():
    with pytest.raises(CalibrationError) as err:
        calibrate(model1_targets(), FIXED, start=(1.5, 0.5), max_iter=1)
    assert len(err.value.residuals) == 2


def test_pure_credit_has_no_money_moments(model2):
    with pytest.raises(DomainError):
        moments(model2, Policy(0.10, 1.0), omega_form="closed")
