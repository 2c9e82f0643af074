"""Money-demand moments in closed form and two-parameter calibration.

The model's money-to-output ratio is ``Z = z / (sigma alpha q + B)`` and
its elasticity with respect to the nominal rate is ``i d log Z / d i``.
``(C, eta)`` are chosen so that both match their data counterparts.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .core import ModelParams, Policy, dm_marginal
from .credit import MONEY_CREDIT, PURE_CREDIT, debt_limit_stationary
from .errors import CalibrationError, DomainError
from .steady import marginal_utility_at_steady

__all__ = [
    "CalibrationTargets",
    "Moments",
    "CalibrationResult",
    "moments",
    "calibrate",
    "sigma_sweep",
]

DERIVATIVE_RULES = ("exact", "legacy")


@dataclass(frozen=True)
class CalibrationTargets:
    """Data moments and the policy at which they are evaluated.

    Attributes
    ----------
    zy_ratio : float
        Average real balance to output ratio (positive).
    elasticity : float
        Elasticity of ``z/y`` with respect to ``i`` (negative).
    i_bar, chi_bar : float
        Average nominal rate and reserve requirement.
    """

    zy_ratio: float
    elasticity: float
    i_bar: float
    chi_bar: float

    def __post_init__(self):
        if not self.zy_ratio > 0.0:
            raise DomainError("zy_ratio must be positive")
        if not self.elasticity < 0.0:
            raise DomainError("elasticity must be negative")

    @property
    def policy(self):
        return Policy(self.i_bar, self.chi_bar)


@dataclass(frozen=True)
class Moments:
    """Closed-form moments and the derivatives behind them.

    ``dq_di``, ``dz_di``, ``db_di`` and ``dlogZ_di`` are derivatives
    with respect to ``i`` holding everything else fixed.
    """

    Z: float
    elasticity: float
    q: float
    z: float
    b_bar: float
    dq_di: float
    dz_di: float
    db_di: float
    dlogZ_di: float


@dataclass(frozen=True)
class CalibrationResult:
    C: float
    eta: float
    residuals: tuple
    iterations: int

    def __iter__(self):
        return iter((self.C, self.eta))


def _quantity_and_slope(params, policy):
    """``q`` and ``dq/di`` at the binding money margin."""
    i, chi, alpha = policy.i, policy.chi, params.alpha
    C, eta = params.C, params.eta
    gross_d = 1.0 + i * (1.0 - chi)
    ratio = marginal_utility_at_steady(params, policy) / C
    q = ratio ** (-1.0 / eta)
    dq = -chi / (alpha * eta * C * gross_d ** 2) * ratio ** (-(1.0 + eta) / eta)
    return q, dq


def _debt_slope(params, policy, q, dq, b, omega_form, derivative):
    i, chi, mu, rho = policy.i, policy.chi, params.mu, params.rho
    scale = mu * params.sigma * params.alpha / rho
    d_surplus = scale * (dm_marginal(q, params) - 1.0) * dq
    if derivative == "legacy":
        # older sign convention, kept only to reproduce calibrations made with it
        k, dk = i * mu * chi / rho, mu * chi / rho
        return (d_surplus - k * dq - dk * q - dk * b) / (1.0 + k)
    if omega_form == "closed":
        k, dk = i * mu * chi / rho, mu * chi / rho
        return (d_surplus + k * dq + dk * (q - b)) / (1.0 + k)
    gross_d = 1.0 + (1.0 - chi) * i
    k = i * mu * chi / (rho * gross_d)
    dk = mu * chi / (rho * gross_d ** 2)
    return (d_surplus - k * dq - dk * (q - b)) / (1.0 - k)


def moments(params, policy, omega_form="closed", derivative="exact"):
    """Money-to-output ratio and its interest elasticity.

    Parameters
    ----------
    params : ModelParams
    policy : Policy
    omega_form : {"closed", "recursive"}
        Debt-limit form when ``params.mu > 0``.
    derivative : {"exact", "legacy"}
        ``"exact"`` differentiates the chosen debt-limit form;
        ``"legacy"`` uses an older debt-limit derivative whose
        signs do not match its own closed form.

    Returns
    -------
    Moments

    Raises
    ------
    DomainError
        In the pure-credit regime, where money is not held.
    """
    if derivative not in DERIVATIVE_RULES:
        raise ValueError(f"derivative must be one of {DERIVATIVE_RULES}")
    i, chi = policy.i, policy.chi
    sa = params.sigma * params.alpha
    q, dq = _quantity_and_slope(params, policy)
    b, db = 0.0, 0.0
    if params.mu > 0.0:
        cs = debt_limit_stationary(params, policy, omega_form)
        if cs.regime == PURE_CREDIT:
            raise DomainError("money is not valued in the pure-credit regime")
        if cs.regime == MONEY_CREDIT:
            b = cs.b_bar
            db = _debt_slope(params, policy, q, dq, b, omega_form, derivative)
    gross_d = 1.0 + (1.0 - chi) * i
    z = (q - b) / gross_d
    dz = (dq - db - (1.0 - chi) * z) / gross_d
    y = sa * q + params.B
    dlog = dz / z - sa * dq / y
    return Moments(Z=z / y, elasticity=i * dlog, q=q, z=z, b_bar=b,
                   dq_di=dq, dz_di=dz, db_di=db, dlogZ_di=dlog)


def _fixed_value(fixed, key):
    return fixed[key] if isinstance(fixed, Mapping) else getattr(fixed, key)


def _build(fixed, C, eta):
    return ModelParams.from_matching(
        beta=_fixed_value(fixed, "beta"), sigma=_fixed_value(fixed, "sigma"),
        B=_fixed_value(fixed, "B"), C=C, eta=eta, mu=_fixed_value(fixed, "mu"),
    )


def calibrate(targets, fixed, policy=None, start=(1.0, 0.1), omega_form="closed",
              derivative="exact", tol=1e-8, max_iter=100):
    """Choose ``(C, eta)`` so the model moments hit the targets.

    Damped Newton in ``(log C, log eta)`` with a forward-difference
    Jacobian; steps are capped at 0.5 in each log coordinate and halved
    until the residual norm falls.

    Parameters
    ----------
    targets : CalibrationTargets
    fixed : mapping or object
        Provides ``beta``, ``B``, ``sigma`` and ``mu``; match rates follow
        from ``sigma``.
    policy : Policy, optional
        Defaults to ``targets.policy``.
    start : (float, float)
        Initial ``(C, eta)``.
    tol : float
        Maximum absolute residual accepted.

    Returns
    -------
    CalibrationResult
        Unpacks as ``C, eta``.

    Raises
    ------
    CalibrationError
        If the residual is still above ``tol`` after ``max_iter`` steps.
    """
    policy = policy or targets.policy
    goal = np.array([targets.zy_ratio, targets.elasticity])

    def resid(x):
        try:
            m = moments(_build(fixed, math.exp(x[0]), math.exp(x[1])), policy,
                        omega_form, derivative)
        except (DomainError, ZeroDivisionError, OverflowError):
            return None
        out = np.array([m.Z, m.elasticity]) - goal
        return out if np.all(np.isfinite(out)) else None

    x = np.log(np.asarray(start, dtype=float))
    r = resid(x)
    if r is None:
        raise CalibrationError(f"moments undefined at the starting point {start}")
    it = 0
    for it in range(1, max_iter + 1):
        if np.max(np.abs(r)) < 1e-14:
            break
        h = 1e-7
        jac = np.empty((2, 2))
        for j in range(2):
            step = np.zeros(2)
            step[j] = h
            rj = resid(x + step)
            if rj is None:
                rj = resid(x - step)
                if rj is None:
                    raise CalibrationError("moments undefined near the iterate", r)
                jac[:, j] = (r - rj) / h
            else:
                jac[:, j] = (rj - r) / h
        try:
            dx = -np.linalg.solve(jac, r)
        except np.linalg.LinAlgError:
            raise CalibrationError("singular Jacobian", r)
        cap = np.max(np.abs(dx))
        if cap > 0.5:
            dx *= 0.5 / cap
        norm = np.linalg.norm(r)
        for _ in range(40):
            trial = resid(x + dx)
            if trial is not None and np.linalg.norm(trial) < norm:
                break
            dx *= 0.5
        else:
            break
        x, r = x + dx, trial
    if not np.max(np.abs(r)) < tol:
        raise CalibrationError(f"calibration stalled after {it} iterations", r)
    return CalibrationResult(math.exp(x[0]), math.exp(x[1]), tuple(r), it)


def sigma_sweep(targets, fixed, sigmas=(0.3, 0.4, 0.5, 0.6, 0.7), reference=None,
                **kwargs):
    """Calibrate at each ``sigma`` and measure the distance to ``reference``.

    Returns
    -------
    list of dict
        Keys ``sigma``, ``C``, ``eta`` and ``distance`` (Euclidean in
        ``(C, eta)``; NaN without a reference).  Failed calibrations
        carry NaN parameters.
    """
    rows = []
    for s in sigmas:
        fx = dict(beta=_fixed_value(fixed, "beta"), B=_fixed_value(fixed, "B"),
                  mu=_fixed_value(fixed, "mu"), sigma=s)
        try:
            res = calibrate(targets, fx, **kwargs)
            C, eta = res.C, res.eta
        except CalibrationError:
            C = eta = float("nan")
        dist = (math.hypot(C - reference[0], eta - reference[1])
                if reference is not None else float("nan"))
        rows.append(dict(sigma=s, C=C, eta=eta, distance=dist))
    return rows
