"""Money with unsecured credit: debt limit, joint dynamics, credit cycles.

A buyer can borrow up to the debt limit ``b`` without collateral; a
defaulter is caught with probability ``mu`` and excluded from the
decentralized market.  Buyer liquidity becomes ``z (1 + iota_d) + b``.

Two stationary debt-limit forms are available through ``omega_form``:

``"closed"`` (default)
    ``b = (mu sigma alpha/rho) S(q_tilde) + (i mu chi/rho)(q_tilde - b)``
    on the money-credit branch.  Money and credit coexist exactly when
    ``0 < mu < min(1, mu_tilde)``.
``"recursive"``
    The stationary version of the debt recursion used by
    :func:`credit_map_step`, ``rho b = alpha mu sigma S(q) - i chi mu z``
    with ``z = (q_tilde - b) / (1 + (1-chi) i)``.  The resulting steady
    state is a fixed point of the joint map, which transition paths
    need.  Its money term has the opposite sign to the closed form, and
    when ``i mu chi / (rho (1 + (1-chi) i)) > 1`` credit unravels to the
    pure-money corner below ``mu_tilde``.

Both forms share the coexistence boundary
``mu_tilde = rho q_tilde / (alpha sigma S(q_tilde))``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _roots
from .core import (
    deposit_rate_given_credit,
    dm_marginal,
    mechanism_for,
    trade_surplus,
)
from .cycles import ORBIT_TOL, BOUNDARY_TOL, _threshold_formula
from .errors import (
    DomainError,
    NoCycleError,
    OrbitVerificationError,
    UndefinedThresholdError,
)
from .steady import marginal_utility_at_steady

__all__ = [
    "PURE_MONEY",
    "PURE_CREDIT",
    "MONEY_CREDIT",
    "CreditSteadyState",
    "CreditState",
    "CreditCycle",
    "q_tilde",
    "mu_tilde",
    "omega",
    "debt_limit_stationary",
    "iota_d",
    "credit_map_step",
    "chi_c",
    "chi_hat_c",
    "find_credit_cycle",
    "find_credit_two_cycle",
    "find_credit_three_cycle",
]

PURE_MONEY = "pure-money"
PURE_CREDIT = "pure-credit"
MONEY_CREDIT = "money-credit"
OMEGA_FORMS = ("closed", "recursive")


@dataclass(frozen=True)
class CreditSteadyState:
    """Stationary equilibrium with money and unsecured credit.

    Attributes
    ----------
    q_tilde : float
        Quantity when the money margin binds (same as the money-only
        steady state).
    b_bar : float
        Debt limit.
    z : float
        Money real balance; zero in the pure-credit regime.
    q : float
        Traded quantity ``min(q*, max(q_tilde, b_bar))``.
    regime : str
        One of ``"pure-money"``, ``"pure-credit"``, ``"money-credit"``.
    mu_tilde : float
        Coexistence boundary for ``mu``.
    omega_form : str
    """

    q_tilde: float
    b_bar: float
    z: float
    q: float
    regime: str
    mu_tilde: float
    omega_form: str = "closed"


@dataclass(frozen=True)
class CreditState:
    """Point of the joint (money, debt limit) system.

    ``q = min(q*, z (1 + iota_d) + b_bar)``.
    """

    z: float
    b_bar: float
    q: float


@dataclass(frozen=True)
class CreditCycle:
    """Periodic orbit of the joint map.

    Attributes
    ----------
    period : int
    states : tuple of CreditState
        ``states[k]`` is period ``k + 1``; only the first has total
        liquidity ``a_1 = z_1 + b_1`` below ``q*``.
    residuals : tuple of float
        Largest absolute map residual per point (over both coordinates).
    chaotic : bool
    """

    period: int
    states: tuple
    residuals: tuple
    chaotic: bool = False

    @property
    def liquidity(self):
        """Total liquidity ``a_j = z_j + b_j`` per point."""
        return tuple(s.z + s.b_bar for s in self.states)


def q_tilde(params, policy, mech=None):
    """Quantity with ``u'(q) = 1 + i chi / (alpha {1 + (1-chi) i})``."""
    mech = mech or mechanism_for(params)
    return mech.lam_inv(marginal_utility_at_steady(params, policy) - 1.0)


def mu_tilde(params, policy, mech=None):
    """Coexistence boundary ``rho q_tilde / (alpha sigma S(q_tilde))``."""
    qt = q_tilde(params, policy, mech)
    return params.rho * qt / (params.alpha * params.sigma * trade_surplus(qt, params))


def _credit_only_value(b, params, q_star):
    """``(mu sigma alpha / rho) S(min(b, q*))``."""
    scale = params.mu * params.sigma * params.alpha / params.rho
    return scale * trade_surplus(min(b, q_star), params)


def _money_slope(params, policy, form):
    """Coefficient on ``(q_tilde - b)`` in the money-credit branch."""
    i, chi = policy.i, policy.chi
    k = i * params.mu * chi / params.rho
    if form == "recursive":
        return -k / (1.0 + (1.0 - chi) * i)
    return k


def omega(b, params, policy, omega_form="closed", mech=None):
    """Three-branch stationary debt-limit map; its fixed point is ``b_bar``.

    Branches: ``b < q_tilde`` (money valued), ``q_tilde <= b < q*`` and
    ``b >= q*``.
    """
    if omega_form not in OMEGA_FORMS:
        raise ValueError(f"omega_form must be one of {OMEGA_FORMS}")
    mech = mech or mechanism_for(params)
    qt = q_tilde(params, policy, mech)
    if b < qt:
        return (_credit_only_value(qt, params, mech.q_star)
                + _money_slope(params, policy, omega_form) * (qt - b))
    return _credit_only_value(b, params, mech.q_star)


def _pure_credit_limit(params, mech, qt):
    q_star = mech.q_star
    top = _credit_only_value(q_star, params, q_star)
    if top >= q_star:
        return top
    return _roots.bisect(lambda b: _credit_only_value(b, params, q_star) - b,
                         qt, q_star, what="pure-credit debt limit")


def debt_limit_stationary(params, policy, omega_form="closed", mech=None):
    """Stationary debt limit and regime.

    Parameters
    ----------
    params : ModelParams
        ``params.mu`` is the monitoring probability.
    policy : Policy
    omega_form : {"closed", "recursive"}

    Returns
    -------
    CreditSteadyState

    Notes
    -----
    ``mu >= mu_tilde`` gives pure credit with ``b`` solving
    ``(mu sigma alpha/rho) S(b) = b`` on ``[q_tilde, q*]`` (or ``b``
    equal to the capped value beyond ``q*``).  Below ``mu_tilde`` the
    money-credit branch is linear in ``b`` and solved in closed form.
    When that solution falls outside ``[0, q_tilde)`` (possible only
    under the recursive form) credit unravels and the equilibrium is the
    pure-money corner ``b = 0``.
    """
    if omega_form not in OMEGA_FORMS:
        raise ValueError(f"omega_form must be one of {OMEGA_FORMS}")
    mech = mech or mechanism_for(params)
    if params.rho <= 0.0:
        raise DomainError("need rho > 0")
    qt = q_tilde(params, policy, mech)
    mt = mu_tilde(params, policy, mech)
    gross_d = 1.0 + (1.0 - policy.chi) * policy.i

    def money_state(b, regime):
        return CreditSteadyState(qt, b, (qt - b) / gross_d, qt, regime, mt, omega_form)

    if params.mu == 0.0 or mt <= 0.0:
        # mt <= 0 means S(q_tilde) <= 0 (eta > 1 with u(0) = -inf): no
        # positive debt limit can be sustained
        return money_state(0.0, PURE_MONEY)
    if params.mu >= mt:
        b = _pure_credit_limit(params, mech, qt)
        return CreditSteadyState(qt, b, 0.0, min(mech.q_star, b), PURE_CREDIT, mt,
                                 omega_form)
    # b = A + k (q_tilde - b)  =>  b = (A + k q_tilde) / (1 + k)
    k = _money_slope(params, policy, omega_form)
    if 1.0 + k > 0.0:
        b = (_credit_only_value(qt, params, mech.q_star) + k * qt) / (1.0 + k)
        if 0.0 <= b < qt:
            return money_state(b, MONEY_CREDIT)
    return money_state(0.0, PURE_MONEY)


def _check_credit_state(z, b):
    if not z > 0.0:
        raise DomainError(f"money balance must be positive, got {z!r}")
    if b < 0.0:
        raise DomainError(f"debt limit must be nonnegative, got {b!r}")


def iota_d(z, b_bar, params, policy, mech=None):
    """Deposit rate with credit.

    Unique fixed point of
    ``iota = chi / [chi + (chi-1) alpha (u'(z(1+iota) + b) - 1)] - 1``
    with liquidity ``z (1 + iota) + b`` between ``p_hat`` and ``p*``;
    zero once ``z + b >= p*``.

    Raises
    ------
    DomainError
        If ``z <= 0`` or ``b_bar < 0``.
    NoMonetaryEquilibriumError
        If no admissible rate exists.
    """
    _check_credit_state(z, b_bar)
    return deposit_rate_given_credit(z, b_bar, params, policy, mech)


def credit_map_step(z_next, b_next, params, policy, mech=None):
    """One backward step of the joint system.

    ``z_now`` comes from the money Euler equation; the debt limit then uses
    it on the right-hand side:

        b_now = beta b_next + chi mu (-gamma z_now + beta z_next) + beta alpha mu sigma S(q_next)

    with ``gamma = beta (1 + i)``, ``S(q) = u(q) - q`` and
    ``q_next = min(q*, z_next (1 + iota_d) + b_next)``.

    Returns
    -------
    tuple of float
        ``(z_now, b_now)``.
    """
    mech = mech or mechanism_for(params)
    _check_credit_state(z_next, b_next)
    beta, alpha, sigma, mu = params.beta, params.alpha, params.sigma, params.mu
    gross = 1.0 + policy.i
    if z_next + b_next >= mech.q_star:
        q = mech.q_star
        z_now = z_next / gross
    else:
        rate = iota_d(z_next, b_next, params, policy, mech)
        q = min(mech.q_star, z_next * (1.0 + rate) + b_next)
        z_now = z_next / gross * (1.0 + rate) * (1.0 + alpha * mech.lam(q))
    gamma = beta * gross
    b_now = (beta * b_next + policy.chi * mu * (-gamma * z_now + beta * z_next)
             + beta * alpha * mu * sigma * trade_surplus(q, params))
    return z_now, b_now


def _credit_threshold(params, policy, period, mech):
    rate = max(policy.i, params.rho)
    if rate <= 0.0:
        raise UndefinedThresholdError("threshold needs max(i, rho) > 0")
    q_star = mech.q_star
    prem = dm_marginal(q_star / (1.0 + rate), params) - 1.0
    return _threshold_formula(params.alpha, prem, rate, period)


def chi_c(params, policy, mech=None):
    """Two-cycle threshold with credit, using ``iota = max(i, rho)``."""
    return _credit_threshold(params, policy, 2, mech or mechanism_for(params))


def chi_hat_c(params, policy, mech=None):
    """Three-cycle threshold with credit, using ``iota = max(i, rho)``."""
    return _credit_threshold(params, policy, 3, mech or mechanism_for(params))


def find_credit_cycle(params, policy, period, mech=None):
    """Construct and verify a period-``period`` orbit of the joint map.

    Above ``q*`` money grows by ``1 + i`` and the debt limit obeys
    ``b_{k+1} = (1+rho) b_k - alpha mu sigma S(q*)``.  The lowest point
    solves

        u'(q_1) = 1 + chi (g-1) / (alpha {1 + (g-1)(1-chi)}),  g = (1+i)^n
        b_1 [(1+rho)^n - 1] = chi mu (1 - g) z_1
                              + alpha mu sigma [S(q_1) + S(q*) sum_{k=1}^{n-1} (1+rho)^k]
        z_1 = (q_1 - b_1) / (1 + iota_1),  1 + iota_1 = 1 + (g-1)(1-chi),

    which is linear in ``b_1``.

    Raises
    ------
    NoCycleError
        If ``chi`` is not below the threshold or the solution has a
        negative debt limit or money balance.
    OrbitVerificationError
        If the orbit misses the joint map by more than ``1e-8`` or its
        upper points do not clear ``q*``.
    """
    if period not in (2, 3):
        raise ValueError("period must be 2 or 3")
    mech = mech or mechanism_for(params)
    thresh = _credit_threshold(params, policy, period, mech)
    if policy.chi >= thresh - BOUNDARY_TOL:
        raise NoCycleError(
            f"chi={policy.chi} is not below the period-{period} credit threshold {thresh}")
    i, chi, mu = policy.i, policy.chi, params.mu
    alpha, sigma, rho = params.alpha, params.sigma, params.rho
    g = (1.0 + i) ** period
    spread = (g - 1.0) * (1.0 - chi)
    q_1 = mech.lam_inv(chi * (g - 1.0) / (alpha * (1.0 + spread)))
    gross_d = 1.0 + spread
    s_star = trade_surplus(mech.q_star, params)
    s_sum = trade_surplus(q_1, params) + s_star * sum((1.0 + rho) ** k
                                                      for k in range(1, period))
    money_coef = chi * mu * (1.0 - g) / gross_d
    lhs = (1.0 + rho) ** period - 1.0 + money_coef
    b_1 = (money_coef * q_1 + alpha * mu * sigma * s_sum) / lhs
    z_1 = (q_1 - b_1) / gross_d
    if b_1 < 0.0 or z_1 <= 0.0:
        raise NoCycleError(f"no admissible orbit: b_1={b_1:.6g}, z_1={z_1:.6g}")

    zs, bs = [z_1], [b_1]
    for _ in range(period - 1):
        zs.append(zs[-1] * (1.0 + i))
        bs.append((1.0 + rho) * bs[-1] - alpha * mu * sigma * s_star)
    if min(bs) < 0.0:
        raise NoCycleError(f"debt limit turns negative along the orbit: {bs}")
    resid = []
    for k in range(period):
        nxt = (k + 1) % period
        try:
            z_now, b_now = credit_map_step(zs[nxt], bs[nxt], params, policy, mech)
        except DomainError as exc:
            raise OrbitVerificationError(f"orbit leaves the admissible region: {exc}")
        resid.append(max(abs(z_now - zs[k]), abs(b_now - bs[k])))
    liquidity = [z + b for z, b in zip(zs, bs)]
    if max(resid) > ORBIT_TOL or min(liquidity[1:]) < mech.q_star:
        raise OrbitVerificationError(
            f"period-{period} credit orbit does not close: residuals {resid}; "
            f"liquidity {liquidity} vs q_star {mech.q_star:.6g}")
    states = tuple(CreditState(z, b, min(mech.q_star, a))
                   for z, b, a in zip(zs, bs, [q_1] + liquidity[1:]))
    return CreditCycle(period, states, tuple(resid), chaotic=(period == 3))


def find_credit_two_cycle(params, policy, mech=None):
    """Two-period money-and-credit orbit with ``a_1 < q* < a_2``."""
    return find_credit_cycle(params, policy, 2, mech)


def find_credit_three_cycle(params, policy, mech=None):
    """Three-period money-and-credit orbit with ``a_1 < q* < a_2 < a_3``."""
    return find_credit_cycle(params, policy, 3, mech)
