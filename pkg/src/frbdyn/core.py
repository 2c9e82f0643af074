"""Primitives: preferences, policy, trading mechanism, deposit-rate fixed point.

The decentralized market uses CRRA utility ``u(q) = C q^(1-eta) / (1-eta)``
and the centralized market ``U(X) = B log X``.  Trade follows a
take-it-or-leave-it offer by the buyer with linear seller cost, so the
payment for ``q`` units is ``q`` itself.

Notation used throughout the package
------------------------------------
``q``      quantity traded in the decentralized market
``pbar``   buyer liquidity (payment capacity) ``z (1 + i_d)``
``z``      real money balance carried by a buyer
``i_d``    deposit rate paid by banks on demand deposits
``chi``    reserve requirement
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _roots
from .errors import DomainError, NoMonetaryEquilibriumError

__all__ = [
    "ModelParams",
    "Policy",
    "Mechanism",
    "TakeItOrLeaveIt",
    "LiquidityBound",
    "mechanism_for",
    "money_growth",
    "dm_utility",
    "dm_marginal",
    "cm_utility",
    "trade_surplus",
    "liquidity_premium_of_balance",
    "deposit_rate",
    "deposit_rate_residual",
    "liquidity_bound",
]


@dataclass(frozen=True)
class ModelParams:
    """Preference, matching and monitoring primitives.

    Parameters
    ----------
    beta : float
        Discount factor, in (0, 1).
    sigma : float
        Probability of being a buyer, in (0, 1).
    alpha : float
        Buyer match probability, in (0, 1].
    alpha_s : float
        Seller match probability, in (0, 1].
    B : float
        Centralized-market utility level; ``log(B) > 1`` so that
        ``U(X*) - X* > 0``.
    C : float
        Decentralized-market utility level, positive.
    eta : float
        Relative risk aversion of ``u``; positive and different from 1.
    mu : float
        Probability that a defaulting borrower is caught, in [0, 1].
    """

    beta: float
    sigma: float
    alpha: float
    alpha_s: float
    B: float
    C: float
    eta: float
    mu: float = 0.0

    def __post_init__(self):
        for name in ("beta", "sigma", "alpha", "alpha_s", "B", "C", "eta", "mu"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or not math.isfinite(val):
                raise DomainError(f"{name} must be a finite number, got {val!r}")
        if not 0.0 < self.beta < 1.0:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        if not 0.0 < self.sigma < 1.0:
            raise DomainError(f"sigma must lie in (0, 1), got {self.sigma}")
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 < self.alpha_s <= 1.0:
            raise DomainError(f"alpha_s must lie in (0, 1], got {self.alpha_s}")
        if self.C <= 0.0:
            raise DomainError(f"C must be positive, got {self.C}")
        if self.eta <= 0.0 or self.eta == 1.0:
            raise DomainError(f"eta must be positive and != 1, got {self.eta}")
        if not 0.0 <= self.mu <= 1.0:
            raise DomainError(f"mu must lie in [0, 1], got {self.mu}")
        if self.B <= 0.0 or math.log(self.B) <= 1.0:
            raise DomainError(f"need log(B) > 1, got B={self.B}")

    @classmethod
    def from_matching(cls, beta, sigma, B, C, eta, mu=0.0):
        """Build parameters with match rates from ``M(b, s) = b s / (b + s)``.

        With buyer measure ``sigma`` and seller measure ``1 - sigma`` the
        meeting function gives ``M = sigma (1 - sigma)``, hence
        ``alpha = 1 - sigma`` and ``alpha_s = sigma``.
        """
        return cls(beta=beta, sigma=sigma, alpha=1.0 - sigma, alpha_s=sigma,
                   B=B, C=C, eta=eta, mu=mu)

    @property
    def rho(self):
        """Net rate implied by time preference, ``1/beta - 1``."""
        return 1.0 / self.beta - 1.0

    def replace(self, **changes):
        """Copy with some fields changed (match rates kept as given)."""
        fields = dict(self.__dict__)
        fields.update(changes)
        return type(self)(**fields)


@dataclass(frozen=True)
class Policy:
    """Monetary policy pair.

    Parameters
    ----------
    i : float
        Net nominal interest rate, ``i >= 0``.
    chi : float
        Reserve requirement, in (0, 1].
    """

    i: float
    chi: float

    def __post_init__(self):
        if not (math.isfinite(self.i) and math.isfinite(self.chi)):
            raise DomainError("policy values must be finite")
        if self.i < 0.0:
            raise DomainError(f"i must be nonnegative, got {self.i}")
        if not 0.0 < self.chi <= 1.0:
            raise DomainError(f"chi must lie in (0, 1], got {self.chi}")

    def gamma(self, beta):
        """Gross money growth ``beta (1 + i)``."""
        return beta * (1.0 + self.i)

    @staticmethod
    def rho(beta):
        """Net rate implied by time preference, ``1/beta - 1``."""
        return 1.0 / beta - 1.0

    @classmethod
    def from_growth(cls, gamma, beta, chi):
        """Policy whose nominal rate is ``gamma / beta - 1``."""
        return cls(i=gamma / beta - 1.0, chi=chi)


def money_growth(params, policy):
    """Gross money growth factor ``gamma = beta (1 + i)``."""
    return policy.gamma(params.beta)


class Mechanism:
    """Terms of trade in the decentralized market.

    Subclasses provide the payment function ``v``, its inverse and derivative, the
    liquidity premium ``lam(q) = u'(q)/v'(q) - 1`` (zero at and above
    ``q_star``) and its derivative.  ``lam_inv`` defaults to bisection.
    """

    q_star: float

    @property
    def p_star(self):
        return self.v(self.q_star)

    def v(self, q):
        raise NotImplementedError

    def v_inv(self, p):
        raise NotImplementedError

    def v_prime(self, q):
        raise NotImplementedError

    def lam(self, q):
        raise NotImplementedError

    def lam_prime(self, q):
        raise NotImplementedError

    def lam_inv(self, level):
        """Quantity ``q`` in ``(0, q_star)`` with ``lam(q) = level > 0``."""
        if level <= 0.0:
            return self.q_star
        lo = self.q_star
        while self.lam(lo) < level:
            lo *= 0.5
            if lo < 1e-300:
                raise DomainError(f"premium level {level} not attained")
        # log form keeps the residual scale-free when the premium is steep
        target = math.log1p(level)
        return _roots.bisect(lambda q: math.log1p(self.lam(q)) - target, lo, self.q_star,
                             tol=1e-12, what="lam_inv")

    def existence_bound(self, params, policy):
        """Largest admissible nominal rate for a stationary equilibrium."""
        return math.inf


class TakeItOrLeaveIt(Mechanism):
    """Buyer take-it-or-leave-it offer with CRRA utility and cost ``c(q) = q``.

    Parameters
    ----------
    C, eta : float
        Utility level and curvature.
    """

    def __init__(self, C, eta):
        if C <= 0 or eta <= 0 or eta == 1:
            raise DomainError(f"need C>0, eta>0, eta!=1; got C={C}, eta={eta}")
        self.C = float(C)
        self.eta = float(eta)
        self.q_star = self.C ** (1.0 / self.eta)

    def __repr__(self):
        return f"TakeItOrLeaveIt(C={self.C!r}, eta={self.eta!r})"

    def v(self, q):
        return q

    def v_inv(self, p):
        return p

    def v_prime(self, q):
        return 1.0

    def lam(self, q):
        if q >= self.q_star:
            return 0.0
        return self.C * q ** (-self.eta) - 1.0

    def lam_prime(self, q):
        if q >= self.q_star:
            return 0.0
        return -self.eta * self.C * q ** (-self.eta - 1.0)

    def lam_inv(self, level):
        if level <= 0.0:
            return self.q_star
        # C q^-eta = 1 + level
        return (self.C / (1.0 + level)) ** (1.0 / self.eta)


def mechanism_for(params):
    """The take-it-or-leave-it CRRA mechanism for ``params``."""
    return TakeItOrLeaveIt(params.C, params.eta)


def _positive(x, name):
    if not x > 0.0:
        raise DomainError(f"{name} must be positive, got {x!r}")


def dm_utility(q, params):
    """Decentralized-market utility ``C q^(1-eta) / (1-eta)``."""
    _positive(q, "q")
    return params.C * q ** (1.0 - params.eta) / (1.0 - params.eta)


def dm_marginal(q, params):
    """Marginal utility ``C q^(-eta)``."""
    _positive(q, "q")
    return params.C * q ** (-params.eta)


def cm_utility(X, params):
    """Centralized-market utility ``B log X``; maximizer of ``U(X) - X`` is ``B``."""
    _positive(X, "X")
    return params.B * math.log(X)


def trade_surplus(q, params):
    """Buyer surplus ``S(q) = u(q) - q``."""
    return dm_utility(q, params) - q


def liquidity_premium_of_balance(z, mech):
    """Premium ``lam(v^-1(z))``; exactly zero for ``z >= p_star``.

    Examples
    --------
    >>> mech = TakeItOrLeaveIt(1.0, 0.5)
    >>> round(liquidity_premium_of_balance(0.81, mech), 6)
    0.111111
    >>> liquidity_premium_of_balance(1.5, mech)
    0.0
    """
    _positive(z, "z")
    if z >= mech.p_star:
        return 0.0
    return mech.lam(mech.v_inv(z))


@dataclass(frozen=True)
class LiquidityBound:
    """Lower boundary of buyer liquidity below which money is not valued.

    Attributes
    ----------
    q_hat : float
        Quantity where the premium equals ``chi / (alpha (1 - chi))``.
    p_hat : float
        Payment ``v(q_hat)``.
    """

    q_hat: float
    p_hat: float


def liquidity_bound(params, policy, mech=None):
    """Lower liquidity bound for the given reserve requirement.

    For ``chi = 1`` the threshold premium is infinite and CRRA utility
    reaches it only at zero, so ``q_hat = p_hat = 0``.
    """
    mech = mech or mechanism_for(params)
    chi = policy.chi
    if chi >= 1.0:
        return LiquidityBound(0.0, 0.0)
    level = chi / (params.alpha * (1.0 - chi))
    q_hat = mech.lam_inv(level)
    return LiquidityBound(q_hat, mech.v(q_hat))


def deposit_rate_residual(x, z, params, policy, mech):
    """``chi / [chi + (chi-1) alpha L(z(1+x))] - 1 - x``."""
    chi, alpha = policy.chi, params.alpha
    prem = liquidity_premium_of_balance(z * (1.0 + x), mech)
    return chi / (chi + (chi - 1.0) * alpha * prem) - 1.0 - x


def deposit_rate_given_credit(z, credit, params, policy, mech=None):
    """Deposit rate when buyer liquidity is ``z (1 + i_d) + credit``.

    Rather than iterating on the rate, which has a pole where liquidity
    reaches ``p_hat``, this solves for liquidity ``p`` in

        z = (p - credit) (chi - (1 - chi) alpha L(p)) / chi

    on ``[max(p_hat, credit), p_star]``, where the right-hand side rises
    from at most zero to ``p_star - credit``, and returns
    ``(p - credit) / z - 1``.  Balances below ``p_hat`` are admissible:
    the rate then lifts liquidity above ``p_hat``.

    Raises
    ------
    NoMonetaryEquilibriumError
        If the bracket has no sign change.
    """
    mech = mech or mechanism_for(params)
    _positive(z, "z")
    if credit < 0.0:
        raise DomainError(f"credit must be nonnegative, got {credit!r}")
    chi, alpha = policy.chi, params.alpha
    if z + credit >= mech.p_star or chi >= 1.0:
        return 0.0
    lo = max(liquidity_bound(params, policy, mech).p_hat, credit)

    def balance_gap(p):
        prem = liquidity_premium_of_balance(p, mech)
        return (p - credit) * (chi - (1.0 - chi) * alpha * prem) / chi - z

    if not balance_gap(lo) < 0.0:
        raise NoMonetaryEquilibriumError(
            f"no deposit rate keeps liquidity above p_hat at z={z!r}, credit={credit!r}")
    p = _roots.bisect(balance_gap, lo, mech.p_star, tol=1e-12 * max(1.0, z),
                      what="deposit rate")
    return max((p - credit) / z - 1.0, 0.0)


def deposit_rate(z, params, policy, mech=None):
    """Deposit rate ``i_d`` consistent with buyer balance ``z``.

    Solves ``i_d = chi / [chi + (chi - 1) alpha L(z (1 + i_d))] - 1``
    (see :func:`deposit_rate_given_credit` with zero credit).  The
    premium must stay below ``chi / (alpha (1 - chi))``, which bounds
    liquidity ``z (1 + i_d)`` from below by ``p_hat``.

    Parameters
    ----------
    z : float
        Buyer real balance, positive.
    params : ModelParams
    policy : Policy
    mech : Mechanism, optional

    Returns
    -------
    float
        ``i_d >= 0`` with ``p_hat < z (1 + i_d) <= p_star``; zero for
        ``z >= p_star`` or ``chi = 1``.

    Raises
    ------
    DomainError
        If ``z`` is not positive.
    NoMonetaryEquilibriumError
        If no admissible rate exists.
    ConvergenceError
        If the bisection residual stays above ``1e-12``.
    """
    return deposit_rate_given_credit(z, 0.0, params, policy, mech)
