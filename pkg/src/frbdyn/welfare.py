"""Steady-state welfare and the consumption-equivalent cost of inflation.

Per-period welfare splits into three parts,

    (1 - beta) W = -i mbar + sigma alpha [u(q) - q] + [U(X*) - X*],

the opportunity cost of the fiat money held as reserves, the
decentralized-market surplus and the (constant) centralized-market
surplus.  Net inflation relates to the nominal rate by
``pi = beta (1 + i) - 1``, so the Friedman rule is ``pi = beta - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _roots
from .core import Policy, cm_utility, dm_utility, mechanism_for
from .credit import debt_limit_stationary
from .errors import DomainError
from .steady import solve_steady

__all__ = [
    "WelfareDecomposition",
    "WelfareReport",
    "nominal_rate",
    "friedman_inflation",
    "welfare_level",
    "welfare_cost",
]

SCALINGS = ("utility", "surplus")


@dataclass(frozen=True)
class WelfareDecomposition:
    """Components of ``(1 - beta) W``.

    Attributes
    ----------
    money_cost : float
        ``-i mbar`` (nonpositive).
    dm_surplus : float
        ``sigma alpha [u(q) - q]``.
    cm_surplus : float
        ``B log B - B``.
    q, mbar : float
        Quantity traded and fiat balance behind the figures.
    """

    money_cost: float
    dm_surplus: float
    cm_surplus: float
    q: float
    mbar: float

    @property
    def total(self):
        return self.money_cost + self.dm_surplus + self.cm_surplus


@dataclass(frozen=True)
class WelfareReport:
    """Cost of inflation ``pi_tilde`` relative to the Friedman rule.

    ``cost = 1 - delta`` where ``delta`` scales consumption at the
    Friedman rule down to the welfare level at ``pi_tilde``.
    """

    pi_tilde: float
    chi: float
    delta: float
    cost: float
    decomposition: WelfareDecomposition
    scaling: str = "utility"


def nominal_rate(pi_tilde, beta):
    """``i = (1 + pi) / beta - 1``."""
    return (1.0 + pi_tilde) / beta - 1.0


def friedman_inflation(beta):
    """Inflation at the Friedman rule, ``beta - 1``."""
    return beta - 1.0


def welfare_level(params, policy, omega_form="closed"):
    """Decompose ``(1 - beta) W`` at the stationary equilibrium.

    With ``params.mu > 0`` the quantity and money balance come from the
    credit steady state (no money is held under pure credit).
    """
    i = policy.i
    if params.mu > 0.0:
        cs = debt_limit_stationary(params, policy, omega_form)
        q, mbar = cs.q, policy.chi * cs.z
    else:
        ss = solve_steady(params, policy)
        q, mbar = ss.q_s, ss.mbar
    X = params.B
    return WelfareDecomposition(
        money_cost=-i * mbar,
        dm_surplus=params.sigma * params.alpha * (dm_utility(q, params) - q),
        cm_surplus=cm_utility(X, params) - X,
        q=q, mbar=mbar,
    )


def welfare_cost(pi_tilde, params, chi, scaling="utility", omega_form="closed"):
    """Welfare cost of inflation ``pi_tilde`` at reserve requirement ``chi``.

    ``delta`` solves

        (1 - beta) W(pi, chi) = sigma alpha {u(q* delta) - q*} + U(X* delta) - X*

    for ``scaling="utility"`` (only utility arguments scale; bisection on
    ``(0, 1.5]``), or the version with ``- delta q*`` and ``- delta X*``
    for ``scaling="surplus"`` (bisection on ``(0, 1]``, since that side
    peaks at ``delta = 1``).

    Raises
    ------
    DomainError
        If ``pi_tilde`` is below the Friedman rule.
    """
    if scaling not in SCALINGS:
        raise ValueError(f"scaling must be one of {SCALINGS}")
    beta = params.beta
    i = nominal_rate(pi_tilde, beta)
    if i < -1e-12:
        raise DomainError(f"pi_tilde={pi_tilde} is below the Friedman rule {beta - 1}")
    i = max(i, 0.0)
    policy = Policy(i, chi)
    parts = welfare_level(params, policy, omega_form)
    target = parts.total
    q_star = mechanism_for(params).q_star
    X = params.B
    sa = params.sigma * params.alpha

    if scaling == "utility":
        def gap(d):
            return sa * (dm_utility(q_star * d, params) - q_star) + cm_utility(X * d, params) - X - target
        hi = 1.5
    else:
        def gap(d):
            return (sa * (dm_utility(q_star * d, params) - q_star * d)
                    + cm_utility(X * d, params) - X * d - target)
        hi = 1.0
    if i == 0.0 and abs(gap(1.0)) < 1e-13:
        delta = 1.0
    else:
        lo = 1e-6
        while gap(lo) > 0.0 and lo > 1e-300:
            lo *= 1e-3
        delta = _roots.bisect(gap, lo, hi, tol=1e-12, what="welfare delta")
    return WelfareReport(pi_tilde=pi_tilde, chi=chi, delta=delta, cost=1.0 - delta,
                         decomposition=parts, scaling=scaling)
