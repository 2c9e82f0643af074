"""Stationary monetary equilibrium and its comparative statics."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _roots
from .core import TakeItOrLeaveIt, liquidity_bound, mechanism_for
from .errors import NoSteadyStateError

__all__ = [
    "SteadyState",
    "solve_steady",
    "stationary_residual",
    "marginal_utility_at_steady",
    "comparative_statics",
]


@dataclass(frozen=True)
class SteadyState:
    """Stationary equilibrium of the money-only economy.

    Attributes
    ----------
    q_s : float
        Quantity traded in the decentralized market.
    pbar_s : float
        Buyer liquidity ``v(q_s)``.
    z_s : float
        Buyer real balance ``pbar_s / (1 + i_d)``.
    i_d, i_s, i_l : float
        Deposit, saving and loan rates; ``i_s = i_l = i`` and
        ``i_d = (1 - chi) i``.
    mbar : float
        Real fiat balance ``chi z_s`` (reserves backing deposits).
    """

    q_s: float
    pbar_s: float
    z_s: float
    i_d: float
    i_s: float
    i_l: float
    mbar: float


def marginal_utility_at_steady(params, policy):
    """``u'(q_s) = 1 + i chi / (alpha [1 + i (1 - chi)])``."""
    i, chi = policy.i, policy.chi
    return 1.0 + i * chi / (params.alpha * (1.0 + i * (1.0 - chi)))


def stationary_residual(pbar, params, policy, mech=None):
    """``i chi - {1 + i (1 - chi)} alpha L(pbar)``; zero at the steady state."""
    mech = mech or mechanism_for(params)
    i, chi = policy.i, policy.chi
    prem = mech.lam(mech.v_inv(pbar)) if pbar < mech.p_star else 0.0
    return i * chi - (1.0 + i * (1.0 - chi)) * params.alpha * prem


def solve_steady(params, policy, mech=None, method="auto"):
    """Solve the stationary equilibrium.

    Parameters
    ----------
    params : ModelParams
    policy : Policy
    mech : Mechanism, optional
        Defaults to the take-it-or-leave-it CRRA instance.
    method : {"auto", "closed", "bisect"}
        ``"closed"`` uses ``q_s = [(1 + i chi/(alpha[1+i(1-chi)])) / C]^(-1/eta)``
        and is only valid for :class:`TakeItOrLeaveIt`; ``"bisect"``
        solves the stationary residual on ``(p_hat, p_star]`` for any
        mechanism.  ``"auto"`` picks the closed form when available.

    Returns
    -------
    SteadyState

    Raises
    ------
    NoSteadyStateError
        If ``i`` exceeds the mechanism's existence bound.

    Examples
    --------
    >>> from frbdyn.core import ModelParams, Policy
    >>> p = ModelParams(0.96, 0.5, 0.5, 0.5, 3.0, 1.0, 0.5)
    >>> round(solve_steady(p, Policy(0.05, 1.0)).q_s, 6)
    0.826446
    """
    mech = mech or mechanism_for(params)
    i, chi = policy.i, policy.chi
    bound = mech.existence_bound(params, policy)
    if not i < bound:
        raise NoSteadyStateError(f"i={i} is not below the existence bound {bound}")
    if method == "auto":
        method = "closed" if isinstance(mech, TakeItOrLeaveIt) else "bisect"

    if i == 0.0:
        pbar = mech.p_star
    elif method == "closed":
        if not isinstance(mech, TakeItOrLeaveIt):
            raise ValueError("closed form needs the take-it-or-leave-it CRRA mechanism")
        up = marginal_utility_at_steady(params, policy)
        pbar = (up / mech.C) ** (-1.0 / mech.eta)
    elif method == "bisect":
        lo = liquidity_bound(params, policy, mech).p_hat
        lo = lo * (1.0 + 1e-13) if lo > 0.0 else mech.p_star * 1e-12
        pbar = _roots.bisect(
            lambda p: stationary_residual(p, params, policy, mech),
            lo, mech.p_star, tol=1e-13, what="stationary condition",
        )
    else:
        raise ValueError(f"unknown method {method!r}")

    q_s = mech.v_inv(pbar)
    i_d = (1.0 - chi) * i
    z_s = pbar / (1.0 + i_d)
    return SteadyState(q_s=q_s, pbar_s=pbar, z_s=z_s, i_d=i_d, i_s=i, i_l=i,
                       mbar=chi * z_s)


def comparative_statics(params, policy, mech=None):
    """Derivatives of steady-state liquidity with respect to ``i`` and ``chi``.

    Implicit differentiation of the stationary condition gives

        d pbar/d i   = (chi + (chi - 1) alpha L) / ({1 + i(1-chi)} alpha L')
        d pbar/d chi = i (1 + alpha L) / ({1 + i(1-chi)} alpha L')

    with ``L`` and ``L'`` evaluated at ``pbar_s``.

    Returns
    -------
    tuple of float
        ``(dpbar_di, dpbar_dchi)``; both negative at an interior steady state.
    """
    mech = mech or mechanism_for(params)
    ss = solve_steady(params, policy, mech)
    i, chi, alpha = policy.i, policy.chi, params.alpha
    q = mech.v_inv(ss.pbar_s)
    prem = mech.lam(q)
    prem_prime = mech.lam_prime(q) / mech.v_prime(q)
    if prem_prime == 0.0 or not math.isfinite(prem_prime):
        raise NoSteadyStateError("comparative statics need an interior steady state (i > 0)")
    den = (1.0 + i * (1.0 - chi)) * alpha * prem_prime
    d_i = (chi + (chi - 1.0) * alpha * prem) / den
    d_chi = i * (1.0 + alpha * prem) / den
    return d_i, d_chi
