"""Equilibrium map of real balances, cycles, sunspots and chaos certification.

The map ``f`` sends next period's real balance to this period's,

    z_t = f(z_{t+1}) = z_{t+1}/(1+i) (1 + i_d(z_{t+1})) (1 + alpha L(z_{t+1}(1 + i_d)))

and is linear, ``z/(1+i)``, once ``z >= p_star``.  Periodic orbits are
built from the semi-analytic structure where every point but the lowest
sits on the linear branch, so consecutive points grow by ``1 + i``.

The thresholds :func:`chi_m` and :func:`chi_hat_m` are necessary for
such orbits but not sufficient: the orbit also needs its second point
to clear ``p_star``.  Constructors therefore verify the orbit and raise
:class:`~frbdyn.errors.OrbitVerificationError` when it does not close.
:func:`cycle_existence_set` reports where it does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _roots
from .core import deposit_rate, liquidity_premium_of_balance, mechanism_for
from .errors import (
    DegenerateInputError,
    DomainError,
    FrbDynError,
    NoCycleError,
    NoSunspotError,
    OrbitVerificationError,
    SingularSlopeError,
    UndefinedThresholdError,
)
from .steady import marginal_utility_at_steady, solve_steady

__all__ = [
    "CyclePoints",
    "SunspotEquilibrium",
    "BackwardPath",
    "eq_map",
    "slope_at_steady",
    "cycle_threshold",
    "chi_m",
    "chi_hat_m",
    "find_cycle",
    "find_two_cycle",
    "find_three_cycle",
    "cycle_existence_set",
    "find_sunspot",
    "sunspot_near_cycle",
    "simulate_backward",
    "orbit_samples",
]

ORBIT_TOL = 1e-8
BOUNDARY_TOL = 1e-10


@dataclass(frozen=True)
class CyclePoints:
    """Periodic orbit of the equilibrium map.

    Attributes
    ----------
    period : int
    points : tuple of float
        Increasing real balances ``z_1 < z_2 [< z_3]``.
    residuals : tuple of float
        ``|z_k - f(z_{k+1})|`` with indices taken cyclically.
    pbar_1 : float
        Liquidity of the lowest point, ``z_1 (1 + i_d(z_1))``.
    chaotic : bool
        True for a verified period-3 orbit, which implies orbits of every
        period and Li-Yorke chaos.
    """

    period: int
    points: tuple
    residuals: tuple
    pbar_1: float
    chaotic: bool = False


@dataclass(frozen=True)
class SunspotEquilibrium:
    """Two-state sunspot equilibrium.

    Attributes
    ----------
    z1, z2 : float
        State-contingent real balances, ``z1 < z2``.
    zeta1, zeta2 : float
        Probabilities of staying in state 1 and state 2.
    residuals : tuple of float
        Residuals of ``z1 = zeta1 f(z1) + (1-zeta1) f(z2)`` and
        ``z2 = (1-zeta2) f(z1) + zeta2 f(z2)``.
    """

    z1: float
    z2: float
    zeta1: float
    zeta2: float
    residuals: tuple


@dataclass(frozen=True)
class BackwardPath:
    """Result of iterating the equilibrium map backward in time.

    Attributes
    ----------
    values : ndarray
        ``values[-1]`` is the terminal balance and
        ``values[t] = f(values[t+1])``.  Shorter than requested when
        truncated.
    complete : bool
    diagnostic : str
        Empty when complete; otherwise why the iteration stopped.
    """

    values: np.ndarray
    complete: bool
    diagnostic: str = ""


def eq_map(z_next, params, policy, mech=None):
    """Current real balance implied by next period's balance.

    Parameters
    ----------
    z_next : float
        Next-period real balance, positive.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        If ``z_next`` is not positive.
    """
    mech = mech or mechanism_for(params)
    gross = 1.0 + policy.i
    if not z_next > 0.0:
        raise DomainError(f"z must be positive, got {z_next!r}")
    if z_next >= mech.p_star:
        return z_next / gross
    i_d = deposit_rate(z_next, params, policy, mech)
    pbar = min(mech.p_star, z_next * (1.0 + i_d))
    prem = liquidity_premium_of_balance(pbar, mech)
    return z_next / gross * (1.0 + i_d) * (1.0 + params.alpha * prem)


def slope_at_steady(params, policy):
    """Closed-form ``f'(z_s)`` for the CRRA take-it-or-leave-it model.

    With ``K = 1 - alpha + alpha (1 - eta) u'(q_s)``,

        f'(z_s) = chi K / ((1 + i) {1 + (chi - 1) K}).

    Raises
    ------
    SingularSlopeError
        If the denominator is within ``1e-14`` of zero.
    """
    alpha, eta = params.alpha, params.eta
    i, chi = policy.i, policy.chi
    k = 1.0 - alpha + alpha * (1.0 - eta) * marginal_utility_at_steady(params, policy)
    den = (1.0 + i) * (1.0 + (chi - 1.0) * k)
    if abs(den) < 1e-14:
        raise SingularSlopeError(f"slope denominator {den:.3e} at chi={chi}, i={i}")
    return chi * k / den


def _premium_at_threshold(params, policy, mech, rate):
    if rate <= 0.0:
        raise UndefinedThresholdError("threshold needs a positive rate")
    return liquidity_premium_of_balance(mech.p_star / (1.0 + rate), mech)


def _threshold_formula(alpha, prem, rate, period):
    g = (1.0 + rate) ** period
    return g * alpha * prem / ((g - 1.0) * (1.0 + alpha * prem))


def cycle_threshold(params, policy, period, mech=None):
    """Reserve-requirement threshold for period-``period`` orbits.

    ``(1+i)^n alpha L(p*/(1+i)) / ({(1+i)^n - 1}{1 + alpha L(p*/(1+i))})``
    """
    mech = mech or mechanism_for(params)
    prem = _premium_at_threshold(params, policy, mech, policy.i)
    return _threshold_formula(params.alpha, prem, policy.i, period)


def chi_m(params, policy, mech=None):
    """Two-cycle threshold.

    Examples
    --------
    >>> from frbdyn.core import ModelParams, Policy
    >>> p = ModelParams(0.5, 0.5, 1.0, 0.5, 3.0, 1.0, 0.999999999)
    >>> round(chi_m(p, Policy(1.0, 0.5)), 6)
    0.666667
    """
    return cycle_threshold(params, policy, 2, mech)


def chi_hat_m(params, policy, mech=None):
    """Three-cycle (chaos) threshold; always below :func:`chi_m`."""
    return cycle_threshold(params, policy, 3, mech)


def _lowest_point(params, policy, period, mech):
    """Lowest orbit point from the period condition; returns (pbar_1, z_1)."""
    g = (1.0 + policy.i) ** period
    chi, alpha = policy.chi, params.alpha
    spread = (g - 1.0) * (1.0 - chi)
    level = chi * (g - 1.0) / (alpha * (1.0 + spread))
    pbar_1 = mech.v(mech.lam_inv(level))
    # 1 + i_d at the lowest point equals 1 + (g-1)(1-chi)
    return pbar_1, pbar_1 / (1.0 + spread)


def _orbit_residuals(points, params, policy, mech):
    n = len(points)
    return tuple(abs(points[k] - eq_map(points[(k + 1) % n], params, policy, mech))
                 for k in range(n))


def find_cycle(params, policy, period, mech=None):
    """Construct and verify a period-``period`` orbit (2 or 3).

    The lowest point has liquidity ``pbar_1`` solving
    ``chi = g alpha L(pbar_1) / ((g - 1)(1 + alpha L(pbar_1)))`` with
    ``g = (1+i)^period``; the remaining points are ``(1+i)^k z_1``.

    Raises
    ------
    NoCycleError
        If ``chi`` is not below the threshold.
    OrbitVerificationError
        If the constructed orbit misses the map by more than ``1e-8``,
        which happens whenever its second point stays below ``p_star``.
    """
    if period not in (2, 3):
        raise ValueError("period must be 2 or 3")
    mech = mech or mechanism_for(params)
    thresh = cycle_threshold(params, policy, period, mech)
    if policy.chi >= thresh - BOUNDARY_TOL:
        raise NoCycleError(
            f"chi={policy.chi} is not below the period-{period} threshold {thresh}"
        )
    pbar_1, z_1 = _lowest_point(params, policy, period, mech)
    points = tuple(z_1 * (1.0 + policy.i) ** k for k in range(period))
    resid = _orbit_residuals(points, params, policy, mech)
    if max(resid) > ORBIT_TOL:
        raise OrbitVerificationError(
            f"period-{period} orbit does not close: residuals {resid}; "
            f"second point {points[1]:.6g} vs p_star {mech.p_star:.6g}"
        )
    below = sum(z < mech.p_star for z in points)
    if below != 1:
        raise OrbitVerificationError(f"orbit has {below} points below p_star, expected 1")
    return CyclePoints(period=period, points=points, residuals=resid,
                       pbar_1=pbar_1, chaotic=(period == 3))


def find_two_cycle(params, policy, mech=None):
    """Two-period orbit ``z_1 < z_s <= p_star < z_2``; see :func:`find_cycle`."""
    return find_cycle(params, policy, 2, mech)


def find_three_cycle(params, policy, mech=None):
    """Three-period orbit ``z_1 < p_star < z_2 < z_3``; see :func:`find_cycle`.

    A verified three-cycle certifies orbits of all periods and Li-Yorke
    chaos (``CyclePoints.chaotic``).
    """
    return find_cycle(params, policy, 3, mech)


def cycle_existence_set(params, policy, period, mech=None, n_grid=400):
    """Reserve requirements for which the semi-analytic orbit closes.

    The orbit closes iff its second point ``(1+i) z_1`` is at least
    ``p_star``.  The set is scanned on a grid below the closed-form
    threshold and its edges refined by bisection.

    Returns
    -------
    list of (float, float)
        Disjoint intervals of ``chi``; empty when no such orbit exists
        (always the case for ``eta < 1``).
    """
    mech = mech or mechanism_for(params)
    top = min(cycle_threshold(params, policy, period, mech), 1.0)
    gross = 1.0 + policy.i

    def margin(chi):
        pol = type(policy)(policy.i, chi)
        _, z_1 = _lowest_point(params, pol, period, mech)
        return gross * z_1 - mech.p_star

    grid = np.linspace(top * 1e-6, top * (1.0 - 1e-9), n_grid)
    vals = np.array([margin(c) for c in grid])
    out, start = [], None
    for k, (c, m) in enumerate(zip(grid, vals)):
        if m >= 0.0 and start is None:
            start = c if k == 0 else _roots.bisect(margin, grid[k - 1], c, tol=1e-12)
        elif m < 0.0 and start is not None:
            out.append((start, _roots.bisect(margin, grid[k - 1], c, tol=1e-12)))
            start = None
    if start is not None:
        out.append((start, top))
    return out


def find_sunspot(z1, z2, params, policy, mech=None):
    """Two-state sunspot equilibrium supported on ``z1 < z2``.

    Requires ``f(z2) < z1 < z2 < f(z1)``; then

        zeta1 = (z1 - f(z2)) / (f(z1) - f(z2))
        zeta2 = (f(z1) - z2) / (f(z1) - f(z2))

    both lie in (0, 1) and ``zeta1 + zeta2 = (z1 - z2)/(f(z1) - f(z2)) + 1 < 1``.

    Raises
    ------
    DegenerateInputError
        If ``z1 == z2``.
    NoSunspotError
        If the ordering condition fails.
    """
    if z1 == z2:
        raise DegenerateInputError("sunspot states must differ")
    if z1 > z2:
        raise NoSunspotError(f"need z1 < z2, got {z1} >= {z2}")
    mech = mech or mechanism_for(params)
    f1 = eq_map(z1, params, policy, mech)
    f2 = eq_map(z2, params, policy, mech)
    if not f2 < z1 < z2 < f1:
        raise NoSunspotError(
            f"ordering f(z2) < z1 < z2 < f(z1) fails: f(z2)={f2:.6g}, "
            f"z1={z1:.6g}, z2={z2:.6g}, f(z1)={f1:.6g}"
        )
    span = f1 - f2
    zeta1 = (z1 - f2) / span
    zeta2 = (f1 - z2) / span
    resid = (abs(z1 - (zeta1 * f1 + (1.0 - zeta1) * f2)),
             abs(z2 - ((1.0 - zeta2) * f1 + zeta2 * f2)))
    return SunspotEquilibrium(z1, z2, zeta1, zeta2, resid)


def sunspot_near_cycle(params, policy, mech=None, inset=0.5):
    """Sunspot built from the two-cycle with the upper state moved inward.

    Keeps ``z1`` at the lower cycle point and sets
    ``z2 = z_2 - inset (z_2 - p_star)``, which stays on the linear branch
    so ``f(z2) < z1`` holds automatically.
    """
    mech = mech or mechanism_for(params)
    cyc = find_two_cycle(params, policy, mech)
    lo, hi = cyc.points
    z2 = hi - inset * (hi - max(mech.p_star, lo))
    return find_sunspot(lo, z2, params, policy, mech)


def simulate_backward(z_terminal, n_steps, params, policy, mech=None):
    """Iterate ``z_t = f(z_{t+1})`` from a terminal balance.

    Returns
    -------
    BackwardPath
        ``values[-1] = z_terminal``; on leaving the admissible region the
        path is truncated at the last admissible value.
    """
    mech = mech or mechanism_for(params)
    out = np.empty(n_steps + 1)
    out[n_steps] = z_terminal
    for t in range(n_steps - 1, -1, -1):
        try:
            out[t] = eq_map(out[t + 1], params, policy, mech)
        except FrbDynError as exc:
            return BackwardPath(out[t + 1:].copy(), False,
                                f"stopped {n_steps - t - 1} steps back: {exc}")
    return BackwardPath(out, True)


def orbit_samples(params, policy, n_burn=500, n_keep=64, z_start=None, mech=None):
    """Long-run samples of the backward map, for bifurcation diagrams.

    Starts at ``z_start`` (default ``1.05 z_s``), discards ``n_burn``
    iterates and returns the next ``n_keep``.  Iterates that leave the
    admissible region end the run early; the returned array is then short.
    """
    mech = mech or mechanism_for(params)
    z = z_start if z_start is not None else 1.05 * solve_steady(params, policy, mech).z_s
    kept = []
    try:
        for k in range(n_burn + n_keep):
            z = eq_map(z, params, policy, mech)
            if k >= n_burn:
                kept.append(z)
    except FrbDynError:
        pass
    return np.asarray(kept)
