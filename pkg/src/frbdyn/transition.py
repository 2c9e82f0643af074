"""Perfect-foresight responses to an announced future change in the nominal rate.

At date 0 the central bank announces that the rate moves from ``i0`` to
``iT`` at date ``T``.  From ``T`` on the economy sits at the new steady
state; before ``T`` the old policy's map applies, so the path is built
backward:

    z_T = new steady state,  z_t = f_old(z_{t+1}),  t = T-1, ..., 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Policy, mechanism_for
from .credit import MONEY_CREDIT, credit_map_step, debt_limit_stationary
from .cycles import eq_map
from .errors import DomainError, FrbDynError
from .steady import solve_steady

__all__ = [
    "DEFAULT_HORIZON",
    "TransitionPath",
    "announce_transition",
    "announce_transition_credit",
    "forward_residuals",
]

DEFAULT_HORIZON = 10


@dataclass(frozen=True)
class TransitionPath:
    """Real balances (and debt limits) from announcement to implementation.

    Attributes
    ----------
    T : int
        Periods between announcement and implementation.
    z_path : ndarray
        ``z_path[0]`` is the first post-announcement value and
        ``z_path[T]`` the new steady state.  Truncated paths start later.
    b_path : ndarray
        Debt limits on the same dates; empty without credit.
    i0, iT, chi : float
    z_old, b_old : float
        Steady state before the announcement (``b_old`` is 0 without credit).
    complete : bool
    diagnostic : str
    """

    T: int
    z_path: np.ndarray
    b_path: np.ndarray
    i0: float
    iT: float
    chi: float
    z_old: float
    b_old: float = 0.0
    complete: bool = True
    diagnostic: str = ""
    t: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.t is None:
            n = len(self.z_path)
            object.__setattr__(self, "t", np.arange(self.T - n + 1, self.T + 1))

    @property
    def z_new(self):
        return float(self.z_path[-1])

    @property
    def initial_response_share(self):
        """``(z_path[0] - z_old) / (z_T - z_old)``; NaN when nothing changes."""
        move = self.z_new - self.z_old
        if move == 0.0:
            return float("nan")
        return float((self.z_path[0] - self.z_old) / move)


def _check_horizon(T):
    if int(T) != T or T < 1:
        raise DomainError(f"horizon must be a positive integer, got {T!r}")
    return int(T)


def announce_transition(i0, iT, T, chi, params):
    """Money-only transition path.

    Parameters
    ----------
    i0, iT : float
        Nominal rates before and after implementation.
    T : int
        Implementation date.
    chi : float
        Reserve requirement (unchanged).
    params : ModelParams

    Returns
    -------
    TransitionPath
        Truncated with a diagnostic if an iterate leaves the admissible
        region.
    """
    T = _check_horizon(T)
    mech = mechanism_for(params)
    old, new = Policy(i0, chi), Policy(iT, chi)
    z_old = solve_steady(params, old, mech).z_s
    z = np.empty(T + 1)
    z[T] = solve_steady(params, new, mech).z_s
    if i0 == iT:
        # unchanged policy: the economy stays at its steady state
        z[:] = z[T]
        return TransitionPath(T, z, np.empty(0), i0, iT, chi, z_old)
    for t in range(T - 1, -1, -1):
        try:
            z[t] = eq_map(z[t + 1], params, old, mech)
        except FrbDynError as exc:
            return TransitionPath(T, z[t + 1:].copy(), np.empty(0), i0, iT, chi, z_old,
                                  complete=False, diagnostic=f"stopped at t={t}: {exc}")
    return TransitionPath(T, z, np.empty(0), i0, iT, chi, z_old)


def announce_transition_credit(i0, iT, T, chi, params, omega_form="recursive"):
    """Transition path of money and the debt limit.

    The terminal point is the money-credit steady state under ``iT``;
    earlier points apply :func:`~frbdyn.credit.credit_map_step` with the
    old rate.

    Raises
    ------
    DomainError
        If either policy lacks a money-credit steady state.
    """
    T = _check_horizon(T)
    mech = mechanism_for(params)
    old, new = Policy(i0, chi), Policy(iT, chi)
    ss_old = debt_limit_stationary(params, old, omega_form, mech)
    ss_new = debt_limit_stationary(params, new, omega_form, mech)
    for label, ss in (("initial", ss_old), ("terminal", ss_new)):
        if ss.regime != MONEY_CREDIT:
            raise DomainError(f"{label} policy gives a {ss.regime} steady state")
    z = np.empty(T + 1)
    b = np.empty(T + 1)
    z[T], b[T] = ss_new.z, ss_new.b_bar
    if i0 == iT:
        z[:], b[:] = z[T], b[T]
        return TransitionPath(T, z, b, i0, iT, chi, ss_old.z, ss_old.b_bar)
    for t in range(T - 1, -1, -1):
        try:
            z[t], b[t] = credit_map_step(z[t + 1], b[t + 1], params, old, mech)
        except FrbDynError as exc:
            return TransitionPath(T, z[t + 1:].copy(), b[t + 1:].copy(), i0, iT, chi,
                                  ss_old.z, ss_old.b_bar, complete=False,
                                  diagnostic=f"stopped at t={t}: {exc}")
        if z[t] <= 0.0 or b[t] < 0.0:
            return TransitionPath(T, z[t + 1:].copy(), b[t + 1:].copy(), i0, iT, chi,
                                  ss_old.z, ss_old.b_bar, complete=False,
                                  diagnostic=f"stopped at t={t}: z={z[t]:.6g}, b={b[t]:.6g}")
    return TransitionPath(T, z, b, i0, iT, chi, ss_old.z, ss_old.b_bar)


def forward_residuals(path, params):
    """Largest mismatch when each element is recomputed from its successor.

    Uses the old policy before ``T`` and checks the terminal point against
    the new policy's map, so a correct path returns values near zero.
    """
    mech = mechanism_for(params)
    old, new = Policy(path.i0, path.chi), Policy(path.iT, path.chi)
    z, b = path.z_path, path.b_path
    out = np.empty(len(z))
    for k in range(len(z)):
        pol, nxt = (old, k + 1) if k + 1 < len(z) else (new, k)
        if len(b):
            zn, bn = credit_map_step(z[nxt], b[nxt], params, pol, mech)
            out[k] = max(abs(zn - z[k]), abs(bn - b[k]))
        else:
            out[k] = abs(eq_map(z[nxt], params, pol, mech) - z[k])
    return out
