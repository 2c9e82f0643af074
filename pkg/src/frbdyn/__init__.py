"""Fractional reserve banking in a monetary search economy.

Steady states, endogenous cycles, sunspots, unsecured credit,
calibration, welfare costs and announced-policy transitions.
"""

from .core import (
    LiquidityBound,
    Mechanism,
    ModelParams,
    Policy,
    TakeItOrLeaveIt,
    cm_utility,
    deposit_rate,
    dm_marginal,
    dm_utility,
    liquidity_bound,
    liquidity_premium_of_balance,
    mechanism_for,
)
from .steady import SteadyState, comparative_statics, solve_steady
from .cycles import (
    CyclePoints,
    SunspotEquilibrium,
    chi_hat_m,
    chi_m,
    cycle_existence_set,
    eq_map,
    find_sunspot,
    find_three_cycle,
    find_two_cycle,
    simulate_backward,
    slope_at_steady,
)
from .credit import (
    CreditSteadyState,
    chi_c,
    chi_hat_c,
    credit_map_step,
    debt_limit_stationary,
    find_credit_three_cycle,
    find_credit_two_cycle,
    iota_d,
)
from .calibration import CalibrationTargets, calibrate, moments
from .welfare import welfare_cost, welfare_level
from .transition import TransitionPath, announce_transition, announce_transition_credit

__version__ = "0.1.0"

__all__ = [
    "LiquidityBound",
    "Mechanism",
    "ModelParams",
    "Policy",
    "TakeItOrLeaveIt",
    "cm_utility",
    "deposit_rate",
    "dm_marginal",
    "dm_utility",
    "liquidity_bound",
    "liquidity_premium_of_balance",
    "mechanism_for",
    "SteadyState",
    "comparative_statics",
    "solve_steady",
    "CyclePoints",
    "SunspotEquilibrium",
    "chi_hat_m",
    "chi_m",
    "cycle_existence_set",
    "eq_map",
    "find_sunspot",
    "find_three_cycle",
    "find_two_cycle",
    "simulate_backward",
    "slope_at_steady",
    "CreditSteadyState",
    "chi_c",
    "chi_hat_c",
    "credit_map_step",
    "debt_limit_stationary",
    "find_credit_three_cycle",
    "find_credit_two_cycle",
    "iota_d",
    "CalibrationTargets",
    "calibrate",
    "moments",
    "welfare_cost",
    "welfare_level",
    "TransitionPath",
    "announce_transition",
    "announce_transition_credit",
]
