"""Benchmark calibration used by the demos and the CLI defaults.

Annual model period.  ``beta = 0.9709``, ``B = 3``, average nominal
rate 5.36% and reserve requirement 3.25%.  Match rates come from
``M(b, s) = b s / (b + s)`` with ``sigma = 0.5``.
"""

from .core import ModelParams, Policy

BETA = 0.9709
B_LEVEL = 3.0
SIGMA = 0.5
I_BAR = 0.0536
CHI_BAR = 0.0325

ZY_TARGET = 0.2578
ELASTICITY_NO_CREDIT = -0.1012
ELASTICITY_WITH_CREDIT = -0.1002

# reference (C, eta) for the money-only and money-with-credit economies
MONEY_ONLY_CE = (0.9956, 0.0568)
WITH_CREDIT_CE = (1.0110, 0.0282)


def benchmark_params(sigma=SIGMA, mu=0.0, C=None, eta=None):
    """Benchmark parameters; ``(C, eta)`` default to the money-only values."""
    c0, e0 = MONEY_ONLY_CE if mu == 0.0 else WITH_CREDIT_CE
    return ModelParams.from_matching(
        beta=BETA, sigma=sigma, B=B_LEVEL,
        C=c0 if C is None else C, eta=e0 if eta is None else eta, mu=mu,
    )


def benchmark_policy(i=I_BAR, chi=CHI_BAR):
    return Policy(i=i, chi=chi)
