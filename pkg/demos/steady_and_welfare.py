"""Steady states and the cost of inflation in the benchmark economy.

Prints real balances across reserve requirements and the welfare cost of
10% inflation with and without unsecured credit.
"""

from frbdyn import presets
from frbdyn.core import Policy
from frbdyn.steady import solve_steady
from frbdyn.welfare import welfare_cost

CHIS = [0.01, 0.0325, 0.05, 0.1, 0.5, 1.0]


def main():
    params = presets.benchmark_params()
    print("steady state at i = 0.02")
    print(f"{'chi':>8} {'q_s':>9} {'z_s':>9} {'i_d':>9}")
    for chi in CHIS:
        ss = solve_steady(params, Policy(0.02, chi))
        print(f"{chi:8.4f} {ss.q_s:9.5f} {ss.z_s:9.5f} {ss.i_d:9.5f}")

    with_credit = presets.benchmark_params(mu=1.0, C=presets.WITH_CREDIT_CE[0],
                                           eta=presets.WITH_CREDIT_CE[1])
    print("\nconsumption-equivalent cost of 10% inflation")
    print(f"{'chi':>8} {'money':>9} {'credit':>9}")
    for chi in CHIS:
        a = welfare_cost(0.10, params, chi).cost
        b = welfare_cost(0.10, with_credit, chi).cost
        print(f"{chi:8.4f} {a:9.5f} {b:9.5f}")


if __name__ == "__main__":
    main()
