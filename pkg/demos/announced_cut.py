"""Anticipated cut in the policy rate from 2% to 1%, announced 10 periods early."""

from frbdyn import presets
from frbdyn.core import Policy
from frbdyn.credit import debt_limit_stationary, mu_tilde
from frbdyn.transition import announce_transition, announce_transition_credit


def main():
    params = presets.benchmark_params()
    for chi in (1.0, 0.5, 0.1):
        path = announce_transition(0.02, 0.01, 10, chi, params)
        print(f"chi={chi}: z {path.z_old:.4f} -> {path.z_new:.4f}, "
              f"first-step share {path.initial_response_share:.3f}")
        print("  " + " ".join(f"{z:.4f}" for z in path.z_path))

    credit = presets.benchmark_params(mu=0.02, C=presets.WITH_CREDIT_CE[0],
                                      eta=presets.WITH_CREDIT_CE[1])
    pol = Policy(0.02, 0.1)
    print(f"\ncredit economy, mu={credit.mu}, coexistence bound "
          f"{mu_tilde(credit, pol):.4f}, regime {debt_limit_stationary(credit, pol).regime}")
    path = announce_transition_credit(0.02, 0.01, 10, 0.1, credit)
    print(f"{'t':>3} {'z':>8} {'b':>8}")
    for t, z, b in zip(path.t, path.z_path, path.b_path):
        print(f"{t:3d} {z:8.4f} {b:8.4f}")


if __name__ == "__main__":
    main()
