import pytest
from hypothesis import HealthCheck, settings

from frbdyn import presets
from frbdyn.core import ModelParams, Policy

settings.register_profile("frbdyn", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow,
                                                 HealthCheck.function_scoped_fixture])
settings.load_profile("frbdyn")


@pytest.fixture
def toy():
    """Small textbook economy: alpha = sigma = 0.5, C = 1, eta = 0.5."""
    return ModelParams.from_matching(beta=0.96, sigma=0.5, B=3.0, C=1.0, eta=0.5)


@pytest.fixture
def toy_policy():
    return Policy(0.05, 0.1)


@pytest.fixture
def cyclic():
    """Strongly concave economy where the backward map has closed 2- and 3-cycles."""
    return ModelParams(beta=0.96, sigma=0.5, alpha=0.9, alpha_s=0.5, B=3.0, C=1.0, eta=4.0)


@pytest.fixture
def model1():
    return presets.benchmark_params()


@pytest.fixture
def model2():
    return presets.benchmark_params(mu=1.0, C=presets.WITH_CREDIT_CE[0],
                                    eta=presets.WITH_CREDIT_CE[1])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
