import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "fixed",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("fixed")

from goodsemi.curve import CurveParam  # noqa: E402
from goodsemi.valuation import value_semigroup  # noqa: E402

# blow-up of the three-branch curve below, and the curve blown up once more
O_PRIME = CurveParam.of(({2: 1}, {3: 1}), ({3: 1}, {2: 1, 4: 1}), ({2: 1}, {0: 1, 3: 1}))
O_41 = CurveParam.of(({2: 1}, {5: 1}), ({3: 1}, {5: 1, 7: 1}), ({2: 1}, {2: 1, 5: 1}))
O_51 = CurveParam.of(({2: 1}, {7: 1}), ({3: 1}, {8: 1, 10: 1}), ({2: 1}, {4: 1, 7: 1}))

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def S_prime():
    return value_semigroup(O_PRIME)


@pytest.fixture(scope="session")
def S41():
    return value_semigroup(O_41)


@pytest.fixture(scope="session")
def S51():
    return value_semigroup(O_51)


# the multiplicity tree drawn for the three-branch curve: id -> (parent, weight)
FIGURE_TREE = {
    "0:123": (None, (2, 3, 2)),
    "1:123": ("0:123", (2, 3, 2)),
    "2:12": ("1:123", (2, 2, 0)),
    "2:3": ("1:123", (0, 0, 2)),
    "3:1": ("2:12", (1, 0, 0)),
    "3:2": ("2:12", (0, 1, 0)),
    "3:3": ("2:3", (0, 0, 1)),
}
E_51 = ((2, 2, 2, 1), (3, 3, 2, 1), (2, 2, 2, 1))
K_51 = (2, 1, 1)


def tree_shape(T):
    return {n.id: (n.parent, tuple(n.weight)) for n in T.nodes}


def pytest_configure(config):
    config.addinivalue_line("markers", "invariant: property from a module's invariant list")


# outcomes of invariant tests in this session, read by the acceptance module
INVARIANT_OUTCOMES = {}


def pytest_collection_modifyitems(config, items):
    # acceptance last, so it can report on the invariant suites
    items.sort(key=lambda it: it.module.__name__ == "test_acceptance" if it.module else False)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("invariant") is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        INVARIANT_OUTCOMES[item.nodeid] = rep.outcome
