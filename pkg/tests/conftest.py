import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trustalloc import AgentKind, CapabilitySpace, CapabilityVector, Observation, Outcome, RewardParams


@pytest.fixture
def space2():
    return CapabilitySpace(2, 101)


@pytest.fixture
def small_space():
    return CapabilitySpace(2, 11)


@pytest.fixture
def params():
    return RewardParams(
        success_weights=(10.0, 10.0),
        cost_base={AgentKind.HUMAN: 2.0, AgentKind.ROBOT: 1.0},
        cost_weights={AgentKind.HUMAN: (1.0, 1.0), AgentKind.ROBOT: (0.5, 0.5)},
    )


def step_observations(truth, count, seed):
    """Noiseless step-model outcomes for uniformly drawn requirements."""
    rng = np.random.default_rng(seed)
    truth = np.asarray(truth)
    out = []
    for r in rng.random((count, truth.size)):
        ok = bool(np.all(truth >= r))
        out.append(Observation(CapabilityVector(r), Outcome.SUCCESS if ok else Outcome.FAILURE))
    return out


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
