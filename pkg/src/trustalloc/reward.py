"""Task rewards, agent costs, expected total reward and the assignment rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .capability import AgentKind, CapabilityVector, Task
from .errors import DimensionMismatch, MissingAgent, ValidationError

TIE_TOLERANCE = 1e-9
AGENTS = (AgentKind.HUMAN, AgentKind.ROBOT)


@dataclass(frozen=True)
class RewardParams:
    """Linear reward and cost functions of the task requirements.

    ``r_s = success_base + success_weights . lam_bar`` and
    ``c^a = cost_base[a] + cost_weights[a] . lam_bar``. The human must cost
    strictly more than the robot on every task, which for linear forms over
    [0, 1]^n is guaranteed by a larger base and componentwise larger weights.
    """

    success_weights: tuple
    success_base: float = 0.0
    failure_value: float = 0.0
    cost_base: Mapping = field(default_factory=lambda: {AgentKind.HUMAN: 3.0, AgentKind.ROBOT: 1.0})
    cost_weights: Mapping = field(default_factory=dict)

    def __post_init__(self):
        sw = tuple(float(w) for w in self.success_weights)
        n = len(sw)
        object.__setattr__(self, "success_weights", sw)
        base = {AgentKind(k): float(v) for k, v in dict(self.cost_base).items()}
        weights = {AgentKind(k): tuple(float(x) for x in v) for k, v in dict(self.cost_weights).items()}
        for kind in AGENTS:
            if kind not in base:
                raise ValidationError("missing cost base", field=f"cost_base.{kind.value}")
            weights.setdefault(kind, (0.0,) * n)
        object.__setattr__(self, "cost_base", base)
        object.__setattr__(self, "cost_weights", weights)

        if n == 0:
            raise ValidationError("need at least one weight", field="success_weights")
        if any(w < 0 for w in sw):
            raise ValidationError("weights must be nonnegative", field="success_weights")
        if self.success_base < 0:
            raise ValidationError("must be nonnegative", field="success_base")
        if self.failure_value > 0:
            raise ValidationError("must be <= 0", field="failure_value")
        for kind in AGENTS:
            if base[kind] < 0:
                raise ValidationError("must be nonnegative", field=f"cost_base.{kind.value}")
            if len(weights[kind]) != n:
                raise ValidationError(
                    f"expected {n} weights, got {len(weights[kind])}", field=f"cost_weights.{kind.value}"
                )
            if any(w < 0 for w in weights[kind]):
                raise ValidationError("weights must be nonnegative", field=f"cost_weights.{kind.value}")
        h, r = AgentKind.HUMAN, AgentKind.ROBOT
        if not base[h] > base[r]:
            raise ValidationError(
                f"human cost base {base[h]} must exceed robot cost base {base[r]}", field="cost_base"
            )
        if any(wh < wr for wh, wr in zip(weights[h], weights[r])):
            raise ValidationError("human cost weights must be >= robot cost weights", field="cost_weights")

    @property
    def n(self) -> int:
        return len(self.success_weights)


def _dot(weights, lam_bar) -> float:
    lam_bar = np.asarray(lam_bar, dtype=float).ravel()
    if lam_bar.size != len(weights):
        raise DimensionMismatch(f"{lam_bar.size} requirements for {len(weights)} weights")
    return float(np.dot(weights, lam_bar))


def reward_for_success(lam_bar, params: RewardParams) -> float:
    return params.success_base + _dot(params.success_weights, lam_bar)


def penalty_for_failure(lam_bar, params: RewardParams) -> float:
    # constant in the linear family; kept as a function so other families can vary it
    return params.failure_value


def agent_cost(kind: AgentKind, lam_bar, params: RewardParams) -> float:
    kind = AgentKind(kind)
    return params.cost_base[kind] + _dot(params.cost_weights[kind], lam_bar)


def expected_total_reward(tau: float, r_s: float, r_f: float, c: float) -> float:
    """``tau * (r_s - c) + (1 - tau) * (r_f - c)``."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"trust must lie in [0, 1], got {tau}")
    return tau * (r_s - c) + (1.0 - tau) * (r_f - c)


@dataclass(frozen=True)
class AllocationDecision:
    chosen: AgentKind
    expected_rewards: dict
    trust_values: dict
    tie_broken: bool
    reward_success: float
    reward_failure: float
    costs: dict


def allocate(
    task: Task | CapabilityVector,
    trust_by_agent: Mapping[AgentKind, float],
    params: RewardParams,
    assigned_counts: Mapping[AgentKind, int] | None = None,
    final_tie_break: AgentKind = AgentKind.ROBOT,
    tie_tol: float = TIE_TOLERANCE,
) -> AllocationDecision:
    """Pick the agent with the largest expected total reward.

    Rewards within ``tie_tol`` of the best count as tied; ties go to the agent
    with fewer tasks so far, then to ``final_tie_break``.
    """
    lam_bar = task.requirements if isinstance(task, Task) else task
    trust = {AgentKind(k): float(v) for k, v in trust_by_agent.items()}
    for kind in AGENTS:
        if kind not in trust:
            raise MissingAgent(f"no trust value for {kind.value}")
    counts = {AgentKind(k): int(v) for k, v in (assigned_counts or {}).items()}

    r_s = reward_for_success(lam_bar, params)
    r_f = penalty_for_failure(lam_bar, params)
    costs = {k: agent_cost(k, lam_bar, params) for k in trust}
    expected = {k: expected_total_reward(trust[k], r_s, r_f, costs[k]) for k in trust}

    best = max(expected.values())
    tied = [k for k in trust if best - expected[k] < tie_tol]
    tie_broken = len(tied) > 1
    if not tie_broken:
        chosen = tied[0]
    else:
        fewest = min(counts.get(k, 0) for k in tied)
        tied = [k for k in tied if counts.get(k, 0) == fewest]
        chosen = final_tie_break if final_tie_break in tied else tied[0]
    return AllocationDecision(
        chosen=chosen,
        expected_rewards=expected,
        trust_values=trust,
        tie_broken=tie_broken,
        reward_success=r_s,
        reward_failure=r_f,
        costs=costs,
    )
