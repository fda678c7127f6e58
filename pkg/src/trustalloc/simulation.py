"""Closed-loop simulation of a one-human, one-robot team.

Each incoming task is scored for both agents, assigned, executed against the
hidden ground-truth capabilities, and the outcome is fed back into the
executing agent's belief.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .capability import (
    AgentKind,
    CapabilitySpace,
    CapabilityVector,
    Observation,
    Outcome,
    Task,
    validate_vector,
)
from .errors import EmptyFixedList, ValidationError
from .reward import AGENTS, RewardParams, allocate
from .trust import (
    Sigmoid,
    Step,
    SuccessModel,
    all_bounds,
    init_belief,
    likelihood,
    marginal_means,
    predict_trust,
    update_belief,
)

logger = logging.getLogger(__name__)

TRUST_BASED = "trust_based"
RANDOM = "random"
OMNISCIENT = "omniscient"
FIXED = "fixed"
UNIFORM = "uniform"


@dataclass(frozen=True)
class GroundTruthAgent:
    kind: AgentKind
    true_capabilities: CapabilityVector


@dataclass(frozen=True)
class TaskStreamSpec:
    """``distribution`` is ``"uniform"`` or a tuple of requirement vectors cycled in order.

    ``seed`` None means the stream follows the scenario seed.
    """

    count: int
    distribution: Union[str, tuple] = UNIFORM
    seed: Optional[int] = None

    def __post_init__(self):
        if self.count < 1:
            raise ValidationError("must be >= 1", field="stream.count")
        if self.distribution != UNIFORM:
            object.__setattr__(self, "distribution", tuple(CapabilityVector(v) for v in self.distribution))


@dataclass(frozen=True)
class Allocator:
    name: str = TRUST_BASED
    agent: Optional[AgentKind] = None

    def __post_init__(self):
        if self.name not in (TRUST_BASED, RANDOM, OMNISCIENT, FIXED):
            raise ValidationError(f"unknown allocator {self.name!r}", field="allocator")
        if self.name == FIXED:
            if self.agent is None:
                raise ValidationError("fixed allocator needs an agent", field="allocator")
            object.__setattr__(self, "agent", AgentKind(self.agent))


@dataclass(frozen=True)
class Scenario:
    space: CapabilitySpace
    agents: tuple
    stream: TaskStreamSpec
    reward_params: RewardParams
    success_model: SuccessModel = field(default_factory=Step)
    belief_model: SuccessModel = field(default_factory=lambda: Sigmoid(0.05))
    allocator: Allocator = field(default_factory=Allocator)
    seed: int = 0
    final_tie_break: AgentKind = AgentKind.ROBOT

    def __post_init__(self):
        agents = tuple(self.agents)
        kinds = sorted(a.kind.value for a in agents)
        if kinds != sorted(k.value for k in AGENTS):
            raise ValidationError(f"need exactly one human and one robot, got {kinds}", field="agents")
        for a in agents:
            try:
                validate_vector(a.true_capabilities, self.space)
            except ValueError as exc:
                raise ValidationError(str(exc), field=f"agents.{a.kind.value}.true_capabilities") from exc
        if self.reward_params.n != self.space.n:
            raise ValidationError(
                f"{self.reward_params.n} success weights for n={self.space.n}", field="reward.success_weights"
            )
        object.__setattr__(self, "agents", agents)

    def agent(self, kind: AgentKind) -> GroundTruthAgent:
        return next(a for a in self.agents if a.kind == kind)


def sample_outcome(agent: GroundTruthAgent, lam_bar, model: SuccessModel, rng: np.random.Generator) -> Outcome:
    """One Bernoulli draw; a step model makes the draw deterministic."""
    p = likelihood(model, agent.true_capabilities, lam_bar)
    # random() is in [0, 1), so p = 1 always succeeds and p = 0 never does
    return Outcome.SUCCESS if rng.random() < p else Outcome.FAILURE


def generate_tasks(spec: TaskStreamSpec, space: CapabilitySpace, default_seed: int = 0) -> list[Task]:
    if spec.distribution == UNIFORM:
        rng = np.random.default_rng(default_seed if spec.seed is None else spec.seed)
        reqs = rng.random((spec.count, space.n))
        vectors = [CapabilityVector(r) for r in reqs]
    else:
        if not spec.distribution:
            raise EmptyFixedList("fixed requirement list is empty")
        fixed = [validate_vector(v, space) for v in spec.distribution]
        vectors = [fixed[i % len(fixed)] for i in range(spec.count)]
    width = len(str(spec.count - 1))
    return [Task(f"task-{i:0{width}d}", v) for i, v in enumerate(vectors)]


@dataclass
class TaskRecord:
    index: int
    task_id: str
    requirements: CapabilityVector
    trust: dict
    expected: dict
    chosen: AgentKind
    tie_broken: bool
    outcome: Outcome
    realized_reward: float
    # per agent, after this task's update: (n, 2) bounds and (n,) means
    bounds: dict
    means: dict


@dataclass
class EpisodeLog:
    records: list
    final_beliefs: dict
    belief_history: Optional[list] = None

    @property
    def realized_rewards(self) -> np.ndarray:
        return np.array([r.realized_reward for r in self.records])

    @property
    def cumulative_rewards(self) -> np.ndarray:
        return np.cumsum(self.realized_rewards)

    def __len__(self):
        return len(self.records)


def _split_rngs(seed: int):
    outcome_seq, alloc_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(outcome_seq), np.random.default_rng(alloc_seq)


def run_episode(scenario: Scenario, keep_beliefs: bool = False) -> EpisodeLog:
    """Play the whole task stream through the allocate/execute/update loop."""
    space = scenario.space
    tasks = generate_tasks(scenario.stream, space, scenario.seed)
    outcome_rng, alloc_rng = _split_rngs(scenario.seed)
    allocator = scenario.allocator

    beliefs = {k: init_belief(space) for k in AGENTS}
    bounds = {k: all_bounds(b) for k, b in beliefs.items()}
    means = {k: marginal_means(b) for k, b in beliefs.items()}
    counts = {k: 0 for k in AGENTS}
    history = [dict(beliefs)] if keep_beliefs else None

    records = []
    for i, task in enumerate(tasks):
        lam_bar = task.requirements
        if allocator.name == OMNISCIENT:
            trust = {k: likelihood(scenario.success_model, scenario.agent(k).true_capabilities, lam_bar) for k in AGENTS}
        else:
            trust = {k: predict_trust(beliefs[k], lam_bar, scenario.belief_model) for k in AGENTS}
        decision = allocate(task, trust, scenario.reward_params, counts, scenario.final_tie_break)

        if allocator.name == RANDOM:
            chosen = AGENTS[int(alloc_rng.integers(len(AGENTS)))]
        elif allocator.name == FIXED:
            chosen = allocator.agent
        else:
            chosen = decision.chosen

        outcome = sample_outcome(scenario.agent(chosen), lam_bar, scenario.success_model, outcome_rng)
        gain = decision.reward_success if outcome.succeeded else decision.reward_failure
        realized = gain - decision.costs[chosen]

        beliefs[chosen] = update_belief(beliefs[chosen], Observation(lam_bar, outcome), scenario.belief_model)
        bounds[chosen] = all_bounds(beliefs[chosen])
        means[chosen] = marginal_means(beliefs[chosen])
        counts[chosen] += 1
        if keep_beliefs:
            history.append(dict(beliefs))

        records.append(
            TaskRecord(
                index=i,
                task_id=task.id,
                requirements=lam_bar,
                trust=trust,
                expected=decision.expected_rewards,
                chosen=chosen,
                tie_broken=decision.tie_broken,
                outcome=outcome,
                realized_reward=realized,
                bounds=dict(bounds),
                means=dict(means),
            )
        )
    logger.debug("episode done: %d tasks, counts %s", len(records), counts)
    return EpisodeLog(records, dict(beliefs), history)


@dataclass
class Metrics:
    cumulative_reward: float
    assignment_counts: dict
    success_rate: float
    l1_error: dict
    regret: Optional[float] = None
    regret_trace: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        d = {
            "cumulative_reward": float(self.cumulative_reward),
            "assignment_counts": {k.value: int(v) for k, v in self.assignment_counts.items()},
            "success_rate": float(self.success_rate),
            "final_l1_error": {k.value: float(v[-1]) for k, v in self.l1_error.items()},
        }
        if self.regret is not None:
            d["regret"] = float(self.regret)
        return d


def compute_metrics(log: EpisodeLog, scenario: Scenario, omniscient_log: EpisodeLog | None = None) -> Metrics:
    """Summary numbers for one episode, optionally with regret against an omniscient run."""
    rewards = log.realized_rewards
    counts = {k: sum(r.chosen == k for r in log.records) for k in AGENTS}
    successes = sum(r.outcome.succeeded for r in log.records)
    l1 = {}
    for k in AGENTS:
        truth = np.asarray(scenario.agent(k).true_capabilities)
        l1[k] = np.array([np.abs(r.means[k] - truth).sum() for r in log.records])
    regret = trace = None
    if omniscient_log is not None:
        trace = omniscient_log.cumulative_rewards - log.cumulative_rewards
        regret = float(trace[-1]) if trace.size else 0.0
    return Metrics(
        cumulative_reward=float(rewards.sum()),
        assignment_counts=counts,
        success_rate=successes / len(log.records) if log.records else 0.0,
        l1_error=l1,
        regret=regret,
        regret_trace=trace,
    )
