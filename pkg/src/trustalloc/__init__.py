"""Trust-based task allocation for a human-robot team.

Capability beliefs are grid distributions over [0, 1]^n updated from task
outcomes; trust is the predicted success probability on a task, and each
task goes to the agent with the highest expected total reward.
"""

from .capability import (
    AgentKind,
    CapabilitySpace,
    CapabilityVector,
    Observation,
    Outcome,
    Task,
    validate_vector,
)
from .errors import (
    BadQuantiles,
    DimensionMismatch,
    EmptyFixedList,
    ImpossibleObservation,
    MissingAgent,
    OutOfRange,
    ParseError,
    TrustAllocError,
    ValidationError,
)
from .reward import (
    AllocationDecision,
    RewardParams,
    agent_cost,
    allocate,
    expected_total_reward,
    penalty_for_failure,
    reward_for_success,
)
from .simulation import (
    Allocator,
    EpisodeLog,
    GroundTruthAgent,
    Metrics,
    Scenario,
    TaskStreamSpec,
    compute_metrics,
    generate_tasks,
    run_episode,
    sample_outcome,
)
from .trust import (
    BoundsTrace,
    CapabilityBelief,
    Sigmoid,
    Step,
    batch_fit,
    belief_from_marginals,
    credible_bounds,
    init_belief,
    likelihood,
    marginal_mean,
    point_mass_belief,
    predict_trust,
    update_belief,
)

__version__ = "0.1.0"
