"""
One human, one robot, one task at a time
========================================

The human is strong in the first capability, the robot in the second. Both
start with uniform beliefs, so the first tasks go to the cheaper robot; as
the robot fails on tasks heavy in the first capability, its trust there
drops and the human starts to get them.
"""

from trustalloc import (
    AgentKind,
    Allocator,
    CapabilitySpace,
    CapabilityVector,
    GroundTruthAgent,
    RewardParams,
    Scenario,
    TaskStreamSpec,
    compute_metrics,
    run_episode,
)

H, R = AgentKind.HUMAN, AgentKind.ROBOT

scenario = Scenario(
    space=CapabilitySpace(2, 101),
    agents=(
        GroundTruthAgent(H, CapabilityVector([0.9, 0.2])),
        GroundTruthAgent(R, CapabilityVector([0.2, 0.9])),
    ),
    stream=TaskStreamSpec(count=300, seed=4),
    reward_params=RewardParams(
        success_weights=(10.0, 10.0),
        cost_base={H: 2.0, R: 1.0},
        cost_weights={H: (1.0, 1.0), R: (0.5, 0.5)},
    ),
    allocator=Allocator("trust_based"),
    seed=4,
)

log = run_episode(scenario)
print(" task  requirements     tau_H  tau_R    E_H     E_R   -> agent  outcome")
for rec in log.records[:12] + log.records[-6:]:
    r = rec.requirements
    print(
        f"{rec.index:5d}  ({r[0]:.2f}, {r[1]:.2f})  {rec.trust[H]:6.3f} {rec.trust[R]:6.3f}"
        f" {rec.expected[H]:7.2f} {rec.expected[R]:7.2f}  -> {rec.chosen.value:6s} {rec.outcome.name.lower()}"
    )

###############################################################################
# Where did the beliefs end up?

last = log.records[-1]
for kind in (H, R):
    truth = scenario.agent(kind).true_capabilities
    bounds = ", ".join(f"[{lo:.2f}, {hi:.2f}]" for lo, hi in last.bounds[kind])
    print(f"{kind.value:5s} true {tuple(truth)}  95% bounds {bounds}")

m = compute_metrics(log, scenario)
print(f"cumulative reward {m.cumulative_reward:.1f}, success rate {m.success_rate:.2f}, "
      f"assignments human={m.assignment_counts[H]} robot={m.assignment_counts[R]}")
