"""
Learning a trustee's capabilities from outcomes
===============================================

A trustor watches 800 tasks executed by an agent whose true capabilities
are (0.6, 0.4). Each task's requirements are drawn uniformly over the unit
square and it succeeds only if both capabilities meet the requirements.
We fit a grid belief to those outcomes and follow the 95% credible bounds
of each capability as updates accumulate.
"""

import numpy as np

from trustalloc import CapabilitySpace, CapabilityVector, Observation, Outcome, Step, batch_fit

truth = np.array([0.6, 0.4])
rng = np.random.default_rng(0)
requirements = rng.random((800, 2))
observations = [
    Observation(CapabilityVector(r), Outcome.SUCCESS if np.all(truth >= r) else Outcome.FAILURE)
    for r in requirements
]
print(f"{sum(o.outcome is Outcome.SUCCESS for o in observations)} of 800 tasks succeeded")

###############################################################################
# Fit. With a step success model the second sweep changes nothing, so the
# fit stops there.

space = CapabilitySpace(n=2, grid_resolution=101)
belief, trace = batch_fit(space, observations, Step())
print(f"{trace.n_updates} updates over {len(trace.sweep_ends)} sweeps, converged={trace.converged}")

for step in (0, 10, 50, 100, 400, 800, trace.n_updates):
    lo, hi = trace.lower[step], trace.upper[step]
    print(f"after {step:5d} updates: lambda_1 in [{lo[0]:.3f}, {hi[0]:.3f}]  lambda_2 in [{lo[1]:.3f}, {hi[1]:.3f}]")

###############################################################################
# Plot the bounds if matplotlib is around.

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(7, 4))
    steps = np.arange(trace.n_updates + 1)
    for d, color in enumerate(("tab:blue", "tab:green")):
        ax.plot(steps, trace.lower[:, d], color=color, label=f"lambda_{d + 1} lower")
        ax.plot(steps, trace.upper[:, d], color=color, linestyle=":", label=f"lambda_{d + 1} upper")
        ax.plot(steps[-1], truth[d], "*", color=color, markersize=12)
    ax.set_xscale("symlog", linthresh=10)
    ax.set_xlabel("update")
    ax.set_ylabel("capability")
    ax.legend(loc="center right")
    fig.tight_layout()
    fig.savefig("capability_bounds.png", dpi=120)
    print("wrote capability_bounds.png")
