"""
Predicting trust on tasks never seen before
===========================================

Trust is the probability of success under the current belief. Because tasks
are described by requirement vectors, the same belief scores any new task.
"""

import numpy as np

from trustalloc import (
    CapabilitySpace,
    CapabilityVector,
    Observation,
    Outcome,
    Sigmoid,
    Step,
    init_belief,
    predict_trust,
    update_belief,
)

space = CapabilitySpace(2, 101)
belief = init_belief(space)

# Before any observation, step-model trust is (1 - r1)(1 - r2) up to grid error.
for r in ([0.0, 0.0], [0.5, 0.5], [0.2, 0.9]):
    print(f"prior trust at {r}: {predict_trust(belief, r, Step()):.4f}  (analytic {np.prod(1 - np.array(r)):.4f})")

###############################################################################
# A handful of outcomes, learned with the smooth model the simulator uses
# for beliefs.

model = Sigmoid(0.05)
history = [([0.3, 0.2], "S"), ([0.5, 0.3], "S"), ([0.7, 0.2], "F"), ([0.4, 0.6], "F"), ([0.55, 0.35], "S")]
for req, outcome in history:
    belief = update_belief(belief, Observation(CapabilityVector(req), Outcome(outcome)), model)

print()
grid = np.linspace(0, 1, 6)
print("trust after 5 outcomes (rows: r1, columns: r2)")
print("      " + " ".join(f"{c:6.1f}" for c in grid))
for r1 in grid:
    print(f"{r1:5.1f} " + " ".join(f"{predict_trust(belief, [r1, r2], model):6.3f}" for r2 in grid))
