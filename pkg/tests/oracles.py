"""Independent reference computations used by the tests.

Everything here loops cell by cell with plain ``math``; nothing is shared
with the vectorized code paths under test.
"""

import itertools
import math


def logistic(x):
    return 1.0 / (1.0 + math.exp(-x))


def success_prob(kind, lam, lam_bar, beta=None):
    if kind == "step":
        return 1.0 if all(a >= b for a, b in zip(lam, lam_bar)) else 0.0
    p = 1.0
    for a, b in zip(lam, lam_bar):
        p *= logistic((a - b) / beta)
    return p


def grid_points(G):
    return [k / (G - 1) for k in range(G)]


def cells(n, G):
    """All (index tuple, capability tuple) pairs of the joint grid."""
    pts = grid_points(G)
    for idx in itertools.product(range(G), repeat=n):
        yield idx, tuple(pts[k] for k in idx)


def brute_force_posterior(n, G, observations, kind, beta=None):
    """Single-pass Bayes over the joint grid from a uniform prior.

    ``observations`` is a list of ``(lam_bar, succeeded)``. Returns a dict
    index tuple -> posterior weight.
    """
    unnorm = {}
    for idx, lam in cells(n, G):
        w = 1.0
        for lam_bar, ok in observations:
            p = success_prob(kind, lam, lam_bar, beta)
            w *= p if ok else 1.0 - p
        unnorm[idx] = w
    total = sum(unnorm.values())
    return {k: v / total for k, v in unnorm.items()}


def brute_force_trust(n, G, weights, lam_bar, kind, beta=None):
    """``weights`` maps index tuple -> probability (uniform if None)."""
    total = 0.0
    for idx, lam in cells(n, G):
        w = weights[idx] if weights is not None else 1.0 / G ** n
        total += w * success_prob(kind, lam, lam_bar, beta)
    return total


def marginal_quantile_enumerated(values, q):
    """Quantile of equally weighted sorted support points with midpoint CDF interpolation."""
    m = len(values)
    mids = [(j + 0.5) / m for j in range(m)]
    if q <= mids[0]:
        return values[0]
    if q >= mids[-1]:
        return values[-1]
    for j in range(m - 1):
        if mids[j] <= q <= mids[j + 1]:
            t = (q - mids[j]) / (mids[j + 1] - mids[j])
            return values[j] + t * (values[j + 1] - values[j])
