"""Grid belief over a trustee's capabilities, and trust prediction from it.

A belief is a discrete distribution over the capability grid. Up to three
dimensions it is stored as the full joint array of shape ``(G,) * n``; above
that it is stored as ``n`` independent marginals (shape ``(n, G)``), which
keeps memory linear in ``n`` at the price of ignoring correlations that a
failure observation would otherwise induce.

Success probability given true capabilities ``lam`` and requirements
``lam_bar`` comes from a :class:`SuccessModel`. Both models provided here
factorize over dimensions, which is what makes the factored storage and the
fast trust contraction possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence, Union

import numpy as np
from scipy.special import expit

from .capability import (
    CapabilitySpace,
    Observation,
    Outcome,
    validate_vector,
)
from .errors import BadQuantiles, DimensionMismatch, ImpossibleObservation

JOINT = "joint"
FACTORED = "factored"
MAX_JOINT_DIMS = 3

LIKELIHOOD_FLOOR = 1e-9
MIN_POSTERIOR_MASS = 1e-12

DEFAULT_QUANTILES = (0.025, 0.975)


@dataclass(frozen=True)
class Step:
    """Success iff every capability meets its requirement."""

    def factors(self, grid: np.ndarray, lam_bar: np.ndarray) -> list[np.ndarray]:
        return [(grid >= lb).astype(float) for lb in lam_bar]

    def prob(self, lam: np.ndarray, lam_bar: np.ndarray) -> float:
        return float(np.all(lam >= lam_bar))

    @property
    def name(self) -> str:
        return "step"


@dataclass(frozen=True)
class Sigmoid:
    """Product of logistic curves in ``(lam_i - lam_bar_i) / beta``.

    ``beta`` is either one scale for every dimension or a per-dimension tuple.
    Small ``beta`` approaches :class:`Step`.
    """

    beta: Union[float, tuple] = 0.05

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.beta, dtype=float))
        if b.size == 0 or np.any(~np.isfinite(b)) or np.any(b <= 0):
            raise ValueError(f"sigmoid beta must be positive, got {self.beta!r}")
        if b.size > 1:
            object.__setattr__(self, "beta", tuple(float(x) for x in b))
        else:
            object.__setattr__(self, "beta", float(b[0]))

    def _betas(self, n: int) -> np.ndarray:
        b = np.atleast_1d(np.asarray(self.beta, dtype=float))
        if b.size == 1:
            return np.full(n, b[0])
        if b.size != n:
            raise DimensionMismatch(f"sigmoid has {b.size} scales for {n} dimensions")
        return b

    def factors(self, grid: np.ndarray, lam_bar: np.ndarray) -> list[np.ndarray]:
        betas = self._betas(len(lam_bar))
        return [expit((grid - lb) / b) for lb, b in zip(lam_bar, betas)]

    def prob(self, lam: np.ndarray, lam_bar: np.ndarray) -> float:
        return float(np.prod(expit((lam - lam_bar) / self._betas(lam.size))))

    @property
    def name(self) -> str:
        return "sigmoid"


SuccessModel = Union[Step, Sigmoid]


def likelihood(model: SuccessModel, lam: Sequence[float], lam_bar: Sequence[float]) -> float:
    """Probability that an agent with capabilities ``lam`` succeeds at ``lam_bar``."""
    lam = np.asarray(lam, dtype=float).ravel()
    lam_bar = np.asarray(lam_bar, dtype=float).ravel()
    if lam.shape != lam_bar.shape:
        raise DimensionMismatch(f"capability length {lam.size} != requirement length {lam_bar.size}")
    return model.prob(lam, lam_bar)


@dataclass(frozen=True, eq=False)
class CapabilityBelief:
    """Immutable normalized weights over the capability grid."""

    space: CapabilitySpace
    weights: np.ndarray
    storage: str = JOINT

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        G, n = self.space.grid_resolution, self.space.n
        expected = (G,) * n if self.storage == JOINT else (n, G)
        if self.storage not in (JOINT, FACTORED):
            raise ValueError(f"unknown storage mode {self.storage!r}")
        if w.shape != expected:
            raise DimensionMismatch(f"weights shape {w.shape} != {expected} for {self.storage} storage")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("belief weights must be finite and nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def marginal(self, dim: int) -> np.ndarray:
        _check_dim(self.space, dim)
        if self.storage == FACTORED:
            return self.weights[dim]
        axes = tuple(a for a in range(self.space.n) if a != dim)
        return self.weights.sum(axis=axes) if axes else self.weights

    def joint(self) -> np.ndarray:
        """Full joint array; expands factored storage (use only for small n)."""
        if self.storage == JOINT:
            return self.weights
        return reduce(np.multiply.outer, list(self.weights))

    def allclose(self, other: "CapabilityBelief", atol: float = 0.0) -> bool:
        return (
            self.space == other.space
            and self.storage == other.storage
            and np.allclose(self.weights, other.weights, rtol=0.0, atol=atol)
        )


def _check_dim(space: CapabilitySpace, dim: int):
    if not 0 <= dim < space.n:
        raise DimensionMismatch(f"dimension index {dim} out of range for n={space.n}")


def default_storage(space: CapabilitySpace) -> str:
    return JOINT if space.n <= MAX_JOINT_DIMS else FACTORED


def init_belief(space: CapabilitySpace, storage: str | None = None) -> CapabilityBelief:
    """Uniform belief over every grid cell."""
    storage = storage or default_storage(space)
    G = space.grid_resolution
    if storage == JOINT:
        w = np.full((G,) * space.n, 1.0 / space.n_cells)
    else:
        w = np.full((space.n, G), 1.0 / G)
    return CapabilityBelief(space, w, storage)


def point_mass_belief(space: CapabilitySpace, lam, storage: str | None = None) -> CapabilityBelief:
    """All mass on the grid cell nearest to ``lam``."""
    lam = validate_vector(lam, space)
    idx = [int(round(v * (space.grid_resolution - 1))) for v in lam]
    marginals = []
    for k in idx:
        m = np.zeros(space.grid_resolution)
        m[k] = 1.0
        marginals.append(m)
    return belief_from_marginals(space, marginals, storage)


def belief_from_marginals(space: CapabilitySpace, marginals, storage: str | None = None) -> CapabilityBelief:
    """Product belief built from per-dimension weight vectors (normalized here)."""
    storage = storage or default_storage(space)
    rows = [np.asarray(m, dtype=float) for m in marginals]
    if len(rows) != space.n:
        raise DimensionMismatch(f"need {space.n} marginals, got {len(rows)}")
    rows = [r / r.sum() for r in rows]
    if storage == FACTORED:
        return CapabilityBelief(space, np.vstack(rows), FACTORED)
    return CapabilityBelief(space, reduce(np.multiply.outer, rows), JOINT)


def _requirements(belief: CapabilityBelief, lam_bar) -> np.ndarray:
    return np.asarray(validate_vector(lam_bar, belief.space), dtype=float)


def _clamped(model: SuccessModel, p: np.ndarray) -> np.ndarray:
    if isinstance(model, Sigmoid):
        return np.clip(p, LIKELIHOOD_FLOOR, 1.0 - LIKELIHOOD_FLOOR)
    return p


def update_belief(
    belief: CapabilityBelief,
    obs: Observation,
    model: SuccessModel,
    exponent: float = 1.0,
) -> CapabilityBelief:
    """Bayes posterior after one observed outcome.

    ``exponent`` tempers the likelihood (``L ** exponent``); 1 is the plain
    posterior. Raises :class:`ImpossibleObservation` when the unnormalized
    posterior mass drops below 1e-12.
    """
    lam_bar = _requirements(belief, obs.requirements)
    grid = belief.space.grid()
    factors = model.factors(grid, lam_bar)
    success = Outcome(obs.outcome).succeeded

    if belief.storage == JOINT:
        p = _clamped(model, reduce(np.multiply.outer, factors))
        lik = p if success else 1.0 - p
        if exponent != 1.0:
            lik = lik ** exponent
        post = belief.weights * lik
        total = post.sum()
        if total < MIN_POSTERIOR_MASS:
            raise ImpossibleObservation(
                f"{obs.outcome.name.lower()} at {list(lam_bar)} has posterior mass {total:.3g}"
            )
        return CapabilityBelief(belief.space, post / total, JOINT)

    rows = belief.weights
    factors = [_clamped(model, f) for f in factors]
    expect = np.array([rows[i] @ factors[i] for i in range(belief.space.n)])
    new_rows = []
    for i in range(belief.space.n):
        if success:
            lik = factors[i]
        else:
            others = np.prod(np.delete(expect, i))
            lik = 1.0 - factors[i] * others
        if exponent != 1.0:
            lik = lik ** exponent
        row = rows[i] * lik
        total = row.sum()
        if total < MIN_POSTERIOR_MASS:
            raise ImpossibleObservation(
                f"{obs.outcome.name.lower()} at {list(lam_bar)} leaves dimension {i} with mass {total:.3g}"
            )
        new_rows.append(row / total)
    return CapabilityBelief(belief.space, np.vstack(new_rows), FACTORED)


def predict_trust(belief: CapabilityBelief, lam_bar, model: SuccessModel) -> float:
    """Expected success probability of the trustee on requirements ``lam_bar``."""
    lam_bar = _requirements(belief, lam_bar)
    factors = model.factors(belief.space.grid(), lam_bar)
    if belief.storage == FACTORED:
        tau = float(np.prod([belief.weights[i] @ f for i, f in enumerate(factors)]))
    else:
        r = belief.weights
        for f in factors:
            r = np.tensordot(f, r, axes=(0, 0))
        tau = float(r)
    return min(1.0, max(0.0, tau))


def marginal_mean(belief: CapabilityBelief, dim: int) -> float:
    return float(belief.marginal(dim) @ belief.space.grid())


def marginal_means(belief: CapabilityBelief) -> np.ndarray:
    return np.array([marginal_mean(belief, d) for d in range(belief.space.n)])


def credible_bounds(
    belief: CapabilityBelief,
    dim: int,
    lo_q: float = DEFAULT_QUANTILES[0],
    hi_q: float = DEFAULT_QUANTILES[1],
) -> tuple[float, float]:
    """Quantiles of one marginal, interpolating linearly between grid points.

    Each cell's mass is placed at its grid point with the cumulative
    distribution taken at the cell midpoint (``cdf - w/2``); empty cells are
    skipped so a collapsed marginal returns ``lower == upper``.
    """
    if not (0.0 <= lo_q < hi_q <= 1.0):
        raise BadQuantiles(f"need 0 <= lo_q < hi_q <= 1, got ({lo_q}, {hi_q})")
    w = belief.marginal(dim)
    x = belief.space.grid()
    keep = w > 0
    w, x = w[keep], x[keep]
    w = w / w.sum()
    mid_cdf = np.cumsum(w) - 0.5 * w
    lower, upper = np.interp([lo_q, hi_q], mid_cdf, x)
    return float(lower), float(upper)


def all_bounds(belief: CapabilityBelief, lo_q=DEFAULT_QUANTILES[0], hi_q=DEFAULT_QUANTILES[1]) -> np.ndarray:
    """``(n, 2)`` array of (lower, upper) per dimension."""
    return np.array([credible_bounds(belief, d, lo_q, hi_q) for d in range(belief.space.n)])


@dataclass
class BoundsTrace:
    """Credible bounds recorded after every update of a batch fit.

    Row 0 holds the prior; row ``k`` the bounds after the ``k``-th update.
    """

    lower: np.ndarray
    upper: np.ndarray
    sweep_ends: list[int] = field(default_factory=list)
    converged: bool = False
    exponent: float = 1.0

    @property
    def n_updates(self) -> int:
        return self.lower.shape[0] - 1

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    def final(self) -> np.ndarray:
        return np.column_stack([self.lower[-1], self.upper[-1]])


def batch_fit(
    space: CapabilitySpace,
    observations: Sequence[Observation],
    model: SuccessModel,
    tol: float = 1e-3,
    max_sweeps: int = 50,
    prior: CapabilityBelief | None = None,
    quantiles: tuple[float, float] = DEFAULT_QUANTILES,
) -> tuple[CapabilityBelief, BoundsTrace]:
    """Fit a belief to a fixed set of outcomes by repeated tempered sweeps.

    Every sweep applies each observation with likelihood exponent
    ``1 / max_sweeps``, so running the full budget reproduces the exact
    posterior. Fitting stops early once a sweep moves no credible bound by
    ``tol`` or more; ``trace.converged`` is False if the budget ran out first.
    """
    observations = list(observations)
    if not observations:
        raise ValueError("batch_fit needs at least one observation")
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be positive")
    belief = prior if prior is not None else init_belief(space)
    exponent = 1.0 / max_sweeps
    lo_q, hi_q = quantiles

    rows = [all_bounds(belief, lo_q, hi_q)]
    sweep_ends = []
    converged = False
    for _ in range(max_sweeps):
        start = rows[-1]
        for obs in observations:
            belief = update_belief(belief, obs, model, exponent)
            rows.append(all_bounds(belief, lo_q, hi_q))
        sweep_ends.append(len(rows) - 1)
        if np.max(np.abs(rows[-1] - start)) < tol:
            converged = True
            break

    arr = np.stack(rows)
    trace = BoundsTrace(arr[:, :, 0], arr[:, :, 1], sweep_ends, converged, exponent)
    return belief, trace
