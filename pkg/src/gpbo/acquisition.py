"""Acquisition functions and the strategies that optimize them.

Everything here follows the minimization convention: lower acquisition is
better and the proposal is the argmin. The three supported functions are
the lower confidence bound, negative expected improvement, and negative
probability of improvement; the two proposal strategies are a pure random
candidate sweep and the same sweep refined by box-constrained quasi-Newton
descent from the best candidates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtr

from .errors import ContractError
from .space import Continuous, DiscreteStepped, ParamVector, SearchSpace
from .surrogate import GpModel, predict_batch

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


class AcquisitionKind(enum.Enum):
    LOWER_CONFIDENCE_BOUND = "lcb"
    NEG_EXPECTED_IMPROVEMENT = "neg_ei"
    NEG_PROBABILITY_OF_IMPROVEMENT = "neg_pi"


class OptimizerKind(enum.Enum):
    RANDOM_SAMPLING = "random_sampling"
    QUASI_NEWTON = "quasi_newton"


class InitKind(enum.Enum):
    UNIFORM_RANDOM = "uniform_random"
    LATIN_HYPERCUBE = "latin_hypercube"


@dataclass(frozen=True)
class AcquisitionSpec:
    """Which acquisition function to use and its trade-off parameter
    (``kappa`` for LCB, ``xi`` for the improvement-based pair)."""

    kind: AcquisitionKind = AcquisitionKind.LOWER_CONFIDENCE_BOUND
    kappa: float = 1.96
    xi: float = 0.01

    def __post_init__(self):
        if self.kind is AcquisitionKind.LOWER_CONFIDENCE_BOUND:
            if not (math.isfinite(self.kappa) and self.kappa > 0):
                raise ContractError(f"kappa must be finite and > 0, got {self.kappa}")
        else:
            if not (math.isfinite(self.xi) and self.xi >= 0):
                raise ContractError(f"xi must be finite and >= 0, got {self.xi}")


@dataclass(frozen=True)
class OptimizerSpec:
    """How the acquisition function is minimized over the unit cube."""

    kind: OptimizerKind = OptimizerKind.RANDOM_SAMPLING
    num_candidates: int = 10000
    num_starts: int = 10
    max_iters: int = 50

    def __post_init__(self):
        if min(self.num_candidates, self.num_starts, self.max_iters) < 1:
            raise ContractError("optimizer counts must be >= 1")


@dataclass(frozen=True)
class InitialPointGenerator:
    """Generator for the evaluations that seed the surrogate."""

    kind: InitKind = InitKind.UNIFORM_RANDOM
    num_points: int = 10

    def __post_init__(self):
        if self.num_points < 1:
            raise ContractError("num_points must be >= 1")


def acq_values(spec: AcquisitionSpec, means, stds, best_so_far: float) -> np.ndarray:
    """Vectorized acquisition values (lower is better)."""
    means = np.asarray(means, dtype=float)
    stds = np.asarray(stds, dtype=float)
    if np.any(stds < 0):
        raise ContractError("standard deviations must be >= 0")

    if spec.kind is AcquisitionKind.LOWER_CONFIDENCE_BOUND:
        return means - spec.kappa * stds

    improvement = best_so_far - means - spec.xi
    positive = stds > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(positive, improvement / np.where(positive, stds, 1.0), 0.0)
    if spec.kind is AcquisitionKind.NEG_EXPECTED_IMPROVEMENT:
        pdf = _INV_SQRT_2PI * np.exp(-0.5 * z * z)
        smooth = -(improvement * ndtr(z) + stds * pdf)
        return np.where(positive, smooth, -np.maximum(improvement, 0.0))
    # negative probability of improvement
    return np.where(positive, -ndtr(z), np.where(improvement > 0, -1.0, 0.0))


def acq_value(spec: AcquisitionSpec, mean: float, std: float, best_so_far: float) -> float:
    """Acquisition value at a single posterior (mean, std)."""
    return float(acq_values(spec, [mean], [std], best_so_far)[0])


def _model_acq(model: GpModel, spec: AcquisitionSpec, best: float, U: np.ndarray) -> np.ndarray:
    means, stds = predict_batch(model, U)
    return acq_values(spec, means, stds, best)


def propose(
    model: GpModel,
    spec: AcquisitionSpec,
    opt: OptimizerSpec,
    space: SearchSpace,
    rng: np.random.Generator,
    observed=None,
) -> ParamVector:
    """Pick the next point to evaluate.

    Both strategies start from a uniform candidate sweep over the unit
    cube; the quasi-Newton strategy additionally runs L-BFGS-B (clamped to
    [0, 1]^d) from the best candidates and keeps the overall argmin. Ties
    resolve to the lowest candidate index. The winning unit-cube point is
    mapped back to native units, snapping discrete dimensions; if that
    collides with an already-observed point, one uniform resample is drawn
    and accepted as-is.
    """
    d = len(space)
    best = model.best_score()
    candidates = rng.random((opt.num_candidates, d))
    values = _model_acq(model, spec, best, candidates)

    best_idx = int(np.argmin(values))
    best_u = candidates[best_idx]
    best_value = values[best_idx]

    if opt.kind is OptimizerKind.QUASI_NEWTON:
        def objective(u):
            return float(_model_acq(model, spec, best, u[None, :])[0])

        order = np.argsort(values, kind="stable")[: opt.num_starts]
        for start_idx in order:
            result = minimize(
                objective,
                candidates[start_idx],
                method="L-BFGS-B",
                bounds=[(0.0, 1.0)] * d,
                options={"maxiter": opt.max_iters},
            )
            if result.fun < best_value:
                best_value = result.fun
                best_u = np.clip(result.x, 0.0, 1.0)

    params = space.from_unit(best_u)
    if observed is not None and params in set(observed):
        params = space.sample_uniform(rng)
    return params


def initial_points(
    gen: InitialPointGenerator, space: SearchSpace, rng: np.random.Generator
) -> list[ParamVector]:
    """Generate the seed evaluations for one run."""
    n = gen.num_points
    if gen.kind is InitKind.UNIFORM_RANDOM:
        return [space.sample_uniform(rng) for _ in range(n)]

    # Latin hypercube: each continuous dimension is cut into n equal bins
    # with exactly one sample per bin, bin order shuffled independently per
    # dimension; discrete dimensions fall back to uniform level sampling.
    columns = []
    for dim in space.dims:
        if isinstance(dim, Continuous):
            perm = rng.permutation(n)
            offsets = rng.random(n)
            u = (perm + offsets) / n
            columns.append([float(v) for v in dim.low + u * (dim.high - dim.low)])
        elif isinstance(dim, DiscreteStepped):
            ks = rng.integers(dim.count, size=n)
            columns.append([dim.low + int(k) * dim.delta for k in ks])
        else:
            ks = rng.integers(len(dim.options), size=n)
            columns.append([dim.options[int(k)] for k in ks])
    return [tuple(col[i] for col in columns) for i in range(n)]
