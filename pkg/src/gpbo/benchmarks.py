"""Built-in objectives for the benchmark harness.

Two families: the Ackley function (the classic non-convex minimization
benchmark, global minimum 0 at the origin) and a deterministic synthetic
landscape over finite spaces that stands in for expensive training-based
objectives. Scores from the synthetic landscape live in [0, 1] and read as
"one minus accuracy", so lower is better everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOperationError
from .space import DiscreteStepped, ParamVector, SearchSpace, _dim_count


@dataclass(frozen=True)
class AckleyParams:
    a: float = 20.0
    b: float = 0.2
    c: float = 2.0 * math.pi
    d: int = 2

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension count must be >= 1")


def ackley(x, params: AckleyParams | None = None) -> float:
    """Evaluate the Ackley function at ``x``.

    Pure math: points outside the usual [-32.768, 32.768] box evaluate
    normally, it is up to the caller to stay in-bounds.
    """
    x = np.asarray(x, dtype=float)
    if params is None:
        params = AckleyParams(d=x.size)
    if x.size != params.d:
        raise ValueError(f"expected {params.d} coordinates, got {x.size}")
    mean_sq = np.sum(x * x) / params.d
    mean_cos = np.sum(np.cos(params.c * x)) / params.d
    return float(-params.a * math.exp(-params.b * math.sqrt(mean_sq)) - math.exp(mean_cos) + params.a + math.e)


def _mix64(*values: int) -> int:
    """Deterministic 64-bit hash of a tuple of integers (splitmix64 core).

    Used only to break exact score ties; stable across platforms and
    Python versions, unlike the builtin ``hash``.
    """
    mask = (1 << 64) - 1
    h = 0x9E3779B97F4A7C15
    for v in values:
        h = (h ^ (v & mask)) & mask
        h = (h + 0x9E3779B97F4A7C15) & mask
        h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & mask
        h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & mask
        h = (h ^ (h >> 31)) & mask
    return h


@dataclass(frozen=True)
class SyntheticLandscape:
    """Deterministic pseudo-random field over a finite search space.

    Each dimension carries a smooth per-level value table (a seeded sine
    profile over the level index) and each dimension pair contributes a
    product interaction of two more profiles, so scores are structured but
    not separable. The combination is scaled into [0, 1] and exact ties are
    broken by a tiny per-point hash perturbation, making the global optimum
    unique.
    """

    space: SearchSpace
    seed: int
    smoothness: float = 0.7

    def __post_init__(self):
        if self.space.cardinality() is math.inf:
            raise UnsupportedOperationError("synthetic landscapes require a finite space")
        if not 0.0 < self.smoothness <= 1.0:
            raise ValueError(f"smoothness must lie in (0, 1], got {self.smoothness}")
        rng = np.random.default_rng(self.seed)
        counts = [int(_dim_count(dim)) for dim in self.space.dims]
        tables = []
        for m in counts:
            tables.append(_sine_profile(rng, m, self.smoothness))
        pair_terms = []
        for i in range(len(counts)):
            for j in range(i + 1, len(counts)):
                u = _sine_profile(rng, counts[i], self.smoothness)
                v = _sine_profile(rng, counts[j], self.smoothness)
                pair_terms.append((i, j, u, v))
        object.__setattr__(self, "_tables", tables)
        object.__setattr__(self, "_pair_terms", pair_terms)
        # |score contribution| is bounded by 1 per table and per pair
        object.__setattr__(self, "_scale", len(tables) + 0.5 * len(pair_terms))

    def level_indices(self, params: ParamVector) -> tuple:
        self.space.validate(params)
        idx = []
        for dim, value in zip(self.space.dims, params):
            if isinstance(dim, DiscreteStepped):
                idx.append(dim.level_index(float(value)))
            else:
                idx.append(dim.options.index(value))
        return tuple(idx)


def _sine_profile(rng: np.random.Generator, m: int, smoothness: float) -> np.ndarray:
    """Smooth bounded profile over m level indices; fewer cycles when
    smoothness is high."""
    phase = rng.uniform(0.0, 1.0)
    cycles = rng.uniform(0.5, 0.5 + 2.0 * (1.0 - smoothness) + 1e-12)
    amplitude = rng.uniform(0.5, 1.0)
    g = np.arange(m) / (m - 1) if m > 1 else np.zeros(m)
    return amplitude * np.sin(2.0 * math.pi * (phase + cycles * g))


def synthetic_score(landscape: SyntheticLandscape, params: ParamVector) -> float:
    """Deterministic score in [0, 1] for a point of the landscape's space."""
    idx = landscape.level_indices(params)
    raw = sum(table[k] for table, k in zip(landscape._tables, idx))
    for i, j, u, v in landscape._pair_terms:
        raw += 0.5 * u[idx[i]] * v[idx[j]]
    base = 0.5 * (raw / landscape._scale + 1.0)
    tie_break = _mix64(landscape.seed, *idx) / 2.0**64
    return float(base * (1.0 - 1e-9) + 1e-9 * tie_break)


def exhaustive_minimum(landscape: SyntheticLandscape) -> tuple[ParamVector, float]:
    """Brute-force global minimum by full enumeration of the space."""
    best_params, best_score = None, math.inf
    for params in landscape.space.grid_iter():
        score = synthetic_score(landscape, params)
        if score < best_score:
            best_params, best_score = params, score
    return best_params, best_score


def default_synthetic_space() -> SearchSpace:
    """A 432-point mixed discrete space (level counts 4, 4, 3, 3, 3) used
    by the built-in synthetic benchmark."""
    return SearchSpace(
        dims=(
            DiscreteStepped(0.1, 0.7, 0.2),
            DiscreteStepped(0.1, 0.7, 0.2),
            DiscreteStepped(1.0, 3.0, 1.0),
            DiscreteStepped(3.0, 7.0, 2.0),
            DiscreteStepped(3.0, 7.0, 2.0),
        )
    )
