"""Search space definitions.

A :class:`SearchSpace` is an ordered list of typed dimensions (continuous,
discrete-stepped, or categorical). Parameter vectors live in native units;
the surrogate model works on the unit cube, so the space also owns the
bijective normalization between the two. Discrete and categorical dimensions
are embedded through their level index (``index / (count - 1)``), and points
coming back from the continuous side are snapped to the nearest level.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .errors import BoundsError, ShapeError, UnsupportedOperationError

# A parameter vector holds one entry per dimension, in native units:
# floats for continuous/stepped dimensions, labels for categorical ones.
ParamVector = tuple

# Relative slack used when counting levels and snapping values, so that
# ranges like (0.0, 0.7, delta=0.01) produce the intended 71 levels despite
# binary rounding of the endpoints.
_LEVEL_EPS = 1e-9


@dataclass(frozen=True)
class Continuous:
    """A real interval [low, high]."""

    low: float
    high: float

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise ValueError("continuous bounds must be finite")
        if not self.low < self.high:
            raise ValueError(f"continuous dimension requires low < high, got [{self.low}, {self.high}]")


@dataclass(frozen=True)
class DiscreteStepped:
    """Evenly spaced levels low, low + delta, ..., covering [low, high]."""

    low: float
    high: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high) and math.isfinite(self.delta)):
            raise ValueError("stepped bounds and delta must be finite")
        if self.delta <= 0:
            raise ValueError(f"stepped dimension requires delta > 0, got {self.delta}")
        if not self.low < self.high:
            raise ValueError(f"stepped dimension requires low < high, got [{self.low}, {self.high}]")
        if self.count < 2:
            raise ValueError("stepped dimension must contain at least two levels")

    @property
    def count(self) -> int:
        return int(math.floor((self.high - self.low) / self.delta + _LEVEL_EPS)) + 1

    def levels(self) -> np.ndarray:
        # low + k*delta, never repeated addition, so level values are exact
        # functions of the index and do not drift.
        return self.low + self.delta * np.arange(self.count)

    def level_index(self, value: float) -> int:
        """Index of ``value`` among the levels, or -1 if it is not a level."""
        k = int(round((value - self.low) / self.delta))
        if k < 0 or k >= self.count:
            return -1
        tol = _LEVEL_EPS * max(1.0, abs(self.low), abs(self.high))
        if abs(value - (self.low + k * self.delta)) > tol:
            return -1
        return k


@dataclass(frozen=True)
class Categorical:
    """An ordered set of distinct labels, embedded ordinally."""

    options: tuple

    def __post_init__(self):
        object.__setattr__(self, "options", tuple(self.options))
        if len(self.options) < 2:
            raise ValueError("categorical dimension needs at least two options")
        if len(set(self.options)) != len(self.options):
            raise ValueError("categorical options must be unique")


Dimension = Union[Continuous, DiscreteStepped, Categorical]


def _dim_count(dim: Dimension) -> int | float:
    if isinstance(dim, Continuous):
        return math.inf
    if isinstance(dim, DiscreteStepped):
        return dim.count
    return len(dim.options)


@dataclass(frozen=True)
class SearchSpace:
    """Ordered collection of dimensions defining the optimization domain."""

    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        if not self.dims:
            raise ValueError("search space needs at least one dimension")
        for dim in self.dims:
            if not isinstance(dim, (Continuous, DiscreteStepped, Categorical)):
                raise TypeError(f"not a dimension: {dim!r}")

    def __len__(self) -> int:
        return len(self.dims)

    def cardinality(self) -> int | float:
        """Number of distinct parameter vectors; ``math.inf`` if any
        dimension is continuous."""
        total = 1
        for dim in self.dims:
            c = _dim_count(dim)
            if c is math.inf:
                return math.inf
            total *= c
        return total

    def validate(self, params: ParamVector) -> None:
        """Raise :class:`BoundsError`/:class:`ShapeError` unless ``params``
        is a valid point of this space."""
        if len(params) != len(self.dims):
            raise ShapeError(f"expected {len(self.dims)} parameters, got {len(params)}")
        for i, (dim, value) in enumerate(zip(self.dims, params)):
            if isinstance(dim, Categorical):
                if value not in dim.options:
                    raise BoundsError(f"dimension {i}: {value!r} is not among the options", dimension=i)
                continue
            if not isinstance(value, (int, float, np.integer, np.floating)) or not math.isfinite(value):
                raise BoundsError(f"dimension {i}: expected a finite number, got {value!r}", dimension=i)
            if isinstance(dim, Continuous):
                if not (dim.low <= value <= dim.high):
                    raise BoundsError(
                        f"dimension {i}: {value} outside [{dim.low}, {dim.high}]", dimension=i
                    )
            else:
                if dim.level_index(float(value)) < 0:
                    raise BoundsError(
                        f"dimension {i}: {value} is not a level of "
                        f"[{dim.low}, {dim.high}] step {dim.delta}",
                        dimension=i,
                    )

    def to_unit(self, params: ParamVector) -> np.ndarray:
        """Map a native parameter vector to the unit cube."""
        self.validate(params)
        u = np.empty(len(self.dims))
        for i, (dim, value) in enumerate(zip(self.dims, params)):
            if isinstance(dim, Continuous):
                u[i] = (value - dim.low) / (dim.high - dim.low)
            elif isinstance(dim, DiscreteStepped):
                u[i] = dim.level_index(float(value)) / (dim.count - 1)
            else:
                u[i] = dim.options.index(value) / (len(dim.options) - 1)
        return u

    def from_unit(self, u) -> ParamVector:
        """Map a unit-cube vector back to native units, snapping discrete
        and categorical coordinates to the nearest level/option."""
        u = np.asarray(u, dtype=float)
        if u.shape != (len(self.dims),):
            raise ShapeError(f"expected a vector of length {len(self.dims)}, got shape {u.shape}")
        values = []
        for i, (dim, ui) in enumerate(zip(self.dims, u)):
            if not (-_LEVEL_EPS <= ui <= 1.0 + _LEVEL_EPS):
                raise BoundsError(f"dimension {i}: unit coordinate {ui} outside [0, 1]", dimension=i)
            ui = min(max(float(ui), 0.0), 1.0)
            if isinstance(dim, Continuous):
                values.append(dim.low + ui * (dim.high - dim.low))
            elif isinstance(dim, DiscreteStepped):
                k = int(round(ui * (dim.count - 1)))
                values.append(dim.low + k * dim.delta)
            else:
                k = int(round(ui * (len(dim.options) - 1)))
                values.append(dim.options[k])
        return tuple(values)

    def sample_uniform(self, rng: np.random.Generator) -> ParamVector:
        """Draw one point, each dimension independently uniform."""
        values = []
        for dim in self.dims:
            if isinstance(dim, Continuous):
                values.append(float(rng.uniform(dim.low, dim.high)))
            elif isinstance(dim, DiscreteStepped):
                k = int(rng.integers(dim.count))
                values.append(dim.low + k * dim.delta)
            else:
                values.append(dim.options[int(rng.integers(len(dim.options)))])
        return tuple(values)

    def grid_iter(self) -> Iterator[ParamVector]:
        """Yield every point of a finite space exactly once, lexicographic
        in dimension order (first dimension varies slowest)."""
        if self.cardinality() is math.inf:
            raise UnsupportedOperationError("cannot enumerate a space with continuous dimensions")
        per_dim = []
        for dim in self.dims:
            if isinstance(dim, DiscreteStepped):
                per_dim.append([float(v) for v in dim.levels()])
            else:
                per_dim.append(list(dim.options))
        return itertools.product(*per_dim)
