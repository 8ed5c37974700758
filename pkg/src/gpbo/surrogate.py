"""Gaussian-process surrogate over the unit cube.

The regressor keeps the textbook form: targets are standardized to zero
mean / unit variance, a Matern 5/2 kernel with per-dimension length scales
models covariance, and hyperparameters are chosen by maximizing the log
marginal likelihood with a bounded quasi-Newton search. The fitted model
caches the Cholesky factor of ``K + noise*I`` and the dual weights
``alpha = (K + noise*I)^-1 y`` so prediction is a pair of triangular solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.optimize import minimize

from .errors import BoundsError, DataError, NumericalError, ShapeError

_SQRT5 = math.sqrt(5.0)

# Escalation ladder added to the diagonal when the Cholesky factorization
# fails; the first attempt uses the fitted noise alone.
_JITTERS = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)

_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class KernelParams:
    """Matern 5/2 hyperparameters: amplitude, per-dimension length scales,
    and observation noise."""

    signal_variance: float
    length_scales: tuple
    noise_variance: float

    def __post_init__(self):
        object.__setattr__(self, "length_scales", tuple(float(l) for l in self.length_scales))
        values = (self.signal_variance, *self.length_scales, self.noise_variance)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("kernel hyperparameters must be finite")
        if self.signal_variance <= 0 or any(l <= 0 for l in self.length_scales):
            raise ValueError("signal variance and length scales must be positive")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be non-negative")


@dataclass(frozen=True)
class FitConfig:
    """Controls hyperparameter selection.

    The likelihood is maximized over log-parameters from one fixed start
    (unit length scales) plus ``restarts - 1`` seeded-random starts. Setting
    ``fixed_kernel`` skips the search entirely and assembles the model with
    the given hyperparameters.
    """

    restarts: int = 3
    seed: int = 0
    length_scale_bounds: tuple = (1e-3, 10.0)
    signal_variance_bounds: tuple = (1e-3, 1e3)
    noise_variance_bounds: tuple = (1e-10, 1e-1)
    max_opt_iters: int = 50
    fixed_kernel: KernelParams | None = None


@dataclass(frozen=True)
class GpModel:
    """Immutable fitted surrogate.

    ``X`` holds unit-cube inputs, ``y`` standardized targets. ``chol`` is
    the lower Cholesky factor of ``K + (noise + jitter) * I`` and ``alpha``
    solves that system against ``y``. ``prior_mean`` is zero because targets
    are standardized before fitting.
    """

    X: np.ndarray
    y: np.ndarray
    y_mean: float
    y_std: float
    prior_mean: float
    kernel: KernelParams
    chol: np.ndarray
    alpha: np.ndarray
    jitter: float

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def best_score(self) -> float:
        """Lowest observed score, in native units."""
        return self.y_mean + self.y_std * float(np.min(self.y))


def _kernel_matrix(params: KernelParams, A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
    """Matern 5/2 cross-covariance between rows of A and B (B=A when None)."""
    ls = np.asarray(params.length_scales)
    Sa = A / ls
    Sb = Sa if B is None else B / ls
    # squared distances via the expansion |a-b|^2 = |a|^2 + |b|^2 - 2 a.b,
    # clipped at zero against cancellation
    sq = (
        np.sum(Sa * Sa, axis=1)[:, None]
        + np.sum(Sb * Sb, axis=1)[None, :]
        - 2.0 * (Sa @ Sb.T)
    )
    r = np.sqrt(np.maximum(sq, 0.0))
    return params.signal_variance * (1.0 + _SQRT5 * r + (5.0 / 3.0) * r * r) * np.exp(-_SQRT5 * r)


def _standardize(scores: np.ndarray) -> tuple[np.ndarray, float, float]:
    y_mean = float(np.mean(scores))
    y_std = float(np.std(scores))
    if y_std < _STD_FLOOR:
        y_std = _STD_FLOOR
    return (scores - y_mean) / y_std, y_mean, y_std


def _lml_value(params: KernelParams, X: np.ndarray, ys: np.ndarray) -> float:
    """Log marginal likelihood for given hyperparameters; -inf when the
    covariance is not numerically positive definite."""
    K = _kernel_matrix(params, X)
    K[np.diag_indices_from(K)] += params.noise_variance
    try:
        L = cholesky(K, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        return -np.inf
    alpha = cho_solve((L, True), ys, check_finite=False)
    n = X.shape[0]
    return float(
        -0.5 * ys @ alpha - np.sum(np.log(np.diag(L))) - 0.5 * n * math.log(2.0 * math.pi)
    )


def _unpack_theta(theta: np.ndarray, d: int) -> KernelParams:
    ex = np.exp(theta)
    return KernelParams(
        signal_variance=float(ex[0]),
        length_scales=tuple(ex[1 : 1 + d]),
        noise_variance=float(ex[1 + d]),
    )


def _optimize_hyperparameters(X: np.ndarray, ys: np.ndarray, config: FitConfig) -> KernelParams:
    d = X.shape[1]
    log_bounds = (
        [tuple(np.log(config.signal_variance_bounds))]
        + [tuple(np.log(config.length_scale_bounds))] * d
        + [tuple(np.log(config.noise_variance_bounds))]
    )

    def negative_lml(theta):
        value = _lml_value(_unpack_theta(theta, d), X, ys)
        return 1e25 if not np.isfinite(value) else -value

    starts = [np.log(np.array([1.0] + [1.0] * d + [1e-6]))]
    rng = np.random.default_rng(config.seed)
    lo = np.array([b[0] for b in log_bounds])
    hi = np.array([b[1] for b in log_bounds])
    for _ in range(max(config.restarts - 1, 0)):
        starts.append(rng.uniform(lo, hi))

    best_theta, best_value = None, np.inf
    for theta0 in starts:
        result = minimize(
            negative_lml,
            np.clip(theta0, lo, hi),
            method="L-BFGS-B",
            bounds=log_bounds,
            options={"maxiter": config.max_opt_iters},
        )
        if result.fun < best_value:
            best_theta, best_value = result.x, result.fun
    return _unpack_theta(best_theta, d)


def _factorize(params: KernelParams, X: np.ndarray, ys: np.ndarray):
    """Cholesky with jitter escalation; returns (L, alpha, jitter used)."""
    K = _kernel_matrix(params, X)
    diag = np.diag_indices_from(K)
    for jitter in _JITTERS:
        Kj = K.copy()
        Kj[diag] += params.noise_variance + jitter
        try:
            L = cholesky(Kj, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            continue
        alpha = cho_solve((L, True), ys, check_finite=False)
        return L, alpha, jitter
    raise NumericalError(
        f"covariance matrix not positive definite even with jitter {_JITTERS[-1]}"
    )


def fit(observations, config: FitConfig = FitConfig()) -> GpModel:
    """Fit the surrogate to ``(unit-cube vector, score)`` pairs."""
    if not observations:
        raise DataError("cannot fit a surrogate to zero observations")
    X = np.asarray([np.asarray(x, dtype=float) for x, _ in observations])
    scores = np.asarray([float(s) for _, s in observations])
    if X.ndim != 2:
        raise ShapeError("inputs must share one dimensionality")
    if not np.all(np.isfinite(scores)):
        bad = int(np.flatnonzero(~np.isfinite(scores))[0])
        raise DataError(f"observation {bad} has a non-finite score")
    if not np.all(np.isfinite(X)) or X.min() < 0.0 or X.max() > 1.0:
        raise BoundsError("surrogate inputs must lie in the unit cube")

    ys, y_mean, y_std = _standardize(scores)
    if config.fixed_kernel is not None:
        if len(config.fixed_kernel.length_scales) != X.shape[1]:
            raise ShapeError("fixed kernel has the wrong number of length scales")
        params = config.fixed_kernel
    else:
        params = _optimize_hyperparameters(X, ys, config)
    L, alpha, jitter = _factorize(params, X, ys)
    return GpModel(
        X=X,
        y=ys,
        y_mean=y_mean,
        y_std=y_std,
        prior_mean=0.0,
        kernel=params,
        chol=L,
        alpha=alpha,
        jitter=jitter,
    )


def predict_batch(model: GpModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Posterior mean and standard deviation at each row of ``X``
    (unit-cube coordinates), in native score units."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != model.d:
        raise ShapeError(f"expected query shape (m, {model.d}), got {X.shape}")
    k_star = _kernel_matrix(model.kernel, X, model.X)
    mean_s = k_star @ model.alpha
    v = solve_triangular(model.chol, k_star.T, lower=True, check_finite=False)
    var_s = model.kernel.signal_variance - np.sum(v * v, axis=0)
    np.maximum(var_s, 0.0, out=var_s)
    mean = model.y_mean + model.y_std * mean_s
    std = np.sqrt(var_s) * model.y_std
    return mean, std


def predict(model: GpModel, x) -> tuple[float, float]:
    """Posterior mean/std at a single unit-cube point."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.d,):
        raise ShapeError(f"expected a vector of length {model.d}, got shape {x.shape}")
    mean, std = predict_batch(model, x[None, :])
    return float(mean[0]), float(std[0])


def log_marginal_likelihood(model: GpModel) -> float:
    """Log marginal likelihood of the fitted model, in standardized units."""
    return float(
        -0.5 * model.y @ model.alpha
        - np.sum(np.log(np.diag(model.chol)))
        - 0.5 * model.n * math.log(2.0 * math.pi)
    )
