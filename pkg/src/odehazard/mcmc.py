"""Adaptive random-walk Metropolis posterior sampling.

Component-blocked Gaussian proposals in transformed coordinates (log scale
for positivity-constrained parameters), Robbins-Monro step-size adaptation
toward a 0.3 acceptance rate during burn-in only; after burn-in the kernel
is frozen so detailed balance holds exactly on the retained draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, OdeHazardError
from .fitting import FAMILIES, FitFamily, from_internal, mle_fit, to_internal
from .sampling import STREAM_CHAIN, SurvivalDataset, generator

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class PriorSpec:
    """Gamma(shape, rate) on positive parameters, Normal(0, sd) on free ones."""

    gamma_shape: float = 2.0
    gamma_rate: float = 2.0
    normal_sd: float = 1.0

    def log_density(self, theta: np.ndarray, positive) -> float:
        out = 0.0
        a, b = self.gamma_shape, self.gamma_rate
        for x, pos in zip(theta, positive):
            if not math.isfinite(x):
                return -math.inf
            if pos:
                if x <= 0.0:
                    return -math.inf
                out += a * math.log(b) - math.lgamma(a) + (a - 1.0) * math.log(x) - b * x
            else:
                z = x / self.normal_sd
                out += -0.5 * z * z - math.log(self.normal_sd) - _LOG_SQRT_2PI
        return out

    def means(self, positive) -> np.ndarray:
        return np.array(
            [self.gamma_shape / self.gamma_rate if pos else 0.0 for pos in positive]
        )


def log_posterior(
    family: FitFamily | str,
    theta: np.ndarray,
    data: SurvivalDataset,
    prior: PriorSpec = PriorSpec(),
) -> float:
    if isinstance(family, str):
        family = FAMILIES[family]
    lp = prior.log_density(np.asarray(theta, float), family.positive)
    if lp == -math.inf:
        return -math.inf
    ll = family.loglik(np.asarray(theta, float), data)
    if ll == -math.inf:
        return -math.inf
    return ll + lp


@dataclass(frozen=True)
class ChainConfig:
    iterations: int = 60_000
    burn_in: int = 10_000
    thin: int = 5
    initial_scale: float = 0.25
    adapt_window: int = 50
    target_accept: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.burn_in < self.iterations):
            raise InvalidParameterError("need 0 <= burn_in < iterations")
        if self.thin < 1:
            raise InvalidParameterError("thin must be >= 1")

    @property
    def retained(self) -> int:
        return (self.iterations - self.burn_in) // self.thin


@dataclass(frozen=True)
class PosteriorChain:
    family: str
    param_names: tuple[str, ...]
    draws: np.ndarray
    acceptance_rate: float
    init: dict[str, float]
    init_source: str
    scales: np.ndarray

    def mean(self) -> np.ndarray:
        return np.mean(self.draws, axis=0)

    def sd(self) -> np.ndarray:
        return np.std(self.draws, axis=0, ddof=1)


def posterior_summary(chain: PosteriorChain) -> dict[str, dict[str, float]]:
    """Per-parameter mean, SD and central quantiles of the retained draws."""
    qs = np.quantile(chain.draws, [0.025, 0.5, 0.975], axis=0)
    out = {}
    for j, name in enumerate(chain.param_names):
        col = chain.draws[:, j]
        out[name] = {
            "mean": float(np.mean(col)),
            "sd": float(np.std(col, ddof=1)) if col.shape[0] > 1 else 0.0,
            "q025": float(qs[0, j]),
            "q50": float(qs[1, j]),
            "q975": float(qs[2, j]),
        }
    return out


def _initial_point(
    family: FitFamily, data: SurvivalDataset, prior: PriorSpec, seed: int, init
) -> tuple[np.ndarray, str]:
    if init is not None:
        return np.asarray(init, dtype=float), "user"
    fit = mle_fit(family.name, data, n_starts=3, seed=seed)
    theta = np.array([fit.params[p] for p in family.param_names])
    if fit.converged and family.loglik(theta, data) > -math.inf:
        return theta, "mle"
    return prior.means(family.positive), "prior_mean"


def run_chain(
    family_name: str,
    data: SurvivalDataset,
    prior: PriorSpec = PriorSpec(),
    cfg: ChainConfig = ChainConfig(),
    init=None,
) -> PosteriorChain:
    """Sample the posterior; deterministic given (data, prior, cfg)."""
    family = FAMILIES[family_name]
    p = family.k
    positive = np.asarray(family.positive, dtype=bool)
    theta0, init_source = _initial_point(family, data, prior, cfg.seed, init)

    def log_post_internal(y: np.ndarray) -> float:
        theta = from_internal(y, positive)
        lp = log_posterior(family, theta, data, prior)
        if lp == -math.inf:
            return -math.inf
        # Jacobian of the log transform on the positive block
        return lp + float(np.sum(y[positive]))

    y = to_internal(theta0, positive)
    current = log_post_internal(y)
    if current == -math.inf:
        raise InvalidParameterError("no finite log-posterior at the initial point")

    rng = generator(cfg.seed, STREAM_CHAIN)
    zs = rng.standard_normal((cfg.iterations, p))
    log_us = np.log(rng.random((cfg.iterations, p)))

    scales = np.full(p, cfg.initial_scale)
    window_accepts = np.zeros(p, dtype=int)
    burn_accepts = np.zeros(p, dtype=int)
    post_accepts = 0
    post_proposals = 0
    window_index = 0

    retained = np.empty((cfg.retained, p))
    n_kept = 0
    for it in range(cfg.iterations):
        adapting = it < cfg.burn_in
        for j in range(p):
            y_prop = y.copy()
            y_prop[j] += scales[j] * zs[it, j]
            cand = log_post_internal(y_prop)
            if log_us[it, j] < cand - current:
                y = y_prop
                current = cand
                if adapting:
                    window_accepts[j] += 1
                    burn_accepts[j] += 1
                else:
                    post_accepts += 1
            if not adapting:
                post_proposals += 1
        if adapting and (it + 1) % cfg.adapt_window == 0:
            window_index += 1
            rates = window_accepts / cfg.adapt_window
            scales *= np.exp((rates - cfg.target_accept) / math.sqrt(window_index))
            window_accepts[:] = 0
        if not adapting and (it - cfg.burn_in) % cfg.thin == 0 and n_kept < cfg.retained:
            retained[n_kept] = from_internal(y, positive)
            n_kept += 1
    if cfg.burn_in >= cfg.adapt_window and np.any(burn_accepts == 0):
        stuck = [family.param_names[j] for j in np.flatnonzero(burn_accepts == 0)]
        raise OdeHazardError(
            f"no accepted proposals during burn-in for {stuck}; "
            "check the initial point and proposal scales"
        )
    return PosteriorChain(
        family=family_name,
        param_names=family.param_names,
        draws=retained[:n_kept],
        acceptance_rate=post_accepts / max(post_proposals, 1),
        init=dict(zip(family.param_names, theta0)),
        init_source=init_source,
        scales=scales,
    )
