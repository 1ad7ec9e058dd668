"""Replicated simulate-then-refit studies at desk scale.

Each replication simulates a censored dataset from the true model, runs the
adaptive Metropolis chain, and records posterior means; replications carry
their own seeds, run independently (optionally across processes), and are
aggregated with compensated summation so worker layout cannot change the
result.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import OdeHazardError
from .fitting import FAMILIES
from .mcmc import ChainConfig, PriorSpec, run_chain
from .models import model_from_params
from .sampling import simulate_dataset, tune_cmax


@dataclass(frozen=True)
class StudyResult:
    family: str
    truth: dict[str, float]
    n_grid: tuple[int, ...]
    replications: int
    censor_target: float
    c_max: dict[int, float]
    rep_seeds: dict[int, tuple[int, ...]]
    mean: dict[int, dict[str, float]]
    rmse: dict[int, dict[str, float]]
    failures: dict[int, int]

    def table_rows(self) -> list[dict[str, object]]:
        """One row per sample size: mean and RMSE for every parameter."""
        rows = []
        for n in self.n_grid:
            row: dict[str, object] = {"n": n}
            for p in self.truth:
                row[f"{p}_mean"] = self.mean[n][p]
                row[f"{p}_rmse"] = self.rmse[n][p]
            row["failures"] = self.failures[n]
            rows.append(row)
        return rows


def _replicate(args) -> tuple[int, int, list[float] | None, str]:
    (family_name, truth_items, n, c_max, censor_target, cfg_kw, rep_seed) = args
    try:
        truth = dict(truth_items)
        model = model_from_params(family_name, **truth)
        data = simulate_dataset(model, n, censor="uniform", seed=rep_seed, c_max=c_max)
        chain = run_chain(
            family_name,
            data,
            prior=PriorSpec(),
            cfg=ChainConfig(seed=rep_seed, **cfg_kw),
        )
        return n, rep_seed, [float(x) for x in chain.mean()], ""
    except OdeHazardError as exc:
        return n, rep_seed, None, str(exc)


def monte_carlo_study(
    family_name: str,
    truth: dict[str, float],
    n_grid=(500, 1000, 2000, 5000),
    replications: int = 50,
    censor_target: float = 0.25,
    seed: int = 0,
    chain: ChainConfig = ChainConfig(),
    jobs: int = 1,
    max_failure_fraction: float = 0.10,
) -> StudyResult:
    """Average posterior means and RMSE versus truth per sample size."""
    if replications < 2:
        raise OdeHazardError("need at least 2 replications")
    family = FAMILIES[family_name]
    names = family.param_names
    truth_vec = np.array([truth[p] for p in names])
    model = model_from_params(family_name, **truth)

    cfg_kw = dict(
        iterations=chain.iterations,
        burn_in=chain.burn_in,
        thin=chain.thin,
        initial_scale=chain.initial_scale,
        adapt_window=chain.adapt_window,
        target_accept=chain.target_accept,
    )
    c_max = {
        n: tune_cmax(model, censor_target, seed=seed + 1_000 + i)
        for i, n in enumerate(n_grid)
    }
    seed_pool = np.random.SeedSequence(seed).generate_state(
        len(n_grid) * replications, dtype=np.uint64
    )
    tasks = []
    rep_seeds: dict[int, tuple[int, ...]] = {}
    for i, n in enumerate(n_grid):
        seeds = tuple(int(s) for s in seed_pool[i * replications : (i + 1) * replications])
        rep_seeds[n] = seeds
        tasks += [
            (family_name, tuple(truth.items()), n, c_max[n], censor_target, cfg_kw, s)
            for s in seeds
        ]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_replicate, tasks, chunksize=1))
    else:
        results = [_replicate(t) for t in tasks]

    mean: dict[int, dict[str, float]] = {}
    rmse: dict[int, dict[str, float]] = {}
    failures: dict[int, int] = {}
    for n in n_grid:
        means = [r[2] for r in results if r[0] == n and r[2] is not None]
        n_fail = sum(1 for r in results if r[0] == n and r[2] is None)
        failures[n] = n_fail
        if n_fail > max_failure_fraction * replications:
            messages = [r[3] for r in results if r[0] == n and r[2] is None]
            raise OdeHazardError(
                f"{n_fail}/{replications} replications failed at n={n}: {messages[:3]}"
            )
        arr = np.asarray(means)
        mean[n] = {
            p: math.fsum(arr[:, j]) / arr.shape[0] for j, p in enumerate(names)
        }
        rmse[n] = {
            p: math.sqrt(math.fsum((arr[:, j] - truth_vec[j]) ** 2) / arr.shape[0])
            for j, p in enumerate(names)
        }
    return StudyResult(
        family=family_name,
        truth={p: float(truth[p]) for p in names},
        n_grid=tuple(n_grid),
        replications=replications,
        censor_target=censor_target,
        c_max={n: float(c) for n, c in c_max.items()},
        rep_seeds=rep_seeds,
        mean=mean,
        rmse=rmse,
        failures=failures,
    )
