"""Acceptance gate: one test per criterion, pinned tolerances, pass/fail lines.

Criterion 8 (the desk-scale replication study) runs for well over an hour on
a small machine and carries the pytest marker `slow`; everything else is
quick.  Each test prints `[criterion N] PASS ...` with its elapsed time on
success; a failure raises before the line prints.
"""

import math
import os
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar
from scipy.stats import kstest

from odehazard import (
    ChainConfig,
    ConstantHazard,
    DampedOscillator,
    ExpInteraction,
    PopulationDynamics,
    Sinusoidal,
    State2,
    TimeGrid,
    init_from_survival,
    integrate,
    logistic_first_order_cumhaz,
    logistic_first_order_hazard,
    mgf,
    mle_fit,
    monte_carlo_study,
    run_chain,
    simulate_dataset,
    simulate_event_time,
)
from odehazard.dataio import read_dataset

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")

UNDER = dict(alpha=0.5, beta=1.0, gamma=0.2, h0=0.1, v0=0.3)
CRITICAL = dict(alpha=2.0, beta=1.0, gamma=0.2, h0=0.1, v0=0.3)
OVER = dict(alpha=3.0, beta=1.0, gamma=0.2, h0=0.1, v0=0.3)
SINU = dict(omega=0.2 * math.pi, c=0.6, h0=0.1, v0=0.2)
EXP_GROW = dict(alpha=0.1, beta=0.0, h0=0.4, v0=0.1)
BOUNDARY = dict(alpha=0.1, beta=0.0, h0=0.31623, v0=-0.1)

TABLE_N2000_RMSE = dict(alpha=0.1540, beta=0.0930, gamma=0.0372, h0=0.0166, v0=0.0456)


def report(num, elapsed, detail=""):
    print(f"[criterion {num}] PASS ({elapsed:.1f}s) {detail}")


def test_criterion_1_closed_form_agreement():
    t0 = time.time()
    # Horizons match the plotted ranges; the exponential-growth panel stops
    # at 10 where the hazard has already grown ~20x (trapezoid error on H
    # scales with h'(T), so the 1e-6 bound is meaningful only there).
    cases = [
        (DampedOscillator(**UNDER), 30.0),
        (DampedOscillator(**CRITICAL), 30.0),
        (DampedOscillator(**OVER), 30.0),
        (Sinusoidal(**SINU), 30.0),
        (ExpInteraction(**EXP_GROW), 10.0),
    ]
    for model, horizon in cases:
        grid = TimeGrid.from_bounds(0.0, horizon, 1e-3)
        traj = integrate(model.field(), State2(model.h0, model.v0), grid)
        ts = traj.times
        assert np.max(np.abs(traj.h - model.hazard(ts))) <= 1e-6
        assert np.max(np.abs(traj.H - model.cumulative_hazard(ts))) <= 1e-6
    # first-order logistic through its scalar solver
    from odehazard import logistic_first_order_solve

    grid = TimeGrid.from_bounds(0.0, 40.0, 1e-3)
    traj = logistic_first_order_solve(0.8, 1.0, 0.1, grid)
    assert np.max(np.abs(traj.h - logistic_first_order_hazard(traj.times, 0.8, 1.0, 0.1))) <= 1e-6
    assert np.max(np.abs(traj.H - logistic_first_order_cumhaz(traj.times, 0.8, 1.0, 0.1))) <= 1e-6
    report(1, time.time() - t0, "closed-form vs RK4/trapezoid at dt=1e-3")


def test_criterion_2_long_run_equilibrium_and_crossings():
    t0 = time.time()
    crossings = {}
    for name, params in (("under", UNDER), ("critical", CRITICAL), ("over", OVER)):
        m = DampedOscillator(**params)
        assert abs(m.hazard(50.0) - 0.2) <= 1e-4
        ts = np.arange(0.0, 50.0, 1e-3)
        dev = m.hazard(ts) - 0.2
        signs = np.sign(dev)
        flips = np.flatnonzero(np.diff(signs) != 0)
        crossings[name] = ts[flips]
    assert crossings["under"].size >= 2
    assert np.sum(crossings["critical"] > 1.0) <= 1
    assert np.sum(crossings["over"] > 1.0) <= 1
    report(2, time.time() - t0, "equilibrium 0.2 reached; oscillation pattern as classified")


def _sinusoidal_grid_min(m: Sinusoidal) -> float:
    ts = np.linspace(0.0, 10.0 * m.period, 4097)
    h = m.hazard(ts)
    k = int(np.argmin(h))
    lo = ts[max(k - 1, 0)]
    hi = ts[min(k + 1, len(ts) - 1)]
    res = minimize_scalar(lambda t: float(m.hazard(t)), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    return min(float(np.min(h)), float(res.fun))


def _exp_grid_positive(m: ExpInteraction) -> bool:
    # extend the horizon until the hazard either dips negative or is growing
    # away from zero (h and h' both positive certifies positivity forever)
    root = math.sqrt(m.alpha)
    horizon = 5.0 / root
    while True:
        ts = np.linspace(0.0, horizon, 4097)
        h = m.hazard(ts)
        if np.min(h) <= 0.0:
            return False
        grow, decay = 0.5 * (m.h0 + m.v0 / root), 0.5 * (m.h0 - m.v0 / root)
        slope_end = root * (grow * math.exp(root * horizon) - decay * math.exp(-root * horizon))
        if slope_end > 0.0 or horizon > 400.0 / root:
            return slope_end > 0.0 or bool(np.min(h) > 0.0)
        horizon *= 2.0


def test_criterion_3_positivity_iff_sweeps():
    t0 = time.time()
    rng = np.random.default_rng(12345)
    checked = 0
    while checked < 1000:
        m = Sinusoidal(
            omega=rng.uniform(0.1, 3.0),
            c=rng.uniform(0.05, 1.2),
            h0=rng.uniform(0.05, 1.2),
            v0=rng.normal(0.0, 0.3),
        )
        threshold = 0.5 * m.h0 + m.v0**2 / (2.0 * m.h0 * m.omega**2)
        if abs(m.c - threshold) <= 1e-9 * max(m.c, threshold):
            continue
        analytic = m.c > threshold
        assert (_sinusoidal_grid_min(m) > 0.0) == analytic
        checked += 1
    checked = 0
    while checked < 1000:
        m = ExpInteraction(
            alpha=rng.uniform(0.02, 1.0),
            beta=0.0,
            h0=rng.uniform(0.05, 1.0),
            v0=-abs(rng.normal(0.0, 0.25)),
        )
        margin = m.h0 * math.sqrt(m.alpha) - abs(m.v0)
        if abs(margin) <= 2e-5 * max(m.h0 * math.sqrt(m.alpha), abs(m.v0)):
            continue  # inside the boundary-snap band
        analytic = m.h0 >= abs(m.v0) / math.sqrt(m.alpha)
        assert _exp_grid_positive(m) == analytic
        checked += 1
    report(3, time.time() - t0, "1000 sinusoidal + 1000 exp sweeps agree with the conditions")


def test_criterion_4_improper_boundary():
    t0 = time.time()
    m = ExpInteraction(**BOUNDARY)
    grid = TimeGrid.from_bounds(0.0, 60.0, 1e-3)
    traj = integrate(m.field(), State2(m.h0, m.v0), grid)
    S60 = math.exp(-float(traj.H[-1]))
    assert abs(S60 - math.exp(-1.0)) <= 1e-4
    for y in (1.01, 1.5, 3.0):
        assert simulate_event_time(m, 1.0 - math.exp(-y)) == math.inf
    finite = simulate_event_time(m, 1.0 - math.exp(-0.9))
    assert math.isfinite(finite)
    report(4, time.time() - t0, f"S(60)={S60:.6f} vs e^-1, unreachable targets return +inf")


@pytest.mark.parametrize(
    "model",
    [
        DampedOscillator(**UNDER),
        Sinusoidal(**SINU),
        ExpInteraction(**EXP_GROW),
    ],
    ids=["underdamped", "sinusoidal", "exp-growth"],
)
def test_criterion_5_sampler_distribution_recovery(model):
    t0 = time.time()
    d = simulate_dataset(model, 20_000, censor="none", seed=2024)
    res = kstest(d.times, lambda t: 1.0 - np.exp(-model.cumulative_hazard(t)))
    assert res.pvalue >= 0.01
    report(5, time.time() - t0, f"{model.family}: KS p={res.pvalue:.3f} on n=20000")


def test_criterion_6_mgf():
    t0 = time.time()
    assert abs(mgf(ConstantHazard(0.6), 0.3).value - 2.0) <= 1e-6
    for model in (
        DampedOscillator(**UNDER),
        PopulationDynamics(r=0.8, K=1.0, eta=0.5 * math.sqrt(0.8), h0=0.1, v0=0.2),
        Sinusoidal(**SINU),
        ExpInteraction(**BOUNDARY),
    ):
        b = model.mgf_domain_bound()
        assert mgf(model, b).divergent
        assert mgf(model, b + 0.1 * max(b, 1.0)).divergent
    m = DampedOscillator(**UNDER)
    value = mgf(m, 0.1).value
    d = simulate_dataset(m, 200_000, censor="none", seed=77)
    w = np.exp(0.1 * d.times)
    se = float(np.std(w, ddof=1)) / math.sqrt(w.shape[0])
    assert abs(value - float(np.mean(w))) <= 3.0 * se
    report(6, time.time() - t0, f"mgf(0.1)={value:.6f} vs MC {float(np.mean(w)):.6f} (se {se:.2g})")


def test_criterion_7_conjugate_mcmc_oracle():
    t0 = time.time()
    cfg_base = dict(iterations=20_000, burn_in=4_000, thin=5)
    for seed in range(10):
        data = simulate_dataset(ConstantHazard(0.6), 300, censor="none", seed=seed)
        d = int(np.sum(data.events))
        st = float(np.sum(data.times))
        target = (2.0 + d) / (2.0 + st)
        post_sd = math.sqrt(2.0 + d) / (2.0 + st)
        chain = run_chain("constant", data, cfg=ChainConfig(seed=seed, **cfg_base))
        n_eff = chain.draws.shape[0] / 20.0  # autocorrelation allowance
        se = post_sd / math.sqrt(n_eff)
        assert abs(float(np.mean(chain.draws)) - target) <= 3.0 * se
    report(7, time.time() - t0, "posterior mean matches Gamma(2+d, 2+sum t) over 10 seeds")


@pytest.mark.slow
def test_criterion_8_desk_scale_study():
    t0 = time.time()
    jobs = max(os.cpu_count() or 1, 1)
    result = monte_carlo_study(
        "damped",
        dict(alpha=0.5, beta=1.0, gamma=0.2, h0=0.1, v0=0.3),
        n_grid=(500, 2000, 5000),
        replications=50,
        censor_target=0.25,
        seed=20250809,
        chain=ChainConfig(iterations=60_000, burn_in=10_000, thin=5),
        jobs=jobs,
    )
    for row in result.table_rows():
        print(row)
    for p, ref in TABLE_N2000_RMSE.items():
        ours = result.rmse[2000][p]
        assert ref / 3.0 <= ours <= ref * 3.0, f"{p}: rmse {ours} vs table {ref}"
    improved = sum(
        1 for p in TABLE_N2000_RMSE if result.rmse[5000][p] < result.rmse[500][p]
    )
    assert improved >= 4
    report(8, time.time() - t0, f"rmse within 3x of reference row; {improved}/5 shrink 500->5000")


def test_criterion_9_real_data_bic():
    t0 = time.time()
    path = os.path.join(DATA_DIR, "lung.csv")
    data = read_dataset(path, convention="status12", time_unit="days-to-years")
    assert data.n == 228 and int(np.sum(data.events)) == 165
    bw = mle_fit("weibull", data).bic
    bl = mle_fit("lognormal", data).bic
    init = init_from_survival(data)
    # reproduction pathway (single local simplex in natural coordinates from
    # the data-driven start); the default multi-start finds a strictly better
    # interior mode -- see the fit report and README
    repro = mle_fit(
        "sinusoidal", data, init=init.sinusoidal_vector(), n_starts=1,
        transform=False, adaptive=True,
    )
    bs = repro.bic
    best = mle_fit("sinusoidal", data, init=init.sinusoidal_vector())
    for value, ref, name in ((bw, 371.38, "weibull"), (bs, 384.01, "sinusoidal"), (bl, 402.21, "lognormal")):
        if abs(value - ref) > 1.0:
            print(
                f"caveat: {name} BIC {value:.2f} outside {ref}±1.0; the years "
                "convention (days/365.25) is a documented assumption"
            )
        assert abs(value - ref) <= 1.0, f"{name}: {value:.3f} vs {ref}"
    assert bw < bs < bl
    assert bw < best.bic < bl  # ordering also holds at the better interior mode
    report(9, time.time() - t0, f"BICs {bw:.2f} / {bs:.2f} / {bl:.2f}")


def test_criterion_10_initialization_scheme():
    t0 = time.time()
    data = simulate_dataset(ConstantHazard(0.6), 2000, censor="none", seed=3)
    est = init_from_survival(data)
    assert abs(est.h0 - 0.6) <= 0.06
    assert 0.0 <= est.v0 <= 0.05
    report(10, time.time() - t0, f"h0={est.h0:.4f}, v0={est.v0:.4f}")
