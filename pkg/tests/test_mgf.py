"""Moment generating function: values, existence domains, tail control."""

import math

import numpy as np
import pytest

from odehazard import (
    ConstantHazard,
    DampedOscillator,
    ExpInteraction,
    PopulationDynamics,
    Sinusoidal,
    mgf,
    mgf_sweep,
)

UNDER = DampedOscillator(alpha=0.5, beta=1.0, gamma=0.2, h0=0.1, v0=0.3)
SINU = Sinusoidal(omega=0.2 * math.pi, c=0.6, h0=0.1, v0=0.2)
POP = PopulationDynamics(r=0.8, K=1.0, eta=0.5 * math.sqrt(0.8), h0=0.1, v0=0.2)
EXP_PROPER = ExpInteraction(alpha=0.1, beta=0.0, h0=0.4, v0=0.1)
BOUNDARY = ExpInteraction(alpha=0.1, beta=0.0, h0=0.31623, v0=-0.1)


def test_constant_hazard_oracle():
    res = mgf(ConstantHazard(0.6), 0.3)
    assert not res.divergent
    assert res.value == pytest.approx(2.0, abs=1e-6)


def test_constant_hazard_zero_argument_is_one():
    res = mgf(ConstantHazard(0.6), 0.0)
    assert res.value == pytest.approx(1.0, abs=1e-8)


def test_domain_bounds_per_family():
    assert UNDER.mgf_domain_bound() == pytest.approx(0.2)
    assert POP.mgf_domain_bound() == 1.0
    assert SINU.mgf_domain_bound() == 0.6
    assert EXP_PROPER.mgf_domain_bound() == math.inf
    assert BOUNDARY.mgf_domain_bound() == 0.0


def test_divergence_flags_at_and_above_bound():
    for model in (UNDER, POP, SINU):
        b = model.mgf_domain_bound()
        for s in (b, 1.1 * b):
            res = mgf(model, s)
            assert res.divergent and res.value == math.inf
    assert mgf(BOUNDARY, 0.0).divergent
    assert mgf(BOUNDARY, 0.5).divergent


def test_finite_and_increasing_inside_domain():
    for model in (UNDER, SINU):
        b = model.mgf_domain_bound()
        values = [mgf(model, s).value for s in np.linspace(0.1 * b, 0.9 * b, 5)]
        assert all(math.isfinite(v) for v in values)
        assert all(v1 < v2 for v1, v2 in zip(values, values[1:]))


def test_popdyn_inside_domain():
    res = mgf(POP, 0.3)
    assert not res.divergent and math.isfinite(res.value)
    assert res.value > 1.0


def test_exp_proper_finite_for_large_s():
    # super-exponential tail decay: finite for any s
    res = mgf(EXP_PROPER, 2.0)
    assert not res.divergent and math.isfinite(res.value)


def test_improper_negative_s_finite():
    # mass at infinity contributes nothing for s < 0
    res = mgf(BOUNDARY, -0.2)
    assert not res.divergent
    assert 0.0 < res.value < 1.0


def test_sweep_shapes():
    out = mgf_sweep(SINU, [0.1, 0.3, 0.6, 0.7])
    assert [r.divergent for r in out] == [False, False, True, True]


def test_sinusoidal_against_series_quadrature():
    # independent oracle: adaptive quadrature on the closed-form density
    from scipy.integrate import quad

    s = 0.3
    ref, _ = quad(lambda t: math.exp(s * t) * SINU.pdf(t), 0.0, 400.0, limit=800)
    res = mgf(SINU, s)
    assert res.value == pytest.approx(ref, rel=1e-6)
