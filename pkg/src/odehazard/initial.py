"""Data-driven starting values from a locally-exponential survival anchor.

A near-time-zero event rate is estimated from the observations inside one
window, an exponential survival curve anchored on it supplies S at the first
three window multiples, and forward differences of that curve give h(0),
h'(0) and h''(0).  The baseline shift starts at the average hazard over the
observed window and the frequency at sqrt(-h''(0)/(h0 - c0)) when that is
real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .sampling import SurvivalDataset


@dataclass(frozen=True)
class InitEstimate:
    lambda_hat: float
    h0: float
    v0: float
    hpp0: float
    c0: float
    omega0: float

    def sinusoidal_vector(self) -> np.ndarray:
        """(omega, c, h0, v0) start for the sinusoidal family."""
        return np.array([self.omega0, self.c0, self.h0, self.v0])


def init_from_survival(data: SurvivalDataset, window: float = 1.0 / 12.0) -> InitEstimate:
    """Starting values for oscillatory fits; window defaults to 1/12 time units."""
    t = data.times
    delta = data.events
    exposure = float(np.sum(np.minimum(t, window)))
    if not exposure > 0:
        raise InvalidParameterError("no follow-up time inside the estimation window")
    lam = float(np.sum((t <= window) * delta)) / exposure

    total_time = float(np.sum(t))
    events = float(np.sum(delta))
    c0 = events / total_time if total_time > 0 else 0.0

    dt = window
    s0 = 1.0
    s1 = math.exp(-lam * dt)
    s2 = math.exp(-2.0 * lam * dt)
    s3 = math.exp(-3.0 * lam * dt)

    h0 = -(s1 - s0) / (dt * s0)
    v0 = ((s1 - s0) / (dt * s1)) ** 2 - (s2 - 2.0 * s1 + s0) / (dt * dt * s1)
    hpp0 = (
        -(s3 - 3.0 * s2 + 3.0 * s1 - s0) / (dt**3 * s1)
        + 3.0 * (s2 - 2.0 * s1 + s0) * (s1 - s0) / (dt**3 * s1**2)
        - 2.0 * (s1 - s0) ** 3 / (dt**3 * s1**3)
    )

    span = max(float(np.max(t)) - float(np.min(t)), dt)
    denom = h0 - c0
    radicand = -hpp0 / denom if denom != 0.0 else -1.0
    omega0 = math.sqrt(radicand) if radicand > 0.0 else 2.0 * math.pi / span
    return InitEstimate(lambda_hat=lam, h0=h0, v0=v0, hpp0=hpp0, c0=c0, omega0=omega0)
