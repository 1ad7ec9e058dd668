"""Fixed-step numerical engine for 2-state hazard systems.

Classical RK4 over a uniform grid, trapezoidal accumulation of the hazard
into the cumulative hazard, and linear interpolation on the stored
trajectory.  Everything here is a pure function of its inputs; trajectories
are immutable once built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import IntegrationBlowupError, RangeError


class State2(NamedTuple):
    """Hazard level and its rate of change, (h, h')."""

    h: float
    v: float


# A vector field maps (state, t) -> (dh/dt, dv/dt).  The first component is
# always v; the second carries the model-specific acceleration.
VectorField = Callable[[State2, float], tuple[float, float]]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_i = t0 + i*dt, with nodes computed from the index."""

    t0: float
    dt: float
    n_steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 1:
            raise ValueError(f"need at least one step, got {self.n_steps}")

    @classmethod
    def from_bounds(cls, t0: float, t_end: float, dt: float) -> "TimeGrid":
        if not t_end > t0:
            raise ValueError(f"t_end={t_end} must exceed t0={t0}")
        n = int(round((t_end - t0) / dt))
        return cls(t0=t0, dt=dt, n_steps=max(n, 1))

    @property
    def t_end(self) -> float:
        return self.t0 + self.n_steps * self.dt

    def times(self) -> np.ndarray:
        t = self.t0 + self.dt * np.arange(self.n_steps + 1)
        t.flags.writeable = False
        return t


@dataclass(frozen=True)
class Trajectory:
    """Discrete (h, v, H) trajectory on a uniform grid.

    ``first_negative_time`` is the first grid time with h < 0, or None; a
    negative hazard is flagged rather than raised so boundary studies can
    probe the positivity frontier.
    """

    grid: TimeGrid
    h: np.ndarray
    v: np.ndarray
    H: np.ndarray
    first_negative_time: float | None = None

    def __post_init__(self):
        n = self.grid.n_steps + 1
        for name in ("h", "v", "H"):
            arr = getattr(self, name)
            if arr.shape != (n,):
                raise ValueError(f"{name} must have length n_steps+1={n}")
            arr.flags.writeable = False

    @property
    def times(self) -> np.ndarray:
        return self.grid.times()

    @property
    def survival(self) -> np.ndarray:
        return np.exp(-self.H)

    def interp(self, channel: str, t):
        return interp_linear(self, channel, t)


def rk4_step(state: State2, t: float, dt: float, field: VectorField) -> State2:
    """One classical RK4 update of both components."""
    h, v = state
    k1h, k1v = field(State2(h, v), t)
    k2h, k2v = field(State2(h + 0.5 * dt * k1h, v + 0.5 * dt * k1v), t + 0.5 * dt)
    k3h, k3v = field(State2(h + 0.5 * dt * k2h, v + 0.5 * dt * k2v), t + 0.5 * dt)
    k4h, k4v = field(State2(h + dt * k3h, v + dt * k3v), t + dt)
    hn = h + (dt / 6.0) * (k1h + 2.0 * k2h + 2.0 * k3h + k4h)
    vn = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    if not (math.isfinite(hn) and math.isfinite(vn)):
        raise IntegrationBlowupError(t, f"state ({h:.6g}, {v:.6g})")
    return State2(hn, vn)


def cumulative_trapezoid(values, dt: float) -> np.ndarray:
    """Running trapezoid sums: out[0]=0, out[i]=out[i-1]+dt*(v[i-1]+v[i])/2."""
    values = np.asarray(values, dtype=float)
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not np.all(np.isfinite(values)):
        raise ValueError("values must be finite")
    out = np.empty(values.shape[0])
    out[0] = 0.0
    np.cumsum(0.5 * dt * (values[:-1] + values[1:]), out=out[1:])
    return out


def integrate(field: VectorField, init: State2, grid: TimeGrid) -> Trajectory:
    """Repeated RK4 over the grid, filling H by the trapezoidal rule.

    h[0], v[0] equal the supplied initial conditions exactly.  Node times
    are computed from the index so no step-size drift accumulates.
    """
    n = grid.n_steps
    t0, dt = grid.t0, grid.dt
    h = np.empty(n + 1)
    v = np.empty(n + 1)
    state = State2(float(init[0]), float(init[1]))
    h[0], v[0] = state
    neg_index = 0 if state.h < 0 else -1
    for i in range(n):
        state = rk4_step(state, t0 + i * dt, dt, field)
        h[i + 1] = state.h
        v[i + 1] = state.v
        if neg_index < 0 and state.h < 0:
            neg_index = i + 1
    H = cumulative_trapezoid(h, dt)
    first_neg = t0 + neg_index * dt if neg_index >= 0 else None
    return Trajectory(grid=grid, h=h, v=v, H=H, first_negative_time=first_neg)


_CHANNELS = ("h", "v", "H")


def interp_linear(trajectory: Trajectory, channel: str, t):
    """Piecewise-linear interpolation of a trajectory channel; exact at nodes."""
    if channel not in _CHANNELS:
        raise ValueError(f"channel must be one of {_CHANNELS}")
    grid = trajectory.grid
    t_arr = np.asarray(t, dtype=float)
    lo, hi = grid.t0, grid.t_end
    # allow half-ulp-scale slack at the endpoints, nothing more
    eps = 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0)
    if np.any(t_arr < lo - eps) or np.any(t_arr > hi + eps):
        raise RangeError(f"t={t!r} outside grid [{lo:.6g}, {hi:.6g}]")
    values = getattr(trajectory, channel)
    x = np.clip((t_arr - lo) / grid.dt, 0.0, grid.n_steps)
    idx = np.minimum(x.astype(int), grid.n_steps - 1)
    frac = x - idx
    out = values[idx] * (1.0 - frac) + values[idx + 1] * frac
    # return stored values exactly when t sits on a node
    on_node = frac == 0.0
    if np.any(on_node):
        out = np.where(on_node, values[idx], out)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out
