"""Catalogue of hazard families governed by second-order dynamics.

Each family knows its vector field, its closed-form hazard/cumulative hazard
where one exists, its parameter validity constraints, and the analytic
positivity certificates used to gate sampling and likelihood work.  Also
houses the damping-regime classifier, local stability analysis, the
first-order and delayed logistic comparators, and the Riccati autonomy
coefficients of the Weibull and log-normal reference families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import InvalidParameterError
from .ode import State2, TimeGrid, Trajectory, VectorField, cumulative_trapezoid

# Relative tolerance for routing near-degenerate parameter sets (repeated
# characteristic roots, vanishing growth coefficient) onto the degenerate
# closed-form branch instead of suffering catastrophic cancellation.
_DEGENERACY_RTOL = 1e-12
_EXP_BOUNDARY_RTOL = 1e-5


class DampingKind(Enum):
    UNDERDAMPED = "underdamped"
    CRITICALLY_DAMPED = "critically_damped"
    OVERDAMPED = "overdamped"


@dataclass(frozen=True)
class DampingRegime:
    kind: DampingKind
    discriminant: float


def classify_damping(alpha: float, beta: float) -> DampingRegime:
    """Classify by the sign of alpha**2 - 4*beta, with a tolerance band.

    Floating-point discriminants exactly at zero are measure-zero, so a
    relative band routes near-critical parameters onto the repeated-root
    branch where the two-root formulas would cancel catastrophically.
    """
    if not (alpha > 0 and beta > 0):
        raise InvalidParameterError(f"need alpha>0 and beta>0, got ({alpha}, {beta})")
    delta = alpha * alpha - 4.0 * beta
    tol = _DEGENERACY_RTOL * max(alpha * alpha, 4.0 * beta)
    if abs(delta) <= tol:
        kind = DampingKind.CRITICALLY_DAMPED
    elif delta < 0:
        kind = DampingKind.UNDERDAMPED
    else:
        kind = DampingKind.OVERDAMPED
    return DampingRegime(kind=kind, discriminant=delta)


def _as_array(t):
    return np.asarray(t, dtype=float)


def _scalar_like(t, out):
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return float(out)
    return out


class HazardModel:
    """Common surface for the hazard families.

    Instances are frozen dataclasses: immutable after construction and safe
    to share across threads.  All evaluations are pure.
    """

    family: str = ""
    has_closed_form: bool = False

    def field(self) -> VectorField:
        raise NotImplementedError

    def hazard(self, t):
        raise NotImplementedError

    def cumulative_hazard(self, t):
        raise NotImplementedError

    def pdf(self, t):
        """Induced density h(t)*exp(-H(t))."""
        return self.hazard(t) * np.exp(-self.cumulative_hazard(t))

    def hazard_and_cumhaz(self, t):
        """(h(t), H(t)) together; families override to share common factors."""
        return self.hazard(t), self.cumulative_hazard(t)

    def jacobian(self, at: State2):
        """System Jacobian [[0,1],[dphi/dh, dphi/dv]] and eigenvalue real parts."""
        p, q = self._phi_partials(float(at[0]), float(at[1]))
        mat = np.array([[0.0, 1.0], [p, q]])
        disc = q * q + 4.0 * p
        if disc >= 0.0:
            root = math.sqrt(disc)
            re = (0.5 * (q + root), 0.5 * (q - root))
        else:
            re = (0.5 * q, 0.5 * q)
        return mat, re

    def _phi_partials(self, h: float, v: float) -> tuple[float, float]:
        raise NotImplementedError

    def mgf_domain_bound(self) -> float:
        """Supremum of the set where the moment generating function is finite."""
        raise NotImplementedError

    def cumhaz_limit(self) -> float:
        """H(inf); finite only for improper families."""
        return math.inf

    @property
    def improper(self) -> bool:
        return math.isfinite(self.cumhaz_limit())

    def positive_hazard(self) -> bool | None:
        """Analytic positivity certificate for h on t >= 0.

        True/False when the family admits a decisive check; None when only
        the integration flag can decide (callers then inspect the trajectory).
        """
        raise NotImplementedError

    def params(self) -> dict[str, float]:
        import dataclasses

        return {f.name: float(getattr(self, f.name)) for f in dataclasses.fields(self)}


@dataclass(frozen=True)
class ConstantHazard(HazardModel):
    """Flat hazard c; the exponential distribution as a degenerate system."""

    c: float
    family = "constant"
    has_closed_form = True

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidParameterError(f"constant hazard needs c>0, got {self.c}")

    @property
    def h0(self) -> float:
        return self.c

    @property
    def v0(self) -> float:
        return 0.0

    def field(self):
        return lambda state, t: (state[1], 0.0)

    def hazard(self, t):
        return _scalar_like(t, np.full_like(_as_array(t), self.c))

    def cumulative_hazard(self, t):
        return _scalar_like(t, self.c * _as_array(t))

    def _phi_partials(self, h, v):
        return 0.0, 0.0

    def mgf_domain_bound(self):
        return self.c

    def positive_hazard(self):
        return True


@dataclass(frozen=True)
class DampedOscillator(HazardModel):
    """Hazard pulled toward gamma/beta with damping alpha and restoring beta.

    h'' + alpha*h' + beta*h = gamma; underdamped, critically damped, or
    overdamped by the discriminant alpha**2 - 4*beta.
    """

    alpha: float
    beta: float
    gamma: float
    h0: float
    v0: float
    family = "damped"
    has_closed_form = True

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise InvalidParameterError(
                f"damped oscillator needs alpha>0, beta>0, got ({self.alpha}, {self.beta})"
            )
        if self.gamma / self.beta < 0:
            raise InvalidParameterError("equilibrium gamma/beta must be >= 0")
        if self.h0 < 0:
            raise InvalidParameterError(f"h0 must be >= 0, got {self.h0}")

    @property
    def equilibrium(self) -> float:
        return self.gamma / self.beta

    @property
    def regime(self) -> DampingRegime:
        return classify_damping(self.alpha, self.beta)

    def field(self):
        a, b, g = self.alpha, self.beta, self.gamma
        return lambda state, t: (state[1], g - a * state[1] - b * state[0])

    @cached_property
    def _constants(self):
        """Regime-specific solution constants.

        underdamped -> ('u', A, B, omega); critical -> ('c', A, B);
        overdamped -> ('o', A, B, r1, r2).
        """
        hs = self.equilibrium
        a0 = self.h0 - hs
        kind = self.regime.kind
        if kind is DampingKind.UNDERDAMPED:
            omega = 0.5 * math.sqrt(4.0 * self.beta - self.alpha * self.alpha)
            b0 = (self.v0 + 0.5 * self.alpha * a0) / omega
            return ("u", a0, b0, omega)
        if kind is DampingKind.CRITICALLY_DAMPED:
            b0 = self.v0 + 0.5 * self.alpha * a0
            return ("c", a0, b0)
        root = 0.5 * math.sqrt(self.regime.discriminant)
        r1 = -0.5 * self.alpha + root
        r2 = -0.5 * self.alpha - root
        a1 = (self.v0 - r2 * a0) / (r1 - r2)
        return ("o", a1, a0 - a1, r1, r2)

    def hazard(self, t):
        tt = _as_array(t)
        hs = self.equilibrium
        c = self._constants
        if c[0] == "u":
            _, A, B, omega = c
            env = np.exp(-0.5 * self.alpha * tt)
            out = hs + env * (A * np.cos(omega * tt) + B * np.sin(omega * tt))
        elif c[0] == "c":
            _, A, B = c
            out = hs + (A + B * tt) * np.exp(-0.5 * self.alpha * tt)
        else:
            _, A, B, r1, r2 = c
            out = hs + A * np.exp(r1 * tt) + B * np.exp(r2 * tt)
        return _scalar_like(t, out)

    def cumulative_hazard(self, t):
        tt = _as_array(t)
        hs = self.equilibrium
        c = self._constants
        if c[0] == "u":
            _, A, B, omega = c
            half = 0.5 * self.alpha
            env = np.exp(-half * tt)
            cos_, sin_ = np.cos(omega * tt), np.sin(omega * tt)
            out = (
                hs * tt
                + (A / self.beta) * (half + env * (-half * cos_ + omega * sin_))
                + (B / self.beta) * (omega + env * (-half * sin_ - omega * cos_))
            )
        elif c[0] == "c":
            _, A, B = c
            a = 0.5 * self.alpha
            env = np.exp(-a * tt)
            out = hs * tt + A * (1.0 - env) / a + B * (1.0 - (1.0 + a * tt) * env) / (a * a)
        else:
            _, A, B, r1, r2 = c
            out = hs * tt + A * np.expm1(r1 * tt) / r1 + B * np.expm1(r2 * tt) / r2
        return _scalar_like(t, out)

    def hazard_and_cumhaz(self, t):
        tt = _as_array(t)
        hs = self.equilibrium
        c = self._constants
        if c[0] == "u":
            _, A, B, omega = c
            half = 0.5 * self.alpha
            env = np.exp(-half * tt)
            cos_, sin_ = np.cos(omega * tt), np.sin(omega * tt)
            h = hs + env * (A * cos_ + B * sin_)
            H = (
                hs * tt
                + (A / self.beta) * (half + env * (-half * cos_ + omega * sin_))
                + (B / self.beta) * (omega + env * (-half * sin_ - omega * cos_))
            )
            return _scalar_like(t, h), _scalar_like(t, H)
        return self.hazard(t), self.cumulative_hazard(t)

    def _phi_partials(self, h, v):
        return -self.beta, -self.alpha

    def mgf_domain_bound(self):
        return self.equilibrium

    def _transient_envelope(self, t):
        c = self._constants
        if c[0] == "u":
            _, A, B, _ = c
            return math.hypot(A, B) * np.exp(-0.5 * self.alpha * _as_array(t))
        if c[0] == "c":
            _, A, B = c
            tt = _as_array(t)
            return (abs(A) + abs(B) * tt) * np.exp(-0.5 * self.alpha * tt)
        _, A, B, r1, r2 = c
        tt = _as_array(t)
        return abs(A) * np.exp(r1 * tt) + abs(B) * np.exp(r2 * tt)

    def positive_hazard(self):
        """Exact check of the transient minimum.

        For a decaying oscillation every trough is shallower than the one
        before, so the infimum over t > 0 is the first trough; the aperiodic
        regimes have at most one interior stationary point.  h(0)=0 with a
        positive approach afterwards is an admissible start.
        """
        hs = self.equilibrium
        c = self._constants
        if c[0] == "u":
            _, A, B, omega = c
            amp = math.hypot(A, B)
            if amp <= hs:
                return hs > 0 or amp == 0.0
            a = 0.5 * self.alpha
            phi = math.atan2(B, A)
            psi = math.atan(-a / omega)
            k = math.ceil((-psi - phi) / math.pi)
            if k % 2 == 0:
                k += 1
            t_trough = (psi + k * math.pi + phi) / omega
            if t_trough == 0.0:
                t_trough = (psi + (k + 2) * math.pi + phi) / omega
            depth = amp * math.cos(psi) * math.exp(-a * t_trough)
            return hs - depth > 0.0
        if c[0] == "c":
            _, A, B = c
            a = 0.5 * self.alpha
            if B != 0.0:
                t_star = (B - a * A) / (a * B)
                if t_star > 0.0 and float(self.hazard(t_star)) <= 0.0:
                    return False
            return hs > 0.0 or (A >= 0.0 and B >= 0.0)
        _, A, B, r1, r2 = c
        if A != 0.0 and B != 0.0 and -B * r2 / (A * r1) > 0.0:
            t_star = math.log(-B * r2 / (A * r1)) / (r1 - r2)
            if t_star > 0.0 and float(self.hazard(t_star)) <= 0.0:
                return False
        return hs > 0.0 or (A >= 0.0 and B >= 0.0)


@dataclass(frozen=True)
class PopulationDynamics(HazardModel):
    """Damped second-order logistic hazard: v' = r*h*(1 - h/K) - eta*v.

    No closed form; trajectories come from the RK4 engine.  The dimensionless
    damping ratio zeta = eta/sqrt(r) controls overshoot versus monotone
    approach to the carrying capacity K.
    """

    r: float
    K: float
    eta: float
    h0: float
    v0: float
    family = "popdyn"
    has_closed_form = False

    def __post_init__(self):
        if not (self.r > 0 and self.K > 0 and self.eta > 0 and self.h0 > 0):
            raise InvalidParameterError(
                "population-dynamics hazard needs r, K, eta, h0 all > 0, got "
                f"(r={self.r}, K={self.K}, eta={self.eta}, h0={self.h0})"
            )

    @property
    def zeta(self) -> float:
        return self.eta / math.sqrt(self.r)

    @classmethod
    def from_zeta(cls, r, K, zeta, h0, v0) -> "PopulationDynamics":
        return cls(r=r, K=K, eta=zeta * math.sqrt(r), h0=h0, v0=v0)

    def field(self):
        r, K, eta = self.r, self.K, self.eta
        return lambda state, t: (
            state[1],
            r * state[0] * (1.0 - state[0] / K) - eta * state[1],
        )

    def _phi_partials(self, h, v):
        return self.r * (1.0 - 2.0 * h / self.K), -self.eta

    def mgf_domain_bound(self):
        return self.K

    def positive_hazard(self):
        # no analytic certificate; callers rely on the trajectory flag
        return None


@dataclass(frozen=True)
class Sinusoidal(HazardModel):
    """Perpetual oscillation of amplitude R about the baseline level c."""

    omega: float
    c: float
    h0: float
    v0: float
    family = "sinusoidal"
    has_closed_form = True

    def __post_init__(self):
        if not self.omega > 0:
            raise InvalidParameterError(f"omega must be > 0, got {self.omega}")

    @property
    def amplitude(self) -> float:
        return math.hypot(self.h0 - self.c, self.v0 / self.omega)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def field(self):
        w2, c = self.omega * self.omega, self.c
        return lambda state, t: (state[1], -w2 * (state[0] - c))

    @staticmethod
    def _sinc_dev(x, x2, small):
        """1 - sin(x)/x, series-guarded near 0."""
        safe = np.where(x == 0.0, 1.0, x)
        return np.where(small, x2 / 6.0 - x2 * x2 / 120.0, 1.0 - np.sin(x) / safe)

    @staticmethod
    def _versinc(x, x2, small):
        """(1 - cos(x))/x**2, series-guarded near 0."""
        safe = np.where(x == 0.0, 1.0, x2)
        return np.where(
            small, 0.5 - x2 / 24.0 + x2 * x2 / 720.0, (1.0 - np.cos(x)) / safe
        )

    def hazard(self, t):
        # h0*cos(x) + c*(1-cos(x)) + v0*t*sinc(x): the textbook grouping
        # (h0-c)*cos(x) + c cancels catastrophically for small omega with
        # large baselines, which the optimizers otherwise love to exploit.
        tt = _as_array(t)
        x = self.omega * tt
        x2 = x * x
        small = np.abs(x) < 1e-4
        sinc = 1.0 - self._sinc_dev(x, x2, small)
        out = self.h0 * np.cos(x) + self.c * x2 * self._versinc(x, x2, small) + self.v0 * tt * sinc
        return _scalar_like(t, out)

    def cumulative_hazard(self, t):
        # grouped as h0*t*sinc(x) + c*t*(1 - sinc(x)) + v0*t**2*(1-cos x)/x**2
        tt = _as_array(t)
        w = self.omega
        x = w * tt
        x2 = x * x
        small = np.abs(x) < 1e-4
        sinc_dev = self._sinc_dev(x, x2, small)
        out = (
            self.h0 * tt * (1.0 - sinc_dev)
            + self.c * tt * sinc_dev
            + self.v0 * tt * tt * self._versinc(x, x2, small)
        )
        return _scalar_like(t, out)

    def strictly_positive(self) -> bool:
        """Exact form of the positivity condition c > h0/2 + v0^2/(2*h0*omega^2)."""
        if not self.h0 > 0:
            raise InvalidParameterError(f"positivity condition needs h0 > 0, got {self.h0}")
        w2 = self.omega * self.omega
        return self.c > 0.5 * self.h0 + self.v0 * self.v0 / (2.0 * self.h0 * w2)

    def _phi_partials(self, h, v):
        return -self.omega * self.omega, 0.0

    def mgf_domain_bound(self):
        return self.c

    def positive_hazard(self):
        return self.h0 > 0 and self.strictly_positive()


@dataclass(frozen=True)
class ExpInteraction(HazardModel):
    """Exponential-growth hazard moderated by a quadratic slope interaction.

    v' = alpha*h - beta*v**2.  For beta=0 the system is linear with closed
    forms; when additionally h0 = -v0/sqrt(alpha) the growing mode vanishes,
    H(t) stays bounded and the survival distribution is improper.
    """

    alpha: float
    beta: float
    h0: float
    v0: float
    family = "exp"

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidParameterError(f"alpha must be > 0, got {self.alpha}")
        if self.beta < 0:
            raise InvalidParameterError(f"beta must be >= 0, got {self.beta}")
        if self.beta == 0.0 and self.v0 < 0.0 and self.h0 > 0.0:
            # Snap onto the decaying-mode boundary when the growing mode's
            # coefficient is lost in the rounding of the supplied parameters;
            # otherwise the spurious residual mode explodes downstream.
            root = math.sqrt(self.alpha)
            if abs(self.v0 + self.h0 * root) <= _EXP_BOUNDARY_RTOL * max(
                self.h0 * root, abs(self.v0)
            ):
                object.__setattr__(self, "h0", -self.v0 / root)

    @property
    def has_closed_form(self) -> bool:  # type: ignore[override]
        return self.beta == 0.0

    def _modes(self):
        root = math.sqrt(self.alpha)
        grow = 0.5 * (self.h0 + self.v0 / root)
        decay = 0.5 * (self.h0 - self.v0 / root)
        return root, grow, decay

    def field(self):
        a, b = self.alpha, self.beta
        return lambda state, t: (state[1], a * state[0] - b * state[1] * state[1])

    def hazard(self, t):
        if self.beta != 0.0:
            raise InvalidParameterError("closed form exists only for beta=0")
        root, grow, decay = self._modes()
        tt = _as_array(t)
        out = grow * np.exp(root * tt) + decay * np.exp(-root * tt)
        return _scalar_like(t, out)

    def cumulative_hazard(self, t):
        if self.beta != 0.0:
            raise InvalidParameterError("closed form exists only for beta=0")
        root, grow, decay = self._modes()
        tt = _as_array(t)
        out = (grow / root) * np.expm1(root * tt) - (decay / root) * np.expm1(-root * tt)
        return _scalar_like(t, out)

    def satisfies_positivity(self) -> bool:
        """The beta=0 bound h0 >= |v0|/sqrt(alpha), evaluated exactly."""
        return self.h0 >= abs(self.v0) / math.sqrt(self.alpha)

    def cumhaz_limit(self):
        if self.beta == 0.0:
            root, grow, decay = self._modes()
            if grow == 0.0:
                return decay / root
        return math.inf

    def _phi_partials(self, h, v):
        return self.alpha, -2.0 * self.beta * v

    def mgf_domain_bound(self):
        if self.improper:
            return 0.0
        return math.inf

    def positive_hazard(self):
        if self.beta == 0.0:
            return self.h0 > 0 and self.satisfies_positivity()
        if self.h0 > 0 and self.v0 >= 0:
            # v' = alpha*h - beta*v**2 > 0 whenever v hits 0 with h > 0, so
            # v >= 0 is invariant and h never decreases
            return True
        return None


# --- first-order and delayed logistic comparators -------------------------


def logistic_first_order_hazard(t, r: float, K: float, h0: float):
    """Sigmoid solution of h' = r*h*(1-h/K)."""
    if not (r > 0 and K > 0 and h0 > 0):
        raise InvalidParameterError("logistic hazard needs r, K, h0 > 0")
    tt = _as_array(t)
    out = K * h0 * np.exp(r * tt) / (K + h0 * np.expm1(r * tt))
    return _scalar_like(t, out)


def logistic_first_order_cumhaz(t, r: float, K: float, h0: float):
    if not (r > 0 and K > 0 and h0 > 0):
        raise InvalidParameterError("logistic hazard needs r, K, h0 > 0")
    tt = _as_array(t)
    out = (K / r) * np.log1p(h0 / K * np.expm1(r * tt))
    return _scalar_like(t, out)


def logistic_first_order_solve(r: float, K: float, h0: float, grid: TimeGrid) -> Trajectory:
    """Scalar RK4 for the first-order logistic law, packaged as a Trajectory.

    The v channel carries h' evaluated from the right-hand side.
    """
    if not (r > 0 and K > 0 and h0 > 0):
        raise InvalidParameterError("logistic hazard needs r, K, h0 > 0")
    n, dt, t0 = grid.n_steps, grid.dt, grid.t0
    h = np.empty(n + 1)
    h[0] = h0
    rhs = lambda x: r * x * (1.0 - x / K)
    cur = h0
    for i in range(n):
        k1 = rhs(cur)
        k2 = rhs(cur + 0.5 * dt * k1)
        k3 = rhs(cur + 0.5 * dt * k2)
        k4 = rhs(cur + dt * k3)
        cur = cur + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        h[i + 1] = cur
    v = r * h * (1.0 - h / K)
    neg = np.flatnonzero(h < 0)
    return Trajectory(
        grid=grid,
        h=h,
        v=v,
        H=cumulative_trapezoid(h, dt),
        first_negative_time=(t0 + neg[0] * dt) if neg.size else None,
    )


def delayed_logistic_solve(
    r: float, K: float, tau: float, h0: float, grid: TimeGrid
) -> Trajectory:
    """Fixed-step RK4 for h' = r*h(t)*(1 - h(t-tau)/K).

    Constant pre-history h(t)=h0 for t <= 0.  The lagged value is linearly
    interpolated into the already-computed trajectory, which stays causal as
    long as tau >= dt.
    """
    if not (r > 0 and K > 0 and h0 > 0):
        raise InvalidParameterError("delayed logistic needs r, K, h0 > 0")
    if tau < grid.dt:
        raise InvalidParameterError(f"tau={tau} must be >= dt={grid.dt}")
    n, dt, t0 = grid.n_steps, grid.dt, grid.t0
    h = np.zeros(n + 1)
    h[0] = h0

    def lagged(t: float) -> float:
        tl = t - tau
        if tl <= t0:
            return h0
        x = (tl - t0) / dt
        i0 = int(x)
        frac = x - i0
        if frac == 0.0:
            return h[i0]
        return h[i0] * (1.0 - frac) + h[i0 + 1] * frac

    for i in range(n):
        t = t0 + i * dt
        cur = h[i]
        k1 = r * cur * (1.0 - lagged(t) / K)
        lag_mid = lagged(t + 0.5 * dt)
        k2 = r * (cur + 0.5 * dt * k1) * (1.0 - lag_mid / K)
        k3 = r * (cur + 0.5 * dt * k2) * (1.0 - lag_mid / K)
        k4 = r * (cur + dt * k3) * (1.0 - lagged(t + dt) / K)
        h[i + 1] = cur + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    v = np.empty(n + 1)
    for i in range(n + 1):
        v[i] = r * h[i] * (1.0 - lagged(t0 + i * dt) / K)
    neg = np.flatnonzero(h < 0)
    return Trajectory(
        grid=grid,
        h=h,
        v=v,
        H=cumulative_trapezoid(h, dt),
        first_negative_time=(t0 + neg[0] * dt) if neg.size else None,
    )


# --- Weibull / log-normal reference families -------------------------------


@dataclass(frozen=True)
class WeibullParams:
    """Hazard beta*kappa*t**(kappa-1)."""

    beta: float
    kappa: float

    def __post_init__(self):
        if not (self.beta > 0 and self.kappa > 0):
            raise InvalidParameterError("Weibull needs beta>0 and kappa>0")

    def hazard(self, t):
        tt = _as_array(t)
        return _scalar_like(t, self.beta * self.kappa * tt ** (self.kappa - 1.0))

    def cumulative_hazard(self, t):
        tt = _as_array(t)
        return _scalar_like(t, self.beta * tt**self.kappa)


@dataclass(frozen=True)
class LogNormalParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidParameterError("log-normal needs sigma>0")

    def hazard(self, t):
        from scipy.stats import norm

        tt = _as_array(t)
        z = (np.log(tt) - self.mu) / self.sigma
        logpdf = -np.log(tt * self.sigma) - 0.5 * z * z - 0.5 * math.log(2.0 * math.pi)
        return _scalar_like(t, np.exp(logpdf - norm.logsf(z)))

    def cumulative_hazard(self, t):
        from scipy.stats import norm

        tt = _as_array(t)
        z = (np.log(tt) - self.mu) / self.sigma
        return _scalar_like(t, -norm.logsf(z))


def riccati_autonomy(model: WeibullParams | LogNormalParams, t: float, h: float | None = None) -> float:
    """Autonomy coefficient a(t) of the scalar Riccati hazard equation.

    For the Weibull family a depends on the hazard level only (autonomous,
    kappa != 1); for the log-normal it depends on t alone (non-autonomous).
    """
    if isinstance(model, WeibullParams):
        if model.kappa == 1.0:
            raise InvalidParameterError("kappa=1 is the exponential case; a(t) is undefined")
        if h is None or h <= 0:
            raise InvalidParameterError("Weibull autonomy coefficient needs h > 0")
        return (model.kappa - 1.0) * (model.beta * model.kappa / h) ** (
            1.0 / (model.kappa - 1.0)
        ) - h
    if not t > 0:
        raise InvalidParameterError("log-normal autonomy coefficient needs t > 0")
    s2 = model.sigma * model.sigma
    return (model.mu - s2 - math.log(t)) / (s2 * t)


# --- construction from flat key-value parameter sets -----------------------

MODEL_CLASSES = {
    "constant": ConstantHazard,
    "damped": DampedOscillator,
    "popdyn": PopulationDynamics,
    "sinusoidal": Sinusoidal,
    "exp": ExpInteraction,
}

MODEL_FIELDS = {
    "constant": ("c",),
    "damped": ("alpha", "beta", "gamma", "h0", "v0"),
    "popdyn": ("r", "K", "eta", "h0", "v0"),
    "sinusoidal": ("omega", "c", "h0", "v0"),
    "exp": ("alpha", "beta", "h0", "v0"),
}


def model_from_params(family: str, **params: float) -> HazardModel:
    """Build a model from key-value parameters, names as in the field tables."""
    if family not in MODEL_CLASSES:
        raise InvalidParameterError(
            f"unknown family {family!r}; expected one of {sorted(MODEL_CLASSES)}"
        )
    expected = MODEL_FIELDS[family]
    if family == "popdyn" and "zeta" in params and "eta" not in params:
        params = dict(params)
        params["eta"] = params.pop("zeta") * math.sqrt(params["r"])
    missing = [k for k in expected if k not in params]
    extra = [k for k in params if k not in expected]
    if missing or extra:
        raise InvalidParameterError(
            f"family {family!r} takes {expected}; missing {missing}, unexpected {extra}"
        )
    return MODEL_CLASSES[family](**{k: float(v) for k, v in params.items()})


# Named parameter sets used by the curve-emission command and the test
# suite; horizons chosen to cover the interesting transients.
PRESETS: dict[str, dict] = {
    "damped-regimes": {
        "horizon": 30.0,
        "members": {
            "underdamped": ("damped", dict(alpha=0.5, beta=1.0, gamma=0.2, h0=0.1, v0=0.3)),
            "critical": ("damped", dict(alpha=2.0, beta=1.0, gamma=0.2, h0=0.1, v0=0.3)),
            "overdamped": ("damped", dict(alpha=3.0, beta=1.0, gamma=0.2, h0=0.1, v0=0.3)),
        },
    },
    "logistic-comparison": {
        "horizon": 40.0,
        "members": {
            "first-order": ("logistic1", dict(r=0.8, K=1.0, h0=0.1)),
            "delayed": ("logistic-delay", dict(r=0.8, K=1.0, tau=1.2, h0=0.1)),
            "second-order": ("popdyn", dict(r=0.8, K=1.0, zeta=0.5, h0=0.1, v0=0.2)),
        },
    },
    "sinusoidal-baseline": {
        "horizon": 30.0,
        "members": {
            "sinusoidal": ("sinusoidal", dict(omega=0.2 * math.pi, c=0.6, h0=0.1, v0=0.2)),
        },
    },
    "exp-interaction": {
        "horizon": 20.0,
        "members": {
            "growth": ("exp", dict(alpha=0.1, beta=0.0, h0=0.4, v0=0.1)),
            "interaction": ("exp", dict(alpha=0.1, beta=0.1, h0=0.4, v0=0.1)),
        },
    },
    "exp-improper-boundary": {
        "horizon": 60.0,
        "members": {
            "boundary": ("exp", dict(alpha=0.1, beta=0.0, h0=0.31623, v0=-0.1)),
        },
    },
}
