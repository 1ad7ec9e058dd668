"""Survival analysis with hazard functions governed by second-order ODEs.

Solve the hazard dynamics (numerically or in closed form), simulate
right-censored event times by cumulative-hazard inversion, and run
likelihood-based or MCMC inference on the resulting datasets.
"""

from .errors import (
    ConfigError,
    DataFormatError,
    HorizonExhaustedError,
    IntegrationBlowupError,
    InvalidParameterError,
    OdeHazardError,
    RangeError,
)
from .fitting import FAMILIES, FitResult, bic, fit_lognormal, fit_weibull, mle_fit
from .initial import InitEstimate, init_from_survival
from .likelihood import log_likelihood
from .mcmc import ChainConfig, PosteriorChain, PriorSpec, log_posterior, posterior_summary, run_chain
from .mgf import MgfResult, mgf, mgf_sweep
from .models import (
    ConstantHazard,
    DampedOscillator,
    DampingKind,
    DampingRegime,
    ExpInteraction,
    HazardModel,
    LogNormalParams,
    PopulationDynamics,
    Sinusoidal,
    WeibullParams,
    classify_damping,
    delayed_logistic_solve,
    logistic_first_order_cumhaz,
    logistic_first_order_hazard,
    logistic_first_order_solve,
    model_from_params,
    riccati_autonomy,
)
from .ode import (
    State2,
    TimeGrid,
    Trajectory,
    cumulative_trapezoid,
    integrate,
    interp_linear,
    rk4_step,
)
from .sampling import (
    InversionConfig,
    SurvivalDataset,
    simulate_dataset,
    simulate_event_time,
    tune_cmax,
    uniform_stream,
)
from .study import StudyResult, monte_carlo_study

__version__ = "0.1.0"
