"""cesarolab: a laboratory for rate propagation from sequences to running means.

Core question: when a random sequence converges at a rate, does its running
(Cesaro) average inherit that rate?  The library provides

* exact Cesaro arithmetic (:mod:`cesarolab.core_math`),
* closed-form tail bounds with fully derived constants (:mod:`cesarolab.bounds`),
* seedable generators for the sequence families of interest
  (:mod:`cesarolab.sequences`),
* a reproducible parallel Monte Carlo engine (:mod:`cesarolab.engine`),
* two online estimators whose errors decompose into a martingale average
  plus a Cesaro remainder (:mod:`cesarolab.online`), and
* a config-driven batch runner (:mod:`cesarolab.cli`).
"""

__version__ = "0.1.0"

from .core_math import block_mean, cesaro_mean, scaled_cesaro
from .bounds import (
    DerivedConstants,
    NormalApprox,
    TailBoundParams,
    alpha_exponent,
    berry_esseen_margin,
    cesaro_tail_bound,
    derive_constants,
    exp_poly_integral,
    exp_poly_integral_bound,
    normal_cdf,
    premise_tail,
    uniform_tail_bound,
    validate_params,
)
from .sequences import (
    BorelCantelliParams,
    CounterexampleSpec,
    PowerLawParams,
    Seed,
    SequenceSpec,
    SupermartingaleParams,
    UnsupportedFamilyError,
    block_bernoulli_prob,
    sample_borel_cantelli,
    sample_counterexample,
    sample_exp_tail,
    sample_path,
    sample_power_law,
    sample_supermartingale,
)
from .engine import (
    ConfigError,
    ExperimentResult,
    MonteCarloConfig,
    ResultRow,
    TailEstimate,
    aui_tail_diagnostic,
    bound_vs_empirical,
    counterexample_sweep,
    estimate_scaled_l1,
    estimate_tail_prob,
    path_sup_diagnostic,
    supermartingale_condition_check,
    wilson_interval,
)
from .online import (
    BayesRiskDGP,
    BayesRiskExperiment,
    EstimatorSchedule,
    MarDGP,
    MarMeanExperiment,
    NuisanceSchedule,
    azuma_bound,
    run_bayes_risk,
    run_mar_mean,
    sine_bayes_dgp,
    smooth_mar_dgp,
)
