"""Scale-free adversarial bandits with log-barrier AdaFTRL."""

from .adversaries import AdversaryConfig, generate, norms
from .bandit import (
    BanditState,
    Exp3State,
    Exploration,
    ScaleViolationError,
    exp3_round,
    iw_estimate,
    play_round,
    sampling_distribution,
    update_gamma,
)
from .ftrl import (
    FtrlState,
    adaftrl_step,
    run_adaftrl,
    verify_adaftrl_bound,
    verify_regret_equality,
    verify_summation_lemma,
)
from .harness import Policy, RegretSummary, emit, run_experiment
from .potential import (
    EXPONENTIAL,
    EXPONENTIAL_CERT,
    LOG_BARRIER,
    LOG_BARRIER_CERT,
    LowerBoundCertificate,
    Potential,
    bregman,
    dual_bregman,
    local_norm_lower_bound,
    mixed_bregman,
)
from .simplex import CumulativeLoss, ftrl_iterate, mixability_gap, solve_lambda

__version__ = "0.1.0"
