"""codedetect: decide which of two convolutional codes produced a noisy bit stream.

The package models the clean and noise-affected encoder output as Markov
chains over sliding codeword windows, computes exact sequence likelihoods
with a scaled forward recursion over the code trellis, decides between the
two candidate codes with a likelihood ratio test, and quantifies the
asymptotic decision error through Chernoff error exponents of the two
chains.  A Monte Carlo harness reproduces error-probability sweeps and
exports labeled datasets for downstream classifiers.
"""

from .channel import ChannelParams, RngStream, bsc_apply, generate_sample, random_message
from .codes import (
    AssumptionReport,
    ConvCode,
    SectionCode,
    Trellis,
    WeightEnumerator,
    codes_equivalent,
    encode,
    parse_octal_generators,
    section_code,
    trellis,
    validate_assumptions,
    weight_enumerator,
)
from .detector import (
    BcjrLikelihood,
    LikelihoodResult,
    bcjr_log_likelihood,
    brute_force_log_likelihood,
    lrt_decide,
)
from .estimator import LikelihoodRatioDetector
from .exponent import (
    ChernoffMatrix,
    ExponentResult,
    chernoff_matrix,
    error_exponent,
    lower_bound_rows,
    lower_bound_theorem1,
    spectral_radius,
)
from .harness import (
    ExperimentConfig,
    ExperimentRecord,
    estimate_empirical_exponent,
    export_dataset,
    run_montecarlo,
    wilson_interval,
    write_records_csv,
)
from .markov import (
    ClosedFormRow,
    TransitionMatrix,
    closed_form_p,
    max_entry_difference,
    noise_free_transition,
    noisy_transition_exact,
    noisy_transition_factored,
    stationary_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "AssumptionReport",
    "BcjrLikelihood",
    "ChannelParams",
    "ChernoffMatrix",
    "ClosedFormRow",
    "ConvCode",
    "ExperimentConfig",
    "ExperimentRecord",
    "ExponentResult",
    "LikelihoodRatioDetector",
    "LikelihoodResult",
    "RngStream",
    "SectionCode",
    "TransitionMatrix",
    "Trellis",
    "WeightEnumerator",
    "bcjr_log_likelihood",
    "brute_force_log_likelihood",
    "bsc_apply",
    "chernoff_matrix",
    "closed_form_p",
    "codes_equivalent",
    "encode",
    "error_exponent",
    "estimate_empirical_exponent",
    "export_dataset",
    "generate_sample",
    "lower_bound_rows",
    "lower_bound_theorem1",
    "lrt_decide",
    "max_entry_difference",
    "noise_free_transition",
    "noisy_transition_exact",
    "noisy_transition_factored",
    "parse_octal_generators",
    "random_message",
    "run_montecarlo",
    "section_code",
    "spectral_radius",
    "stationary_distribution",
    "trellis",
    "validate_assumptions",
    "weight_enumerator",
    "wilson_interval",
    "write_records_csv",
]
