"""Globally optimal entropy-constrained quantization of binary-input channel outputs."""

__version__ = "0.1.0"

from .channel import (
    BinaryInputChannel,
    SortedChannel,
    channel_from_likelihood,
    load_channel,
    random_channel,
    range_mass,
    sort_by_posterior,
    validate_channel,
)
from .continuous import (
    ContinuousChannelSpec,
    discretize,
    fig2_spec,
    gaussian,
    is_monotone_lr,
    mixture,
    posterior_ratio,
    scalar_threshold_search,
    uniform,
)
from .cost import CostBreakdown, evaluate_quantizer, prior_entropy, single_cluster_cost
from .dp import DpTables, objective_curve_in_k, solve
from .oracles import (
    OptimalityReport,
    brute_force_contiguous,
    brute_force_unrestricted,
    check_optimality_condition,
    lemma1_distance,
    sample_stochastic_objective,
)
from .quantizer import ThresholdQuantizer
