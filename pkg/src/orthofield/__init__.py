"""Simulation and verification toolkit for orthomartingale difference
random fields: partial-sum processes, Holder/Schauder statistics, and
deviation bounds with numerically traced constants."""

from .bounds import (
    BoundConstants,
    BoundValue,
    ExponentFit,
    I_integral,
    LargeDeviationValue,
    TailModel,
    base_constants,
    bounded_by,
    bounded_rhs,
    cond_wip_check,
    empirical_tail,
    exponent_fit,
    gaussian_product,
    lemma3_moment_sum,
    lemma_svarying_partial_sum,
    recurse_constants,
    shape_fn,
    tail_eval,
    thm1_rhs,
    thm2_envelope_fit,
    thm2_rhs,
    unit_tail,
    weibull_envelope,
)
from .errors import (
    DegenerateModulusError,
    InsufficientDataError,
    InvalidInputError,
    InvalidRangeError,
    InvalidSiteError,
    NoParentsError,
    NotTranslatableError,
    NumericFailureError,
    OrthofieldError,
    TooLargeError,
)
from .generators import (
    GeneratorSpec,
    OrthomartingaleResult,
    SeedSpec,
    decoupled_product,
    decoupled_product_kernel,
    generate,
    generate_batch,
    iid_gaussian,
    iid_rademacher,
    iid_weibull,
    moving_average,
    orthomartingale_check,
    product_factor_streams,
    product_rademacher,
    shift_field,
    spec_from_json,
    spec_to_json,
    spec_variance,
    weibull_tail_sample,
    zero_field,
)
from .harness import (
    ExperimentConfig,
    Report,
    brownian_sheet_sim,
    config_from_dict,
    config_from_json,
    config_to_json,
    constants_experiment,
    exponent_fit_experiment,
    fdd_compare,
    holder_norm_of_Wn,
    induction_step_check,
    lemma_checks,
    mc_deviation,
    run_experiment,
    sheet_cov_check,
    tightness_experiment,
    verify_bound,
)
from .holder import (
    DyadicSite,
    Modulus,
    SeqNormResult,
    SlowlyVarying,
    TightnessResult,
    const_factor,
    dyadic_sites,
    full_grid_count,
    in_level_set,
    iter_log,
    level_set_count,
    log_power,
    modulus,
    modulus_eval,
    modulus_from_dict,
    process_evaluator,
    pyramid_eval,
    schauder_coeff,
    seq_norm,
    tightness_sum_estimate,
    vpm,
)
from .lattice import (
    LatticeArray,
    dominated,
    max_abs_prefix,
    max_cells,
    padded_prefix,
    prefix_sum,
    rect_sum,
    validate_index,
    validate_shape,
    volume,
)
from .stats import wilson_interval
from .sumprocess import (
    Lemma11Result,
    PartialSumProcess,
    delta_q,
    eval_W,
    eval_W_batch,
    from_field,
    grid_value,
    lemma11_check,
    lipschitz_ratio,
    overlap_volume,
)

__version__ = "0.1.0"
