"""Strategyproof fitting mechanisms with advice and the audit machinery
that measures their consistency/robustness tradeoffs empirically."""

from .model import (
    BINARY_DOMAIN,
    REALS,
    AgentDataset,
    ClassMismatchError,
    ConstantChoice,
    ConstantClass,
    Instance,
    InvalidInstanceError,
    LabeledPoint,
    LabelingChoice,
    LabelingLottery,
    LabelingsClass,
    LinearChoice,
    LinearClass,
    ValueDomain,
    WeightedSample,
    advice_error_constant,
    augmented_risk,
    c0c1_class,
    constant_instance,
    erm_constant,
    frac,
    global_risk,
    linear_instance,
    optimal_constant_set,
    personal_risk,
    shared_binary_instance,
    weighted_median_bounds,
)
from .regression import (
    DegenerateLinearInstance,
    MappedLinearInstance,
    PfaConfig,
    advice_error_linear,
    advice_error_mapped,
    agent_projection,
    confidence_weight,
    lpfa,
    map_to_constant_instance,
    optimal_slope_set,
    pfa,
)
from .classification import (
    BinaryPreferenceSummary,
    TwoLabelingReduction,
    pfa_two_labeling,
    preference_summary,
    sample_outcome,
    srda,
    srda_two_labeling,
    two_labeling_reduce,
)
from .hardness import (
    VOTING_LABELINGS,
    VOTING_TABLE,
    ZBlock,
    consistency_ceiling,
    gen_randomized_lb,
    gen_S,
    gen_S_chain,
    gen_S_final,
    gen_S_linear,
    gen_voting_table,
    lb_parameters,
    r_bound,
    voting_instance,
)
from .audit import (
    AllBinaryVectors,
    AuditableMechanism,
    AuditReport,
    GridLabels,
    MechanismFamily,
    ProjectedConstant,
    SpaceTooLargeError,
    Violation,
    advice_grid,
    approximation_ratio,
    brute_force_optimal_risk,
    check_group_strategyproof,
    check_strategyproof,
    consistency_robustness_sweep,
    error_interpolation_check,
    lpfa_family,
    lpfa_mechanism,
    mean_mechanism,
    optimal_functions,
    pfa_family,
    pfa_mechanism,
    pfa_two_labeling_family,
    pfa_two_labeling_mechanism,
    srda_family,
    srda_mechanism,
    srda_two_labeling_family,
    srda_two_labeling_mechanism,
)
from .learning import (
    AgentModel,
    composition_experiment,
    required_sample_size,
    risk_gap_experiment,
    sample_instance,
    statistical_global_risk,
    statistical_optimal_constant,
    statistical_personal_risk,
    sup_global_gap,
    sup_personal_gap,
)
from .formats import (
    InstanceParseError,
    dump_instance,
    load_instance,
    parse_instance,
    serialize_instance,
)

__version__ = "0.1.0"
