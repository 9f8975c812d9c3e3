"""Exact revealed-preference analysis of finite choice data."""

from ._rational import format_rational, to_rational
from .acyclicity import (
    ClosureResult,
    Verdict,
    ViolationWitness,
    check_gapp,
    check_garp,
    check_garp_like,
    check_p_acyclic,
    check_sarp,
    check_warp,
    check_warp_dataset,
    transitive_closure,
)
from .afriat import (
    AfriatNumbers,
    PiecewiseUtility,
    QuasilinearParams,
    afriat_numbers,
    afriat_utility,
    check_differentiable_precondition,
    evaluate_utility,
    fm_numbers,
    fm_utility,
    quasilinear_params,
    sarp_numbers,
    strict_concave_utility,
)
from .choice import (
    ChoiceDataset,
    ChoiceObservation,
    Preorder,
    build_order_relations,
    check_congruence,
    check_order_garp,
    fosd_preorder,
    geq_preorder,
    identity_preorder,
    impatience_preorder,
    order_rationalize,
    validate_preorder,
)
from .dataset import (
    ExpenditureTable,
    PurchaseDataset,
    WeakStrictRelation,
    build_price_prefs,
    build_rp,
    build_rp_at_e,
    build_rp_nonlinear,
    build_s,
)
from .efficiency import CceiResult, check_egarp, compute_ccei, efficiency_breakpoints
from .errors import (
    AxiomViolationError,
    DimensionError,
    InputError,
    InvalidDataError,
    MalformedRelationError,
    RevPrefError,
    VerificationError,
)
from .generate import GeneratorConfig, generate
from .mechanism import (
    LinearContract,
    MechanismDataset,
    check_implementable,
    mech_relations,
    synthesize_linear_contract,
    verify_contract,
)

__all__ = [
    "AfriatNumbers",
    "AxiomViolationError",
    "CceiResult",
    "ChoiceDataset",
    "ChoiceObservation",
    "ClosureResult",
    "DimensionError",
    "ExpenditureTable",
    "GeneratorConfig",
    "InputError",
    "InvalidDataError",
    "LinearContract",
    "MalformedRelationError",
    "MechanismDataset",
    "PiecewiseUtility",
    "Preorder",
    "PurchaseDataset",
    "QuasilinearParams",
    "RevPrefError",
    "Verdict",
    "VerificationError",
    "ViolationWitness",
    "WeakStrictRelation",
    "afriat_numbers",
    "afriat_utility",
    "build_order_relations",
    "build_price_prefs",
    "build_rp",
    "build_rp_at_e",
    "build_rp_nonlinear",
    "build_s",
    "check_congruence",
    "check_differentiable_precondition",
    "check_egarp",
    "check_gapp",
    "check_garp",
    "check_garp_like",
    "check_implementable",
    "check_order_garp",
    "check_p_acyclic",
    "check_sarp",
    "check_warp",
    "check_warp_dataset",
    "compute_ccei",
    "efficiency_breakpoints",
    "evaluate_utility",
    "fm_numbers",
    "fm_utility",
    "format_rational",
    "fosd_preorder",
    "generate",
    "geq_preorder",
    "identity_preorder",
    "impatience_preorder",
    "mech_relations",
    "order_rationalize",
    "quasilinear_params",
    "sarp_numbers",
    "strict_concave_utility",
    "synthesize_linear_contract",
    "to_rational",
    "transitive_closure",
    "validate_preorder",
    "verify_contract",
]
