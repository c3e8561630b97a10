"""Weighted normal logic programs over pluggable truth-value lattices."""

from .lattice import (
    AdjointPair,
    DomainMismatchError,
    EiParams,
    Interval,
    LatticeKind,
    LatticeSignature,
    TruthValue,
    Unit,
    UnknownOperatorError,
    agg_max,
    agg_mean,
    agg_min,
    bottom,
    ei_product,
    ei_residuum,
    get_signature,
    godel_and,
    godel_imp,
    leq,
    lukasiewicz_and,
    lukasiewicz_imp,
    negate,
    product_and,
    product_imp,
    sup_value,
    top,
)
from .syntax import (
    Agg,
    BodyExpr,
    Conn,
    Const,
    NegProp,
    ParseError,
    Program,
    Prop,
    Rule,
    body_atoms,
    detect_kind,
    load_program,
    parse_program,
    render_program,
    render_rule,
)
from .semantics import (
    Interpretation,
    SymbolMismatchError,
    UnknownSymbolError,
    evaluate,
    interp_leq,
    interpretation_from_dict,
    interpretation_to_dict,
    is_model,
    rule_value,
    satisfies,
)
from .engine import (
    DEFAULT_CONFIG,
    FixpointConfig,
    FixpointTrace,
    NonPositiveProgramError,
    StabilityCheck,
    StableSearchResult,
    check_stable,
    default_starts,
    is_stable,
    iterate_tp,
    least_fixpoint,
    partition,
    reduct,
    stable_search,
    sup_norm,
    tp,
)
from .uniqueness import (
    CertificateReport,
    HeadBound,
    IneligibleProgramError,
    RuleCertificate,
    UncertifiedProgramError,
    bound_interpretation,
    certify,
    eligibility_violations,
    eligible,
    empirical_contraction_check,
    head_weight_bounds,
    rule_lambdas,
    solve_unique,
    solve_unique_traced,
)
from .oracle import (
    BudgetExceededError,
    Cluster,
    GridSpec,
    brute_force_residuum,
    brute_force_stable,
    minimality_check,
)

__version__ = "0.1.0"
