"""Calculus over the dual real numbers."""

from .dual_algebra import (
    EPS,
    ONE,
    ZERO,
    AlgebraClass,
    DualReal,
    add,
    classify,
    format_dual,
    inverse,
    mul,
    norm,
    parse_dual,
    scale,
)
from .dual_function import (
    ComponentPair,
    components_of,
    eval_lifted,
    evaluate,
    symbolic_derivative,
)
from .dual_order import (
    Neighborhood,
    OrderKind,
    Relation,
    TypedInterval,
    classify_pair,
    contains,
    greater,
    in_neighborhood,
    make_interval,
)
from .differentiation import (
    DerivativeReport,
    derivative_at,
    type_theta_derivative_at,
    verify_limit_definition,
)
from .errors import (
    DomainError,
    DualCalcError,
    InvalidEpsilon,
    InvalidIntervalError,
    MaxDepthExceeded,
    ParseError,
    PreconditionFailed,
    ZeroDivisorError,
)
from .expr import parse, to_text
from .integration import (
    DarbouxSums,
    IntegralEstimate,
    Partition,
    check_integrability,
    darboux_sums,
    estimate_integral,
    refine,
    uniform_partition,
    verify_additivity,
    verify_ftc_part1,
    verify_ftc_part2,
    verify_linearity,
    verify_monotonicity,
)

__version__ = "0.1.0"

__all__ = [
    "EPS",
    "ONE",
    "ZERO",
    "AlgebraClass",
    "DualReal",
    "add",
    "classify",
    "format_dual",
    "inverse",
    "mul",
    "norm",
    "parse_dual",
    "scale",
    "ComponentPair",
    "components_of",
    "eval_lifted",
    "evaluate",
    "symbolic_derivative",
    "Neighborhood",
    "OrderKind",
    "Relation",
    "TypedInterval",
    "classify_pair",
    "contains",
    "greater",
    "in_neighborhood",
    "make_interval",
    "DerivativeReport",
    "derivative_at",
    "type_theta_derivative_at",
    "verify_limit_definition",
    "DomainError",
    "DualCalcError",
    "InvalidEpsilon",
    "InvalidIntervalError",
    "MaxDepthExceeded",
    "ParseError",
    "PreconditionFailed",
    "ZeroDivisorError",
    "parse",
    "to_text",
    "DarbouxSums",
    "IntegralEstimate",
    "Partition",
    "check_integrability",
    "darboux_sums",
    "estimate_integral",
    "refine",
    "uniform_partition",
    "verify_additivity",
    "verify_ftc_part1",
    "verify_ftc_part2",
    "verify_linearity",
    "verify_monotonicity",
]
