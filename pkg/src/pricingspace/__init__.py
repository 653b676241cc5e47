"""pricingspace: constraint-based analysis of machine-readable SaaS pricings.

Parse Pricing2Yaml documents, enumerate and count the configuration space
of valid subscriptions, optimize subscription cost under filters, and lint
pricings for common modeling mistakes.
"""

from .analysis import (
    LintCode,
    LintFinding,
    PricingStats,
    ValidityReport,
    cardinal,
    dead_elements,
    filter,
    lint,
    optimum,
    stats,
    subscription_cost,
    subscriptions,
    valid_pricing,
    valid_subscription,
)
from .engine import (
    ConflictingOverrideError,
    ConstraintId,
    ConstraintProblem,
    Direction,
    InvalidPricingError,
    NoPricedSolutionError,
    NoSolutionError,
    Optimum,
    UnknownNameError,
    Violation,
    check_pricing,
    check_subscription,
    count,
    enumerate_solutions,
    optimize,
    valuate,
)
from .filters import (
    And,
    Compare,
    FilterError,
    FilterExpr,
    IsTrue,
    Not,
    Or,
    parse_filter,
)
from .model import (
    UNLIMITED,
    AddOn,
    BuildDiagnostic,
    BuildError,
    Feature,
    Ordering,
    Plan,
    Price,
    Pricing,
    PricingError,
    Subscription,
    SubscriptionValuation,
    UsageLimit,
    ValueType,
    build_pricing,
    compare_values,
    values_equal,
)
from .parser import (
    ParseError,
    ParseResult,
    Severity,
    SyntaxDiagnostic,
    load_pricing,
    parse_pricing,
    serialize_pricing,
)

__version__ = "0.1.0"

__all__ = [
    "AddOn", "And", "BuildDiagnostic", "BuildError", "Compare",
    "ConflictingOverrideError", "ConstraintId", "ConstraintProblem",
    "Direction", "Feature", "FilterError", "FilterExpr", "InvalidPricingError",
    "IsTrue", "LintCode", "LintFinding", "NoPricedSolutionError",
    "NoSolutionError", "Not", "Optimum", "Or", "Ordering", "ParseError",
    "ParseResult", "Plan", "Price", "Pricing", "PricingError", "PricingStats",
    "Severity", "Subscription", "SubscriptionValuation", "SyntaxDiagnostic",
    "UNLIMITED", "UnknownNameError", "UsageLimit", "ValidityReport",
    "ValueType", "Violation", "build_pricing", "cardinal", "check_pricing",
    "check_subscription", "compare_values", "count", "dead_elements",
    "enumerate_solutions", "filter", "lint", "load_pricing", "optimize",
    "optimum", "parse_filter", "parse_pricing", "serialize_pricing", "stats",
    "subscription_cost", "subscriptions", "valid_pricing",
    "valid_subscription", "valuate", "values_equal",
]
