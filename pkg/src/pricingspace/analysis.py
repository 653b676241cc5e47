"""The public analysis operations over parsed pricings.

Seven core operations (cardinal, filter, subscriptions, subscription_cost,
valid_pricing, valid_subscription, optimum) plus a lint suite for common
modeling mistakes, dead-element detection, and per-pricing statistics.
Everything here is a pure function; lint takes ``now`` as an argument so
results never depend on the wall clock.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum

from . import engine, filters
from .model import Price, Pricing, Subscription, SubscriptionValuation, ValueType


class LintCode(str, Enum):
    LINKED_FEATURE_MISMATCH = "LINKED_FEATURE_MISMATCH"
    NUMERIC_FEATURE_SUSPECT = "NUMERIC_FEATURE_SUSPECT"
    FUTURE_CREATION_DATE = "FUTURE_CREATION_DATE"
    NO_NUMERIC_PRICE = "NO_NUMERIC_PRICE"
    DEAD_ADDON = "DEAD_ADDON"
    DEAD_PLAN = "DEAD_PLAN"
    DUPLICATE_PLAN_VALUATION = "DUPLICATE_PLAN_VALUATION"


#: Severity is a fixed function of the finding code.
LINT_SEVERITY = {
    LintCode.LINKED_FEATURE_MISMATCH: "ERROR",
    LintCode.NUMERIC_FEATURE_SUSPECT: "WARNING",
    LintCode.FUTURE_CREATION_DATE: "ERROR",
    LintCode.NO_NUMERIC_PRICE: "WARNING",
    LintCode.DEAD_ADDON: "WARNING",
    LintCode.DEAD_PLAN: "WARNING",
    LintCode.DUPLICATE_PLAN_VALUATION: "WARNING",
}


@dataclass(frozen=True)
class LintFinding:
    code: LintCode
    subject: str
    message: str

    @property
    def severity(self) -> str:
        return LINT_SEVERITY[self.code]


@dataclass(frozen=True)
class PricingStats:
    features: int
    plans: int
    add_ons: int
    configuration_space_size: int


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    violations: tuple[engine.Violation, ...] = ()
    notes: tuple[str, ...] = ()


def cardinal(pricing: Pricing) -> int:
    """Size of the configuration space (number of valid subscriptions)."""
    return engine.count(engine.ConstraintProblem(pricing))


def filter(pricing: Pricing, expr: filters.FilterExpr | str) -> engine.ConstraintProblem:
    """Restrict the configuration space with a filter; composes with the
    counting/enumeration/optimization operations."""
    if isinstance(expr, str):
        expr = filters.parse_filter(expr, pricing)
    return engine.ConstraintProblem(pricing, expr)


def subscriptions(
    pricing: Pricing, expr: filters.FilterExpr | str | None = None
) -> list[tuple[Subscription, SubscriptionValuation]]:
    """Every valid subscription (optionally filtered), with its valuation."""
    problem = filter(pricing, expr) if expr is not None else engine.ConstraintProblem(pricing)
    return list(engine.enumerate_solutions(problem))


def subscription_cost(pricing: Pricing, subscription: Subscription) -> Price:
    return engine.subscription_cost(pricing, subscription)


def optimum(
    pricing: Pricing,
    expr: filters.FilterExpr | str | None = None,
    direction: engine.Direction = engine.Direction.MIN,
) -> engine.Optimum:
    problem = filter(pricing, expr) if expr is not None else engine.ConstraintProblem(pricing)
    return engine.optimize(problem, direction)


def valid_pricing(pricing: Pricing) -> ValidityReport:
    """True iff the pricing passes its structural constraints and at least
    one subscription exists.

    A satisfiable pricing can still contain add-ons that no subscription can
    ever include (e.g. an add-on whose dependency chain reaches an add-on
    that excludes it); those are legal here and surfaced as notes, with full
    detection in :func:`dead_elements`.
    """
    violations = engine.check_pricing(pricing)
    if violations:
        return ValidityReport(False, tuple(violations))
    has_solution = next(
        iter(engine.enumerate_solutions(engine.ConstraintProblem(pricing),
                                        require_valid_pricing=False)),
        None,
    )
    notes = tuple(_relation_conflicts(pricing))
    if has_solution is None:
        return ValidityReport(False, notes=notes + ("no valid subscription exists",))
    return ValidityReport(True, notes=notes)


def valid_subscription(pricing: Pricing, subscription: Subscription) -> ValidityReport:
    """True iff the subscription is a member of the pricing's configuration space."""
    violations = list(engine.check_pricing(pricing))
    violations.extend(engine.check_subscription(pricing, subscription))
    return ValidityReport(not violations, tuple(violations))


def lint(pricing: Pricing, now: date) -> list[LintFinding]:
    """Check for the common modeling mistakes; deterministic order."""
    findings: list[LintFinding] = []
    for violation in engine.check_pricing(pricing):
        if violation.constraint is engine.ConstraintId.LINKED_FEATURES:
            plan_name, limit_name = violation.subjects[:2]
            findings.append(LintFinding(
                LintCode.LINKED_FEATURE_MISMATCH, f"{plan_name}/{limit_name}",
                violation.message))
    for feature in pricing.features:
        if feature.value_type is ValueType.NUMERIC:
            findings.append(LintFinding(
                LintCode.NUMERIC_FEATURE_SUSPECT, feature.name,
                f"feature '{feature.name}' holds a number; it likely models a usage limit"))
    if pricing.created_at is not None and pricing.created_at > now:
        findings.append(LintFinding(
            LintCode.FUTURE_CREATION_DATE, pricing.saas_name,
            f"createdAt {pricing.created_at.isoformat()} is after {now.isoformat()}"))
    if pricing.plans and all(p.price.is_contact for p in pricing.plans):
        findings.append(LintFinding(
            LintCode.NO_NUMERIC_PRICE, pricing.saas_name,
            "every plan requires contacting sales; no price is published"))
    return findings


def dead_elements(pricing: Pricing) -> list[LintFinding]:
    """Plans/add-ons appearing in no valid subscription, and plan pairs that
    resolve to identical values but different prices.

    Runs a full enumeration of the configuration space (exponential in the
    add-on count), which is fine at catalog scale.
    """
    findings: list[LintFinding] = []
    seen_plans: set[str] = set()
    seen_add_ons: set[str] = set()
    problem = engine.ConstraintProblem(pricing)
    for subscription, _ in engine.enumerate_solutions(problem, require_valid_pricing=False):
        if subscription.plan is not None:
            seen_plans.add(subscription.plan)
        seen_add_ons.update(subscription.add_ons)
    for plan in pricing.plans:
        if plan.name not in seen_plans:
            findings.append(LintFinding(
                LintCode.DEAD_PLAN, plan.name,
                f"plan '{plan.name}' appears in no valid subscription"))
    for add_on in pricing.add_ons:
        if add_on.name not in seen_add_ons:
            findings.append(LintFinding(
                LintCode.DEAD_ADDON, add_on.name,
                f"add-on '{add_on.name}' appears in no valid subscription"))

    plan_valuations: list[tuple[str, Price, dict, dict]] = []
    for plan in pricing.plans:
        valuation = engine.valuate(pricing, Subscription(plan.name))
        plan_valuations.append(
            (plan.name, plan.price, valuation.feature_values, valuation.usage_limit_values))
    for i, (name_a, price_a, features_a, limits_a) in enumerate(plan_valuations):
        for name_b, price_b, features_b, limits_b in plan_valuations[i + 1:]:
            if features_a == features_b and limits_a == limits_b and price_a != price_b:
                findings.append(LintFinding(
                    LintCode.DUPLICATE_PLAN_VALUATION, f"{name_a}/{name_b}",
                    f"plans '{name_a}' and '{name_b}' resolve to identical features and "
                    f"usage limits but cost {price_a} vs {price_b}"))
    return findings


def stats(pricing: Pricing) -> PricingStats:
    return PricingStats(
        features=len(pricing.features),
        plans=len(pricing.plans),
        add_ons=len(pricing.add_ons),
        configuration_space_size=cardinal(pricing),
    )


def _relation_conflicts(pricing: Pricing):
    """Add-ons whose own dependency closure contains an exclusion, so they
    can never be part of any subscription."""
    for add_on in pricing.add_ons:
        closure = {add_on.name}
        frontier = [add_on]
        while frontier:
            current = frontier.pop()
            for name in current.depends_on:
                if name in closure:
                    continue
                closure.add(name)
                dep = pricing.add_ons_by_name.get(name)
                if dep is not None:
                    frontier.append(dep)
        conflicted = any(
            other in pricing.add_ons_by_name
            and name != other
            and (other in pricing.add_ons_by_name[name].excludes)
            for name in closure
            for other in closure
        )
        if conflicted:
            yield (f"add-on '{add_on.name}' can never be subscribed: its dependency "
                   "closure contains mutually exclusive add-ons")
