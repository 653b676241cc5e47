"""Constraint core: validity checks, valuation, enumeration, counting, optimization.

A pricing's configuration space is the set of (plan, add-on set) pairs that
satisfy the validity constraints; two subscriptions with identical resolved
values still count separately. Enumeration is deterministic: plans in
declaration order, add-on subsets in binary-counting order over declaration
order (first declared add-on toggles fastest). The search prunes subsets
that already violate availability or exclusion, so full spaces up to the
tens of thousands enumerate in well under a second.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Iterator

from . import filters
from .model import (
    AddOn,
    Plan,
    Price,
    Pricing,
    PricingError,
    Subscription,
    SubscriptionValuation,
    UNLIMITED,
    Value,
    ValueType,
)


class ConstraintId(str, Enum):
    """The seven validity constraints; the first three apply to a pricing,
    the remaining four to a subscription."""

    NOT_EMPTY = "NOT_EMPTY"
    LINKED_FEATURES = "LINKED_FEATURES"
    ADDON_AVAILABLE_SOME_PLAN = "ADDON_AVAILABLE_SOME_PLAN"
    SUBSCRIPTION_NOT_EMPTY = "SUBSCRIPTION_NOT_EMPTY"
    ADDON_AVAILABLE_FOR_PLAN = "ADDON_AVAILABLE_FOR_PLAN"
    DEPENDENCY = "DEPENDENCY"
    EXCLUSION = "EXCLUSION"


@dataclass(frozen=True)
class Violation:
    constraint: ConstraintId
    subjects: tuple[str, ...]
    message: str

    @property
    def subject(self) -> str:
        return "/".join(self.subjects)


@dataclass(frozen=True)
class ConstraintProblem:
    """A pricing paired with an optional filter; its solutions are the
    (filtered) configuration space."""

    pricing: Pricing
    filter: filters.FilterExpr | None = None


class InvalidPricingError(PricingError):
    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in violations))


class UnknownNameError(PricingError):
    pass


class ConflictingOverrideError(PricingError):
    pass


class NoSolutionError(PricingError):
    pass


class NoPricedSolutionError(PricingError):
    pass


def check_pricing(pricing: Pricing) -> list[Violation]:
    """Evaluate the three pricing-validity constraints; empty means valid."""
    violations: list[Violation] = []
    if not pricing.plans and not pricing.add_ons:
        violations.append(Violation(
            ConstraintId.NOT_EMPTY, (pricing.saas_name,),
            "pricing must contain at least one plan or add-on"))
    for plan in pricing.plans:
        for limit in pricing.usage_limits:
            value = plan.usage_limit_values.get(limit.name, limit.default)
            if _is_zeroish(value):
                continue
            for feature_name in sorted(limit.linked_features):
                feature = pricing.features_by_name.get(feature_name)
                if feature is None:
                    continue
                feature_value = plan.feature_values.get(feature_name, feature.default)
                if feature_value is False:
                    violations.append(Violation(
                        ConstraintId.LINKED_FEATURES, (plan.name, limit.name, feature_name),
                        f"plan '{plan.name}' grants '{limit.name}' = {value} while linked "
                        f"feature '{feature_name}' is not included"))
    if pricing.plans and pricing.add_ons:
        plan_names = set(pricing.plans_by_name)
        for add_on in pricing.add_ons:
            if not (add_on.available_for & plan_names):
                violations.append(Violation(
                    ConstraintId.ADDON_AVAILABLE_SOME_PLAN, (add_on.name,),
                    f"add-on '{add_on.name}' is not available for any plan"))
    return violations


def check_subscription(pricing: Pricing, subscription: Subscription) -> list[Violation]:
    """Evaluate the four subscription-validity constraints; empty means valid."""
    plan = _resolve_plan(pricing, subscription)
    selected = _resolve_add_ons(pricing, subscription)

    violations: list[Violation] = []
    if plan is None and not selected:
        violations.append(Violation(
            ConstraintId.SUBSCRIPTION_NOT_EMPTY, (),
            "subscription must include a plan or at least one add-on"))
    elif plan is None and pricing.plans:
        violations.append(Violation(
            ConstraintId.SUBSCRIPTION_NOT_EMPTY, (),
            "pricing defines plans; the subscription must select one"))

    if plan is not None:
        for add_on in selected:
            if plan.name not in add_on.available_for:
                violations.append(Violation(
                    ConstraintId.ADDON_AVAILABLE_FOR_PLAN, (add_on.name, plan.name),
                    f"add-on '{add_on.name}' is not available for plan '{plan.name}'"))
    chosen = {a.name for a in selected}
    for add_on in selected:
        for needed in sorted(add_on.depends_on):
            if needed not in chosen:
                violations.append(Violation(
                    ConstraintId.DEPENDENCY, (needed, add_on.name),
                    f"add-on '{add_on.name}' requires '{needed}'"))
        for banned in sorted(add_on.excludes):
            if banned in chosen:
                violations.append(Violation(
                    ConstraintId.EXCLUSION, (add_on.name, banned),
                    f"add-ons '{add_on.name}' and '{banned}' exclude each other"))
    return violations


def valuate(pricing: Pricing, subscription: Subscription) -> SubscriptionValuation:
    """Resolve every feature and usage-limit value plus the cost of a subscription.

    Booleans are the disjunction of the plan value and add-on grants. A
    numeric/text feature overridden by selected add-ons takes that override
    (numeric conflicts resolve to the maximum; differing text overrides are
    an error). Usage limits take the largest add-on override when one
    exists, then add every selected extension; UNLIMITED absorbs addition.
    """
    plan = _resolve_plan(pricing, subscription)
    selected = _resolve_add_ons(pricing, subscription)

    feature_values: dict[str, Value] = {}
    for feature in pricing.features:
        base = plan.feature_values.get(feature.name, feature.default) if plan else feature.default
        overrides = [a.feature_values[feature.name] for a in selected if feature.name in a.feature_values]
        if feature.value_type is ValueType.BOOLEAN:
            value: Value = bool(base) or any(overrides)
        elif overrides:
            if feature.value_type is ValueType.NUMERIC:
                value = _numeric_max(overrides)
            else:
                distinct = set(overrides)
                if len(distinct) > 1:
                    raise ConflictingOverrideError(
                        f"add-ons set conflicting values for feature '{feature.name}': "
                        + ", ".join(sorted(map(repr, distinct))))
                value = overrides[0]
        else:
            value = base
        feature_values[feature.name] = value

    usage_limit_values: dict[str, Value] = {}
    for limit in pricing.usage_limits:
        base = plan.usage_limit_values.get(limit.name, limit.default) if plan else limit.default
        overrides = [a.usage_limit_values[limit.name] for a in selected if limit.name in a.usage_limit_values]
        if overrides:
            base = _numeric_max(overrides) if limit.value_type is ValueType.NUMERIC else any(overrides)
        if limit.value_type is ValueType.NUMERIC:
            extension = sum(
                (a.usage_limit_extensions[limit.name] for a in selected
                 if limit.name in a.usage_limit_extensions),
                Decimal(0),
            )
            if base is not UNLIMITED and extension:
                base = base + extension
        usage_limit_values[limit.name] = base

    cost = plan.price if plan is not None else Price(Decimal(0))
    for add_on in selected:
        cost = cost + add_on.price
    return SubscriptionValuation(feature_values, usage_limit_values, cost)


def subscription_cost(pricing: Pricing, subscription: Subscription) -> Price:
    """Plan price plus selected add-on prices; contact anywhere makes it contact."""
    plan = _resolve_plan(pricing, subscription)
    cost = plan.price if plan is not None else Price(Decimal(0))
    for add_on in _resolve_add_ons(pricing, subscription):
        cost = cost + add_on.price
    return cost


def enumerate_solutions(
    problem: ConstraintProblem, *, require_valid_pricing: bool = True
) -> Iterator[tuple[Subscription, SubscriptionValuation]]:
    """Yield every solution of the constraint problem in deterministic order."""
    pricing = problem.pricing
    if require_valid_pricing:
        violations = check_pricing(pricing)
        if violations:
            raise InvalidPricingError(violations)
    if pricing.plans:
        for plan in pricing.plans:
            yield from _plan_solutions(pricing, plan, problem.filter)
    elif pricing.add_ons:
        yield from _plan_solutions(pricing, None, problem.filter)


def _plan_solutions(pricing: Pricing, plan: Plan | None, expr: filters.FilterExpr | None):
    add_ons = pricing.add_ons
    chosen: list[AddOn] = []

    def admissible(candidate: AddOn) -> bool:
        if plan is not None and plan.name not in candidate.available_for:
            return False
        for other in chosen:
            if candidate.name in other.excludes or other.name in candidate.excludes:
                return False
        return True

    def descend(index: int):
        if index < 0:
            if plan is None and not chosen:
                return
            names = {a.name for a in chosen}
            if any(not (a.depends_on <= names) for a in chosen):
                return
            subscription = Subscription(plan.name if plan else None, frozenset(names))
            valuation = valuate(pricing, subscription)
            if expr is None or filters.evaluate(
                    expr, valuation.feature_values, valuation.usage_limit_values):
                yield subscription, valuation
            return
        candidate = add_ons[index]
        # later-declared add-ons are decided first, so the first-declared one
        # toggles fastest: exactly binary-counting order
        if not any(candidate.name in other.depends_on for other in chosen):
            yield from descend(index - 1)
        if admissible(candidate):
            chosen.append(candidate)
            yield from descend(index - 1)
            chosen.pop()

    yield from descend(len(add_ons) - 1)


def count(problem: ConstraintProblem) -> int:
    """Number of solutions; uses the closed form when no filter, dependency,
    or exclusion constrains the space (it provably equals enumeration then)."""
    pricing = problem.pricing
    violations = check_pricing(pricing)
    if violations:
        raise InvalidPricingError(violations)
    unconstrained = problem.filter is None and not any(
        a.depends_on or a.excludes for a in pricing.add_ons)
    if unconstrained:
        if pricing.plans:
            return sum(
                2 ** sum(1 for a in pricing.add_ons if plan.name in a.available_for)
                for plan in pricing.plans
            )
        return 2 ** len(pricing.add_ons) - 1 if pricing.add_ons else 0
    return sum(1 for _ in enumerate_solutions(problem, require_valid_pricing=False))


class Direction(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class Optimum:
    """All solutions attaining the extreme cost, plus the solutions whose
    contact-sales cost kept them out of the objective."""

    direction: Direction
    cost: Price
    subscriptions: tuple[Subscription, ...]
    indeterminate: tuple[Subscription, ...] = ()


def optimize(problem: ConstraintProblem, direction: Direction) -> Optimum:
    """Find the cheapest/most expensive solutions by exact amount; ties all returned."""
    best: Decimal | None = None
    winners: list[Subscription] = []
    indeterminate: list[Subscription] = []
    found = False
    for subscription, valuation in enumerate_solutions(problem):
        found = True
        amount = valuation.cost.amount
        if amount is None:
            indeterminate.append(subscription)
            continue
        if best is None or (amount < best if direction is Direction.MIN else amount > best):
            best = amount
            winners = [subscription]
        elif amount == best:
            winners.append(subscription)
    if not found:
        raise NoSolutionError("the constraint problem has no solution")
    if best is None:
        raise NoPricedSolutionError("every solution has a contact-sales cost")
    return Optimum(direction, Price(best), tuple(winners), tuple(indeterminate))


def _resolve_plan(pricing: Pricing, subscription: Subscription) -> Plan | None:
    if subscription.plan is None:
        return None
    plan = pricing.plans_by_name.get(subscription.plan)
    if plan is None:
        raise UnknownNameError(f"unknown plan '{subscription.plan}'")
    return plan


def _resolve_add_ons(pricing: Pricing, subscription: Subscription) -> list[AddOn]:
    unknown = sorted(subscription.add_ons - set(pricing.add_ons_by_name))
    if unknown:
        raise UnknownNameError(f"unknown add-on '{unknown[0]}'")
    return [a for a in pricing.add_ons if a.name in subscription.add_ons]


def _numeric_max(values: list[Value]) -> Value:
    if any(v is UNLIMITED for v in values):
        return UNLIMITED
    return max(values)  # type: ignore[type-var]


def _is_zeroish(value: Value) -> bool:
    if value is UNLIMITED:
        return False
    if isinstance(value, bool):
        return not value
    if isinstance(value, (int, Decimal)):
        return value == 0
    return False
