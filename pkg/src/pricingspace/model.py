"""In-memory model of a SaaS pricing: features, usage limits, plans, and add-ons.

Values are exact: numeric data is ``decimal.Decimal`` (never binary floats),
and an unbounded limit is the ``UNLIMITED`` singleton, which compares above
every number. All model objects are immutable after construction; referential
integrity across the whole document is checked by :func:`build_pricing`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal, InvalidOperation
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Union


class PricingError(Exception):
    """Base class for all errors raised by this package."""


class ValueType(str, Enum):
    BOOLEAN = "BOOLEAN"
    NUMERIC = "NUMERIC"
    TEXT = "TEXT"


class _UnlimitedType:
    """Singleton marker for a usage limit without an upper bound."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNLIMITED"

    def __reduce__(self):
        return (_UnlimitedType, ())


UNLIMITED = _UnlimitedType()

#: A pricing value: bool, exact decimal (int accepted as a convenience),
#: text, or the UNLIMITED marker.
Value = Union[bool, int, Decimal, str, _UnlimitedType]

#: Maximum fractional digits stored for numeric values / money amounts.
MAX_VALUE_PLACES = 4
MAX_PRICE_PLACES = 2


class Ordering(Enum):
    """Result of comparing two values.

    Numbers and UNLIMITED form a total order; booleans and text support
    equality only (UNEQUAL); values of different kinds are INCOMPARABLE.
    """

    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    UNEQUAL = "unequal"
    INCOMPARABLE = "incomparable"


def value_type_of(value: Value) -> ValueType:
    """Return the declared-type tag a value belongs to.

    UNLIMITED counts as NUMERIC. Binary floats are rejected outright so
    inexact data can never enter the model.
    """
    if isinstance(value, bool):
        return ValueType.BOOLEAN
    if isinstance(value, (int, Decimal)) or value is UNLIMITED:
        return ValueType.NUMERIC
    if isinstance(value, str):
        return ValueType.TEXT
    raise TypeError(f"unsupported value {value!r} of type {type(value).__name__}")


def decimal_places(d: Decimal) -> int:
    exponent = d.as_tuple().exponent
    return max(0, -exponent) if isinstance(exponent, int) else 0


def as_decimal(value: object, *, max_places: int = MAX_VALUE_PLACES) -> Decimal:
    """Convert an int/str/Decimal to an exact Decimal, bounding fraction digits."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"not an exact numeric value: {value!r}")
    if isinstance(value, int):
        value = Decimal(value)
    elif isinstance(value, str):
        try:
            value = Decimal(value)
        except InvalidOperation as exc:
            raise ValueError(f"not a decimal number: {value!r}") from exc
    if not isinstance(value, Decimal) or not value.is_finite():
        raise ValueError(f"not an exact numeric value: {value!r}")
    if decimal_places(value) > max_places:
        raise ValueError(f"more than {max_places} fractional digits: {value}")
    return value


def compare_values(a: Value, b: Value) -> Ordering:
    """Compare two values; see :class:`Ordering` for the semantics."""
    tag_a = value_type_of(a)
    tag_b = value_type_of(b)
    if tag_a != tag_b:
        return Ordering.INCOMPARABLE
    if tag_a is ValueType.NUMERIC:
        if a is UNLIMITED and b is UNLIMITED:
            return Ordering.EQUAL
        if a is UNLIMITED:
            return Ordering.GREATER
        if b is UNLIMITED:
            return Ordering.LESS
        if a == b:
            return Ordering.EQUAL
        return Ordering.LESS if a < b else Ordering.GREATER
    return Ordering.EQUAL if a == b else Ordering.UNEQUAL


def values_equal(a: Value, b: Value) -> bool:
    return compare_values(a, b) is Ordering.EQUAL


@dataclass(frozen=True)
class Price:
    """A plan or add-on price: a non-negative amount, or "contact sales".

    ``amount is None`` means the price is not published and the vendor must
    be contacted; adding anything to a contact price stays contact.
    """

    amount: Decimal | None = None

    @classmethod
    def of(cls, value: object) -> "Price":
        return cls(as_decimal(value, max_places=MAX_PRICE_PLACES))

    @classmethod
    def contact(cls) -> "Price":
        return cls(None)

    @property
    def is_contact(self) -> bool:
        return self.amount is None

    def __add__(self, other: "Price") -> "Price":
        if self.amount is None or other.amount is None:
            return Price(None)
        return Price(self.amount + other.amount)

    def __str__(self) -> str:
        return "contact" if self.amount is None else format(self.amount, "f")


@dataclass(frozen=True)
class Feature:
    """A distinctive characteristic a subscription may or may not include."""

    name: str
    value_type: ValueType
    default: Value
    description: str | None = None


@dataclass(frozen=True)
class UsageLimit:
    """A quantified cap attached to one or more features."""

    name: str
    value_type: ValueType
    default: Value
    unit: str = ""
    linked_features: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "linked_features", frozenset(self.linked_features))


@dataclass(frozen=True)
class Plan:
    """A base subscription tier; exactly one is chosen when plans exist."""

    name: str
    price: Price
    unit: str | None = None
    feature_values: Mapping[str, Value] = field(default_factory=dict)
    usage_limit_values: Mapping[str, Value] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "feature_values", dict(self.feature_values))
        object.__setattr__(self, "usage_limit_values", dict(self.usage_limit_values))


@dataclass(frozen=True)
class AddOn:
    """An optional purchasable extra, constrained by availability/dependencies."""

    name: str
    price: Price
    available_for: frozenset[str] = frozenset()
    depends_on: frozenset[str] = frozenset()
    excludes: frozenset[str] = frozenset()
    feature_values: Mapping[str, Value] = field(default_factory=dict)
    usage_limit_values: Mapping[str, Value] = field(default_factory=dict)
    usage_limit_extensions: Mapping[str, Decimal] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "available_for", frozenset(self.available_for))
        object.__setattr__(self, "depends_on", frozenset(self.depends_on))
        object.__setattr__(self, "excludes", frozenset(self.excludes))
        object.__setattr__(self, "feature_values", dict(self.feature_values))
        object.__setattr__(self, "usage_limit_values", dict(self.usage_limit_values))
        object.__setattr__(self, "usage_limit_extensions", dict(self.usage_limit_extensions))


@dataclass(frozen=True)
class Pricing:
    """A complete pricing document.

    Declaration order of features, limits, plans and add-ons is preserved;
    enumeration order downstream depends on it.
    """

    saas_name: str
    features: tuple[Feature, ...] = ()
    usage_limits: tuple[UsageLimit, ...] = ()
    plans: tuple[Plan, ...] = ()
    add_ons: tuple[AddOn, ...] = ()
    syntax_version: str = ""
    version: str = ""
    created_at: date | None = None
    currency: str = "USD"
    extensions: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "usage_limits", tuple(self.usage_limits))
        object.__setattr__(self, "plans", tuple(self.plans))
        object.__setattr__(self, "add_ons", tuple(self.add_ons))
        object.__setattr__(self, "extensions", dict(self.extensions))

    @cached_property
    def features_by_name(self) -> dict[str, Feature]:
        return {f.name: f for f in self.features}

    @cached_property
    def usage_limits_by_name(self) -> dict[str, UsageLimit]:
        return {u.name: u for u in self.usage_limits}

    @cached_property
    def plans_by_name(self) -> dict[str, Plan]:
        return {p.name: p for p in self.plans}

    @cached_property
    def add_ons_by_name(self) -> dict[str, AddOn]:
        return {a.name: a for a in self.add_ons}

    def feature(self, name: str) -> Feature:
        return self.features_by_name[name]

    def usage_limit(self, name: str) -> UsageLimit:
        return self.usage_limits_by_name[name]

    def plan(self, name: str) -> Plan:
        return self.plans_by_name[name]

    def add_on(self, name: str) -> AddOn:
        return self.add_ons_by_name[name]

    def declared_type(self, identifier: str) -> tuple[str, ValueType]:
        """Resolve a bare identifier to ("feature"|"usageLimit", value type).

        Feature and usage-limit namespaces are disjoint, so the lookup is
        unambiguous. Raises KeyError for unknown identifiers.
        """
        feature = self.features_by_name.get(identifier)
        if feature is not None:
            return "feature", feature.value_type
        limit = self.usage_limits_by_name.get(identifier)
        if limit is not None:
            return "usageLimit", limit.value_type
        raise KeyError(identifier)


@dataclass(frozen=True)
class Subscription:
    """One configuration: an optional plan plus a set of add-ons."""

    plan: str | None = None
    add_ons: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "add_ons", frozenset(self.add_ons))


@dataclass(frozen=True)
class SubscriptionValuation:
    """Resolved per-subscription value of every feature and usage limit."""

    feature_values: Mapping[str, Value]
    usage_limit_values: Mapping[str, Value]
    cost: Price


@dataclass(frozen=True)
class BuildDiagnostic:
    """One structural violation found while assembling a Pricing.

    ``path`` addresses the offending location in document terms, e.g.
    ``("addOns", "extraSeats", "availableFor", 0)``; the parser maps paths
    back to source positions.
    """

    code: str
    message: str
    path: tuple = ()
    subject: str = ""


class BuildError(PricingError):
    """Raised by build_pricing; carries every violation found, not just the first."""

    def __init__(self, diagnostics: list[BuildDiagnostic]):
        self.diagnostics = list(diagnostics)
        summary = "; ".join(d.message for d in self.diagnostics[:3])
        if len(self.diagnostics) > 3:
            summary += f"; ... ({len(self.diagnostics)} violations)"
        super().__init__(summary)


UNKNOWN_REFERENCE = "UNKNOWN_REFERENCE"
DUPLICATE_NAME = "DUPLICATE_NAME"
TYPE_MISMATCH = "TYPE_MISMATCH"
INVALID_VALUE = "INVALID_VALUE"
INVALID_PRICE = "INVALID_PRICE"
SELF_REFERENCE = "SELF_REFERENCE"
CONFLICTING_RELATION = "CONFLICTING_RELATION"


def build_pricing(
    *,
    saas_name: str,
    features: Iterable[Feature] = (),
    usage_limits: Iterable[UsageLimit] = (),
    plans: Iterable[Plan] = (),
    add_ons: Iterable[AddOn] = (),
    syntax_version: str = "",
    version: str = "",
    created_at: date | None = None,
    currency: str = "USD",
    extensions: Mapping[str, object] | None = None,
) -> Pricing:
    """Assemble a Pricing, enforcing every structural invariant.

    All violations are collected and raised together in a BuildError, so a
    document with several dangling references reports each of them.
    """
    pricing = Pricing(
        saas_name=saas_name,
        features=tuple(features),
        usage_limits=tuple(usage_limits),
        plans=tuple(plans),
        add_ons=tuple(add_ons),
        syntax_version=syntax_version,
        version=version,
        created_at=created_at,
        currency=currency,
        extensions=extensions or {},
    )
    diagnostics = validate_structure(pricing)
    if diagnostics:
        raise BuildError(diagnostics)
    return pricing


def validate_structure(pricing: Pricing) -> list[BuildDiagnostic]:
    """Collect every structural/referential violation in a candidate Pricing."""
    diags: list[BuildDiagnostic] = []

    def report(code: str, message: str, path: tuple, subject: str = "") -> None:
        diags.append(BuildDiagnostic(code, message, path, subject))

    _check_unique_names(pricing, report)
    feature_names = {f.name for f in pricing.features}
    limit_names = {u.name for u in pricing.usage_limits}
    plan_names = {p.name for p in pricing.plans}
    add_on_names = {a.name for a in pricing.add_ons}

    for f in pricing.features:
        _check_value(f.default, f.value_type, ("features", f.name, "defaultValue"), f.name, report)
    for u in pricing.usage_limits:
        if u.value_type is ValueType.TEXT:
            report(
                INVALID_VALUE,
                f"usage limit '{u.name}' must be NUMERIC or BOOLEAN",
                ("usageLimits", u.name, "valueType"),
                u.name,
            )
        else:
            _check_value(u.default, u.value_type, ("usageLimits", u.name, "defaultValue"), u.name, report)
        for linked in sorted(u.linked_features):
            if linked not in feature_names:
                report(
                    UNKNOWN_REFERENCE,
                    f"usage limit '{u.name}' links unknown feature '{linked}'",
                    ("usageLimits", u.name, "linkedFeatures", linked),
                    u.name,
                )

    for p in pricing.plans:
        base = ("plans", p.name)
        _check_price(p.price, base + ("price",), p.name, report)
        _check_overrides(pricing, p.feature_values, p.usage_limit_values, base, p.name, report,
                         feature_names, limit_names)

    for a in pricing.add_ons:
        base = ("addOns", a.name)
        _check_price(a.price, base + ("price",), a.name, report)
        for plan_name in sorted(a.available_for):
            if plan_name not in plan_names:
                report(
                    UNKNOWN_REFERENCE,
                    f"add-on '{a.name}' lists unknown plan '{plan_name}' in availableFor",
                    base + ("availableFor", plan_name),
                    a.name,
                )
        for rel_field, rel_names in (("dependsOn", a.depends_on), ("excludes", a.excludes)):
            for other in sorted(rel_names):
                if other == a.name:
                    report(
                        SELF_REFERENCE,
                        f"add-on '{a.name}' references itself in {rel_field}",
                        base + (rel_field, other),
                        a.name,
                    )
                elif other not in add_on_names:
                    report(
                        UNKNOWN_REFERENCE,
                        f"add-on '{a.name}' references unknown add-on '{other}' in {rel_field}",
                        base + (rel_field, other),
                        a.name,
                    )
        for common in sorted(a.depends_on & a.excludes):
            report(
                CONFLICTING_RELATION,
                f"add-on '{a.name}' both depends on and excludes '{common}'",
                base + ("dependsOn", common),
                a.name,
            )
        _check_overrides(pricing, a.feature_values, a.usage_limit_values, base, a.name, report,
                         feature_names, limit_names)
        for limit_name, amount in a.usage_limit_extensions.items():
            path = base + ("usageLimitsExtensions", limit_name)
            if limit_name not in limit_names:
                report(
                    UNKNOWN_REFERENCE,
                    f"add-on '{a.name}' extends unknown usage limit '{limit_name}'",
                    path,
                    a.name,
                )
                continue
            limit = next(u for u in pricing.usage_limits if u.name == limit_name)
            if limit.value_type is not ValueType.NUMERIC:
                report(
                    TYPE_MISMATCH,
                    f"add-on '{a.name}' extends non-numeric usage limit '{limit_name}'",
                    path,
                    a.name,
                )
                continue
            try:
                amount = as_decimal(amount)
            except ValueError as exc:
                report(INVALID_VALUE, f"extension of '{limit_name}': {exc}", path, a.name)
                continue
            if amount < 0:
                report(
                    INVALID_VALUE,
                    f"extension of '{limit_name}' must be non-negative, got {amount}",
                    path,
                    a.name,
                )
    return diags


def _check_unique_names(pricing: Pricing, report) -> None:
    for section, names in (
        ("features", [f.name for f in pricing.features]),
        ("usageLimits", [u.name for u in pricing.usage_limits]),
        ("plans", [p.name for p in pricing.plans]),
        ("addOns", [a.name for a in pricing.add_ons]),
    ):
        seen: set[str] = set()
        for name in names:
            if name in seen:
                report(DUPLICATE_NAME, f"duplicate {section} name '{name}'", (section, name), name)
            seen.add(name)
    feature_names = {f.name for f in pricing.features}
    for u in pricing.usage_limits:
        if u.name in feature_names:
            report(
                DUPLICATE_NAME,
                f"'{u.name}' names both a feature and a usage limit",
                ("usageLimits", u.name),
                u.name,
            )


def _check_value(value: Value, declared: ValueType, path: tuple, subject: str, report) -> None:
    try:
        tag = value_type_of(value)
    except TypeError as exc:
        report(INVALID_VALUE, str(exc), path, subject)
        return
    if tag is not declared:
        report(
            TYPE_MISMATCH,
            f"value {value!r} is {tag.value}, declared type is {declared.value}",
            path,
            subject,
        )
        return
    if tag is ValueType.NUMERIC and value is not UNLIMITED:
        try:
            as_decimal(value)
        except ValueError as exc:
            report(INVALID_VALUE, str(exc), path, subject)


def _check_price(price: Price, path: tuple, subject: str, report) -> None:
    if not isinstance(price, Price):
        report(INVALID_PRICE, f"not a price: {price!r}", path, subject)
        return
    if price.amount is None:
        return
    if price.amount < 0:
        report(INVALID_PRICE, f"price must be non-negative, got {price.amount}", path, subject)
    elif decimal_places(price.amount) > MAX_PRICE_PLACES:
        report(
            INVALID_PRICE,
            f"price has more than {MAX_PRICE_PLACES} fractional digits: {price.amount}",
            path,
            subject,
        )


def _check_overrides(
    pricing: Pricing,
    feature_values: Mapping[str, Value],
    usage_limit_values: Mapping[str, Value],
    base: tuple,
    subject: str,
    report,
    feature_names: set[str],
    limit_names: set[str],
) -> None:
    for name, value in feature_values.items():
        path = base + ("features", name)
        if name not in feature_names:
            report(UNKNOWN_REFERENCE, f"'{subject}' overrides unknown feature '{name}'", path, subject)
            continue
        _check_value(value, pricing.feature(name).value_type, path, subject, report)
    for name, value in usage_limit_values.items():
        path = base + ("usageLimits", name)
        if name not in limit_names:
            report(UNKNOWN_REFERENCE, f"'{subject}' overrides unknown usage limit '{name}'", path, subject)
            continue
        limit = pricing.usage_limits_by_name.get(name)
        if limit is not None and limit.value_type is not ValueType.TEXT:
            _check_value(value, limit.value_type, path, subject, report)
