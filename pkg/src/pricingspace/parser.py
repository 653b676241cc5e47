"""Reader and writer for Pricing2Yaml documents.

Parsing is total: every input yields either a Pricing (possibly with
warnings) or at least one ERROR diagnostic carrying a source location.
Numeric scalars are read from their raw text into ``Decimal`` so no value
ever passes through binary floating point. The serializer emits a canonical
document (fixed key order, 2-space indent, LF) that is bit-stable for a
given Pricing and round-trips to a structurally equal one.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal, InvalidOperation
from enum import Enum

import yaml

from .model import (
    MAX_PRICE_PLACES,
    UNLIMITED,
    AddOn,
    BuildError,
    Feature,
    Plan,
    Price,
    Pricing,
    PricingError,
    UsageLimit,
    Value,
    ValueType,
    _UnlimitedType,
    as_decimal,
    build_pricing,
)


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"


@dataclass(frozen=True)
class SyntaxDiagnostic:
    """One parse/validation finding with its position in the source text."""

    severity: Severity
    code: str
    message: str
    line: int = 1
    column: int = 1


@dataclass
class ParseResult:
    """Outcome of parsing one document.

    ``pricing`` is present iff no ERROR diagnostic was produced; warnings
    may accompany a successful parse.
    """

    pricing: Pricing | None
    diagnostics: list[SyntaxDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pricing is not None

    @property
    def errors(self) -> list[SyntaxDiagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]

    @property
    def warnings(self) -> list[SyntaxDiagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.WARNING]


class ParseError(PricingError):
    """Raised by load_pricing when the document has ERROR diagnostics."""

    def __init__(self, diagnostics: list[SyntaxDiagnostic]):
        self.diagnostics = list(diagnostics)
        errors = [d for d in diagnostics if d.severity is Severity.ERROR]
        head = errors[0] if errors else diagnostics[0]
        super().__init__(f"line {head.line}: {head.message}")


YAML_SYNTAX = "YAML_SYNTAX"
EMPTY_DOCUMENT = "EMPTY_DOCUMENT"
DUPLICATE_KEY = "DUPLICATE_KEY"
MISSING_KEY = "MISSING_KEY"
TYPE_MISMATCH = "TYPE_MISMATCH"
INVALID_VALUE = "INVALID_VALUE"
INVALID_DATE = "INVALID_DATE"
INVALID_PRICE = "INVALID_PRICE"
UNKNOWN_KEY = "UNKNOWN_KEY"

_TOP_LEVEL_KEYS = (
    "saasName",
    "syntaxVersion",
    "version",
    "createdAt",
    "currency",
    "features",
    "usageLimits",
    "plans",
    "addOns",
)
_BOOL_TRUE = {"true", "yes", "on"}
_BOOL_FALSE = {"false", "no", "off"}


class _Walker:
    """Converts a composed YAML node tree into plain values plus a path→(line, col) map."""

    def __init__(self):
        self.locations: dict[tuple, tuple[int, int]] = {}
        self.diagnostics: list[SyntaxDiagnostic] = []

    def _mark(self, node, path: tuple) -> tuple[int, int]:
        loc = (node.start_mark.line + 1, node.start_mark.column + 1)
        self.locations[path] = loc
        return loc

    def walk(self, node, path: tuple = ()):
        self._mark(node, path)
        if isinstance(node, yaml.MappingNode):
            result: dict[str, object] = {}
            for key_node, value_node in node.value:
                if not isinstance(key_node, yaml.ScalarNode):
                    line, col = key_node.start_mark.line + 1, key_node.start_mark.column + 1
                    self.diagnostics.append(SyntaxDiagnostic(
                        Severity.ERROR, TYPE_MISMATCH, "mapping keys must be plain scalars", line, col))
                    continue
                key = key_node.value
                if key in result:
                    line, col = key_node.start_mark.line + 1, key_node.start_mark.column + 1
                    self.diagnostics.append(SyntaxDiagnostic(
                        Severity.ERROR, DUPLICATE_KEY, f"duplicate key '{key}'", line, col))
                    continue
                result[key] = self.walk(value_node, path + (key,))
            return result
        if isinstance(node, yaml.SequenceNode):
            return [self.walk(item, path + (i,)) for i, item in enumerate(node.value)]
        return self._scalar(node)

    def _scalar(self, node):
        tag = node.tag
        raw = node.value
        if tag.endswith(":bool"):
            lowered = raw.lower()
            if lowered in _BOOL_TRUE:
                return True
            if lowered in _BOOL_FALSE:
                return False
            return raw
        if tag.endswith(":int") or tag.endswith(":float"):
            cleaned = raw.replace("_", "")
            if cleaned.lower().lstrip("+-") in {".inf", "inf"}:
                return UNLIMITED
            try:
                return Decimal(cleaned)
            except InvalidOperation:
                return raw
        if tag.endswith(":null"):
            return None
        # timestamps and plain strings both come back as their raw text;
        # date fields are re-parsed explicitly where a date is expected
        return raw


def parse_pricing(text: str) -> ParseResult:
    """Parse a Pricing2Yaml document, collecting located diagnostics."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark else 1
        column = mark.column + 1 if mark else 1
        message = getattr(exc, "problem", None) or str(exc)
        return ParseResult(None, [SyntaxDiagnostic(Severity.ERROR, YAML_SYNTAX, str(message), line, column)])
    if node is None:
        return ParseResult(None, [SyntaxDiagnostic(Severity.ERROR, EMPTY_DOCUMENT, "document is empty")])
    if not isinstance(node, yaml.MappingNode):
        return ParseResult(None, [SyntaxDiagnostic(
            Severity.ERROR, TYPE_MISMATCH, "top level must be a mapping",
            node.start_mark.line + 1, node.start_mark.column + 1)])

    walker = _Walker()
    doc = walker.walk(node)
    extractor = _Extractor(doc, walker.locations)
    extractor.diagnostics.extend(walker.diagnostics)
    pricing = extractor.extract()
    diagnostics = sorted(extractor.diagnostics, key=lambda d: (d.line, d.column, d.code, d.message))
    if any(d.severity is Severity.ERROR for d in diagnostics):
        return ParseResult(None, diagnostics)
    return ParseResult(pricing, diagnostics)


def load_pricing(text: str) -> Pricing:
    """Parse a document, raising ParseError unless a Pricing was produced."""
    result = parse_pricing(text)
    if result.pricing is None:
        raise ParseError(result.diagnostics)
    return result.pricing


class _Extractor:
    def __init__(self, doc: dict, locations: dict[tuple, tuple[int, int]]):
        self.doc = doc
        self.locations = locations
        self.diagnostics: list[SyntaxDiagnostic] = []

    def where(self, path: tuple) -> tuple[int, int]:
        probe = tuple(path)
        while probe:
            if probe in self.locations:
                return self.locations[probe]
            probe = probe[:-1]
        return self.locations.get((), (1, 1))

    def report(self, severity: Severity, code: str, message: str, path: tuple) -> None:
        line, column = self.where(path)
        self.diagnostics.append(SyntaxDiagnostic(severity, code, message, line, column))

    def error(self, code: str, message: str, path: tuple) -> None:
        self.report(Severity.ERROR, code, message, path)

    def warn(self, code: str, message: str, path: tuple) -> None:
        self.report(Severity.WARNING, code, message, path)

    def extract(self) -> Pricing | None:
        doc = self.doc
        saas_name = doc.get("saasName")
        if saas_name is None:
            self.error(MISSING_KEY, "missing required key 'saasName'", ())
            saas_name = ""
        elif not isinstance(saas_name, str):
            saas_name = str(saas_name)

        if "features" not in doc:
            self.error(MISSING_KEY, "missing required key 'features'", ())
        if "plans" not in doc and "addOns" not in doc:
            self.error(MISSING_KEY, "at least one of 'plans' or 'addOns' must be present", ())

        syntax_version = self._string(doc.get("syntaxVersion"), ("syntaxVersion",))
        version = self._string(doc.get("version"), ("version",))
        created_at = self._date(doc.get("createdAt"), ("createdAt",))
        currency = self._string(doc.get("currency"), ("currency",)) or "USD"

        features = self._features(self._section(doc, "features"))
        usage_limits = self._usage_limits(self._section(doc, "usageLimits"))
        declared = {f.name: f.value_type for f in features}
        declared.update({u.name: u.value_type for u in usage_limits})
        plans = self._plans(self._section(doc, "plans"), declared)
        add_ons = self._add_ons(self._section(doc, "addOns"), declared)

        extensions = {}
        for key, value in doc.items():
            if key not in _TOP_LEVEL_KEYS:
                self.warn(UNKNOWN_KEY, f"unknown top-level key '{key}' kept as extension data", (key,))
                extensions[key] = value

        if any(d.severity is Severity.ERROR for d in self.diagnostics):
            return None
        try:
            return build_pricing(
                saas_name=saas_name,
                features=features,
                usage_limits=usage_limits,
                plans=plans,
                add_ons=add_ons,
                syntax_version=syntax_version,
                version=version,
                created_at=created_at,
                currency=currency,
                extensions=extensions,
            )
        except BuildError as exc:
            for diag in exc.diagnostics:
                self.error(diag.code, diag.message, diag.path)
            return None

    def _section(self, doc: dict, key: str) -> dict:
        value = doc.get(key)
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.error(TYPE_MISMATCH, f"'{key}' must be a mapping", (key,))
            return {}
        return value

    def _string(self, value, path: tuple) -> str:
        if value is None:
            return ""
        if isinstance(value, str):
            return value
        if isinstance(value, (Decimal, bool)):
            return str(value)
        self.error(TYPE_MISMATCH, f"'{path[-1]}' must be a string", path)
        return ""

    def _date(self, value, path: tuple) -> date | None:
        if value is None:
            return None
        if not isinstance(value, str):
            self.error(INVALID_DATE, f"'{path[-1]}' must be an ISO-8601 date", path)
            return None
        try:
            return date.fromisoformat(value)
        except ValueError:
            self.error(INVALID_DATE, f"invalid ISO-8601 date: {value!r}", path)
            return None

    def _value_type(self, raw, path: tuple, *, allowed: tuple[ValueType, ...]) -> ValueType | None:
        if raw is None:
            return None
        if isinstance(raw, str):
            try:
                vt = ValueType(raw.upper())
            except ValueError:
                vt = None
        else:
            vt = None
        if vt is None or vt not in allowed:
            names = "/".join(a.value for a in allowed)
            self.error(INVALID_VALUE, f"valueType must be one of {names}, got {raw!r}", path)
            return None
        return vt

    def _infer_type(self, value, fallback: ValueType) -> ValueType:
        if isinstance(value, bool):
            return ValueType.BOOLEAN
        if isinstance(value, Decimal) or value is UNLIMITED:
            return ValueType.NUMERIC
        if isinstance(value, str):
            return ValueType.TEXT
        return fallback

    def _value(self, raw, vt: ValueType, path: tuple) -> Value | None:
        if vt is ValueType.BOOLEAN:
            if isinstance(raw, bool):
                return raw
            self.error(TYPE_MISMATCH, f"expected a boolean, got {raw!r}", path)
            return None
        if vt is ValueType.NUMERIC:
            if raw is UNLIMITED:
                return UNLIMITED
            if isinstance(raw, str) and raw.strip().lower() == "unlimited":
                return UNLIMITED
            if isinstance(raw, Decimal):
                try:
                    return as_decimal(raw)
                except ValueError as exc:
                    self.error(INVALID_VALUE, str(exc), path)
                    return None
            self.error(TYPE_MISMATCH, f"expected a number or 'unlimited', got {raw!r}", path)
            return None
        if isinstance(raw, str):
            return raw
        self.error(TYPE_MISMATCH, f"expected text, got {raw!r}", path)
        return None

    def _price(self, raw, path: tuple) -> Price:
        if isinstance(raw, Decimal):
            try:
                amount = as_decimal(raw, max_places=MAX_PRICE_PLACES)
            except ValueError as exc:
                self.error(INVALID_PRICE, str(exc), path)
                return Price.contact()
            if amount < 0:
                self.error(INVALID_PRICE, f"price must be non-negative, got {amount}", path)
                return Price.contact()
            return Price(amount)
        if isinstance(raw, str):
            return Price.contact()
        self.error(INVALID_PRICE, f"price must be a number or a contact string, got {raw!r}", path)
        return Price.contact()

    def _name_list(self, raw, path: tuple) -> list[str]:
        if raw is None:
            return []
        if not isinstance(raw, list):
            self.error(TYPE_MISMATCH, f"'{path[-1]}' must be a list of names", path)
            return []
        names: list[str] = []
        for i, item in enumerate(raw):
            if isinstance(item, str):
                names.append(item)
            else:
                self.error(TYPE_MISMATCH, f"expected a name, got {item!r}", path + (i,))
        return names

    def _entry(self, raw, path: tuple) -> dict:
        if raw is None:
            return {}
        if not isinstance(raw, dict):
            self.error(TYPE_MISMATCH, "entry must be a mapping", path)
            return {}
        return raw

    def _reject_unknown(self, entry: dict, known: tuple[str, ...], path: tuple) -> None:
        for key in entry:
            if key not in known:
                self.warn(UNKNOWN_KEY, f"unknown key '{key}' ignored", path + (key,))

    def _features(self, section: dict) -> list[Feature]:
        features = []
        for name, raw in section.items():
            path = ("features", name)
            entry = self._entry(raw, path)
            self._reject_unknown(entry, ("description", "valueType", "defaultValue"), path)
            vt = self._value_type(entry.get("valueType"), path + ("valueType",),
                                  allowed=(ValueType.BOOLEAN, ValueType.NUMERIC, ValueType.TEXT))
            if vt is None:
                vt = self._infer_type(entry.get("defaultValue"), ValueType.BOOLEAN)
            if "defaultValue" in entry:
                default = self._value(entry["defaultValue"], vt, path + ("defaultValue",))
                if default is None:
                    continue
            else:
                default = _implicit_default(vt)
            description = entry.get("description")
            if description is not None and not isinstance(description, str):
                description = str(description)
            features.append(Feature(name=name, value_type=vt, default=default, description=description))
        return features

    def _usage_limits(self, section: dict) -> list[UsageLimit]:
        limits = []
        for name, raw in section.items():
            path = ("usageLimits", name)
            entry = self._entry(raw, path)
            self._reject_unknown(entry, ("valueType", "defaultValue", "unit", "linkedFeatures"), path)
            vt = self._value_type(entry.get("valueType"), path + ("valueType",),
                                  allowed=(ValueType.NUMERIC, ValueType.BOOLEAN))
            if vt is None:
                vt = self._infer_type(entry.get("defaultValue"), ValueType.NUMERIC)
                if vt is ValueType.TEXT:
                    vt = ValueType.NUMERIC
            if "defaultValue" in entry:
                default = self._value(entry["defaultValue"], vt, path + ("defaultValue",))
                if default is None:
                    continue
            else:
                default = _implicit_default(vt)
            unit = self._string(entry.get("unit"), path + ("unit",))
            linked = self._name_list(entry.get("linkedFeatures"), path + ("linkedFeatures",))
            limits.append(UsageLimit(name=name, value_type=vt, default=default,
                                     unit=unit, linked_features=frozenset(linked)))
        return limits

    def _overrides(self, entry: dict, base: tuple, declared: dict[str, ValueType]):
        feature_values: dict[str, Value] = {}
        usage_limit_values: dict[str, Value] = {}
        for section, target in (("features", feature_values), ("usageLimits", usage_limit_values)):
            raw = entry.get(section)
            if raw is None:
                continue
            if not isinstance(raw, dict):
                self.error(TYPE_MISMATCH, f"'{section}' must be a mapping of overrides", base + (section,))
                continue
            for name, raw_value in raw.items():
                path = base + (section, name)
                vt = declared.get(name)
                if vt is None:
                    # leave the dangling name to referential validation so the
                    # diagnostic is an UNKNOWN_REFERENCE at this location
                    target[name] = raw_value if isinstance(raw_value, (bool, str, Decimal, _UnlimitedType)) else False
                    continue
                value = self._value(raw_value, vt, path)
                if value is not None:
                    target[name] = value
        return feature_values, usage_limit_values

    def _plans(self, section: dict, declared: dict[str, ValueType]) -> list[Plan]:
        plans = []
        for name, raw in section.items():
            path = ("plans", name)
            entry = self._entry(raw, path)
            self._reject_unknown(entry, ("price", "unit", "features", "usageLimits"), path)
            if "price" in entry:
                price = self._price(entry["price"], path + ("price",))
            else:
                self.error(MISSING_KEY, f"plan '{name}' has no price", path)
                price = Price.contact()
            unit = entry.get("unit")
            if unit is not None and not isinstance(unit, str):
                unit = str(unit)
            feature_values, usage_limit_values = self._overrides(entry, path, declared)
            plans.append(Plan(name=name, price=price, unit=unit,
                              feature_values=feature_values, usage_limit_values=usage_limit_values))
        return plans

    def _add_ons(self, section: dict, declared: dict[str, ValueType]) -> list[AddOn]:
        add_ons = []
        for name, raw in section.items():
            path = ("addOns", name)
            entry = self._entry(raw, path)
            self._reject_unknown(
                entry,
                ("price", "availableFor", "dependsOn", "excludes",
                 "features", "usageLimits", "usageLimitsExtensions"),
                path,
            )
            if "price" in entry:
                price = self._price(entry["price"], path + ("price",))
            else:
                self.error(MISSING_KEY, f"add-on '{name}' has no price", path)
                price = Price.contact()
            available_for = self._name_list(entry.get("availableFor"), path + ("availableFor",))
            depends_on = self._name_list(entry.get("dependsOn"), path + ("dependsOn",))
            excludes = self._name_list(entry.get("excludes"), path + ("excludes",))
            feature_values, usage_limit_values = self._overrides(entry, path, declared)
            extensions: dict[str, Decimal] = {}
            raw_ext = entry.get("usageLimitsExtensions")
            if raw_ext is not None:
                if not isinstance(raw_ext, dict):
                    self.error(TYPE_MISMATCH, "'usageLimitsExtensions' must be a mapping",
                               path + ("usageLimitsExtensions",))
                else:
                    for limit_name, raw_amount in raw_ext.items():
                        ext_path = path + ("usageLimitsExtensions", limit_name)
                        if isinstance(raw_amount, Decimal):
                            extensions[limit_name] = raw_amount
                        else:
                            self.error(TYPE_MISMATCH,
                                       f"extension amount must be a number, got {raw_amount!r}", ext_path)
            add_ons.append(AddOn(
                name=name, price=price,
                available_for=frozenset(available_for),
                depends_on=frozenset(depends_on),
                excludes=frozenset(excludes),
                feature_values=feature_values,
                usage_limit_values=usage_limit_values,
                usage_limit_extensions=extensions,
            ))
        return add_ons


def _implicit_default(vt: ValueType) -> Value:
    if vt is ValueType.BOOLEAN:
        return False
    if vt is ValueType.NUMERIC:
        return Decimal(0)
    return ""


# --- serialization ---------------------------------------------------------

_PLAIN_SCALAR = re.compile(r"^[A-Za-z_][A-Za-z0-9_./+ \-]*$")
_RESERVED = {"true", "false", "yes", "no", "on", "off", "null", "~"}


def _scalar_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Decimal):
        return format(value, "f")
    if isinstance(value, int):
        return str(value)
    if value is UNLIMITED:
        return "unlimited"
    if isinstance(value, date):
        return value.isoformat()
    if value is None:
        return "null"
    text = str(value)
    if (
        _PLAIN_SCALAR.match(text)
        and text == text.strip()
        and text.lower() not in _RESERVED
    ):
        return text
    return json.dumps(text, ensure_ascii=False)


def _emit(lines: list[str], indent: int, key, value) -> None:
    pad = "  " * indent
    key_text = _scalar_text(key)
    if isinstance(value, dict):
        if not value:
            lines.append(f"{pad}{key_text}: {{}}")
            return
        lines.append(f"{pad}{key_text}:")
        for sub_key, sub_value in value.items():
            _emit(lines, indent + 1, sub_key, sub_value)
    elif isinstance(value, (list, tuple)):
        items = ", ".join(_scalar_text(item) for item in value)
        lines.append(f"{pad}{key_text}: [{items}]")
    else:
        lines.append(f"{pad}{key_text}: {_scalar_text(value)}")


def serialize_pricing(pricing: Pricing) -> str:
    """Render a Pricing as a canonical Pricing2Yaml document."""
    lines: list[str] = []
    _emit(lines, 0, "saasName", pricing.saas_name)
    if pricing.syntax_version:
        _emit(lines, 0, "syntaxVersion", pricing.syntax_version)
    if pricing.version:
        _emit(lines, 0, "version", pricing.version)
    if pricing.created_at is not None:
        _emit(lines, 0, "createdAt", pricing.created_at)
    _emit(lines, 0, "currency", pricing.currency)

    features: dict[str, dict] = {}
    for f in pricing.features:
        entry: dict[str, object] = {}
        if f.description is not None:
            entry["description"] = f.description
        entry["valueType"] = f.value_type.value
        entry["defaultValue"] = f.default
        features[f.name] = entry
    _emit(lines, 0, "features", features)

    if pricing.usage_limits:
        limits: dict[str, dict] = {}
        for u in pricing.usage_limits:
            entry = {"valueType": u.value_type.value, "defaultValue": u.default}
            if u.unit:
                entry["unit"] = u.unit
            if u.linked_features:
                entry["linkedFeatures"] = sorted(u.linked_features)
            limits[u.name] = entry
        _emit(lines, 0, "usageLimits", limits)

    if pricing.plans or not pricing.add_ons:
        plans: dict[str, dict] = {}
        for p in pricing.plans:
            entry = {"price": _price_value(p.price)}
            if p.unit is not None:
                entry["unit"] = p.unit
            if p.feature_values:
                entry["features"] = dict(p.feature_values)
            if p.usage_limit_values:
                entry["usageLimits"] = dict(p.usage_limit_values)
            plans[p.name] = entry
        _emit(lines, 0, "plans", plans)

    if pricing.add_ons:
        add_ons: dict[str, dict] = {}
        for a in pricing.add_ons:
            entry = {"price": _price_value(a.price)}
            if a.available_for:
                entry["availableFor"] = sorted(a.available_for)
            if a.depends_on:
                entry["dependsOn"] = sorted(a.depends_on)
            if a.excludes:
                entry["excludes"] = sorted(a.excludes)
            if a.feature_values:
                entry["features"] = dict(a.feature_values)
            if a.usage_limit_values:
                entry["usageLimits"] = dict(a.usage_limit_values)
            if a.usage_limit_extensions:
                entry["usageLimitsExtensions"] = dict(a.usage_limit_extensions)
            add_ons[a.name] = entry
        _emit(lines, 0, "addOns", add_ons)

    for key, value in pricing.extensions.items():
        _emit(lines, 0, key, value)

    return "\n".join(lines) + "\n"


def _price_value(price: Price):
    return "Contact sales" if price.is_contact else price.amount
