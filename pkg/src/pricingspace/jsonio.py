"""JSON encoding shared by the CLI and the HTTP service.

Both front ends serialize analysis results through these helpers, so a
service response and the equivalent CLI --format json output agree
byte-for-byte. Exact decimals are rendered as strings ("65.99",
"unlimited") to survive JSON without floating-point drift; counts stay
plain integers.
"""

from __future__ import annotations

import json

from .analysis import LintFinding, PricingStats, ValidityReport
from .engine import Optimum, Violation
from .model import (
    Price,
    Pricing,
    Subscription,
    SubscriptionValuation,
    UNLIMITED,
    Value,
)
from .parser import SyntaxDiagnostic


def value_json(value: Value):
    if isinstance(value, bool):
        return value
    if value is UNLIMITED:
        return "unlimited"
    if isinstance(value, (str, int)):
        return str(value) if isinstance(value, int) else value
    return format(value, "f")


def price_json(price: Price) -> str:
    return str(price)


def subscription_json(subscription: Subscription, pricing: Pricing | None = None) -> dict:
    add_ons = sorted(subscription.add_ons)
    if pricing is not None:
        order = {a.name: i for i, a in enumerate(pricing.add_ons)}
        add_ons.sort(key=lambda name: order.get(name, len(order)))
    return {"plan": subscription.plan, "addOns": add_ons}


def valuation_json(valuation: SubscriptionValuation) -> dict:
    return {
        "features": {name: value_json(v) for name, v in valuation.feature_values.items()},
        "usageLimits": {name: value_json(v) for name, v in valuation.usage_limit_values.items()},
        "cost": price_json(valuation.cost),
    }


def solution_json(subscription: Subscription, valuation: SubscriptionValuation,
                  pricing: Pricing | None = None) -> dict:
    entry = subscription_json(subscription, pricing)
    entry["cost"] = price_json(valuation.cost)
    return entry


def violation_json(violation: Violation) -> dict:
    return {
        "code": violation.constraint.value,
        "severity": "ERROR",
        "subject": violation.subject,
        "message": violation.message,
    }


def finding_json(finding: LintFinding) -> dict:
    return {
        "code": finding.code.value,
        "severity": finding.severity,
        "subject": finding.subject,
        "message": finding.message,
    }


def syntax_diagnostic_json(diagnostic: SyntaxDiagnostic) -> dict:
    return {
        "code": diagnostic.code,
        "severity": diagnostic.severity.value,
        "subject": "",
        "message": diagnostic.message,
        "line": diagnostic.line,
        "column": diagnostic.column,
    }


def stats_json(stats: PricingStats) -> dict:
    return {
        "features": stats.features,
        "plans": stats.plans,
        "addOns": stats.add_ons,
        "configurationSpaceSize": stats.configuration_space_size,
    }


def validity_json(report: ValidityReport) -> dict:
    payload = {
        "valid": report.valid,
        "violations": [violation_json(v) for v in report.violations],
    }
    if report.notes:
        payload["notes"] = list(report.notes)
    return payload


def optimum_json(result: Optimum, pricing: Pricing | None = None) -> dict:
    return {
        "direction": result.direction.value,
        "cost": price_json(result.cost),
        "subscriptions": [subscription_json(s, pricing) for s in result.subscriptions],
        "indeterminate": [subscription_json(s, pricing) for s in result.indeterminate],
    }


def dumps(payload) -> str:
    """Canonical JSON text: stable key order as constructed, compact-ish."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
