from datetime import date
from decimal import Decimal

import yaml

from pricingspace import (
    UNLIMITED,
    Severity,
    cardinal,
    load_pricing,
    parse_pricing,
    serialize_pricing,
)

from conftest import FIXTURES, fixture_text


MINIMAL = """\
saasName: Tiny
createdAt: 2024-01-01
features:
  core:
    valueType: BOOLEAN
    defaultValue: true
plans:
  SOLO:
    price: 4.50
"""


def test_minimal_document():
    result = parse_pricing(MINIMAL)
    assert result.ok and not result.diagnostics
    assert cardinal(result.pricing) == 1
    assert result.pricing.plan("SOLO").price.amount == Decimal("4.50")
    assert result.pricing.created_at == date(2024, 1, 1)


def test_zoom_document(zoom):
    assert len(zoom.plans) == 3
    assert len(zoom.add_ons) == 3
    assert len(zoom.features) == 13
    assert zoom.add_on("hugeMeetings").usage_limit_extensions == {
        "maxAssistantsPerMeeting": Decimal(900)}


def test_self_dependency_is_referential_error():
    text = MINIMAL + """\
addOns:
  loop:
    price: 1.00
    availableFor: [SOLO]
    dependsOn: [loop]
"""
    result = parse_pricing(text)
    assert not result.ok
    assert any(d.code == "SELF_REFERENCE" for d in result.errors)


def test_parse_is_total_on_garbage():
    for text in ("", "::::", "- just\n- a\n- list", "saasName: [unclosed"):
        result = parse_pricing(text)
        assert (result.pricing is None) == bool(result.errors)
        assert result.pricing is not None or result.errors


def test_errors_carry_locations():
    text = "saasName: X\nfeatures:\n  f:\n    valueType: WAT\nplans:\n  P:\n    price: 1\n"
    result = parse_pricing(text)
    assert not result.ok
    for diagnostic in result.errors:
        assert diagnostic.line >= 1
    assert any(d.line == 4 for d in result.errors)


def test_referential_error_located_at_reference():
    text = MINIMAL + """\
addOns:
  extra:
    price: 2.00
    availableFor: [Ghost]
"""
    result = parse_pricing(text)
    dangling = [d for d in result.errors if d.code == "UNKNOWN_REFERENCE"]
    assert dangling and dangling[0].line == len(MINIMAL.splitlines()) + 4


def test_missing_required_keys():
    result = parse_pricing("currency: USD\n")
    codes = [d.code for d in result.errors]
    assert codes.count("MISSING_KEY") == 3  # saasName, features, plans/addOns


def test_invalid_date():
    result = parse_pricing(MINIMAL.replace("2024-01-01", "2024-13-77"))
    assert any(d.code == "INVALID_DATE" for d in result.errors)


def test_contact_price_from_string():
    pricing = load_pricing(MINIMAL.replace("4.50", "Contact sales"))
    assert pricing.plan("SOLO").price.is_contact


def test_price_with_three_decimals_rejected():
    result = parse_pricing(MINIMAL.replace("4.50", "4.505"))
    assert any(d.code == "INVALID_PRICE" for d in result.errors)


def test_unlimited_literal():
    text = MINIMAL + """\
usageLimits:
  seats:
    valueType: NUMERIC
    defaultValue: unlimited
    linkedFeatures: [core]
"""
    pricing = load_pricing(text)
    assert pricing.usage_limit("seats").default is UNLIMITED
    assert "defaultValue: unlimited" in serialize_pricing(pricing)


def test_defaults_when_value_missing():
    text = """\
saasName: Defaulted
features:
  flag: {valueType: BOOLEAN}
  tier: {valueType: TEXT}
usageLimits:
  cap: {valueType: NUMERIC}
plans:
  P:
    price: 1
"""
    pricing = load_pricing(text)
    assert pricing.feature("flag").default is False
    assert pricing.feature("tier").default == ""
    assert pricing.usage_limit("cap").default == Decimal(0)


def test_unknown_top_level_key_preserved_with_warning():
    text = MINIMAL + "billing:\n  cycle: monthly\n  trialDays: 14\n"
    result = parse_pricing(text)
    assert result.ok
    assert any(d.code == "UNKNOWN_KEY" and d.severity is Severity.WARNING
               for d in result.diagnostics)
    out = serialize_pricing(result.pricing)
    original_keys = set(yaml.safe_load(text))
    round_tripped_keys = set(yaml.safe_load(out))
    assert original_keys <= round_tripped_keys
    assert load_pricing(out).extensions == {"billing": {"cycle": "monthly",
                                                        "trialDays": Decimal(14)}}


def test_unknown_nested_key_warns():
    text = MINIMAL.replace("    defaultValue: true\n",
                           "    defaultValue: true\n    color: red\n")
    result = parse_pricing(text)
    assert result.ok
    assert any(d.code == "UNKNOWN_KEY" for d in result.warnings)


def test_duplicate_key_is_error():
    text = "saasName: A\nsaasName: B\nfeatures: {}\nplans: {}\n"
    result = parse_pricing(text)
    assert any(d.code == "DUPLICATE_KEY" for d in result.errors)


class TestRoundTrip:
    def test_all_fixtures(self):
        for path in sorted(FIXTURES.rglob("*.yml")):
            first = load_pricing(path.read_text(encoding="utf-8"))
            emitted = serialize_pricing(first)
            second = load_pricing(emitted)
            assert second == first, path.name
            assert serialize_pricing(second) == emitted, path.name

    def test_zoom_cardinal_survives(self, zoom):
        assert cardinal(load_pricing(serialize_pricing(zoom))) == 20

    def test_canonical_output_shape(self, zoom):
        emitted = serialize_pricing(zoom)
        assert emitted.startswith("saasName: Zoom\n")
        assert "\t" not in emitted
        assert emitted.endswith("\n") and "\r" not in emitted
        # strings that look like numbers stay quoted
        assert 'version: "2024"' in emitted

    def test_quoted_awkward_strings(self):
        text = fixture_text("minimal.yml").replace(
            "saasName: MiniService", 'saasName: "true"')
        pricing = load_pricing(text)
        assert pricing.saas_name == "true"
        assert load_pricing(serialize_pricing(pricing)).saas_name == "true"
