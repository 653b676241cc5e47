from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pricingspace import (
    UNLIMITED,
    AddOn,
    BuildError,
    Feature,
    Ordering,
    Plan,
    Price,
    Subscription,
    UsageLimit,
    ValueType,
    build_pricing,
    compare_values,
    values_equal,
)
from pricingspace.model import as_decimal


def bool_feature(name, default=False):
    return Feature(name, ValueType.BOOLEAN, default)


class TestCompareValues:
    def test_numeric_below_unlimited(self):
        assert compare_values(Decimal(100), UNLIMITED) is Ordering.LESS

    def test_unlimited_reflexive(self):
        assert compare_values(UNLIMITED, UNLIMITED) is Ordering.EQUAL

    def test_numeric_ordering(self):
        assert compare_values(Decimal(1000), Decimal(200)) is Ordering.GREATER

    def test_bool_and_text_equality_only(self):
        assert compare_values(True, True) is Ordering.EQUAL
        assert compare_values(True, False) is Ordering.UNEQUAL
        assert compare_values("gold", "gold") is Ordering.EQUAL
        assert compare_values("gold", "basic") is Ordering.UNEQUAL

    def test_cross_tag_incomparable(self):
        assert compare_values(True, Decimal(1)) is Ordering.INCOMPARABLE
        assert compare_values("5", Decimal(5)) is Ordering.INCOMPARABLE
        assert compare_values(UNLIMITED, "unlimited") is Ordering.INCOMPARABLE

    def test_total_order_on_numeric_domain(self):
        # exhaustive check on a small domain including the maximum element
        domain = [Decimal(-1), Decimal(0), Decimal("0.5"), Decimal(3), UNLIMITED]
        strict = {Ordering.LESS, Ordering.GREATER}
        for a in domain:
            for b in domain:
                ab = compare_values(a, b)
                ba = compare_values(b, a)
                assert ab in strict | {Ordering.EQUAL}
                if ab is Ordering.EQUAL:
                    assert ba is Ordering.EQUAL
                else:
                    assert {ab, ba} == strict
                for c in domain:
                    if ab is not Ordering.GREATER and compare_values(b, c) is not Ordering.GREATER:
                        assert compare_values(a, c) is not Ordering.GREATER
            assert compare_values(a, UNLIMITED) in (Ordering.LESS, Ordering.EQUAL)

    @given(st.decimals(allow_nan=False, allow_infinity=False, places=4),
           st.decimals(allow_nan=False, allow_infinity=False, places=4))
    def test_antisymmetry_random(self, a, b):
        flipped = {Ordering.LESS: Ordering.GREATER, Ordering.GREATER: Ordering.LESS,
                   Ordering.EQUAL: Ordering.EQUAL}
        assert compare_values(b, a) is flipped[compare_values(a, b)]


class TestValues:
    def test_as_decimal_rejects_floats(self):
        with pytest.raises(ValueError):
            as_decimal(0.1)

    def test_as_decimal_rejects_excess_places(self):
        with pytest.raises(ValueError):
            as_decimal(Decimal("1.00001"))
        assert as_decimal(Decimal("1.0001")) == Decimal("1.0001")

    def test_values_equal_mixed_int_decimal(self):
        assert values_equal(5, Decimal(5))


class TestPrice:
    def test_sum_is_exact(self):
        assert (Price.of("15.99") + Price.of("50.00")).amount == Decimal("65.99")

    def test_contact_absorbs(self):
        assert (Price.of(10) + Price.contact()).is_contact
        assert (Price.contact() + Price.of(10)).is_contact

    def test_str(self):
        assert str(Price.of("0.00")) == "0.00"
        assert str(Price.contact()) == "contact"


class TestBuildPricing:
    def test_minimal_pricing(self):
        pricing = build_pricing(
            saas_name="Tiny",
            features=[bool_feature("core", True)],
            plans=[Plan("Basic", Price.of(5))],
        )
        assert len(pricing.plans) == 1
        assert pricing.feature("core").default is True

    def test_unknown_plan_reference(self):
        with pytest.raises(BuildError) as err:
            build_pricing(
                saas_name="Bad",
                features=[bool_feature("core")],
                plans=[Plan("Basic", Price.of(5))],
                add_ons=[AddOn("extra", Price.of(1), available_for={"Ghost"})],
            )
        codes = {d.code for d in err.value.diagnostics}
        assert codes == {"UNKNOWN_REFERENCE"}

    def test_all_violations_reported_not_just_first(self):
        with pytest.raises(BuildError) as err:
            build_pricing(
                saas_name="Bad",
                features=[bool_feature("core"), bool_feature("core")],
                usage_limits=[UsageLimit("cap", ValueType.NUMERIC, Decimal(1),
                                         linked_features={"missing"})],
                plans=[Plan("Basic", Price.of(5), feature_values={"nope": True})],
                add_ons=[AddOn("a", Price.of(1), available_for={"Basic"},
                               depends_on={"a"}, excludes={"b"})],
            )
        codes = sorted(d.code for d in err.value.diagnostics)
        assert codes == ["DUPLICATE_NAME", "SELF_REFERENCE",
                         "UNKNOWN_REFERENCE", "UNKNOWN_REFERENCE", "UNKNOWN_REFERENCE"]

    def test_override_type_mismatch(self):
        with pytest.raises(BuildError) as err:
            build_pricing(
                saas_name="Bad",
                features=[bool_feature("core")],
                plans=[Plan("Basic", Price.of(5), feature_values={"core": Decimal(3)})],
            )
        assert err.value.diagnostics[0].code == "TYPE_MISMATCH"

    def test_feature_limit_namespace_disjoint(self):
        with pytest.raises(BuildError) as err:
            build_pricing(
                saas_name="Bad",
                features=[bool_feature("cap")],
                usage_limits=[UsageLimit("cap", ValueType.NUMERIC, Decimal(0))],
                plans=[Plan("Basic", Price.of(5))],
            )
        assert err.value.diagnostics[0].code == "DUPLICATE_NAME"

    def test_extension_must_target_numeric_limit(self):
        with pytest.raises(BuildError) as err:
            build_pricing(
                saas_name="Bad",
                features=[bool_feature("core", True)],
                usage_limits=[UsageLimit("flag", ValueType.BOOLEAN, False)],
                plans=[Plan("Basic", Price.of(5))],
                add_ons=[AddOn("a", Price.of(1), available_for={"Basic"},
                               usage_limit_extensions={"flag": Decimal(5)})],
            )
        assert err.value.diagnostics[0].code == "TYPE_MISMATCH"

    def test_negative_extension_rejected(self):
        with pytest.raises(BuildError) as err:
            build_pricing(
                saas_name="Bad",
                features=[bool_feature("core", True)],
                usage_limits=[UsageLimit("cap", ValueType.NUMERIC, Decimal(0))],
                plans=[Plan("Basic", Price.of(5))],
                add_ons=[AddOn("a", Price.of(1), available_for={"Basic"},
                               usage_limit_extensions={"cap": Decimal(-1)})],
            )
        assert err.value.diagnostics[0].code == "INVALID_VALUE"

    def test_deterministic(self):
        def make():
            return build_pricing(
                saas_name="Same",
                features=[bool_feature("core", True), bool_feature("extra")],
                plans=[Plan("A", Price.of(1)), Plan("B", Price.of(2))],
                add_ons=[AddOn("x", Price.of(3), available_for={"A", "B"})],
            )
        assert make() == make()

    def test_reference_closure(self, zoom):
        # every name used anywhere in the document must resolve
        feature_names = set(zoom.features_by_name)
        limit_names = set(zoom.usage_limits_by_name)
        plan_names = set(zoom.plans_by_name)
        add_on_names = set(zoom.add_ons_by_name)
        for limit in zoom.usage_limits:
            assert limit.linked_features <= feature_names
        for plan in zoom.plans:
            assert set(plan.feature_values) <= feature_names
            assert set(plan.usage_limit_values) <= limit_names
        for add_on in zoom.add_ons:
            assert add_on.available_for <= plan_names
            assert add_on.depends_on <= add_on_names
            assert add_on.excludes <= add_on_names
            assert set(add_on.feature_values) <= feature_names
            assert set(add_on.usage_limit_values) <= limit_names
            assert set(add_on.usage_limit_extensions) <= limit_names


def test_subscription_normalizes_add_ons():
    sub = Subscription("PRO", {"a", "b"})
    assert isinstance(sub.add_ons, frozenset)
    assert Subscription("PRO", ["a", "b"]) == sub
