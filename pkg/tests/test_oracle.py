"""Engine results vs the independent brute-force sweep, plus the counting laws."""

import random
from decimal import Decimal

import pytest

from pricingspace import (
    AddOn,
    ConstraintProblem,
    Plan,
    Price,
    build_pricing,
    count,
    enumerate_solutions,
    optimize,
    parse_filter,
)
from pricingspace.engine import Direction

from genpricing import oracle_optimum, oracle_solutions, random_filter_text, random_pricing


def engine_vs_oracle(pricing, expr=None):
    problem = ConstraintProblem(pricing, expr)
    engine_list = [(s, v) for s, v in enumerate_solutions(problem)]
    oracle_list = oracle_solutions(pricing, expr)
    assert engine_list == oracle_list
    assert count(problem) == len(oracle_list)
    expected = oracle_optimum(oracle_list, Direction.MIN)
    if expected is None:
        return
    best, winners, indeterminate = expected
    result = optimize(problem, Direction.MIN)
    assert result.cost.amount == best
    assert set(result.subscriptions) == set(winners)
    assert len(result.subscriptions) == len(winners)
    assert set(result.indeterminate) == set(indeterminate)
    assert len(result.indeterminate) == len(indeterminate)


@pytest.mark.parametrize("seed", range(120))
def test_random_pricings_match_oracle(seed):
    rng = random.Random(seed)
    pricing = random_pricing(rng)
    engine_vs_oracle(pricing)
    text = random_filter_text(rng, pricing)
    if text is not None:
        engine_vs_oracle(pricing, parse_filter(text, pricing))


def test_zoom_matches_oracle(zoom):
    engine_vs_oracle(zoom)
    engine_vs_oracle(zoom, parse_filter(
        "administratorPortal = true AND maxAssistantsPerMeeting >= 200", zoom))


def test_circular_matches_oracle(circular):
    engine_vs_oracle(circular)


class TestCountingLaws:
    def extend_with_addon(self, pricing, name="freshAddon"):
        add_on = AddOn(name, Price.of("1.00"),
                       available_for=frozenset(p.name for p in pricing.plans))
        return build_pricing(
            saas_name=pricing.saas_name,
            features=pricing.features,
            usage_limits=pricing.usage_limits,
            plans=pricing.plans,
            add_ons=pricing.add_ons + (add_on,),
            currency=pricing.currency,
        )

    def extend_with_plan(self, pricing, available_add_ons, name="freshPlan"):
        plan = Plan(name, Price.of("99.00"))
        add_ons = tuple(
            AddOn(a.name, a.price,
                  available_for=a.available_for | ({name} if a.name in available_add_ons else set()),
                  depends_on=a.depends_on, excludes=a.excludes,
                  feature_values=a.feature_values,
                  usage_limit_values=a.usage_limit_values,
                  usage_limit_extensions=a.usage_limit_extensions)
            for a in pricing.add_ons)
        return build_pricing(
            saas_name=pricing.saas_name,
            features=pricing.features,
            usage_limits=pricing.usage_limits,
            plans=pricing.plans + (plan,),
            add_ons=add_ons,
            currency=pricing.currency,
        )

    def test_unconstrained_addon_doubles_count(self, zoom):
        assert count(ConstraintProblem(self.extend_with_addon(zoom))) == 40

    @pytest.mark.parametrize("seed", range(40))
    def test_doubling_on_random_pricings(self, seed):
        rng = random.Random(1000 + seed)
        pricing = random_pricing(rng)
        if not pricing.plans:
            return
        base = count(ConstraintProblem(pricing))
        assert count(ConstraintProblem(self.extend_with_addon(pricing))) == 2 * base

    def test_new_plan_adds_two_to_the_available(self, zoom):
        grown = self.extend_with_plan(zoom, {a.name for a in zoom.add_ons})
        assert count(ConstraintProblem(grown)) == 28

    @pytest.mark.parametrize("seed", range(40))
    def test_plan_additivity_on_random_pricings(self, seed):
        rng = random.Random(2000 + seed)
        pricing = random_pricing(rng)
        if not pricing.plans or any(a.depends_on or a.excludes for a in pricing.add_ons):
            return
        made_available = {a.name for a in pricing.add_ons if rng.random() < 0.5}
        grown = self.extend_with_plan(pricing, made_available)
        assert count(ConstraintProblem(grown)) == \
            count(ConstraintProblem(pricing)) + 2 ** len(made_available)

    @pytest.mark.parametrize("seed", range(60))
    def test_filter_monotonicity(self, seed):
        rng = random.Random(3000 + seed)
        pricing = random_pricing(rng)
        text = random_filter_text(rng, pricing)
        if text is None:
            return
        expr = parse_filter(text, pricing)
        unfiltered = count(ConstraintProblem(pricing))
        filtered = count(ConstraintProblem(pricing, expr))
        assert filtered <= unfiltered
        extra = random_filter_text(rng, pricing)
        if extra is not None:
            strengthened = parse_filter(f"({text}) AND ({extra})", pricing)
            assert count(ConstraintProblem(pricing, strengthened)) <= filtered

    @pytest.mark.parametrize("seed", range(60))
    def test_count_equals_enumeration_length(self, seed):
        rng = random.Random(4000 + seed)
        pricing = random_pricing(rng)
        problem = ConstraintProblem(pricing)
        assert count(problem) == sum(1 for _ in enumerate_solutions(problem))

    def test_analytic_shortcut_agrees(self, zoom):
        # zoom has no dependencies/exclusions, so count() takes the closed form;
        # spelled out here against the per-plan powers of two
        per_plan = [
            2 ** sum(1 for a in zoom.add_ons if plan.name in a.available_for)
            for plan in zoom.plans
        ]
        assert per_plan == [4, 8, 8]
        assert count(ConstraintProblem(zoom)) == sum(per_plan)
