"""HTTP API exposing the analysis operations over stored or inline pricings.

The service adds no semantics of its own: every endpoint body is produced
by the same encoding helpers the CLI uses, so responses match library
results exactly. Analysis runs per request against immutable parsed
pricings, so concurrent requests never interfere.
"""

from __future__ import annotations

import os
from datetime import date

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import analysis, engine, filters, jsonio
from .engine import Direction
from .model import Pricing, Subscription
from .store import PricingStore, StoredPricing

API_PREFIX = "/api/v1"


def create_app(store: PricingStore | None = None) -> FastAPI:
    store = store if store is not None else PricingStore()
    app = FastAPI(title="pricingspace", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[os.environ.get("UI_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def stored(pricing_id: str) -> StoredPricing:
        record = store.get(pricing_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown pricing '{pricing_id}'")
        return record

    def parsed(record: StoredPricing) -> Pricing:
        if record.pricing is None:
            raise HTTPException(status_code=422, detail={
                "message": "pricing failed validation",
                "diagnostics": [jsonio.syntax_diagnostic_json(d) for d in record.diagnostics],
            })
        return record.pricing

    def parse_expr(pricing: Pricing, text: str | None):
        if not text:
            return None
        try:
            return filters.parse_filter(text, pricing)
        except filters.FilterError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    def guard(pricing: Pricing, compute):
        try:
            return compute(pricing)
        except engine.InvalidPricingError as exc:
            raise HTTPException(status_code=422, detail={
                "message": "pricing fails its validity constraints",
                "violations": [jsonio.violation_json(v) for v in exc.violations],
            }) from exc
        except (engine.NoSolutionError, engine.NoPricedSolutionError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @app.get(API_PREFIX + "/health")
    def health():
        return {"status": "ok"}

    @app.post(API_PREFIX + "/pricings")
    async def upload(request: Request):
        source = (await request.body()).decode("utf-8")
        record = store.put(source)
        return {
            "id": record.id,
            "diagnostics": [jsonio.syntax_diagnostic_json(d) for d in record.diagnostics],
        }

    @app.get(API_PREFIX + "/pricings")
    def list_pricings():
        return {"ids": store.ids()}

    @app.get(API_PREFIX + "/pricings/{pricing_id}")
    def download(pricing_id: str):
        record = stored(pricing_id)
        return Response(content=record.source, media_type="text/yaml")

    @app.get(API_PREFIX + "/pricings/{pricing_id}/model")
    def model(pricing_id: str):
        return pricing_model_json(parsed(stored(pricing_id)))

    @app.get(API_PREFIX + "/pricings/{pricing_id}/cardinal")
    def cardinal(pricing_id: str, filter: str | None = Query(default=None)):
        pricing = parsed(stored(pricing_id))
        expr = parse_expr(pricing, filter)
        problem = engine.ConstraintProblem(pricing, expr)
        return {"cardinal": guard(pricing, lambda p: engine.count(problem))}

    @app.get(API_PREFIX + "/pricings/{pricing_id}/stats")
    def stats(pricing_id: str):
        pricing = parsed(stored(pricing_id))
        return guard(pricing, lambda p: jsonio.stats_json(analysis.stats(p)))

    @app.get(API_PREFIX + "/pricings/{pricing_id}/lint")
    def lint(pricing_id: str, now: str | None = Query(default=None)):
        pricing = parsed(stored(pricing_id))
        return {"findings": lint_records(pricing, now)}

    @app.get(API_PREFIX + "/pricings/{pricing_id}/dead")
    def dead(pricing_id: str):
        pricing = parsed(stored(pricing_id))
        return {"findings": [jsonio.finding_json(f) for f in analysis.dead_elements(pricing)]}

    @app.get(API_PREFIX + "/pricings/{pricing_id}/validate")
    def validate(pricing_id: str):
        pricing = parsed(stored(pricing_id))
        return jsonio.validity_json(analysis.valid_pricing(pricing))

    @app.get(API_PREFIX + "/pricings/{pricing_id}/subscriptions")
    def subscriptions(
        pricing_id: str,
        filter: str | None = Query(default=None),
        limit: int = Query(default=100, ge=1),
        offset: int = Query(default=0, ge=0),
    ):
        pricing = parsed(stored(pricing_id))
        expr = parse_expr(pricing, filter)
        problem = engine.ConstraintProblem(pricing, expr)

        def run(p: Pricing):
            items = []
            total = 0
            for subscription, valuation in engine.enumerate_solutions(problem):
                if offset <= total < offset + limit:
                    items.append(jsonio.solution_json(subscription, valuation, p))
                total += 1
            return {"total": total, "offset": offset, "limit": limit, "subscriptions": items}

        return guard(pricing, run)

    @app.get(API_PREFIX + "/pricings/{pricing_id}/optimum")
    def optimum(
        pricing_id: str,
        direction: str = Query(default="min"),
        filter: str | None = Query(default=None),
    ):
        pricing = parsed(stored(pricing_id))
        if direction not in ("min", "max"):
            raise HTTPException(status_code=400, detail="direction must be 'min' or 'max'")
        expr = parse_expr(pricing, filter)
        problem = engine.ConstraintProblem(pricing, expr)
        result = guard(pricing, lambda p: engine.optimize(problem, Direction(direction)))
        return jsonio.optimum_json(result, pricing)

    @app.post(API_PREFIX + "/pricings/{pricing_id}/validate-subscription")
    async def validate_subscription(pricing_id: str, request: Request):
        pricing = parsed(stored(pricing_id))
        body = await _json_body(request)
        return subscription_report(pricing, body)

    # Inline variants: the same analyses on a document sent with the request.
    @app.post(API_PREFIX + "/analysis/{operation}")
    async def inline(operation: str, request: Request,
                     filter: str | None = Query(default=None),
                     direction: str = Query(default="min"),
                     now: str | None = Query(default=None)):
        if operation == "validate-subscription":
            body = await _json_body(request)
            source = body.get("pricing")
            if not isinstance(source, str):
                raise HTTPException(status_code=400, detail="body must include 'pricing' (YAML text)")
            pricing = _parse_inline(source)
            return subscription_report(pricing, body)

        source = (await request.body()).decode("utf-8")
        from .parser import parse_pricing
        result = parse_pricing(source)
        if operation == "diagnostics":
            records = [jsonio.syntax_diagnostic_json(d) for d in result.diagnostics]
            if result.pricing is not None:
                records += lint_records(result.pricing, now)
            return {"ok": result.pricing is not None, "findings": records}
        if operation == "model":
            if result.pricing is None:
                raise HTTPException(status_code=422, detail={
                    "message": "pricing failed validation",
                    "diagnostics": [jsonio.syntax_diagnostic_json(d) for d in result.diagnostics],
                })
            return pricing_model_json(result.pricing)
        if result.pricing is None:
            raise HTTPException(status_code=422, detail={
                "message": "pricing failed validation",
                "diagnostics": [jsonio.syntax_diagnostic_json(d) for d in result.diagnostics],
            })
        pricing = result.pricing
        expr = parse_expr(pricing, filter)
        problem = engine.ConstraintProblem(pricing, expr)
        if operation == "cardinal":
            return {"cardinal": guard(pricing, lambda p: engine.count(problem))}
        if operation == "stats":
            return guard(pricing, lambda p: jsonio.stats_json(analysis.stats(p)))
        if operation == "lint":
            return {"findings": lint_records(pricing, now)}
        if operation == "dead":
            return {"findings": [jsonio.finding_json(f) for f in analysis.dead_elements(pricing)]}
        if operation == "validate":
            return jsonio.validity_json(analysis.valid_pricing(pricing))
        if operation == "optimum":
            if direction not in ("min", "max"):
                raise HTTPException(status_code=400, detail="direction must be 'min' or 'max'")
            result_opt = guard(pricing, lambda p: engine.optimize(problem, Direction(direction)))
            return jsonio.optimum_json(result_opt, pricing)
        raise HTTPException(status_code=404, detail=f"unknown analysis operation '{operation}'")

    return app


def lint_records(pricing: Pricing, now: str | None) -> list[dict]:
    try:
        reference = date.fromisoformat(now) if now else date.today()
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=f"invalid 'now' date: {now!r}") from exc
    records = [jsonio.violation_json(v) for v in engine.check_pricing(pricing)]
    records += [jsonio.finding_json(f) for f in analysis.lint(pricing, reference)]
    return records


def subscription_report(pricing: Pricing, body: dict) -> dict:
    plan = body.get("plan")
    add_ons = body.get("addOns", [])
    if plan is not None and not isinstance(plan, str):
        raise HTTPException(status_code=400, detail="'plan' must be a string or null")
    if not isinstance(add_ons, list) or not all(isinstance(a, str) for a in add_ons):
        raise HTTPException(status_code=400, detail="'addOns' must be a list of names")
    subscription = Subscription(plan, frozenset(add_ons))
    try:
        report = analysis.valid_subscription(pricing, subscription)
    except engine.UnknownNameError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    payload = jsonio.validity_json(report)
    if report.valid:
        valuation = engine.valuate(pricing, subscription)
        payload["valuation"] = jsonio.valuation_json(valuation)
        payload["cost"] = jsonio.price_json(valuation.cost)
    return payload


def pricing_model_json(pricing: Pricing) -> dict:
    """Parsed document as JSON, for clients that render the pricing itself."""
    return {
        "saasName": pricing.saas_name,
        "version": pricing.version,
        "currency": pricing.currency,
        "createdAt": pricing.created_at.isoformat() if pricing.created_at else None,
        "features": [
            {
                "name": f.name,
                "valueType": f.value_type.value,
                "defaultValue": jsonio.value_json(f.default),
                "description": f.description,
            }
            for f in pricing.features
        ],
        "usageLimits": [
            {
                "name": u.name,
                "valueType": u.value_type.value,
                "defaultValue": jsonio.value_json(u.default),
                "unit": u.unit,
                "linkedFeatures": sorted(u.linked_features),
            }
            for u in pricing.usage_limits
        ],
        "plans": [
            {
                "name": p.name,
                "price": jsonio.price_json(p.price),
                "unit": p.unit,
                "features": {k: jsonio.value_json(v) for k, v in p.feature_values.items()},
                "usageLimits": {k: jsonio.value_json(v) for k, v in p.usage_limit_values.items()},
            }
            for p in pricing.plans
        ],
        "addOns": [
            {
                "name": a.name,
                "price": jsonio.price_json(a.price),
                "availableFor": sorted(a.available_for),
                "dependsOn": sorted(a.depends_on),
                "excludes": sorted(a.excludes),
                "features": {k: jsonio.value_json(v) for k, v in a.feature_values.items()},
                "usageLimits": {k: jsonio.value_json(v) for k, v in a.usage_limit_values.items()},
                "usageLimitsExtensions": {
                    k: jsonio.value_json(v) for k, v in a.usage_limit_extensions.items()},
            }
            for a in pricing.add_ons
        ],
    }


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception as exc:
        raise HTTPException(status_code=400, detail="request body must be JSON") from exc
    if not isinstance(body, dict):
        raise HTTPException(status_code=400, detail="request body must be a JSON object")
    return body


def _parse_inline(source: str) -> Pricing:
    from .parser import parse_pricing
    result = parse_pricing(source)
    if result.pricing is None:
        raise HTTPException(status_code=422, detail={
            "message": "pricing failed validation",
            "diagnostics": [jsonio.syntax_diagnostic_json(d) for d in result.diagnostics],
        })
    return result.pricing
