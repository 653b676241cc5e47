/* Typed client for the pricing analysis service (REST, /api/v1).
   Numeric values cross the wire as exact strings ("65.99", "unlimited");
   counts are plain numbers. */

export type Value = boolean | string;
export type ValueType = "BOOLEAN" | "NUMERIC" | "TEXT";

export interface FeatureDef {
  name: string;
  valueType: ValueType;
  defaultValue: Value;
  description: string | null;
}

export interface UsageLimitDef {
  name: string;
  valueType: ValueType;
  defaultValue: Value;
  unit: string;
  linkedFeatures: string[];
}

export interface PlanDef {
  name: string;
  price: string;
  unit: string | null;
  features: Record<string, Value>;
  usageLimits: Record<string, Value>;
}

export interface AddOnDef {
  name: string;
  price: string;
  availableFor: string[];
  dependsOn: string[];
  excludes: string[];
  features: Record<string, Value>;
  usageLimits: Record<string, Value>;
  usageLimitsExtensions: Record<string, string>;
}

export interface PricingModel {
  saasName: string;
  version: string;
  currency: string;
  createdAt: string | null;
  features: FeatureDef[];
  usageLimits: UsageLimitDef[];
  plans: PlanDef[];
  addOns: AddOnDef[];
}

export interface Finding {
  code: string;
  severity: "ERROR" | "WARNING";
  subject: string;
  message: string;
  line?: number;
  column?: number;
}

export interface Valuation {
  features: Record<string, Value>;
  usageLimits: Record<string, Value>;
  cost: string;
}

export interface SubscriptionVerdict {
  valid: boolean;
  violations: Finding[];
  valuation?: Valuation;
  cost?: string;
}

export interface SubscriptionRow {
  plan: string | null;
  addOns: string[];
  cost: string;
}

export interface OptimumResult {
  direction: "min" | "max";
  cost: string;
  subscriptions: { plan: string | null; addOns: string[] }[];
  indeterminate: { plan: string | null; addOns: string[] }[];
}

export interface DiagnosticsResult {
  ok: boolean;
  findings: Finding[];
}

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`service responded ${status}`);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail: unknown = null;
    try {
      detail = await response.json();
    } catch {
      detail = await response.text().catch(() => null);
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string, params?: Record<string, string | number | undefined>): string {
    const url = new URL(`${this.baseUrl}${path}`);
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value !== undefined) url.searchParams.set(key, String(value));
    }
    return url.toString();
  }

  async upload(yaml: string): Promise<{ id: string; diagnostics: Finding[] }> {
    const response = await fetch(this.url("/pricings"), {
      method: "POST",
      headers: { "content-type": "text/yaml" },
      body: yaml,
    });
    return expectJson(response);
  }

  async source(id: string): Promise<string> {
    const response = await fetch(this.url(`/pricings/${id}`));
    if (!response.ok) throw new ApiError(response.status, null);
    return response.text();
  }

  async model(id: string): Promise<PricingModel> {
    return expectJson(await fetch(this.url(`/pricings/${id}/model`)));
  }

  async cardinal(id: string, filter?: string): Promise<number> {
    const body = await expectJson<{ cardinal: number }>(
      await fetch(this.url(`/pricings/${id}/cardinal`, { filter })));
    return body.cardinal;
  }

  async optimum(id: string, direction: "min" | "max", filter?: string): Promise<OptimumResult> {
    return expectJson(await fetch(
      this.url(`/pricings/${id}/optimum`, { direction, filter })));
  }

  async subscriptions(id: string, filter?: string, limit = 100, offset = 0): Promise<{
    total: number; subscriptions: SubscriptionRow[];
  }> {
    return expectJson(await fetch(
      this.url(`/pricings/${id}/subscriptions`, { filter, limit, offset })));
  }

  async validateSubscription(
    id: string, plan: string | null, addOns: string[],
  ): Promise<SubscriptionVerdict> {
    const response = await fetch(this.url(`/pricings/${id}/validate-subscription`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ plan, addOns }),
    });
    return expectJson(response);
  }

  async diagnostics(yaml: string, now?: string): Promise<DiagnosticsResult> {
    const response = await fetch(this.url("/analysis/diagnostics", { now }), {
      method: "POST",
      headers: { "content-type": "text/yaml" },
      body: yaml,
    });
    return expectJson(response);
  }

  async inlineModel(yaml: string): Promise<PricingModel> {
    const response = await fetch(this.url("/analysis/model"), {
      method: "POST",
      headers: { "content-type": "text/yaml" },
      body: yaml,
    });
    return expectJson(response);
  }
}
