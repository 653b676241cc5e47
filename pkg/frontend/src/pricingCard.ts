/* Pricing card: plans as columns, features and usage limits as rows,
   add-ons as cards showing availability for the currently selected plan. */

import type { PricingModel, Value } from "./api.js";

export function formatValue(value: Value, unit = ""): string {
  if (value === true) return "✓";
  if (value === false) return "—";
  if (value === "unlimited") return "unlimited";
  return unit ? `${value} ${unit}` : String(value);
}

export function resolvePlanValue(
  model: PricingModel, plan: string, kind: "features" | "usageLimits", name: string,
): Value {
  const planDef = model.plans.find((p) => p.name === plan);
  const declared = kind === "features"
    ? model.features.find((f) => f.name === name)
    : model.usageLimits.find((u) => u.name === name);
  if (!declared) throw new Error(`unknown ${kind} entry '${name}'`);
  const override = planDef?.[kind]?.[name];
  return override !== undefined ? override : declared.defaultValue;
}

export interface PricingCardOptions {
  selectedPlan?: string | null;
  onSelectPlan?: (plan: string) => void;
}

export function renderPricingCard(
  model: PricingModel, options: PricingCardOptions = {},
): HTMLElement {
  const root = document.createElement("section");
  root.className = "pricing-card";
  root.dataset.testid = "pricing-card";

  const heading = document.createElement("h2");
  heading.textContent = `${model.saasName} — plans`;
  root.appendChild(heading);

  const table = document.createElement("table");
  table.className = "plan-matrix";
  const head = table.createTHead().insertRow();
  head.appendChild(document.createElement("th"));
  for (const plan of model.plans) {
    const cell = document.createElement("th");
    cell.dataset.plan = plan.name;
    const price = plan.price === "contact" ? "contact sales" : plan.price;
    cell.textContent = `${plan.name} (${price}${plan.unit ? " / " + plan.unit : ""})`;
    if (options.selectedPlan === plan.name) cell.classList.add("selected");
    if (options.onSelectPlan) {
      cell.classList.add("clickable");
      cell.addEventListener("click", () => options.onSelectPlan!(plan.name));
    }
    head.appendChild(cell);
  }

  const body = table.createTBody();
  for (const feature of model.features) {
    const row = body.insertRow();
    row.insertCell().textContent = feature.name;
    for (const plan of model.plans) {
      row.insertCell().textContent =
        formatValue(resolvePlanValue(model, plan.name, "features", feature.name));
    }
  }
  for (const limit of model.usageLimits) {
    const row = body.insertRow();
    row.className = "usage-limit-row";
    row.insertCell().textContent = `${limit.name}`;
    for (const plan of model.plans) {
      row.insertCell().textContent =
        formatValue(resolvePlanValue(model, plan.name, "usageLimits", limit.name), limit.unit);
    }
  }
  if (model.plans.length) root.appendChild(table);

  if (model.addOns.length) {
    const panel = document.createElement("div");
    panel.className = "addon-panel";
    panel.dataset.testid = "addon-panel";
    const title = document.createElement("h3");
    title.textContent = "Add-ons";
    panel.appendChild(title);
    for (const addOn of model.addOns) {
      const card = document.createElement("div");
      card.className = "addon-card";
      card.dataset.addon = addOn.name;
      const unavailable = options.selectedPlan != null
        && model.plans.length > 0
        && !addOn.availableFor.includes(options.selectedPlan);
      if (unavailable) {
        card.classList.add("disabled");
        card.title = `not available for plan ${options.selectedPlan}`;
      }
      const name = document.createElement("strong");
      name.textContent = addOn.name;
      const price = document.createElement("span");
      price.textContent = ` ${addOn.price === "contact" ? "contact sales" : addOn.price}`;
      card.append(name, price);
      if (addOn.dependsOn.length) {
        const deps = document.createElement("div");
        deps.className = "addon-note";
        deps.textContent = `requires: ${addOn.dependsOn.join(", ")}`;
        card.appendChild(deps);
      }
      if (addOn.excludes.length) {
        const excl = document.createElement("div");
        excl.className = "addon-note";
        excl.textContent = `excludes: ${addOn.excludes.join(", ")}`;
        card.appendChild(excl);
      }
      panel.appendChild(card);
    }
    root.appendChild(panel);
  }
  return root;
}
