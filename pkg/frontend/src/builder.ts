/* Subscription builder: pick a plan, toggle add-ons, watch validity and
   cost update live from the service.

   Controls the user cannot meaningfully submit are disabled up front:
   add-ons unavailable for the selected plan and add-ons excluded by a
   current selection. Missing dependencies are allowed transiently and
   surfaced as warnings with a one-click fix. Cost and validity always come
   from the service response for the current state, never computed locally. */

import type { AddOnDef, ApiClient, PricingModel, SubscriptionVerdict } from "./api.js";
import { GatedRunner } from "./state.js";

export interface Builder {
  element: HTMLElement;
  selectPlan(plan: string | null): Promise<void>;
  toggleAddOn(name: string): Promise<void>;
  addOnEnabled(name: string): boolean;
  state(): { plan: string | null; addOns: string[] };
  idle(): Promise<void>;
}

export function createBuilder(
  api: ApiClient, pricingId: string, model: PricingModel,
): Builder {
  let plan: string | null = null;
  const selected = new Set<string>();
  const runner = new GatedRunner();

  const root = document.createElement("section");
  root.className = "builder";
  root.dataset.testid = "builder";
  root.innerHTML = `
    <h2>Build a subscription</h2>
    <div class="plan-choices" data-testid="plan-choices"></div>
    <div class="addon-toggles" data-testid="addon-toggles"></div>
    <p class="cost-line">cost: <output data-testid="builder-cost">—</output></p>
    <p class="validity-line" data-testid="builder-validity"></p>
    <ul class="violations" data-testid="builder-violations"></ul>
    <p class="stale-banner hidden" data-testid="stale-banner">
      service unreachable — showing last known state</p>
  `;

  const planBox = root.querySelector<HTMLElement>(".plan-choices")!;
  const addOnBox = root.querySelector<HTMLElement>(".addon-toggles")!;
  const costOut = root.querySelector<HTMLElement>("[data-testid=builder-cost]")!;
  const validityOut = root.querySelector<HTMLElement>("[data-testid=builder-validity]")!;
  const violationsOut = root.querySelector<HTMLElement>("[data-testid=builder-violations]")!;
  const staleBanner = root.querySelector<HTMLElement>("[data-testid=stale-banner]")!;

  const addOnInputs = new Map<string, HTMLInputElement>();

  for (const planDef of model.plans) {
    const label = document.createElement("label");
    const radio = document.createElement("input");
    radio.type = "radio";
    radio.name = "plan";
    radio.value = planDef.name;
    radio.addEventListener("change", () => { void selectPlan(planDef.name); });
    label.append(radio, ` ${planDef.name}`);
    planBox.appendChild(label);
  }

  for (const addOn of model.addOns) {
    const label = document.createElement("label");
    label.dataset.addon = addOn.name;
    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.value = addOn.name;
    checkbox.addEventListener("change", () => { void toggleAddOn(addOn.name); });
    label.append(checkbox, ` ${addOn.name}`);
    const reason = document.createElement("small");
    reason.className = "disable-reason";
    label.appendChild(reason);
    addOnBox.appendChild(label);
    addOnInputs.set(addOn.name, checkbox);
  }

  function addOnDef(name: string): AddOnDef {
    const def = model.addOns.find((a) => a.name === name);
    if (!def) throw new Error(`unknown add-on '${name}'`);
    return def;
  }

  function blockedReason(name: string): string | null {
    const def = addOnDef(name);
    if (model.plans.length && plan !== null && !def.availableFor.includes(plan)) {
      return `not available for ${plan}`;
    }
    for (const other of selected) {
      if (other === name) continue;
      const otherDef = addOnDef(other);
      if (def.excludes.includes(other) || otherDef.excludes.includes(name)) {
        return `excluded by ${other}`;
      }
    }
    return null;
  }

  function refreshControls(): void {
    for (const [name, input] of addOnInputs) {
      input.checked = selected.has(name);
      const reason = selected.has(name) ? null : blockedReason(name);
      input.disabled = reason !== null;
      const label = input.parentElement!;
      label.classList.toggle("disabled", reason !== null);
      label.querySelector<HTMLElement>(".disable-reason")!.textContent =
        reason ? ` (${reason})` : "";
    }
    for (const radio of planBox.querySelectorAll<HTMLInputElement>("input[type=radio]")) {
      radio.checked = radio.value === plan;
    }
  }

  function applyVerdict(verdict: SubscriptionVerdict): void {
    staleBanner.classList.add("hidden");
    costOut.textContent = verdict.cost ?? "—";
    validityOut.textContent = verdict.valid ? "valid subscription" : "not a valid subscription";
    validityOut.classList.toggle("invalid", !verdict.valid);
    violationsOut.replaceChildren();
    for (const violation of verdict.violations) {
      const item = document.createElement("li");
      item.dataset.code = violation.code;
      item.textContent = `${violation.code}: ${violation.message}`;
      if (violation.code === "DEPENDENCY") {
        const missing = violation.subject.split("/")[0];
        const fix = document.createElement("button");
        fix.type = "button";
        fix.textContent = `add ${missing}`;
        fix.addEventListener("click", () => { void toggleAddOn(missing); });
        item.appendChild(fix);
      }
      violationsOut.appendChild(item);
    }
  }

  function push(): Promise<void> {
    refreshControls();
    return runner.run(
      () => api.validateSubscription(pricingId, plan, [...selected]),
      applyVerdict,
      () => staleBanner.classList.remove("hidden"),
    );
  }

  async function selectPlan(next: string | null): Promise<void> {
    plan = next;
    // dropping a plan can strand add-ons that were only available for it;
    // they stay selected so the service verdict explains the problem
    await push();
  }

  async function toggleAddOn(name: string): Promise<void> {
    addOnDef(name);
    if (selected.has(name)) {
      selected.delete(name);
    } else {
      if (blockedReason(name) !== null) {
        refreshControls();
        return;
      }
      selected.add(name);
    }
    await push();
  }

  void push();

  return {
    element: root,
    selectPlan,
    toggleAddOn,
    addOnEnabled: (name) => !addOnInputs.get(name)!.disabled,
    state: () => ({ plan, addOns: [...selected].sort() }),
    idle: () => runner.idle(),
  };
}
