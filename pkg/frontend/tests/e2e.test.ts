/* End-to-end tests against the real service: the DOM must only ever show
   numbers the service produced for the current state. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { beforeAll, describe, expect, it } from "vitest";

import { ApiClient, type PricingModel } from "../src/api.js";
import { createBuilder } from "../src/builder.js";
import { createEditor } from "../src/editor.js";
import { createFilterPanel } from "../src/filterPanel.js";
import { renderPricingCard } from "../src/pricingCard.js";
import { BASE_URL } from "./config";

const here = dirname(fileURLToPath(import.meta.url));
const zoomYaml = readFileSync(join(here, "..", "..", "fixtures", "zoom.yml"), "utf-8");
const circularYaml = readFileSync(join(here, "..", "..", "fixtures", "circular.yml"), "utf-8");
const minimalYaml = readFileSync(join(here, "..", "..", "fixtures", "minimal.yml"), "utf-8");

const THE_FILTER = "administratorPortal = true AND maxAssistantsPerMeeting >= 200";

const api = new ApiClient(BASE_URL);
let zoomId: string;
let zoomModel: PricingModel;

beforeAll(async () => {
  const upload = await api.upload(zoomYaml);
  expect(upload.diagnostics).toEqual([]);
  zoomId = upload.id;
  zoomModel = await api.model(zoomId);
});

describe("pricing card", () => {
  it("renders three plan columns and three add-on cards", () => {
    const card = renderPricingCard(zoomModel);
    expect(card.querySelectorAll("thead th[data-plan]")).toHaveLength(3);
    expect(card.querySelectorAll(".addon-card")).toHaveLength(3);
  });

  it("hides the add-on panel when the pricing has none", async () => {
    const { id } = await api.upload(minimalYaml);
    const card = renderPricingCard(await api.model(id));
    expect(card.querySelector("[data-testid=addon-panel]")).toBeNull();
  });

  it("disables an add-on card that the selected plan cannot take", () => {
    const card = renderPricingCard(zoomModel, { selectedPlan: "BASIC" });
    const huge = card.querySelector<HTMLElement>(".addon-card[data-addon=hugeMeetings]")!;
    expect(huge.classList.contains("disabled")).toBe(true);
    expect(huge.title).toContain("BASIC");
    const captions = card.querySelector<HTMLElement>(
      ".addon-card[data-addon=translatedCaptions]")!;
    expect(captions.classList.contains("disabled")).toBe(false);
  });
});

describe("subscription builder", () => {
  it("shows exactly the service's cost for PRO + hugeMeetings", async () => {
    const builder = createBuilder(api, zoomId, zoomModel);
    await builder.selectPlan("PRO");
    await builder.toggleAddOn("hugeMeetings");
    await builder.idle();

    const shown = builder.element.querySelector("[data-testid=builder-cost]")!.textContent;
    const verdict = await api.validateSubscription(zoomId, "PRO", ["hugeMeetings"]);
    expect(verdict.valid).toBe(true);
    expect(shown).toBe(verdict.cost);
    expect(shown).toBe("65.99");
  });

  it("never submits an availability violation: hugeMeetings is disabled on BASIC", async () => {
    const builder = createBuilder(api, zoomId, zoomModel);
    await builder.selectPlan("BASIC");
    await builder.idle();
    expect(builder.addOnEnabled("hugeMeetings")).toBe(false);

    await builder.toggleAddOn("hugeMeetings"); // no-op on a blocked control
    await builder.idle();
    expect(builder.state().addOns).toEqual([]);
    const verdict = await api.validateSubscription(zoomId, "BASIC", []);
    expect(verdict.valid).toBe(true);
  });

  it("flags a deselected plan as invalid while plans exist", async () => {
    const builder = createBuilder(api, zoomId, zoomModel);
    await builder.selectPlan("PRO");
    await builder.toggleAddOn("translatedCaptions");
    await builder.selectPlan(null);
    await builder.idle();
    const validity = builder.element.querySelector("[data-testid=builder-validity]")!;
    expect(validity.textContent).toContain("not a valid subscription");
    const codes = [...builder.element.querySelectorAll("[data-testid=builder-violations] li")]
      .map((li) => (li as HTMLElement).dataset.code);
    expect(codes).toContain("SUBSCRIPTION_NOT_EMPTY");
  });

  it("lets dependency violations through transiently with a one-click fix", async () => {
    const { id } = await api.upload(circularYaml);
    const model = await api.model(id);
    const builder = createBuilder(api, id, model);
    await builder.toggleAddOn("a1");
    await builder.idle();

    const items = [...builder.element.querySelectorAll(
      "[data-testid=builder-violations] li")] as HTMLElement[];
    const dependency = items.find((li) => li.dataset.code === "DEPENDENCY");
    expect(dependency).toBeDefined();
    const fix = dependency!.querySelector("button")!;
    expect(fix.textContent).toBe("add a2");
    fix.click();
    await builder.idle();
    expect(builder.state().addOns).toContain("a2");
  });

  it("blocks exclusion conflicts at the control", async () => {
    const { id } = await api.upload(circularYaml);
    const model = await api.model(id);
    const builder = createBuilder(api, id, model);
    await builder.toggleAddOn("a1");
    await builder.idle();
    // a3 excludes a1, so while a1 is selected the a3 control is disabled
    expect(builder.addOnEnabled("a3")).toBe(false);
  });
});

describe("filter panel", () => {
  it("shows the same count as the cardinal endpoint for the admin filter", async () => {
    const panel = createFilterPanel(api, zoomId, zoomModel);
    await panel.addAtom({ identifier: "administratorPortal", op: "=", value: "true" });
    await panel.addAtom({ identifier: "maxAssistantsPerMeeting", op: ">=", value: "200" });
    await panel.idle();

    const shown = panel.element.querySelector("[data-testid=filter-count]")!.textContent;
    expect(shown).toBe("8");
    expect(await api.cardinal(zoomId, panel.filterText())).toBe(8);
    expect(await api.cardinal(zoomId, THE_FILTER)).toBe(8);
  });

  it("equals cardinal with no atoms", async () => {
    const panel = createFilterPanel(api, zoomId, zoomModel);
    await panel.idle();
    const shown = panel.element.querySelector("[data-testid=filter-count]")!.textContent;
    expect(shown).toBe(String(await api.cardinal(zoomId)));
  });

  it("reports no match for contradictory atoms", async () => {
    const panel = createFilterPanel(api, zoomId, zoomModel);
    await panel.addAtom({ identifier: "records", op: "=", value: "true" });
    await panel.addAtom({ identifier: "records", op: "=", value: "false" });
    await panel.idle();
    expect(panel.element.querySelector("[data-testid=filter-count]")!.textContent).toBe("0");
    expect(panel.element.querySelector("[data-testid=filter-cheapest]")!.textContent)
      .toBe("no match");
  });

  it("never offers ordering operators for boolean identifiers", () => {
    const panel = createFilterPanel(api, zoomId, zoomModel);
    const identifier = panel.element.querySelector<HTMLSelectElement>(
      "[data-testid=atom-identifier]")!;
    identifier.value = "records";
    identifier.dispatchEvent(new Event("change"));
    const ops = [...panel.element.querySelectorAll("[data-testid=atom-op] option")]
      .map((o) => (o as HTMLOptionElement).value);
    expect(ops).toEqual(["=", "!="]);
  });

  it("accepts the raw grammar in advanced mode", async () => {
    const panel = createFilterPanel(api, zoomId, zoomModel);
    await panel.setAdvanced("records = true AND cloudStorage >= 5");
    await panel.idle();
    const cheapest = panel.element.querySelector("[data-testid=filter-cheapest]")!;
    expect(cheapest.textContent).toContain("PRO");
    expect(cheapest.textContent).toContain("15.99");
  });
});

describe("editor", () => {
  const NOW = "2025-06-01";

  it("shows LINKED_FEATURE_MISMATCH when the error is typed and clears it when fixed",
     async () => {
    const editor = createEditor(api, { debounceMs: 0, now: NOW });
    await editor.setText(zoomYaml);
    expect(editor.findings()).toEqual([]);

    const broken = zoomYaml.replace(
      "  BASIC:\n    price: 0.00\n    unit: user/month\n",
      "  BASIC:\n    price: 0.00\n    unit: user/month\n    usageLimits:\n      cloudStorage: 7\n",
    );
    expect(broken).not.toBe(zoomYaml);
    await editor.setText(broken);
    const codes = editor.findings().map((f) => f.code);
    expect(codes).toContain("LINKED_FEATURE_MISMATCH");
    const visible = editor.element.querySelector(
      "[data-testid=editor-annotations] li[data-code=LINKED_FEATURE_MISMATCH]");
    expect(visible).not.toBeNull();

    await editor.setText(zoomYaml);
    expect(editor.findings()).toEqual([]);
    expect(editor.element.querySelectorAll("[data-testid=editor-annotations] li"))
      .toHaveLength(0);
  });

  it("annotates an availability typo at its source line", async () => {
    const editor = createEditor(api, { debounceMs: 0, now: NOW });
    const typo = zoomYaml.replace("availableFor: [PRO, BUSINESS]",
                                  "availableFor: [PRO, BUSINESZ]");
    await editor.setText(typo);
    const finding = editor.findings().find((f) => f.code === "UNKNOWN_REFERENCE");
    expect(finding).toBeDefined();
    const expectedLine = typo.slice(0, typo.indexOf("BUSINESZ")).split("\n").length;
    expect(finding!.line).toBe(expectedLine);
  });

  it("keeps the last good preview across a parse error", async () => {
    const editor = createEditor(api, { debounceMs: 0, now: NOW });
    await editor.setText(zoomYaml);
    const before = editor.element.querySelector("[data-testid=editor-preview]")!.innerHTML;
    expect(before).toContain("Zoom");

    await editor.setText("saasName: [unclosed");
    expect(editor.findings().length).toBeGreaterThan(0);
    expect(editor.element.querySelector("[data-testid=editor-preview]")!.innerHTML)
      .toBe(before);
  });
});
