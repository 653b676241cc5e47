/* Explorer shell: load a pricing into the service, then mount the pricing
   card, subscription builder, filter panel, and the live editor. */

import { ApiClient } from "./api.js";
import { createBuilder } from "./builder.js";
import { createEditor } from "./editor.js";
import { createFilterPanel } from "./filterPanel.js";
import { renderPricingCard } from "./pricingCard.js";

const DEFAULT_BASE = `${window.location.protocol}//${window.location.hostname}:8000/api/v1`;

export async function mountExplorer(
  container: HTMLElement, baseUrl: string = DEFAULT_BASE,
): Promise<void> {
  const api = new ApiClient(baseUrl);
  container.innerHTML = `
    <header>
      <h1>Pricing explorer</h1>
      <textarea data-testid="upload-text" rows="6"
        placeholder="paste a Pricing2Yaml document"></textarea>
      <button type="button" data-testid="upload-button">load pricing</button>
      <p data-testid="upload-status"></p>
    </header>
    <main data-testid="panels"></main>
  `;
  const uploadText = container.querySelector<HTMLTextAreaElement>("[data-testid=upload-text]")!;
  const uploadButton = container.querySelector<HTMLButtonElement>("[data-testid=upload-button]")!;
  const status = container.querySelector<HTMLElement>("[data-testid=upload-status]")!;
  const panels = container.querySelector<HTMLElement>("[data-testid=panels]")!;

  uploadButton.addEventListener("click", () => {
    void (async () => {
      try {
        const { id, diagnostics } = await api.upload(uploadText.value);
        const errors = diagnostics.filter((d) => d.severity === "ERROR");
        if (errors.length) {
          status.textContent = `rejected: ${errors[0].message} (line ${errors[0].line})`;
          return;
        }
        status.textContent = `loaded pricing ${id}`;
        await showPricing(id);
      } catch {
        status.textContent = "service unreachable";
      }
    })();
  });

  async function showPricing(id: string): Promise<void> {
    const model = await api.model(id);
    panels.replaceChildren();

    const builder = createBuilder(api, id, model);
    let card = renderPricingCard(model, {
      selectedPlan: builder.state().plan,
      onSelectPlan: (plan) => { void builder.selectPlan(plan).then(repaintCard); },
    });
    function repaintCard(): void {
      const fresh = renderPricingCard(model, {
        selectedPlan: builder.state().plan,
        onSelectPlan: (plan) => { void builder.selectPlan(plan).then(repaintCard); },
      });
      card.replaceWith(fresh);
      card = fresh;
    }

    const filterPanel = createFilterPanel(api, id, model);
    const editor = createEditor(api);
    void api.source(id).then((text) => editor.setText(text));

    panels.append(card, builder.element, filterPanel.element, editor.element);
  }
}

declare global {
  interface Window { PRICING_API_BASE?: string }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void mountExplorer(document.getElementById("app")!, window.PRICING_API_BASE ?? DEFAULT_BASE);
}
