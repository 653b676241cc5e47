/* Live-validating document editor: keystrokes are debounced, the draft is
   sent to the inline diagnostics endpoint, findings are rendered with
   their source locations, and the pricing-card preview re-renders on every
   successful parse (parse failures keep the last good preview). */

import type { ApiClient, PricingModel } from "./api.js";
import { renderPricingCard } from "./pricingCard.js";
import { GatedRunner, debounced } from "./state.js";

export interface Editor {
  element: HTMLElement;
  setText(text: string): Promise<void>;
  text(): string;
  findings(): { code: string; line?: number }[];
  idle(): Promise<void>;
}

export interface EditorOptions {
  debounceMs?: number;
  now?: string; // reference date for temporal lint checks
}

export function createEditor(api: ApiClient, options: EditorOptions = {}): Editor {
  const debounceMs = options.debounceMs ?? 300;
  const runner = new GatedRunner();
  let current: { code: string; line?: number }[] = [];

  const root = document.createElement("section");
  root.className = "editor";
  root.dataset.testid = "editor";
  root.innerHTML = `
    <h2>Edit the document</h2>
    <textarea data-testid="editor-text" rows="24" spellcheck="false"></textarea>
    <ul class="annotations" data-testid="editor-annotations"></ul>
    <div class="preview" data-testid="editor-preview"></div>
  `;

  const textarea = root.querySelector<HTMLTextAreaElement>("[data-testid=editor-text]")!;
  const annotations = root.querySelector<HTMLElement>("[data-testid=editor-annotations]")!;
  const preview = root.querySelector<HTMLElement>("[data-testid=editor-preview]")!;

  function renderFindings(findings: { code: string; severity: string; message: string;
                                      line?: number }[]): void {
    current = findings.map((f) => ({ code: f.code, line: f.line }));
    annotations.replaceChildren();
    for (const finding of findings) {
      const item = document.createElement("li");
      item.dataset.code = finding.code;
      item.className = finding.severity.toLowerCase();
      const where = finding.line !== undefined ? `line ${finding.line}: ` : "";
      item.textContent = `${where}${finding.severity} ${finding.code} — ${finding.message}`;
      annotations.appendChild(item);
    }
  }

  function renderPreview(model: PricingModel): void {
    preview.replaceChildren(renderPricingCard(model));
  }

  function refresh(): Promise<void> {
    const draft = textarea.value;
    return runner.run(
      async () => {
        const diagnostics = await api.diagnostics(draft, options.now);
        const model = diagnostics.ok ? await api.inlineModel(draft) : null;
        return { diagnostics, model };
      },
      ({ diagnostics, model }) => {
        renderFindings(diagnostics.findings);
        if (model) renderPreview(model);
      },
    );
  }

  const scheduleRefresh = debounced(debounceMs, () => { void refresh(); });
  textarea.addEventListener("input", scheduleRefresh);

  return {
    element: root,
    setText: async (text) => {
      textarea.value = text;
      await refresh();
    },
    text: () => textarea.value,
    findings: () => current,
    idle: () => runner.idle(),
  };
}
