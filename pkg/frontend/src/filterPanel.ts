/* Filter explorer: structured atom rows composed with AND, live matching
   count and the cheapest matching subscription.

   Atoms are built from pickers, so only type-compatible operators can be
   chosen (ordering operators never appear for BOOLEAN/TEXT identifiers);
   an advanced mode accepts the raw filter grammar instead. */

import type { ApiClient, PricingModel, ValueType } from "./api.js";
import { ApiError } from "./api.js";
import { GatedRunner } from "./state.js";

export interface FilterAtom {
  identifier: string;
  op: "=" | "!=" | "<" | "<=" | ">" | ">=";
  value: string; // "true"/"false" for BOOLEAN, number text for NUMERIC, raw text for TEXT
}

const ORDERING_OPS = ["<", "<=", ">", ">="] as const;

export function operatorsFor(valueType: ValueType): FilterAtom["op"][] {
  return valueType === "NUMERIC" ? ["=", "!=", ...ORDERING_OPS] : ["=", "!="];
}

export function atomToText(atom: FilterAtom, valueType: ValueType): string {
  if (valueType === "TEXT") {
    const escaped = atom.value.replace(/\\/g, "\\\\").replace(/"/g, '\\"');
    return `${atom.identifier} ${atom.op} "${escaped}"`;
  }
  return `${atom.identifier} ${atom.op} ${atom.value}`;
}

export interface FilterPanel {
  element: HTMLElement;
  addAtom(atom: FilterAtom): Promise<void>;
  removeAtom(index: number): Promise<void>;
  setAdvanced(text: string): Promise<void>;
  filterText(): string | undefined;
  idle(): Promise<void>;
}

export function createFilterPanel(
  api: ApiClient, pricingId: string, model: PricingModel,
): FilterPanel {
  const atoms: FilterAtom[] = [];
  let advanced: string | null = null;
  const runner = new GatedRunner();

  const identifierTypes = new Map<string, ValueType>();
  for (const f of model.features) identifierTypes.set(f.name, f.valueType);
  for (const u of model.usageLimits) identifierTypes.set(u.name, u.valueType);

  const root = document.createElement("section");
  root.className = "filter-panel";
  root.dataset.testid = "filter-panel";
  root.innerHTML = `
    <h2>Filter the space</h2>
    <ul class="atom-list" data-testid="atom-list"></ul>
    <div class="atom-inputs">
      <select data-testid="atom-identifier"></select>
      <select data-testid="atom-op"></select>
      <input data-testid="atom-value" />
      <button type="button" data-testid="atom-add">add</button>
    </div>
    <label class="advanced-row">
      advanced: <input data-testid="advanced-input" placeholder="raw filter expression" />
    </label>
    <p>matching subscriptions: <output data-testid="filter-count">…</output></p>
    <p class="cheapest" data-testid="filter-cheapest"></p>
    <p class="filter-error hidden" data-testid="filter-error"></p>
  `;

  const atomList = root.querySelector<HTMLElement>("[data-testid=atom-list]")!;
  const identifierSelect = root.querySelector<HTMLSelectElement>("[data-testid=atom-identifier]")!;
  const opSelect = root.querySelector<HTMLSelectElement>("[data-testid=atom-op]")!;
  const valueInput = root.querySelector<HTMLInputElement>("[data-testid=atom-value]")!;
  const addButton = root.querySelector<HTMLButtonElement>("[data-testid=atom-add]")!;
  const advancedInput = root.querySelector<HTMLInputElement>("[data-testid=advanced-input]")!;
  const countOut = root.querySelector<HTMLElement>("[data-testid=filter-count]")!;
  const cheapestOut = root.querySelector<HTMLElement>("[data-testid=filter-cheapest]")!;
  const errorOut = root.querySelector<HTMLElement>("[data-testid=filter-error]")!;

  for (const [name] of identifierTypes) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    identifierSelect.appendChild(option);
  }

  function refreshOperatorChoices(): void {
    const valueType = identifierTypes.get(identifierSelect.value) ?? "BOOLEAN";
    opSelect.replaceChildren();
    for (const op of operatorsFor(valueType)) {
      const option = document.createElement("option");
      option.value = op;
      option.textContent = op;
      opSelect.appendChild(option);
    }
  }
  refreshOperatorChoices();
  identifierSelect.addEventListener("change", refreshOperatorChoices);

  function filterText(): string | undefined {
    if (advanced !== null) return advanced || undefined;
    if (!atoms.length) return undefined;
    return atoms
      .map((atom) => atomToText(atom, identifierTypes.get(atom.identifier)!))
      .join(" AND ");
  }

  function renderAtoms(): void {
    atomList.replaceChildren();
    atoms.forEach((atom, index) => {
      const item = document.createElement("li");
      item.textContent = atomToText(atom, identifierTypes.get(atom.identifier)!);
      const remove = document.createElement("button");
      remove.type = "button";
      remove.textContent = "remove";
      remove.addEventListener("click", () => { void removeAtom(index); });
      item.appendChild(remove);
      atomList.appendChild(item);
    });
  }

  function refresh(): Promise<void> {
    const text = filterText();
    return runner.run(
      async () => {
        const count = await api.cardinal(pricingId, text);
        if (count === 0) return { count, optimum: null };
        try {
          return { count, optimum: await api.optimum(pricingId, "min", text) };
        } catch (error) {
          if (error instanceof ApiError && error.status === 422) {
            return { count, optimum: null }; // only contact-priced matches
          }
          throw error;
        }
      },
      ({ count, optimum }) => {
        errorOut.classList.add("hidden");
        countOut.textContent = String(count);
        if (count === 0) {
          cheapestOut.textContent = "no match";
        } else if (optimum === null) {
          cheapestOut.textContent = "cheapest: contact sales";
        } else {
          const best = optimum.subscriptions[0];
          const addOns = best.addOns.length ? ` + ${best.addOns.join(", ")}` : "";
          cheapestOut.textContent =
            `cheapest: ${best.plan ?? "(no plan)"}${addOns} at ${optimum.cost}`;
        }
      },
      (error) => {
        errorOut.classList.remove("hidden");
        errorOut.textContent = error instanceof ApiError
          ? `filter rejected: ${JSON.stringify(error.detail)}`
          : "service unreachable";
      },
    );
  }

  async function addAtom(atom: FilterAtom): Promise<void> {
    const valueType = identifierTypes.get(atom.identifier);
    if (!valueType) throw new Error(`unknown identifier '${atom.identifier}'`);
    if (!operatorsFor(valueType).includes(atom.op)) {
      throw new Error(`operator ${atom.op} not applicable to ${valueType}`);
    }
    atoms.push(atom);
    advanced = null;
    advancedInput.value = "";
    renderAtoms();
    await refresh();
  }

  async function removeAtom(index: number): Promise<void> {
    atoms.splice(index, 1);
    renderAtoms();
    await refresh();
  }

  addButton.addEventListener("click", () => {
    void addAtom({
      identifier: identifierSelect.value,
      op: opSelect.value as FilterAtom["op"],
      value: valueInput.value,
    });
  });
  advancedInput.addEventListener("change", () => {
    advanced = advancedInput.value;
    void refresh();
  });

  void refresh();

  return {
    element: root,
    addAtom,
    removeAtom,
    setAdvanced: async (text) => { advanced = text; advancedInput.value = text; await refresh(); },
    filterText,
    idle: () => runner.idle(),
  };
}
