/**
 * DOM layer: renders the dataset description form and drives a
 * submission through the registry client.
 *
 * Widget kinds are fixed: Type, Description, Creator and Provider are
 * text inputs; Topic and Location are checkbox lists; Access Rights and
 * Language are dropdowns; Keywords is one comma-separated text input.
 */

import type {
  DescriptionDocument,
  QualityReport,
  RegistryGateway,
  Violation,
  VocabEntry,
  Vocabularies,
} from "./api.js";
import {
  ACCESS_RIGHTS_OPTIONS,
  FormState,
  emptyState,
  fromDocument,
  slugOf,
  toDocument,
} from "./state.js";
import { validateDocument } from "./validate.js";

const TEXT_FIELDS: { name: keyof FormState & string; label: string; hint?: string }[] = [
  { name: "entityType", label: "Type", hint: "https://smartdatamodels.org/dataModel.<subject>/<type>" },
  { name: "description", label: "Description" },
  { name: "creators", label: "Creator", hint: "comma separated" },
  { name: "providers", label: "Provider", hint: "comma separated" },
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function fieldSection(name: string, label: string, widget: HTMLElement, hint?: string): HTMLElement {
  const section = el("section", { class: "field", "data-field": name });
  const caption = el("label", {}, label);
  caption.appendChild(widget);
  section.appendChild(caption);
  if (hint) {
    section.appendChild(el("p", { class: "hint" }, hint));
  }
  section.appendChild(el("p", { class: "field-error", hidden: "" }));
  return section;
}

function checkboxGroup(name: string, legend: string, entries: VocabEntry[]): HTMLFieldSetElement {
  const fieldset = el("fieldset", { class: "choices", "data-field": name });
  fieldset.appendChild(el("legend", {}, legend));
  if (entries.length === 0) {
    fieldset.disabled = true;
    fieldset.appendChild(el("p", { class: "empty-vocab" }, `No ${legend.toLowerCase()} entries available.`));
  }
  for (const entry of entries) {
    const row = el("label", { class: "choice" });
    const box = el("input", { type: "checkbox", name, value: entry.token });
    row.appendChild(box);
    row.appendChild(document.createTextNode(` ${entry.label}`));
    fieldset.appendChild(row);
  }
  fieldset.appendChild(el("p", { class: "field-error", hidden: "" }));
  return fieldset;
}

function dropdown(name: string, labels: string[]): HTMLSelectElement {
  const select = el("select", { name });
  for (const label of labels) {
    select.appendChild(el("option", { value: label }, label));
  }
  return select;
}

/** Vocabulary fetch failures leave a read-only banner and no form. */
export function renderLoadError(root: HTMLElement, message: string): void {
  root.replaceChildren(el("div", { class: "banner error", role: "alert" }, message));
}

export class DatasetForm {
  readonly form: HTMLFormElement;
  private readonly result: HTMLElement;
  private submitting = false;
  // violations the registry reported on the last attempt; cleared on edit
  private serverViolations: Violation[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly vocab: Vocabularies,
    private readonly client: RegistryGateway,
  ) {
    this.form = el("form", { class: "dataset-form", novalidate: "" });
    for (const field of TEXT_FIELDS) {
      const input = el("input", { type: "text", name: field.name });
      this.form.appendChild(fieldSection(field.name, field.label, input, field.hint));
    }
    this.form.appendChild(checkboxGroup("themes", "Data Type Topic", vocab.themes));
    this.form.appendChild(
      fieldSection(
        "accessRights",
        "Access Rights",
        dropdown("accessRights", [...ACCESS_RIGHTS_OPTIONS]),
      ),
    );
    this.form.appendChild(
      fieldSection(
        "language",
        "Language",
        dropdown("language", vocab.languages.map((entry) => entry.label)),
      ),
    );
    this.form.appendChild(checkboxGroup("locations", "Location", vocab.countries));
    this.form.appendChild(
      fieldSection("keywords", "Keywords", el("input", { type: "text", name: "keywords" }), "comma separated"),
    );
    const button = el("button", { type: "submit" }, "Publish dataset");
    this.form.appendChild(button);

    this.result = el("section", { class: "result", hidden: "" });
    root.replaceChildren(this.form, this.result);

    this.form.addEventListener("input", () => {
      this.serverViolations = [];
      this.refresh();
    });
    this.form.addEventListener("change", () => {
      this.serverViolations = [];
      this.refresh();
    });
    this.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit();
    });
    this.refresh();
  }

  private input(name: string): HTMLInputElement {
    return this.form.querySelector(`input[name="${name}"]`) as HTMLInputElement;
  }

  private select(name: string): HTMLSelectElement {
    return this.form.querySelector(`select[name="${name}"]`) as HTMLSelectElement;
  }

  private checkedTokens(name: string): string[] {
    const boxes = this.form.querySelectorAll<HTMLInputElement>(`input[name="${name}"]:checked`);
    return Array.from(boxes, (box) => box.value);
  }

  state(): FormState {
    return {
      entityType: this.input("entityType").value,
      description: this.input("description").value,
      creators: this.input("creators").value,
      providers: this.input("providers").value,
      themes: this.checkedTokens("themes"),
      accessRights: this.select("accessRights").value,
      language: this.select("language").value,
      locations: this.checkedTokens("locations"),
      keywords: this.input("keywords").value,
      status: this.submitting ? "submitting" : "idle",
    };
  }

  document(): DescriptionDocument {
    return toDocument(this.state());
  }

  /** Fill the widgets from an existing description, e.g. for re-publishing. */
  prefill(doc: Partial<DescriptionDocument>): void {
    const state = fromDocument(doc);
    this.input("entityType").value = state.entityType;
    this.input("description").value = state.description;
    this.input("creators").value = state.creators;
    this.input("providers").value = state.providers;
    this.input("keywords").value = state.keywords;
    if (state.accessRights) {
      this.select("accessRights").value = state.accessRights;
    }
    if (state.language) {
      this.select("language").value = state.language;
    }
    for (const name of ["themes", "locations"] as const) {
      const wanted = new Set(state[name]);
      for (const box of this.form.querySelectorAll<HTMLInputElement>(`input[name="${name}"]`)) {
        box.checked = wanted.has(box.value);
      }
    }
    this.refresh();
  }

  violations(): Violation[] {
    return validateDocument(this.document(), this.vocab);
  }

  private submitButton(): HTMLButtonElement {
    return this.form.querySelector("button[type=submit]") as HTMLButtonElement;
  }

  // submit stays disabled until the client-side checks all pass
  private refresh(): void {
    const clientSide = this.violations();
    this.submitButton().disabled = this.submitting || clientSide.length > 0;
    this.showViolations([...clientSide, ...this.serverViolations], { onlyTouched: true });
  }

  private showViolations(violations: Violation[], opts: { onlyTouched: boolean } = { onlyTouched: false }): void {
    const byField = new Map<string, string>();
    for (const violation of violations) {
      if (!byField.has(violation.field)) {
        byField.set(violation.field, violation.message);
      }
    }
    for (const holder of this.form.querySelectorAll<HTMLElement>("[data-field]")) {
      const name = holder.dataset.field ?? "";
      const slot = holder.querySelector<HTMLElement>(".field-error");
      if (!slot) {
        continue;
      }
      const message = byField.get(name);
      const touched = holder.dataset.touched === "yes";
      if (message && (!opts.onlyTouched || touched)) {
        slot.textContent = message;
        slot.hidden = false;
      } else {
        slot.textContent = "";
        slot.hidden = true;
      }
    }
  }

  private markTouched(): void {
    for (const holder of this.form.querySelectorAll<HTMLElement>("[data-field]")) {
      holder.dataset.touched = "yes";
    }
  }

  async submit(): Promise<void> {
    if (this.submitting) {
      return; // one submission at a time
    }
    this.markTouched();
    if (this.violations().length > 0) {
      this.refresh();
      return;
    }
    this.submitting = true;
    this.refresh();
    try {
      const doc = this.document();
      const outcome = await this.client.register(doc);
      if (outcome.kind === "rejected") {
        this.serverViolations = outcome.violations;
        return;
      }
      if (outcome.kind === "failed") {
        this.renderFailure(outcome.detail);
        return;
      }
      const preview = await this.client.preview(doc);
      this.renderSuccess(outcome.result, preview);
    } finally {
      this.submitting = false;
      this.refresh();
    }
  }

  private renderFailure(detail: string): void {
    this.result.hidden = false;
    this.result.replaceChildren(el("div", { class: "banner error", role: "alert" }, detail));
  }

  private renderSuccess(result: { catalogueId: string; datasetId: string; distributionIds: string[] }, preview: QualityReport | null): void {
    const ids = el("ul", { class: "entity-ids" });
    for (const id of [result.catalogueId, result.datasetId, ...result.distributionIds]) {
      const item = el("li");
      item.appendChild(el("code", {}, id));
      ids.appendChild(item);
    }
    const slug = slugOf(result.datasetId);
    const links = el("p", { class: "catalog-links" });
    links.appendChild(el("a", { href: `/dataset/${slug}.ttl`, class: "package-link" }, `dataset ${slug}`));
    links.appendChild(document.createTextNode(" · "));
    links.appendChild(el("a", { href: `/mqa/${slug}` }, "quality report"));

    this.result.hidden = false;
    this.result.replaceChildren(
      el("h2", {}, "Dataset published"),
      ids,
      links,
      this.previewBlock(preview),
    );
  }

  private previewBlock(preview: QualityReport | null): HTMLElement {
    const block = el("section", { class: "mqa-preview" });
    if (preview === null) {
      block.appendChild(el("p", {}, "Quality preview unavailable."));
      return block;
    }
    block.appendChild(
      el("p", { class: "mqa-total" }, `Quality preview: ${preview.total}/${preview.maxTotal} (${preview.rating})`),
    );
    const dims = el("ul", { class: "mqa-dimensions" });
    for (const name of ["findability", "accessibility", "interoperability", "reusability", "contextuality"] as const) {
      dims.appendChild(el("li", {}, `${name}: ${preview[name]}`));
    }
    block.appendChild(dims);
    const missing = preview.perMetric.filter((metric) => !metric.passed);
    if (missing.length > 0) {
      const list = el("ul", { class: "mqa-missing" });
      for (const metric of missing) {
        list.appendChild(el("li", {}, `missing: ${metric.name} (${metric.maxPoints} pts)`));
      }
      block.appendChild(list);
    }
    return block;
  }
}

export function renderForm(root: HTMLElement, vocab: Vocabularies, client: RegistryGateway): DatasetForm {
  return new DatasetForm(root, vocab, client);
}
