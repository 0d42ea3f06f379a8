// Template editor: build the field list with type pickers, watch the
// encoded size against the tag capacity, and save through the API. What
// is rendered after a save is always re-read from the server.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";
import { encodedSize, TAG_CAPACITY_BYTES } from "../encsize.js";
import type { FieldDef, FieldKind, TemplateDoc } from "../types.js";
import { FIELD_KINDS, templateProblems } from "../validate.js";

export class TemplatesView {
  private listHost = el("div");
  private editorHost = el("div", { class: "editor" });
  private draft: TemplateDoc = emptyTemplate();

  constructor(private api: Api) {}

  mount(root: HTMLElement): void {
    root.append(
      el("h2", {}, "Templates"),
      el("div", { class: "split" }, this.listHost, this.editorHost),
    );
    this.renderEditor();
    void this.reloadList();
  }

  destroy(): void {}

  async reloadList(): Promise<void> {
    const templates = await this.api.listTemplates();
    clear(this.listHost);
    this.listHost.append(
      el("h3", {}, "saved"),
      dataTable(
        ["id", "ver", "name", "bytes", "", ""],
        templates.map((t) => [
          String(t.template_id), String(t.version), t.name,
          String(t.encoded_size ?? encodedSize(t.fields)),
          el("button", { onclick: () => void this.load(t.template_id, t.version) }, "edit"),
          el("button", {
            class: "danger",
            onclick: () => void this.remove(t.template_id, t.version),
          }, "delete"),
        ]),
      ),
      el("button", { onclick: () => { this.draft = emptyTemplate(); this.renderEditor(); } },
        "new template"),
    );
  }

  private async load(id: number, version: number): Promise<void> {
    this.draft = await this.api.getTemplate(id, version);
    this.renderEditor();
  }

  private async remove(id: number, version: number): Promise<void> {
    await this.api.deleteTemplate(id, version);
    await this.reloadList();
  }

  private async save(): Promise<void> {
    const saved = await this.api.defineTemplate(this.draft);
    // render from the stored truth, not the draft
    this.draft = await this.api.getTemplate(saved.template_id, saved.version);
    this.renderEditor();
    await this.reloadList();
  }

  private renderEditor(): void {
    clear(this.editorHost);
    const doc = this.draft;

    const idInput = numberInput(doc.template_id, (v) => { doc.template_id = v; this.renderEditor(); });
    const verInput = numberInput(doc.version, (v) => { doc.version = v; this.renderEditor(); });
    const nameInput = el("input", { value: doc.name }) as HTMLInputElement;
    nameInput.addEventListener("input", () => { doc.name = nameInput.value; this.refreshGauges(); });

    const fieldsHost = el("div", { class: "fields" });
    doc.fields.forEach((field, index) => {
      fieldsHost.append(this.fieldRow(field, index));
    });

    const size = encodedSize(doc.fields);
    const problems = templateProblems(doc);
    const sizeLine = el("div", {
      class: size > TAG_CAPACITY_BYTES ? "gauge over" : "gauge",
      "data-role": "encoded-size",
    }, `encoded size ${size} / ${TAG_CAPACITY_BYTES} bytes`);
    const problemsBox = el("ul", { class: "problems", "data-role": "problems" });
    for (const p of problems) problemsBox.append(el("li", {}, p));

    const saveButton = el("button", {
      "data-role": "save",
      onclick: () => void this.save().catch((err) => {
        this.editorHost.append(errorBox(String(err.message ?? err)));
      }),
    }, "save") as HTMLButtonElement;
    saveButton.disabled = problems.length > 0;

    this.editorHost.append(
      el("h3", {}, "editor"),
      el("div", { class: "controls" },
        labeled("id", idInput), labeled("version", verInput), labeled("name", nameInput)),
      fieldsHost,
      el("button", {
        "data-role": "add-field",
        onclick: () => { doc.fields.push({ name: "", kind: "integer" }); this.renderEditor(); },
      }, "add field"),
      sizeLine,
      problemsBox,
      saveButton,
    );
  }

  // update size/problems/save without rebuilding inputs (keeps focus)
  private refreshGauges(): void {
    const size = encodedSize(this.draft.fields);
    const problems = templateProblems(this.draft);
    const gauge = this.editorHost.querySelector('[data-role="encoded-size"]');
    if (gauge) {
      gauge.textContent = `encoded size ${size} / ${TAG_CAPACITY_BYTES} bytes`;
      gauge.className = size > TAG_CAPACITY_BYTES ? "gauge over" : "gauge";
    }
    const box = this.editorHost.querySelector('[data-role="problems"]');
    if (box) {
      clear(box as HTMLElement);
      for (const p of problems) box.append(el("li", {}, p));
    }
    const save = this.editorHost.querySelector('[data-role="save"]') as HTMLButtonElement | null;
    if (save) save.disabled = problems.length > 0;
  }

  private fieldRow(field: FieldDef, index: number): HTMLElement {
    const doc = this.draft;
    const name = el("input", { value: field.name, placeholder: "field name" }) as HTMLInputElement;
    name.addEventListener("input", () => { field.name = name.value; this.refreshGauges(); });

    const kind = el("select") as HTMLSelectElement;
    for (const k of FIELD_KINDS) kind.append(el("option", { value: k }, k));
    kind.value = field.kind;
    kind.addEventListener("change", () => {
      field.kind = kind.value as FieldKind;
      if (field.kind === "string" && field.max_len === undefined) field.max_len = 8;
      if (field.kind !== "string") delete field.max_len;
      this.renderEditor();
    });

    const row = el("div", { class: "field-row" }, name, kind);
    if (field.kind === "string") {
      const maxLen = numberInput(field.max_len ?? 8, (v) => {
        field.max_len = v;
        this.refreshGauges();
      });
      maxLen.placeholder = "max_len";
      row.append(labeled("max_len", maxLen));
    }
    row.append(
      el("button", {
        onclick: () => { swap(doc.fields, index, index - 1); this.renderEditor(); },
      }, "up"),
      el("button", {
        onclick: () => { swap(doc.fields, index, index + 1); this.renderEditor(); },
      }, "down"),
      el("button", {
        class: "danger",
        onclick: () => { doc.fields.splice(index, 1); this.renderEditor(); },
      }, "remove"),
    );
    return row;
  }
}

function emptyTemplate(): TemplateDoc {
  return { template_id: 1, version: 1, name: "", fields: [] };
}

function numberInput(value: number, onChange: (v: number) => void): HTMLInputElement {
  const input = el("input", { type: "number", value: String(value) }) as HTMLInputElement;
  input.addEventListener("input", () => onChange(Number(input.value)));
  return input;
}

function swap<T>(items: T[], a: number, b: number): void {
  if (a < 0 || b < 0 || a >= items.length || b >= items.length) return;
  [items[a], items[b]] = [items[b], items[a]];
}
