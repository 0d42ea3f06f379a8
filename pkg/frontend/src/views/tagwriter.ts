// Tag writer: choose a template, fill the field values, write through a
// station, and read back what the tag now carries.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";
import type { FieldValue, TemplateDoc } from "../types.js";
import { isUid, parseValues } from "../validate.js";

export class TagWriterView {
  private templates: TemplateDoc[] = [];
  private selected: TemplateDoc | null = null;
  private valuesHost = el("div", { class: "fields" });
  private resultHost = el("div", { "data-role": "result" });
  private templatePicker = el("select", { "data-role": "template" }) as HTMLSelectElement;
  private stationInput = el("input", {
    type: "number", value: "3", "data-role": "station",
  }) as HTMLInputElement;
  private uidInput = el("input", {
    placeholder: "16 hex digits", "data-role": "uid",
  }) as HTMLInputElement;

  constructor(private api: Api) {}

  mount(root: HTMLElement): void {
    this.templatePicker.addEventListener("change", () => {
      this.select(Number(this.templatePicker.value));
    });
    root.append(
      el("h2", {}, "Tag writer"),
      el("div", { class: "controls" },
        labeled("template", this.templatePicker),
        labeled("station", this.stationInput),
        labeled("uid", this.uidInput)),
      this.valuesHost,
      el("div", { class: "controls" },
        el("button", { "data-role": "write", onclick: () => void this.write() }, "write tag"),
        el("button", { "data-role": "read", onclick: () => void this.read() }, "read back")),
      this.resultHost,
    );
    void this.reload();
  }

  destroy(): void {}

  async reload(): Promise<void> {
    this.templates = await this.api.listTemplates();
    clear(this.templatePicker);
    this.templates.forEach((t, i) => {
      this.templatePicker.append(el("option", { value: String(i) },
        `${t.template_id} v${t.version} ${t.name}`));
    });
    if (this.templates.length > 0) this.select(0);
  }

  private select(index: number): void {
    this.selected = this.templates[index] ?? null;
    clear(this.valuesHost);
    if (!this.selected) return;
    for (const field of this.selected.fields) {
      const hint = field.kind === "string" ? `string:${field.max_len}` : field.kind;
      this.valuesHost.append(labeled(`${field.name} (${hint})`,
        el("input", { "data-field": field.name }) as HTMLInputElement));
    }
  }

  private inputTexts(): string[] {
    return Array.from(this.valuesHost.querySelectorAll("input"))
      .map((i) => (i as HTMLInputElement).value);
  }

  private checkForm(): { values: FieldValue[] } | null {
    clear(this.resultHost);
    if (!this.selected) {
      this.resultHost.append(errorBox("no template selected"));
      return null;
    }
    if (!isUid(this.uidInput.value)) {
      this.resultHost.append(errorBox("uid must be 16 hex digits"));
      return null;
    }
    const parsed = parseValues(this.selected.fields, this.inputTexts());
    if (!parsed.values) {
      for (const e of parsed.errors) this.resultHost.append(errorBox(e));
      return null;
    }
    return { values: parsed.values };
  }

  private async write(): Promise<void> {
    const form = this.checkForm();
    if (!form || !this.selected) return;
    try {
      const result = await this.api.writeTag(
        Number(this.stationInput.value), this.uidInput.value.toLowerCase(),
        this.selected.template_id, this.selected.version, form.values);
      this.resultHost.append(el("div", { class: "ok" },
        `wrote ${result.bytes} bytes in ${result.blocks} blocks to ${result.uid}`));
    } catch (err) {
      this.resultHost.append(errorBox(`write failed: ${(err as Error).message}`));
    }
  }

  private async read(): Promise<void> {
    clear(this.resultHost);
    if (!isUid(this.uidInput.value)) {
      this.resultHost.append(errorBox("uid must be 16 hex digits"));
      return;
    }
    try {
      const result = await this.api.readTag(
        Number(this.stationInput.value), this.uidInput.value.toLowerCase());
      const template = this.templates.find(
        (t) => t.template_id === result.template_id && t.version === result.version);
      const names = template ? template.fields.map((f) => f.name)
        : result.values.map((_, i) => `field ${i}`);
      this.resultHost.append(
        el("div", { class: "ok" },
          `tag carries ${result.template_name} v${result.version}`),
        dataTable(["field", "value"],
          result.values.map((v, i) => [names[i] ?? String(i), String(v)])),
      );
    } catch (err) {
      this.resultHost.append(errorBox(`read failed: ${(err as Error).message}`));
    }
  }
}
