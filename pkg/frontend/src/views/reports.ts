// Report patterns: list, edit as a form, render into the page.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";
import type { ReportPattern } from "../types.js";

const TABLES = ["transponders", "stations", "events", "templates",
  "alarm_rules", "report_patterns", "users"];

export class ReportsView {
  private listHost = el("div");
  private formHost = el("div");
  private outputHost = el("div");

  constructor(private api: Api) {}

  mount(root: HTMLElement): void {
    root.append(el("h2", {}, "Reports"), this.listHost, this.formHost, this.outputHost);
    this.renderForm(emptyPattern());
    void this.reload();
  }

  destroy(): void {}

  private async reload(): Promise<void> {
    const patterns = await this.api.listReportPatterns();
    clear(this.listHost);
    this.listHost.append(dataTable(
      ["name", "table", "columns", "format", "", "", ""],
      patterns.map((p) => [
        p.name, p.table, p.columns.join(","), p.format,
        el("button", { onclick: () => this.renderForm(p) }, "edit"),
        el("button", { onclick: () => void this.render(p.name) }, "render"),
        el("button", {
          class: "danger",
          onclick: () => void this.api.deleteReportPattern(p.name).then(() => this.reload()),
        }, "delete"),
      ]),
    ));
  }

  private async render(name: string): Promise<void> {
    clear(this.outputHost);
    try {
      const text = await this.api.renderReport(name);
      this.outputHost.append(el("h3", {}, `rendered: ${name}`),
        el("pre", { class: "report" }, text));
    } catch (err) {
      this.outputHost.append(errorBox(`render: ${(err as Error).message}`));
    }
  }

  private renderForm(pattern: ReportPattern): void {
    clear(this.formHost);
    const name = el("input", { value: pattern.name, placeholder: "pattern name" }) as HTMLInputElement;
    const table = el("select") as HTMLSelectElement;
    for (const t of TABLES) table.append(el("option", { value: t }, t));
    table.value = pattern.table || "events";
    const columns = el("input", {
      value: pattern.columns.join(","), placeholder: "comma-separated, empty = all",
    }) as HTMLInputElement;
    const filter = el("textarea", { rows: "2" }) as HTMLTextAreaElement;
    filter.value = JSON.stringify(pattern.filter);
    const sortColumn = el("input", { value: pattern.sort?.column ?? "" }) as HTMLInputElement;
    const descending = el("input", { type: "checkbox" }) as HTMLInputElement;
    descending.checked = Boolean(pattern.sort?.descending);
    const format = el("select") as HTMLSelectElement;
    format.append(el("option", { value: "csv" }, "csv"));
    format.append(el("option", { value: "html" }, "html"));
    format.value = pattern.format;

    const save = async () => {
      let clauses: ReportPattern["filter"];
      try {
        clauses = JSON.parse(filter.value || "[]");
      } catch {
        this.formHost.append(errorBox("filter must be a JSON array"));
        return;
      }
      const doc: ReportPattern = {
        name: name.value,
        table: table.value,
        filter: clauses,
        columns: columns.value ? columns.value.split(",").map((c) => c.trim()) : [],
        sort: sortColumn.value
          ? { column: sortColumn.value, descending: descending.checked }
          : null,
        format: format.value as "csv" | "html",
      };
      try {
        await this.api.setReportPattern(doc);
        await this.reload();
      } catch (err) {
        this.formHost.append(errorBox(`save: ${(err as Error).message}`));
      }
    };

    this.formHost.append(
      el("h3", {}, "pattern"),
      el("div", { class: "controls" },
        labeled("name", name), labeled("table", table), labeled("columns", columns),
        labeled("filter", filter), labeled("sort column", sortColumn),
        labeled("descending", descending), labeled("format", format),
        el("button", { onclick: () => void save() }, "save pattern")),
    );
  }
}

function emptyPattern(): ReportPattern {
  return { name: "", table: "events", filter: [], columns: [], sort: null, format: "csv" };
}
