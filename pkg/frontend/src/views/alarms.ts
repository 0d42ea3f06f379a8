// Alarm rules plus the most recent raised alarms from the journal.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";
import { LatestGate, Poller } from "../state.js";
import type { AlarmRule } from "../types.js";

const RULE_KINDS = ["watchlist", "station_silent", "buffer_overrun"];

const PARAM_HINTS: Record<string, string> = {
  watchlist: '{"uids": ["e004010203040506"], "stations": []}',
  station_silent: '{"duration_s": 30}',
  buffer_overrun: "{}",
};

export class AlarmsView {
  private gate = new LatestGate();
  private poller: Poller;
  private rulesHost = el("div");
  private recentHost = el("div");
  private formHost = el("div");

  constructor(private api: Api, refreshMs: number) {
    this.poller = new Poller(() => this.refresh(), refreshMs);
  }

  mount(root: HTMLElement): void {
    root.append(
      el("h2", {}, "Alarms"),
      this.rulesHost, this.formHost,
      el("h3", {}, "recently raised"), this.recentHost,
    );
    this.renderForm();
    this.poller.start();
  }

  destroy(): void {
    this.poller.stop();
  }

  refresh(): void {
    this.gate.run(
      () => Promise.all([
        this.api.listAlarmRules(),
        this.api.queryEvents({ kind: "ALARM", limit: 20, order: "desc" }),
      ]),
      ([rules, recent]) => {
        clear(this.rulesHost);
        this.rulesHost.append(dataTable(
          ["name", "kind", "params", "enabled", ""],
          rules.map((r) => [
            r.name, r.kind, JSON.stringify(r.params),
            r.enabled === false ? "no" : "yes",
            el("button", {
              class: "danger",
              onclick: () => void this.api.deleteAlarmRule(r.name).then(() => this.refresh()),
            }, "delete"),
          ]),
        ));
        clear(this.recentHost);
        this.recentHost.append(dataTable(
          ["sim time (us)", "detail"],
          recent.events.map((e) => [String(e.sim_timestamp), e.detail]),
        ));
      },
    ).catch((err) => {
      clear(this.rulesHost);
      this.rulesHost.append(errorBox(String(err.message ?? err)));
    });
  }

  private renderForm(): void {
    const name = el("input", { placeholder: "rule name" }) as HTMLInputElement;
    const kind = el("select") as HTMLSelectElement;
    for (const k of RULE_KINDS) kind.append(el("option", { value: k }, k));
    const params = el("textarea", { rows: "2" }) as HTMLTextAreaElement;
    params.value = PARAM_HINTS["watchlist"];
    kind.addEventListener("change", () => { params.value = PARAM_HINTS[kind.value] ?? "{}"; });
    const save = async () => {
      let parsed: Record<string, unknown>;
      try {
        parsed = JSON.parse(params.value || "{}");
      } catch {
        this.formHost.append(errorBox("params must be a JSON object"));
        return;
      }
      const rule: AlarmRule = { name: name.value, kind: kind.value, params: parsed };
      try {
        await this.api.setAlarmRule(rule);
        this.refresh();
      } catch (err) {
        this.formHost.append(errorBox(`save: ${(err as Error).message}`));
      }
    };
    this.formHost.append(el("div", { class: "controls" },
      labeled("name", name), labeled("kind", kind), labeled("params", params),
      el("button", { onclick: () => void save() }, "save rule")));
  }
}
