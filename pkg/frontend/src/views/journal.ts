// Live event journal: filter controls delegate to the API's query
// semantics, and a poller keeps the table fresh without manual refresh.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";
import { LatestGate, Poller } from "../state.js";
import type { EventsPage, JournalQuery } from "../types.js";

const KINDS = ["", "TAG_ENTER", "TAG_LEAVE", "ALARM", "CONFIG_CHANGE",
  "BUFFER_OVERRUN_WARNING"];

export class JournalView {
  private gate = new LatestGate();
  private poller: Poller;
  private query: JournalQuery = { offset: 0, limit: 50, order: "desc" };
  private tableHost = el("div");
  private status = el("div", { class: "muted" }, "loading");
  private total = 0;

  constructor(private api: Api, refreshMs: number) {
    this.poller = new Poller(() => this.refresh(), refreshMs);
  }

  mount(root: HTMLElement): void {
    const station = el("input", { type: "number", placeholder: "any" }) as HTMLInputElement;
    const kind = el("select") as HTMLSelectElement;
    for (const k of KINDS) kind.append(el("option", { value: k }, k || "any kind"));
    const uid = el("input", { placeholder: "16 hex digits" }) as HTMLInputElement;
    const order = el("select") as HTMLSelectElement;
    order.append(el("option", { value: "desc" }, "newest first"));
    order.append(el("option", { value: "asc" }, "oldest first"));

    const apply = () => {
      this.query = {
        ...this.query,
        offset: 0,
        station: station.value === "" ? undefined : Number(station.value),
        kind: kind.value || undefined,
        uid: uid.value || undefined,
        order: order.value as "asc" | "desc",
      };
      this.refresh();
    };
    for (const control of [station, kind, uid, order]) {
      control.addEventListener("change", apply);
    }

    const prev = el("button", { onclick: () => this.page(-1) }, "previous") as HTMLButtonElement;
    const next = el("button", { onclick: () => this.page(1) }, "next") as HTMLButtonElement;

    root.append(
      el("h2", {}, "Event journal"),
      el("div", { class: "controls" },
        labeled("station", station), labeled("kind", kind),
        labeled("uid", uid), labeled("order", order), prev, next),
      this.status,
      this.tableHost,
    );
    this.poller.start();
  }

  destroy(): void {
    this.poller.stop();
  }

  private page(direction: number): void {
    const limit = this.query.limit ?? 50;
    const offset = Math.max(0, (this.query.offset ?? 0) + direction * limit);
    if (offset >= Math.max(this.total, 1)) return;
    this.query = { ...this.query, offset };
    this.refresh();
  }

  refresh(): void {
    this.gate
      .run(() => this.api.queryEvents(this.query), (page) => this.render(page))
      .catch((err) => {
        clear(this.tableHost);
        this.tableHost.append(errorBox(String(err.message ?? err)));
      });
  }

  private render(page: EventsPage): void {
    this.total = page.total;
    this.status.textContent =
      `${page.total} events, showing ${page.events.length} from offset ${page.offset}`;
    clear(this.tableHost);
    this.tableHost.append(dataTable(
      ["station", "seq", "kind", "uid", "sim time (us)", "detail"],
      page.events.map((e) => [
        String(e.station), String(e.seq), e.kind, e.uid,
        String(e.sim_timestamp), e.detail,
      ]),
    ));
  }
}
