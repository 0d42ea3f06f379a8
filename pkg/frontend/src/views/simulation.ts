// Simulation steering: the physical acts of a warehouse floor (placing
// and moving tagged objects, waiting) become buttons and inputs here.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";
import { LatestGate, Poller } from "../state.js";

export class SimulationView {
  private gate = new LatestGate();
  private poller: Poller;
  private floorHost = el("div");
  private resultHost = el("div");
  private worldHost = el("div");

  constructor(private api: Api, refreshMs: number) {
    this.poller = new Poller(() => this.refresh(), refreshMs);
  }

  mount(root: HTMLElement): void {
    const uid = el("input", { placeholder: "16 hex digits" }) as HTMLInputElement;
    const station = el("input", { type: "number" }) as HTMLInputElement;
    const position = el("input", { type: "number", value: "10" }) as HTMLInputElement;
    const seconds = el("input", { type: "number", value: "1" }) as HTMLInputElement;

    const act = (work: () => Promise<unknown>) => {
      clear(this.resultHost);
      work()
        .then((result) => {
          this.resultHost.append(el("pre", {}, JSON.stringify(result, null, 2)));
          this.refresh();
        })
        .catch((err) => this.resultHost.append(errorBox((err as Error).message)));
    };

    root.append(
      el("h2", {}, "Simulation"),
      this.floorHost,
      el("div", { class: "controls" },
        labeled("uid", uid), labeled("station", station), labeled("position cm", position),
        el("button", {
          onclick: () => act(() => this.api.simPlace(uid.value, Number(station.value), Number(position.value))),
        }, "place"),
        el("button", {
          onclick: () => act(() => this.api.simMove(uid.value, Number(position.value),
            station.value === "" ? undefined : Number(station.value))),
        }, "move"),
        labeled("seconds", seconds),
        el("button", {
          onclick: () => act(() => this.api.simAdvance(Number(seconds.value))),
        }, "advance clock"),
        el("button", { onclick: () => act(() => this.api.poll()) }, "poll stations")),
      this.resultHost,
      this.worldHost,
    );
    this.renderWorldPanel();
    this.poller.start();
  }

  destroy(): void {
    this.poller.stop();
  }

  refresh(): void {
    this.gate
      .run(() => this.api.listStations(), (rows) => {
        clear(this.floorHost);
        this.floorHost.append(dataTable(
          ["station", "name", "tags in range"],
          rows.map((s) => [String(s.addr), s.name, s.in_range.join(" ") || "(empty)"]),
        ));
      })
      .catch((err) => {
        clear(this.floorHost);
        this.floorHost.append(errorBox(String(err.message ?? err)));
      });
  }

  private renderWorldPanel(): void {
    const text = el("textarea", { rows: "8", class: "world" }) as HTMLTextAreaElement;
    const status = el("span", { class: "muted" });
    this.worldHost.append(
      el("h3", {}, "world file"),
      el("div", { class: "controls" },
        el("button", {
          onclick: () => void this.api.simWorld().then((doc) => { text.value = doc.text; }),
        }, "show current"),
        el("button", {
          onclick: () => void this.api.simLoadWorld(text.value)
            .then((r) => { status.textContent = `loaded: ${r.stations} stations, ${r.tags} tags`; this.refresh(); })
            .catch((err) => { status.textContent = `load failed: ${(err as Error).message}`; }),
        }, "load"),
        status),
      text,
    );
  }
}
