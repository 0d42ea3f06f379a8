// Station roster with live in-range tags, inventory trigger, and the
// configuration form (name, address, baud, access password).

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";
import { LatestGate, Poller } from "../state.js";
import type { StationRow } from "../types.js";

export class StationsView {
  private gate = new LatestGate();
  private poller: Poller;
  private tableHost = el("div");
  private detailHost = el("div");

  constructor(private api: Api, refreshMs: number) {
    this.poller = new Poller(() => this.refresh(), refreshMs);
  }

  mount(root: HTMLElement): void {
    root.append(el("h2", {}, "Stations"), this.tableHost, this.detailHost);
    this.poller.start();
  }

  destroy(): void {
    this.poller.stop();
  }

  refresh(): void {
    this.gate
      .run(() => this.api.listStations(), (rows) => this.render(rows))
      .catch((err) => {
        clear(this.tableHost);
        this.tableHost.append(errorBox(String(err.message ?? err)));
      });
  }

  private render(rows: StationRow[]): void {
    clear(this.tableHost);
    this.tableHost.append(dataTable(
      ["addr", "name", "status", "baud", "in range", "ring", "", ""],
      rows.map((s) => [
        String(s.addr), s.name, s.status, String(s.baud_class),
        s.in_range.join(" ") || "(empty)", `${s.ring_fill}/255`,
        el("button", { onclick: () => void this.runInventory(s.addr) }, "inventory"),
        el("button", { onclick: () => this.configForm(s) }, "configure"),
      ]),
    ));
  }

  private async runInventory(addr: number): Promise<void> {
    clear(this.detailHost);
    try {
      const result = await this.api.inventory(addr);
      this.detailHost.append(
        el("h3", {}, `inventory at station ${result.station}`),
        result.uids.length
          ? dataTable(["uid"], result.uids.map((u) => [u]))
          : el("div", { class: "muted" }, "no tags in range"),
      );
    } catch (err) {
      this.detailHost.append(errorBox(`inventory: ${(err as Error).message}`));
    }
  }

  private configForm(station: StationRow): void {
    clear(this.detailHost);
    const name = el("input", { value: station.name }) as HTMLInputElement;
    const newAddr = el("input", { type: "number" }) as HTMLInputElement;
    const baud = el("input", { type: "number" }) as HTMLInputElement;
    const password = el("input", { value: "00000000" }) as HTMLInputElement;
    const newPassword = el("input", { placeholder: "unchanged" }) as HTMLInputElement;
    const submit = async () => {
      const body: Record<string, unknown> = { password: password.value };
      if (name.value !== station.name) body["name"] = name.value;
      if (newAddr.value !== "") body["new_addr"] = Number(newAddr.value);
      if (baud.value !== "") body["baud_class"] = Number(baud.value);
      if (newPassword.value !== "") body["new_password"] = newPassword.value;
      try {
        await this.api.configureStation(station.addr, body);
        clear(this.detailHost);
        this.refresh();
      } catch (err) {
        this.detailHost.append(errorBox(`configure: ${(err as Error).message}`));
      }
    };
    this.detailHost.append(
      el("h3", {}, `configure station ${station.addr}`),
      el("div", { class: "controls" },
        labeled("name", name), labeled("new addr", newAddr),
        labeled("baud class", baud), labeled("password (hex8)", password),
        labeled("new password", newPassword),
        el("button", { onclick: () => void submit() }, "apply")),
    );
  }
}
