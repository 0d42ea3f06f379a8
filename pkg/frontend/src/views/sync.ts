// Handheld sync: list devices, trigger a session, inspect the manifest.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox } from "../dom.js";
import type { SyncManifest } from "../types.js";

export class SyncView {
  private listHost = el("div");
  private manifestHost = el("div");

  constructor(private api: Api) {}

  mount(root: HTMLElement): void {
    root.append(el("h2", {}, "Device sync"), this.listHost, this.manifestHost);
    void this.reload();
  }

  destroy(): void {}

  private async reload(): Promise<void> {
    try {
      const devices = await this.api.listDevices();
      clear(this.listHost);
      this.listHost.append(dataTable(
        ["device", "state", "", ""],
        devices.map((d) => [
          d.device_id, d.state,
          el("button", { onclick: () => void this.run(d.device_id) }, "sync now"),
          el("button", { onclick: () => void this.showManifest(d.device_id) }, "last manifest"),
        ]),
      ));
    } catch (err) {
      clear(this.listHost);
      this.listHost.append(errorBox((err as Error).message));
    }
  }

  private async run(deviceId: string): Promise<void> {
    clear(this.manifestHost);
    try {
      this.renderManifest(await this.api.runSync(deviceId));
      await this.reload();
    } catch (err) {
      this.manifestHost.append(errorBox(`sync: ${(err as Error).message}`));
    }
  }

  private async showManifest(deviceId: string): Promise<void> {
    clear(this.manifestHost);
    try {
      this.renderManifest(await this.api.lastManifest(deviceId));
    } catch (err) {
      this.manifestHost.append(errorBox((err as Error).message));
    }
  }

  private renderManifest(manifest: SyncManifest): void {
    clear(this.manifestHost);
    const state = manifest.fault
      ? `faulted: ${manifest.fault}`
      : manifest.completed
        ? (manifest.digest_ok ? "completed, digests agree" : "completed, DIGEST MISMATCH")
        : "incomplete";
    this.manifestHost.append(
      el("h3", {}, `session with ${manifest.device_id}`),
      el("div", { class: manifest.fault ? "error" : "ok" }, state),
      dataTable(
        ["table", "decision", "central rev", "device rev", "applied", "bytes", "archived"],
        Object.values(manifest.tables).map((t) => [
          t.table, t.decision + (t.resolved ? ` (${t.resolved})` : ""),
          String(t.central_revision), String(t.device_revision),
          t.applied ? "yes" : "no", String(t.transfer_bytes), t.archived || "",
        ]),
      ),
    );
  }
}
