// User accounts. All enforcement is server-side; this page just shows
// what the API answers for the current session.

import type { Api } from "../api.js";
import { clear, dataTable, el, errorBox, labeled } from "../dom.js";

export class UsersView {
  private listHost = el("div");
  private formHost = el("div");

  constructor(private api: Api) {}

  mount(root: HTMLElement): void {
    root.append(el("h2", {}, "Users"), this.listHost, this.formHost);
    this.renderForm();
    void this.reload();
  }

  destroy(): void {}

  private async reload(): Promise<void> {
    try {
      const users = await this.api.listUsers();
      clear(this.listHost);
      this.listHost.append(dataTable(
        ["username", "role", "enabled", ""],
        users.map((u) => [
          u.username, u.role, u.enabled ? "yes" : "no",
          el("button", {
            class: "danger",
            onclick: () => void this.api.deleteUser(u.username)
              .then(() => this.reload())
              .catch((err) => this.listHost.append(errorBox((err as Error).message))),
          }, "delete"),
        ]),
      ));
    } catch (err) {
      clear(this.listHost);
      this.listHost.append(errorBox((err as Error).message));
    }
  }

  private renderForm(): void {
    const username = el("input", { placeholder: "username" }) as HTMLInputElement;
    const password = el("input", { type: "password", placeholder: "unchanged" }) as HTMLInputElement;
    const role = el("select") as HTMLSelectElement;
    for (const r of ["VIEWER", "OPERATOR", "ADMIN"]) role.append(el("option", { value: r }, r));
    const enabled = el("input", { type: "checkbox" }) as HTMLInputElement;
    enabled.checked = true;
    const save = async () => {
      try {
        await this.api.setUser(username.value, {
          password: password.value || undefined,
          role: role.value,
          enabled: enabled.checked,
        });
        await this.reload();
      } catch (err) {
        this.formHost.append(errorBox(`save: ${(err as Error).message}`));
      }
    };
    this.formHost.append(el("div", { class: "controls" },
      labeled("username", username), labeled("password", password),
      labeled("role", role), labeled("enabled", enabled),
      el("button", { onclick: () => void save() }, "save user")));
  }
}
