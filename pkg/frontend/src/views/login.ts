import type { Api } from "../api.js";
import { el, errorBox, labeled } from "../dom.js";
import type { SessionDoc } from "../types.js";

export class LoginView {
  constructor(private api: Api, private onLogin: (doc: SessionDoc) => void) {}

  mount(root: HTMLElement): void {
    const username = el("input", { autocomplete: "username" }) as HTMLInputElement;
    const password = el("input", {
      type: "password", autocomplete: "current-password",
    }) as HTMLInputElement;
    const message = el("div");
    const submit = async (ev: Event) => {
      ev.preventDefault();
      message.replaceChildren();
      try {
        this.onLogin(await this.api.login(username.value, password.value));
      } catch (err) {
        message.append(errorBox((err as Error).message));
      }
    };
    const form = el("form", { class: "login" },
      el("h2", {}, "Sign in"),
      labeled("username", username),
      labeled("password", password),
      el("button", { type: "submit" }, "log in"),
      message);
    form.addEventListener("submit", submit);
    root.append(form);
  }

  destroy(): void {}
}
