// Console shell: session bootstrap, hash navigation, preferences.

import { Api } from "./api.js";
import { clear, el, labeled } from "./dom.js";
import {
  loadPrefs, loadSession, Prefs, savePrefs, saveSession,
} from "./state.js";
import type { SessionDoc } from "./types.js";
import { AlarmsView } from "./views/alarms.js";
import { JournalView } from "./views/journal.js";
import { LoginView } from "./views/login.js";
import { ReportsView } from "./views/reports.js";
import { SimulationView } from "./views/simulation.js";
import { StationsView } from "./views/stations.js";
import { SyncView } from "./views/sync.js";
import { TagWriterView } from "./views/tagwriter.js";
import { TemplatesView } from "./views/templates.js";
import { UsersView } from "./views/users.js";

interface View {
  mount(root: HTMLElement): void;
  destroy(): void;
}

const PAGES: { hash: string; title: string }[] = [
  { hash: "stations", title: "Stations" },
  { hash: "templates", title: "Templates" },
  { hash: "tagwriter", title: "Tag writer" },
  { hash: "journal", title: "Journal" },
  { hash: "alarms", title: "Alarms" },
  { hash: "reports", title: "Reports" },
  { hash: "simulation", title: "Simulation" },
  { hash: "sync", title: "Sync" },
  { hash: "users", title: "Users" },
];

export class App {
  private api: Api;
  private prefs: Prefs;
  private session: SessionDoc | null;
  private active: View | null = null;
  private main = el("main");
  private header = el("header");

  constructor(private root: HTMLElement) {
    this.prefs = loadPrefs();
    this.session = loadSession();
    this.api = new Api({ onAuthFailure: () => this.expire() });
    if (this.session) this.api.token = this.session.token;
    document.documentElement.dataset["theme"] = this.prefs.theme;
  }

  start(): void {
    this.root.append(this.header, this.main);
    window.addEventListener("hashchange", () => this.route());
    this.renderHeader();
    this.route();
  }

  private expire(): void {
    this.session = null;
    this.api.token = null;
    saveSession(null);
    this.renderHeader();
    this.route();
  }

  private onLogin(doc: SessionDoc): void {
    this.session = doc;
    saveSession(doc);
    this.renderHeader();
    this.route();
  }

  private renderHeader(): void {
    clear(this.header);
    const nav = el("nav");
    for (const page of PAGES) {
      nav.append(el("a", { href: `#/${page.hash}` }, page.title));
    }

    const refresh = el("input", {
      type: "number", value: String(this.prefs.refreshMs), min: "250", step: "250",
    }) as HTMLInputElement;
    refresh.addEventListener("change", () => {
      this.prefs.refreshMs = Math.max(250, Number(refresh.value) || 2000);
      savePrefs(this.prefs);
      this.route(); // remount so pollers pick up the new interval
    });

    const theme = el("button", {
      onclick: () => {
        this.prefs.theme = this.prefs.theme === "light" ? "dark" : "light";
        savePrefs(this.prefs);
        document.documentElement.dataset["theme"] = this.prefs.theme;
      },
    }, "theme");

    const who = this.session
      ? el("span", { class: "who" }, `${this.session.username} (${this.session.role})`)
      : el("span", { class: "who" }, "not signed in");
    const logout = el("button", {
      onclick: () => void this.api.logout().catch(() => undefined).then(() => this.expire()),
    }, "log out");

    this.header.append(
      el("h1", {}, "tagtrace"),
      nav,
      el("div", { class: "prefs" },
        labeled("refresh ms", refresh), theme, who,
        this.session ? logout : ""),
    );
  }

  private route(): void {
    if (this.active) {
      this.active.destroy();
      this.active = null;
    }
    clear(this.main);
    if (!this.session) {
      this.active = new LoginView(this.api, (doc) => this.onLogin(doc));
      this.active.mount(this.main);
      return;
    }
    const hash = window.location.hash.replace(/^#\//, "") || "stations";
    this.active = this.makeView(hash);
    this.active.mount(this.main);
  }

  private makeView(hash: string): View {
    const ms = this.prefs.refreshMs;
    switch (hash) {
      case "templates": return new TemplatesView(this.api);
      case "tagwriter": return new TagWriterView(this.api);
      case "journal": return new JournalView(this.api, ms);
      case "alarms": return new AlarmsView(this.api, ms);
      case "reports": return new ReportsView(this.api);
      case "simulation": return new SimulationView(this.api, ms);
      case "sync": return new SyncView(this.api);
      case "users": return new UsersView(this.api);
      default: return new StationsView(this.api, ms);
    }
  }
}

// boot only in a real page; tests construct App pieces directly
if (typeof document !== "undefined" && document.getElementById("app")) {
  new App(document.getElementById("app") as HTMLElement).start();
}
