// Session, preferences, and the polling/concurrency primitives shared by
// the views.

import type { SessionDoc } from "./types.js";

const SESSION_KEY = "tagtrace.session";
const PREFS_KEY = "tagtrace.prefs";

export interface Prefs {
  refreshMs: number;
  theme: "light" | "dark";
}

export const DEFAULT_PREFS: Prefs = { refreshMs: 2000, theme: "light" };

export function loadSession(): SessionDoc | null {
  try {
    const raw = localStorage.getItem(SESSION_KEY);
    if (!raw) return null;
    const doc = JSON.parse(raw) as SessionDoc;
    return typeof doc.token === "string" ? doc : null;
  } catch {
    return null;
  }
}

export function saveSession(doc: SessionDoc | null): void {
  if (doc === null) localStorage.removeItem(SESSION_KEY);
  else localStorage.setItem(SESSION_KEY, JSON.stringify(doc));
}

export function loadPrefs(): Prefs {
  try {
    const raw = localStorage.getItem(PREFS_KEY);
    if (!raw) return { ...DEFAULT_PREFS };
    const doc = JSON.parse(raw);
    return {
      refreshMs: typeof doc.refreshMs === "number" && doc.refreshMs >= 250
        ? doc.refreshMs : DEFAULT_PREFS.refreshMs,
      theme: doc.theme === "dark" ? "dark" : "light",
    };
  } catch {
    return { ...DEFAULT_PREFS };
  }
}

export function savePrefs(prefs: Prefs): void {
  localStorage.setItem(PREFS_KEY, JSON.stringify(prefs));
}

// Concurrent in-flight requests are allowed, but a view only ever applies
// the response of its newest request: each run takes a monotonic sequence
// number and the apply step is skipped if a newer run started meanwhile.
export class LatestGate {
  private seq = 0;

  async run<T>(load: () => Promise<T>, apply: (value: T) => void): Promise<void> {
    const mine = ++this.seq;
    const value = await load();
    if (mine === this.seq) apply(value);
  }

  invalidate(): void {
    this.seq++;
  }
}

// Fixed-interval poller that also fires once immediately. Ticks overlap
// safely because the consumer guards with a LatestGate.
export class Poller {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(private tick: () => void, private intervalMs: number) {}

  start(): void {
    this.stop();
    this.tick();
    this.timer = setInterval(this.tick, this.intervalMs);
  }

  setInterval(ms: number): void {
    this.intervalMs = ms;
    if (this.timer !== null) this.start();
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  get running(): boolean {
    return this.timer !== null;
  }
}
