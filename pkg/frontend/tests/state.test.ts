import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { LatestGate, Poller } from "../src/state.js";

describe("LatestGate", () => {
  it("discards a stale response that resolves after a newer request", async () => {
    const gate = new LatestGate();
    const applied: string[] = [];

    let resolveFirst!: (v: string) => void;
    const first = gate.run(
      () => new Promise<string>((resolve) => { resolveFirst = resolve; }),
      (v) => applied.push(v));
    const second = gate.run(
      () => Promise.resolve("new"),
      (v) => applied.push(v));

    await second;
    resolveFirst("stale");
    await first;
    expect(applied).toEqual(["new"]);
  });

  it("applies responses normally when they arrive in order", async () => {
    const gate = new LatestGate();
    const applied: number[] = [];
    await gate.run(() => Promise.resolve(1), (v) => applied.push(v));
    await gate.run(() => Promise.resolve(2), (v) => applied.push(v));
    expect(applied).toEqual([1, 2]);
  });
});

describe("Poller", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("fires immediately and then at the interval", () => {
    let ticks = 0;
    const poller = new Poller(() => { ticks++; }, 2000);
    poller.start();
    expect(ticks).toBe(1);
    vi.advanceTimersByTime(6000);
    expect(ticks).toBe(4);
    poller.stop();
    vi.advanceTimersByTime(6000);
    expect(ticks).toBe(4);
  });

  it("reconfigures the interval on a running poller", () => {
    let ticks = 0;
    const poller = new Poller(() => { ticks++; }, 2000);
    poller.start();
    poller.setInterval(500);
    const before = ticks;
    vi.advanceTimersByTime(2000);
    expect(ticks - before).toBe(4);
    poller.stop();
  });
});
