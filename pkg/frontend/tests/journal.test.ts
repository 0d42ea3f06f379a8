// The journal view must surface an event raised through the API within
// one polling interval, and its filters and pagination must show exactly
// what the API answers.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { Api } from "../src/api.js";
import { JournalView } from "../src/views/journal.js";
import { FakeService } from "./fakeapi.js";

const INTERVAL_MS = 2000;

async function mountedJournal() {
  const service = new FakeService();
  const api = new Api({ fetchImpl: service.fetch });
  await api.login("op", "op-pw");
  const root = document.createElement("div");
  document.body.append(root);
  const view = new JournalView(api, INTERVAL_MS);
  view.mount(root);
  await vi.advanceTimersByTimeAsync(0); // settle the immediate first load
  return { service, api, root, view };
}

describe("journal view", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
    document.body.replaceChildren();
  });

  it("shows a raised event within one polling interval", async () => {
    const { service, root, view } = await mountedJournal();
    expect(root.textContent).toContain("0 events");

    service.raiseEvent({
      kind: "ALARM", station: 255,
      detail: "[watch-crate] watchlisted tag e004010203040506 at station 5",
    });
    // not in the table until the next poll fires
    expect(root.querySelector("tbody")?.textContent).not.toContain("watch-crate");

    await vi.advanceTimersByTimeAsync(INTERVAL_MS);

    const body = root.querySelector("tbody");
    expect(body?.textContent).toContain("ALARM");
    expect(body?.textContent).toContain("watch-crate");
    expect(root.textContent).toContain("1 events");
    view.destroy();
  });

  it("stops updating once destroyed", async () => {
    const { service, root, view } = await mountedJournal();
    view.destroy();
    service.raiseEvent({ kind: "ALARM" });
    await vi.advanceTimersByTimeAsync(3 * INTERVAL_MS);
    expect(root.textContent).toContain("0 events");
  });

  it("filter by station shows only that station's rows", async () => {
    const { service, root, view } = await mountedJournal();
    service.raiseEvent({ station: 3, kind: "TAG_LEAVE" });
    service.raiseEvent({ station: 5, kind: "TAG_ENTER" });
    service.raiseEvent({ station: 3, kind: "TAG_ENTER" });

    const stationInput = root.querySelector("input") as HTMLInputElement;
    stationInput.value = "3";
    stationInput.dispatchEvent(new Event("change"));
    await vi.advanceTimersByTimeAsync(0);

    const cells = [...root.querySelectorAll("tbody tr td:first-child")]
      .map((td) => td.textContent);
    expect(cells).toEqual(["3", "3"]);
    view.destroy();
  });

  it("pagination shows the API's corresponding page", async () => {
    const { service, api, root, view } = await mountedJournal();
    for (let i = 0; i < 60; i++) service.raiseEvent({ detail: `event ${i}` });
    await vi.advanceTimersByTimeAsync(INTERVAL_MS);
    expect(root.querySelectorAll("tbody tr").length).toBe(50);

    const next = [...root.querySelectorAll("button")]
      .find((b) => b.textContent === "next") as HTMLButtonElement;
    next.click();
    await vi.advanceTimersByTimeAsync(0);

    const expected = await api.queryEvents({ offset: 50, limit: 50, order: "desc" });
    expect(expected.events.length).toBe(10);
    expect(root.querySelectorAll("tbody tr").length).toBe(10);
    expect(root.textContent).toContain("60 events, showing 10 from offset 50");

    // past the last page the view stays put instead of asking for nothing
    next.click();
    await vi.advanceTimersByTimeAsync(0);
    expect(root.textContent).toContain("from offset 50");

    const prev = [...root.querySelectorAll("button")]
      .find((b) => b.textContent === "previous") as HTMLButtonElement;
    prev.click();
    await vi.advanceTimersByTimeAsync(0);
    const firstPage = await api.queryEvents({ offset: 0, limit: 50, order: "desc" });
    expect(firstPage.events.length).toBe(50);
    expect(root.querySelectorAll("tbody tr").length).toBe(50);
    view.destroy();
  });
});
