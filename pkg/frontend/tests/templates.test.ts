// Template editor: build a template in the form, watch the size gauge,
// save, and get the identical template back from the API on reload.

import { afterEach, describe, expect, it } from "vitest";
import { Api } from "../src/api.js";
import { TemplatesView } from "../src/views/templates.js";
import { FakeService } from "./fakeapi.js";

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function setInput(input: HTMLInputElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new Event("input"));
}

function editorControls(root: HTMLElement): HTMLInputElement[] {
  return [...root.querySelectorAll(".editor .controls input")] as HTMLInputElement[];
}

function fieldRows(root: HTMLElement): HTMLElement[] {
  return [...root.querySelectorAll(".editor .field-row")] as HTMLElement[];
}

function click(root: HTMLElement, role: string): void {
  (root.querySelector(`[data-role="${role}"]`) as HTMLButtonElement).click();
}

async function mountedEditor(service: FakeService) {
  const api = new Api({ fetchImpl: service.fetch });
  await api.login("op", "op-pw");
  const root = document.createElement("div");
  document.body.append(root);
  const view = new TemplatesView(api);
  view.mount(root);
  await flush();
  return { api, root, view };
}

afterEach(() => {
  document.body.replaceChildren();
});

describe("template editor", () => {
  it("saves a template and reloads the identical document from the API", async () => {
    const service = new FakeService();
    const { root } = await mountedEditor(service);

    // header: id 7, version 2, name carton (id/version rebuild the form)
    setInput(editorControls(root)[0], "7");
    setInput(editorControls(root)[1], "2");
    setInput(editorControls(root)[2], "carton");

    // integer field "lot"
    click(root, "add-field");
    setInput(fieldRows(root)[0].querySelector("input") as HTMLInputElement, "lot");

    // string field "label" with max_len 8
    click(root, "add-field");
    let row = fieldRows(root)[1];
    setInput(row.querySelector("input") as HTMLInputElement, "label");
    const kind = row.querySelector("select") as HTMLSelectElement;
    kind.value = "string";
    kind.dispatchEvent(new Event("change")); // rebuilds with a max_len input
    row = fieldRows(root)[1];
    const maxLen = row.querySelectorAll("input")[1] as HTMLInputElement;
    setInput(maxLen, "8");

    // live gauge: 6 header + 4 integer + (2 + 8) string + 2 crc
    expect(root.querySelector('[data-role="encoded-size"]')?.textContent)
      .toContain("encoded size 22 / 256 bytes");

    click(root, "save");
    await flush();

    const stored = service.templates.get("7:2");
    expect(stored).toMatchObject({
      template_id: 7, version: 2, name: "carton",
      fields: [
        { name: "lot", kind: "integer" },
        { name: "label", kind: "string", max_len: 8 },
      ],
      encoded_size: 22,
    });

    // a fresh mount (page reload) lists it and the editor renders the
    // stored truth, not a leftover draft
    const reloaded = await mountedEditor(service);
    expect(reloaded.root.textContent).toContain("carton");
    const editButton = [...reloaded.root.querySelectorAll("button")]
      .find((b) => b.textContent === "edit") as HTMLButtonElement;
    editButton.click();
    await flush();

    const header = editorControls(reloaded.root).map((i) => i.value);
    expect(header).toEqual(["7", "2", "carton"]);
    const rows = fieldRows(reloaded.root);
    expect(rows.length).toBe(2);
    expect((rows[0].querySelector("input") as HTMLInputElement).value).toBe("lot");
    expect((rows[0].querySelector("select") as HTMLSelectElement).value).toBe("integer");
    expect((rows[1].querySelector("input") as HTMLInputElement).value).toBe("label");
    expect((rows[1].querySelector("select") as HTMLSelectElement).value).toBe("string");
    expect((rows[1].querySelectorAll("input")[1] as HTMLInputElement).value).toBe("8");
  });

  it("adding an integer field grows the gauge by 4", async () => {
    const service = new FakeService();
    const { root } = await mountedEditor(service);
    const gaugeText = () =>
      root.querySelector('[data-role="encoded-size"]')?.textContent ?? "";
    expect(gaugeText()).toContain("encoded size 8");
    click(root, "add-field");
    setInput(fieldRows(root)[0].querySelector("input") as HTMLInputElement, "count");
    expect(gaugeText()).toContain("encoded size 12");
  });

  it("duplicate field names disable save with an inline problem", async () => {
    const service = new FakeService();
    const { root } = await mountedEditor(service);
    setInput(editorControls(root)[2], "twice");
    click(root, "add-field");
    setInput(fieldRows(root)[0].querySelector("input") as HTMLInputElement, "same");
    click(root, "add-field");
    setInput(fieldRows(root)[1].querySelector("input") as HTMLInputElement, "same");

    expect(root.querySelector('[data-role="problems"]')?.textContent)
      .toContain("duplicate field name same");
    const save = root.querySelector('[data-role="save"]') as HTMLButtonElement;
    expect(save.disabled).toBe(true);
    expect(service.templates.size).toBe(0);
  });

  it("capacity overrun disables save", async () => {
    const service = new FakeService();
    const { root } = await mountedEditor(service);
    setInput(editorControls(root)[2], "big");
    click(root, "add-field");
    let row = fieldRows(root)[0];
    setInput(row.querySelector("input") as HTMLInputElement, "blob");
    const kind = row.querySelector("select") as HTMLSelectElement;
    kind.value = "string";
    kind.dispatchEvent(new Event("change"));
    row = fieldRows(root)[0];
    setInput(row.querySelectorAll("input")[1] as HTMLInputElement, "255");

    // 6 + (2 + 255) + 2 = 265 > 256
    expect(root.querySelector('[data-role="encoded-size"]')?.className).toContain("over");
    expect((root.querySelector('[data-role="save"]') as HTMLButtonElement).disabled).toBe(true);
  });
});
