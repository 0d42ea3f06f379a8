// Tag writer: what the operator typed is what the write sends and what
// the read-back shows.

import { afterEach, describe, expect, it } from "vitest";
import { Api } from "../src/api.js";
import { TagWriterView } from "../src/views/tagwriter.js";
import { FakeService } from "./fakeapi.js";

const UID = "e004010203040506";

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

function serviceWithCarton(): FakeService {
  const service = new FakeService();
  service.templates.set("1:1", {
    template_id: 1, version: 1, name: "carton",
    fields: [
      { name: "lot", kind: "integer" },
      { name: "label", kind: "string", max_len: 8 },
    ],
    encoded_size: 22,
  });
  return service;
}

async function mountedWriter(service: FakeService) {
  const api = new Api({ fetchImpl: service.fetch });
  await api.login("op", "op-pw");
  const root = document.createElement("div");
  document.body.append(root);
  const view = new TagWriterView(api);
  view.mount(root);
  await flush();
  return { api, root, view };
}

function valueInputs(root: HTMLElement): HTMLInputElement[] {
  return [...root.querySelectorAll(".fields input")] as HTMLInputElement[];
}

function click(root: HTMLElement, role: string): void {
  (root.querySelector(`[data-role="${role}"]`) as HTMLButtonElement).click();
}

afterEach(() => {
  document.body.replaceChildren();
});

describe("tag writer", () => {
  it("read-back shows exactly the entered values", async () => {
    const service = serviceWithCarton();
    const { root } = await mountedWriter(service);

    (root.querySelector('[data-role="uid"]') as HTMLInputElement).value = UID;
    const inputs = valueInputs(root);
    expect(inputs.length).toBe(2);
    inputs[0].value = "7";
    inputs[1].value = "crate";

    click(root, "write");
    await flush();
    expect(root.textContent).toContain("wrote 22 bytes");
    expect(service.tags.get(UID)).toEqual({
      template_id: 1, version: 1, values: [7, "crate"],
    });

    click(root, "read");
    await flush();
    const result = root.querySelector('[data-role="result"]') as HTMLElement;
    expect(result.textContent).toContain("carton");
    const cells = [...result.querySelectorAll("tbody td")].map((c) => c.textContent);
    expect(cells).toEqual(["lot", "7", "label", "crate"]);
  });

  it("rejects an overlong string before any request is made", async () => {
    const service = serviceWithCarton();
    const { root } = await mountedWriter(service);
    (root.querySelector('[data-role="uid"]') as HTMLInputElement).value = UID;
    const inputs = valueInputs(root);
    inputs[0].value = "7";
    inputs[1].value = "much too long for eight bytes";

    click(root, "write");
    await flush();
    expect(root.textContent).toContain("exceeds max_len 8");
    expect(service.tags.size).toBe(0);
  });

  it("surfaces a read failure with the operation named", async () => {
    const service = serviceWithCarton();
    const { root } = await mountedWriter(service);
    (root.querySelector('[data-role="uid"]') as HTMLInputElement).value = UID;
    click(root, "read");
    await flush();
    expect(root.textContent).toContain("read failed");
    expect(root.textContent).toContain("not in range");
  });
});
