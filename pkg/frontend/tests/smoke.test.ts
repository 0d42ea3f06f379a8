import { describe, expect, it } from "vitest";
import { encodedSize } from "../src/encsize.js";

describe("module resolution", () => {
  it("imports src modules through .js specifiers", () => {
    expect(encodedSize([])).toBe(8);
  });
});
