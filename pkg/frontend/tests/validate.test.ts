import { describe, expect, it } from "vitest";
import { encodedSize } from "../src/encsize.js";
import { parseValue, parseValues, templateProblems, isUid } from "../src/validate.js";
import type { TemplateDoc } from "../src/types.js";

const carton: TemplateDoc = {
  template_id: 7,
  version: 2,
  name: "carton",
  fields: [
    { name: "lot", kind: "integer" },
    { name: "label", kind: "string", max_len: 8 },
  ],
};

describe("encodedSize", () => {
  it("charges header and trailer for an empty field list", () => {
    expect(encodedSize([])).toBe(8);
  });

  it("matches the carton example", () => {
    expect(encodedSize(carton.fields)).toBe(22);
  });

  it("widths per kind", () => {
    expect(encodedSize([{ name: "a", kind: "character" }])).toBe(9);
    expect(encodedSize([{ name: "a", kind: "integer" }])).toBe(12);
    expect(encodedSize([{ name: "a", kind: "real" }])).toBe(16);
    expect(encodedSize([{ name: "a", kind: "string", max_len: 10 }])).toBe(20);
  });
});

describe("templateProblems", () => {
  it("accepts a valid template", () => {
    expect(templateProblems(carton)).toEqual([]);
  });

  it("flags duplicate field names", () => {
    const doc = { ...carton, fields: [
      { name: "x", kind: "integer" as const },
      { name: "x", kind: "real" as const },
    ] };
    expect(templateProblems(doc)).toContain("duplicate field name x");
  });

  it("flags string max_len out of range", () => {
    const zero = { ...carton, fields: [{ name: "s", kind: "string" as const, max_len: 0 }] };
    const big = { ...carton, fields: [{ name: "s", kind: "string" as const, max_len: 256 }] };
    expect(templateProblems(zero).length).toBeGreaterThan(0);
    expect(templateProblems(big).length).toBeGreaterThan(0);
  });

  it("flags a template that cannot fit on a tag", () => {
    const doc = { ...carton, fields: [{ name: "s", kind: "string" as const, max_len: 255 }] };
    const problems = templateProblems(doc);
    expect(problems.some((p) => p.includes("exceeds tag capacity 256"))).toBe(true);
  });

  it("flags id and version bounds", () => {
    expect(templateProblems({ ...carton, template_id: 65536 }).length).toBeGreaterThan(0);
    expect(templateProblems({ ...carton, version: 256 }).length).toBeGreaterThan(0);
    expect(templateProblems({ ...carton, name: "" }).length).toBeGreaterThan(0);
    expect(templateProblems({ ...carton, fields: [] }).length).toBeGreaterThan(0);
  });
});

describe("parseValue", () => {
  it("parses each kind", () => {
    expect(parseValue({ name: "c", kind: "character" }, "65").value).toBe(65);
    expect(parseValue({ name: "i", kind: "integer" }, "-12").value).toBe(-12);
    expect(parseValue({ name: "r", kind: "real" }, "2.5").value).toBe(2.5);
    expect(parseValue({ name: "s", kind: "string", max_len: 8 }, "crate").value).toBe("crate");
  });

  it("rejects out-of-range numerics", () => {
    expect(parseValue({ name: "c", kind: "character" }, "256").error).toBeTruthy();
    expect(parseValue({ name: "i", kind: "integer" }, "2147483648").error).toBeTruthy();
    expect(parseValue({ name: "r", kind: "real" }, "not-a-number").error).toBeTruthy();
  });

  it("measures string length in UTF-8 bytes", () => {
    const over = parseValue({ name: "s", kind: "string", max_len: 4 }, "ééé");
    expect(over.error).toMatch(/exceeds max_len/);
    expect(parseValue({ name: "s", kind: "string", max_len: 4 }, "éé").value).toBe("éé");
  });

  it("parseValues maps fields positionally", () => {
    const parsed = parseValues(carton.fields, ["7", "crate"]);
    expect(parsed.errors).toEqual([]);
    expect(parsed.values).toEqual([7, "crate"]);
  });
});

describe("isUid", () => {
  it("accepts 16 hex digits only", () => {
    expect(isUid("e004010203040506")).toBe(true);
    expect(isUid("E004010203040506")).toBe(true);
    expect(isUid("e00401020304050")).toBe(false);
    expect(isUid("g004010203040506")).toBe(false);
    expect(isUid("")).toBe(false);
  });
});
