// Client-side mirrors of the server's template and value rules, so the
// editor can refuse bad input before a request leaves the browser. The
// server remains the authority; these checks only match its answers.

import { encodedSize, TAG_CAPACITY_BYTES } from "./encsize.js";
import type { FieldDef, FieldKind, FieldValue, TemplateDoc } from "./types.js";

export const FIELD_KINDS: FieldKind[] = ["character", "string", "integer", "real"];

const I32_MIN = -2147483648;
const I32_MAX = 2147483647;

export function templateProblems(doc: TemplateDoc): string[] {
  const problems: string[] = [];
  if (!Number.isInteger(doc.template_id) || doc.template_id < 0 || doc.template_id > 0xffff) {
    problems.push("template id must be 0..65535");
  }
  if (!Number.isInteger(doc.version) || doc.version < 0 || doc.version > 0xff) {
    problems.push("version must be 0..255");
  }
  if (!doc.name.trim()) problems.push("template needs a name");
  if (doc.fields.length === 0) problems.push("template needs at least one field");

  const seen = new Set<string>();
  for (const f of doc.fields) {
    if (!f.name.trim()) problems.push("every field needs a name");
    else if (seen.has(f.name)) problems.push(`duplicate field name ${f.name}`);
    seen.add(f.name);
    if (f.kind === "string") {
      const len = f.max_len ?? 0;
      if (!Number.isInteger(len) || len < 1 || len > 255) {
        problems.push(`string field ${f.name || "?"} needs max_len 1..255`);
      }
    }
  }
  if (encodedSize(doc.fields) > TAG_CAPACITY_BYTES) {
    problems.push(`encoded size ${encodedSize(doc.fields)} exceeds tag capacity ${TAG_CAPACITY_BYTES}`);
  }
  return problems;
}

// Parse one form input into the value the API expects for the field kind,
// or return an error string.
export function parseValue(field: FieldDef, text: string): { value?: FieldValue; error?: string } {
  switch (field.kind) {
    case "character": {
      const n = Number(text);
      if (!Number.isInteger(n) || n < 0 || n > 255) {
        return { error: `${field.name}: character is a byte 0..255` };
      }
      return { value: n };
    }
    case "integer": {
      const n = Number(text);
      if (!Number.isInteger(n) || n < I32_MIN || n > I32_MAX) {
        return { error: `${field.name}: integer must fit 32 bits` };
      }
      return { value: n };
    }
    case "real": {
      const n = Number(text);
      if (text.trim() === "" || Number.isNaN(n)) {
        return { error: `${field.name}: not a number` };
      }
      return { value: n };
    }
    case "string": {
      const bytes = new TextEncoder().encode(text).length;
      const cap = field.max_len ?? 0;
      if (bytes > cap) {
        return { error: `${field.name}: ${bytes} bytes exceeds max_len ${cap}` };
      }
      return { value: text };
    }
  }
}

export function parseValues(fields: FieldDef[], texts: string[]): { values?: FieldValue[]; errors: string[] } {
  const values: FieldValue[] = [];
  const errors: string[] = [];
  fields.forEach((f, i) => {
    const parsed = parseValue(f, texts[i] ?? "");
    if (parsed.error) errors.push(parsed.error);
    else values.push(parsed.value as FieldValue);
  });
  return errors.length ? { errors } : { values, errors };
}

export function isUid(text: string): boolean {
  return /^[0-9a-fA-F]{16}$/.test(text);
}
