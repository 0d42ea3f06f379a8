// Mirrors the server's payload arithmetic so the template editor can show
// the encoded size before anything is saved. Header is 6 bytes (magic,
// template id u16, version u8, body length u16), trailer is a 2-byte CRC.

import type { FieldDef } from "./types.js";

export const HEADER_BYTES = 6;
export const CRC_BYTES = 2;

// 64 blocks of 4 bytes on the default simulated transponder
export const TAG_CAPACITY_BYTES = 256;

const FIXED_WIDTHS: Record<string, number> = {
  character: 1,
  integer: 4,
  real: 8,
};

export function fieldWidth(field: FieldDef): number {
  if (field.kind === "string") {
    return 2 + (field.max_len ?? 0);
  }
  return FIXED_WIDTHS[field.kind] ?? 0;
}

export function encodedSize(fields: FieldDef[]): number {
  let body = 0;
  for (const f of fields) body += fieldWidth(f);
  return HEADER_BYTES + body + CRC_BYTES;
}
