// Shapes of the documented API bodies the console consumes. The console
// never invents state: everything below arrives from the service.

export type FieldKind = "character" | "string" | "integer" | "real";

export interface FieldDef {
  name: string;
  kind: FieldKind;
  max_len?: number;
}

export interface TemplateDoc {
  template_id: number;
  version: number;
  name: string;
  fields: FieldDef[];
  encoded_size?: number;
}

export type FieldValue = number | string;

export interface SessionDoc {
  token: string;
  username: string;
  role: "VIEWER" | "OPERATOR" | "ADMIN";
  expires: number;
}

export interface HealthDoc {
  status: string;
  stations: number;
  sim_time_us: number;
  revisions: Record<string, number>;
  events: number;
}

export interface StationRow {
  addr: number;
  name: string;
  baud_class: number;
  status: string;
  in_range: string[];
  ring_fill: number;
}

export interface EventRow {
  station: number;
  seq: number;
  kind: string;
  uid: string;
  sim_timestamp: number;
  ingest_time: number;
  detail: string;
}

export interface EventsPage {
  events: EventRow[];
  total: number;
  offset: number;
  limit: number;
}

export interface JournalQuery {
  station?: number;
  kind?: string;
  uid?: string;
  since_us?: number;
  until_us?: number;
  offset?: number;
  limit?: number;
  order?: "asc" | "desc";
}

export interface TransponderRow {
  uid: string;
  template_id: number;
  version: number;
  last_payload: string;
  last_station: number;
  last_seen: number;
}

export interface ReadResult {
  uid: string;
  template_id: number;
  version: number;
  template_name: string;
  values: FieldValue[];
}

export interface WriteResult {
  uid: string;
  bytes: number;
  blocks: number;
}

export interface AlarmRule {
  name: string;
  kind: string;
  params: Record<string, unknown>;
  enabled?: boolean;
}

export interface ReportPattern {
  name: string;
  table: string;
  filter: { column: string; op: string; value: unknown }[];
  columns: string[];
  sort: { column: string; descending?: boolean } | null;
  format: "csv" | "html";
}

export interface PollResult {
  events: number;
  timeouts: number[];
  gaps: Record<string, number[]>;
  alarms: number;
}

export interface MoveResult {
  uid: string;
  station: number;
  position_cm: number;
  crossings: string[];
}

export interface DeviceRow {
  device_id: string;
  state: string;
  last_manifest: SyncManifest | null;
}

export interface SyncTableOutcome {
  table: string;
  device_revision: number;
  central_revision: number;
  decision: string;
  resolved: string;
  applied: boolean;
  error: string;
  archived: string;
  transfer_bytes: number;
}

export interface SyncManifest {
  device_id: string;
  completed: boolean;
  digest_ok: boolean;
  fault: string;
  tables: Record<string, SyncTableOutcome>;
}

export interface UserRow {
  username: string;
  role: string;
  enabled: boolean;
  password_hash?: string;
}
