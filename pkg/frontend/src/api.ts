// Thin typed client over the documented HTTP API. Every console mutation
// goes through exactly one method here; there are no other endpoints.

import type {
  AlarmRule,
  DeviceRow,
  EventsPage,
  FieldValue,
  HealthDoc,
  JournalQuery,
  MoveResult,
  PollResult,
  ReadResult,
  ReportPattern,
  SessionDoc,
  StationRow,
  SyncManifest,
  TemplateDoc,
  TransponderRow,
  UserRow,
  WriteResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface ApiOptions {
  base?: string;
  fetchImpl?: FetchLike;
  // called on 401 from any authenticated endpoint (expired/revoked session)
  onAuthFailure?: () => void;
}

export class Api {
  token: string | null = null;
  private base: string;
  private fetchImpl: FetchLike;
  private onAuthFailure: (() => void) | undefined;

  constructor(opts: ApiOptions = {}) {
    this.base = opts.base ?? "";
    this.fetchImpl = opts.fetchImpl ?? ((input, init) => fetch(input, init));
    this.onAuthFailure = opts.onAuthFailure;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    opts: { raw?: boolean; open?: boolean } = {},
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["content-type"] = "application/json";
    if (this.token) headers["authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const doc = await response.json();
        if (doc && typeof doc.detail === "string") detail = doc.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      if (response.status === 401 && !opts.open && this.onAuthFailure) {
        this.onAuthFailure();
      }
      throw new ApiError(response.status, detail);
    }
    if (opts.raw) return (await response.text()) as unknown as T;
    return (await response.json()) as T;
  }

  // -- sessions ----------------------------------------------------------

  async login(username: string, password: string): Promise<SessionDoc> {
    const doc = await this.request<SessionDoc>(
      "POST", "/api/login", { username, password }, { open: true });
    this.token = doc.token;
    return doc;
  }

  async logout(): Promise<void> {
    await this.request("POST", "/api/logout", {});
    this.token = null;
  }

  health(): Promise<HealthDoc> {
    return this.request("GET", "/api/health", undefined, { open: true });
  }

  // -- templates ---------------------------------------------------------

  listTemplates(): Promise<TemplateDoc[]> {
    return this.request("GET", "/api/templates");
  }

  defineTemplate(doc: TemplateDoc): Promise<TemplateDoc> {
    return this.request("POST", "/api/templates", doc);
  }

  getTemplate(id: number, version: number): Promise<TemplateDoc> {
    return this.request("GET", `/api/templates/${id}/${version}`);
  }

  deleteTemplate(id: number, version: number): Promise<void> {
    return this.request("DELETE", `/api/templates/${id}/${version}`);
  }

  // -- tags --------------------------------------------------------------

  writeTag(station: number, uid: string, templateId: number, version: number,
           values: FieldValue[]): Promise<WriteResult> {
    return this.request("POST", "/api/tags/write", {
      station, uid, template_id: templateId, version, values,
    });
  }

  readTag(station: number, uid: string): Promise<ReadResult> {
    return this.request("POST", "/api/tags/read", { station, uid });
  }

  listTransponders(): Promise<TransponderRow[]> {
    return this.request("GET", "/api/transponders");
  }

  // -- stations ----------------------------------------------------------

  listStations(): Promise<StationRow[]> {
    return this.request("GET", "/api/stations");
  }

  configureStation(addr: number, body: Record<string, unknown>): Promise<StationRow> {
    return this.request("POST", `/api/stations/${addr}`, body);
  }

  inventory(addr: number): Promise<{ station: number; uids: string[] }> {
    return this.request("POST", `/api/stations/${addr}/inventory`, {});
  }

  // -- events ------------------------------------------------------------

  poll(): Promise<PollResult> {
    return this.request("POST", "/api/poll", {});
  }

  queryEvents(query: JournalQuery): Promise<EventsPage> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(query)) {
      if (value !== undefined && value !== "") params.set(key, String(value));
    }
    const qs = params.toString();
    return this.request("GET", `/api/events${qs ? "?" + qs : ""}`);
  }

  // -- alarm rules ---------------------------------------------------------

  listAlarmRules(): Promise<AlarmRule[]> {
    return this.request("GET", "/api/alarm-rules");
  }

  setAlarmRule(rule: AlarmRule): Promise<AlarmRule> {
    return this.request("POST", "/api/alarm-rules", rule);
  }

  deleteAlarmRule(name: string): Promise<void> {
    return this.request("DELETE", `/api/alarm-rules/${encodeURIComponent(name)}`);
  }

  // -- report patterns -----------------------------------------------------

  listReportPatterns(): Promise<ReportPattern[]> {
    return this.request("GET", "/api/report-patterns");
  }

  setReportPattern(pattern: ReportPattern): Promise<ReportPattern> {
    return this.request("POST", "/api/report-patterns", pattern);
  }

  deleteReportPattern(name: string): Promise<void> {
    return this.request("DELETE", `/api/report-patterns/${encodeURIComponent(name)}`);
  }

  renderReport(name: string): Promise<string> {
    return this.request("GET",
      `/api/report-patterns/${encodeURIComponent(name)}/render`, undefined,
      { raw: true });
  }

  // -- simulation ----------------------------------------------------------

  simPlace(uid: string, station: number, positionCm: number): Promise<unknown> {
    return this.request("POST", "/api/sim/place",
      { uid, station, position_cm: positionCm });
  }

  simMove(uid: string, positionCm: number, station?: number): Promise<MoveResult> {
    const body: Record<string, unknown> = { uid, position_cm: positionCm };
    if (station !== undefined) body["station"] = station;
    return this.request("POST", "/api/sim/move", body);
  }

  simWorld(): Promise<{ text: string }> {
    return this.request("GET", "/api/sim/world");
  }

  simLoadWorld(text: string): Promise<{ stations: number; tags: number }> {
    return this.request("POST", "/api/sim/world", { text });
  }

  simAdvance(seconds: number): Promise<{ sim_time_us: number; alarms: number }> {
    return this.request("POST", "/api/sim/advance", { seconds });
  }

  // -- sync ------------------------------------------------------------------

  listDevices(): Promise<DeviceRow[]> {
    return this.request("GET", "/api/devices");
  }

  runSync(deviceId: string, tables?: string[]): Promise<SyncManifest> {
    return this.request("POST", `/api/sync/${encodeURIComponent(deviceId)}`,
      tables ? { tables } : {});
  }

  lastManifest(deviceId: string): Promise<SyncManifest> {
    return this.request("GET",
      `/api/sync/${encodeURIComponent(deviceId)}/manifest`);
  }

  // -- users -------------------------------------------------------------------

  listUsers(): Promise<UserRow[]> {
    return this.request("GET", "/api/users");
  }

  setUser(username: string, body: { password?: string; role?: string;
                                    enabled?: boolean }): Promise<UserRow> {
    return this.request("POST", "/api/users", { username, ...body });
  }

  deleteUser(username: string): Promise<void> {
    return this.request("DELETE", `/api/users/${encodeURIComponent(username)}`);
  }
}
