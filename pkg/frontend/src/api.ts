/** Thin typed client for the workbench service.
 *
 * The fetch implementation is injectable so the session logic is testable
 * without a network; all geometry lives on the server side.
 */

import type {
  DesignDocument,
  MeshFrame,
  RangeInfo,
  Violation,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly violations: Violation[];
  readonly range: RangeInfo | null;

  constructor(status: number, message: string, violations: Violation[] = [], range: RangeInfo | null = null) {
    super(message);
    this.status = status;
    this.violations = violations;
    this.range = range;
  }
}

async function asApiError(resp: Response): Promise<ApiError> {
  let violations: Violation[] = [];
  let range: RangeInfo | null = null;
  let message = `HTTP ${resp.status}`;
  try {
    const body = (await resp.json()) as Record<string, unknown>;
    if (Array.isArray(body.violations)) {
      violations = body.violations as Violation[];
      message = violations.map((v) => v.message).join("; ") || message;
    } else if (typeof body.error === "string") {
      message = body.error;
    }
    if (body.range) range = body.range as RangeInfo;
  } catch {
    /* non-JSON error body: keep the status message */
  }
  return new ApiError(resp.status, message, violations, range);
}

export class ApiClient {
  readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = (i, init) => fetch(i, init)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, { signal });
    if (!resp.ok) throw await asApiError(resp);
    return (await resp.json()) as T;
  }

  listPresets(): Promise<{ presets: string[] }> {
    return this.getJson("/presets");
  }

  getPreset(name: string): Promise<DesignDocument> {
    return this.getJson(`/presets/${encodeURIComponent(name)}`);
  }

  async postDesign(doc: DesignDocument): Promise<{ id: string }> {
    const resp = await this.fetchImpl(`${this.base}/designs`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
    if (!resp.ok) throw await asApiError(resp);
    return (await resp.json()) as { id: string };
  }

  getDesign(id: string): Promise<DesignDocument> {
    return this.getJson(`/designs/${id}`);
  }

  getRange(id: string): Promise<RangeInfo> {
    return this.getJson(`/designs/${id}/range`);
  }

  getMesh(id: string, t: number, signal?: AbortSignal): Promise<MeshFrame> {
    return this.getJson(`/designs/${id}/mesh?t=${encodeURIComponent(t)}`, signal);
  }

  getClass(id: string): Promise<{ class: string }> {
    return this.getJson(`/designs/${id}/classify`);
  }

  async getObj(id: string, t: number): Promise<string> {
    const resp = await this.fetchImpl(`${this.base}/designs/${id}/obj?t=${encodeURIComponent(t)}`);
    if (!resp.ok) throw await asApiError(resp);
    return await resp.text();
  }
}
