/** Designer session state.
 *
 * Holds the last design acknowledged by the service (id + document), the
 * cached parameter range, the edit buffers and the last acknowledged mesh
 * frame.  All numeric validation happens server-side; a failed edit leaves
 * the acknowledged design untouched and surfaces the violations inline.
 *
 * Mesh requests follow latest-wins: a newer slider value aborts and
 * supersedes an in-flight request, so the displayed frame always matches a
 * (design id, t) pair the service actually served.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  DesignDocument,
  EditableField,
  MeshFrame,
  RangeInfo,
  Violation,
} from "./types.js";

export interface AcknowledgedFrame {
  designId: string;
  t: number;
  mesh: MeshFrame;
}

export type SessionListener = () => void;

function clamp(t: number, range: RangeInfo | null): number {
  if (!range) return t;
  const hi = range.t_max === null ? Number.POSITIVE_INFINITY : range.t_max;
  return Math.min(Math.max(t, range.t_min), hi);
}

export class DesignSession {
  readonly api: ApiClient;

  designId: string | null = null;
  doc: DesignDocument | null = null;
  range: RangeInfo | null = null;
  t = 0;
  frame: AcknowledgedFrame | null = null;
  violations: Violation[] = [];
  buffers: Record<EditableField, string[]> = { phi: [], psi: [], f0: [], g0: [], z: [] };

  private meshToken = 0;
  private meshAbort: AbortController | null = null;
  private listeners: SessionListener[] = [];

  constructor(api: ApiClient) {
    this.api = api;
  }

  onChange(listener: SessionListener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const l of this.listeners) l();
  }

  private syncBuffers(): void {
    const p = this.doc?.payload;
    if (!p) return;
    this.buffers = {
      phi: p.phi.map(String),
      psi: p.psi.map(String),
      f0: p.f0.map(String),
      g0: p.g0.map(String),
      z: p.z.map(String),
    };
  }

  /** Load a named preset document and acknowledge it with the service. */
  async loadPreset(name: string): Promise<void> {
    const doc = await this.api.getPreset(name);
    await this.adopt(doc);
  }

  /** Validate + persist a document, then refresh range and frame. */
  async adopt(doc: DesignDocument): Promise<void> {
    const { id } = await this.api.postDesign(doc);
    this.designId = id;
    this.doc = doc;
    this.violations = [];
    this.syncBuffers();
    this.range = await this.api.getRange(id);
    this.t = clamp(this.t, this.range);
    this.notify();
    await this.requestMesh();
  }

  /**
   * Apply one edit-buffer entry.  Returns true when the service accepted
   * the changed design; on rejection the violations are surfaced and the
   * previous design stays acknowledged.
   */
  async applyEdit(field: EditableField, index: number, raw: string): Promise<boolean> {
    if (!this.doc) return false;
    this.buffers[field][index] = raw;
    const value = Number(raw);
    if (!Number.isFinite(value)) {
      this.violations = [
        { path: `payload.${field}[${index}]`, message: `${field}[${index}] is not a number` },
      ];
      this.notify();
      return false;
    }
    const payload = {
      ...this.doc.payload,
      [field]: this.doc.payload[field].map((x, k) => (k === index ? value : x)),
    };
    const candidate: DesignDocument = { ...this.doc, payload };
    try {
      await this.adopt(candidate);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 400) {
        this.violations = err.violations.length
          ? err.violations
          : [{ path: null, message: err.message }];
        this.notify();
        return false;
      }
      throw err;
    }
  }

  /** Move the deformation slider: clamp, then latest-wins mesh fetch. */
  async setParameter(t: number): Promise<void> {
    this.t = clamp(t, this.range);
    this.notify();
    await this.requestMesh();
  }

  private async requestMesh(): Promise<void> {
    if (!this.designId) return;
    const token = ++this.meshToken;
    this.meshAbort?.abort();
    const abort = new AbortController();
    this.meshAbort = abort;
    const id = this.designId;
    const t = this.t;
    let mesh: MeshFrame;
    try {
      mesh = await this.api.getMesh(id, t, abort.signal);
    } catch (err) {
      if (token !== this.meshToken) return; // superseded
      if (err instanceof ApiError && err.status === 422 && err.range) {
        // stale local range: adopt the server's and clamp
        this.range = err.range;
        this.t = clamp(t, this.range);
        this.notify();
        await this.requestMesh();
        return;
      }
      if ((err as Error).name === "AbortError") return;
      throw err;
    }
    if (token !== this.meshToken) return; // a newer request won
    this.frame = { designId: id, t, mesh };
    this.notify();
  }

  /** OBJ bytes of the acknowledged frame (same output as the CLI export). */
  async exportObj(): Promise<{ filename: string; data: string }> {
    if (!this.frame) throw new Error("no frame to export");
    const data = await this.api.getObj(this.frame.designId, this.frame.t);
    const name = this.doc?.metadata.name ?? "design";
    return { filename: `${name}_t${this.frame.t.toFixed(4)}.obj`, data };
  }

  /** Human-readable blocking reasons for the slider endpoints. */
  endpointLabels(): { min: string; max: string } {
    const text = (b: { reason: string; index: number | null } | undefined): string => {
      if (!b) return "";
      if (b.reason === "ProfileFlattening")
        return `profile strip ${b.index ?? "?"} flattens into the profile planes`;
      if (b.reason === "TrajectoryFlattening")
        return `trajectory strip ${b.index ?? "?"} flattens into the trajectory planes`;
      return "unbounded";
    };
    return { min: text(this.range?.min_blocking), max: text(this.range?.max_blocking) };
  }
}
