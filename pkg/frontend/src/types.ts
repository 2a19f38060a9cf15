/** JSON payloads of the workbench HTTP service. */

export interface DiscretePayload {
  m: number;
  n: number;
  phi: number[];
  psi: number[];
  f0: number[];
  g0: number[];
  z: number[];
}

export interface DesignDocument {
  schema_version: number;
  kind: "discrete" | "smooth";
  metadata: { name: string; created_at: string };
  payload: DiscretePayload;
}

export interface Blocking {
  reason: "ProfileFlattening" | "TrajectoryFlattening" | "Unbounded";
  index: number | null;
}

export interface RangeInfo {
  t_min: number;
  t_max: number | null; // null encodes an unbounded upper end
  min_blocking: Blocking;
  max_blocking: Blocking;
}

export interface DihedralStats {
  min: number | null;
  max: number | null;
  mean: number | null;
  count: number;
}

export interface MeshFrame {
  t: number;
  class: string;
  vertices: number[][];
  quads: number[][];
  rows: number;
  cols: number;
  isometry_residual: number;
  face_residuals: number[];
  planarity: number;
  dihedral: DihedralStats;
}

export interface Violation {
  path: string | null;
  message: string;
}

/** Editable design fields (the edit buffers of a session). */
export type EditableField = "phi" | "psi" | "f0" | "g0" | "z";

export const EDITABLE_FIELDS: EditableField[] = ["phi", "psi", "f0", "g0", "z"];
