/** Session state machine against a scripted in-memory service. */

import { beforeEach, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { DesignSession } from "../src/session.js";
import type { DesignDocument, MeshFrame, RangeInfo } from "../src/types.js";

const MIURA: DesignDocument = {
  schema_version: 1,
  kind: "discrete",
  metadata: { name: "miura", created_at: "1970-01-01T00:00:00Z" },
  payload: {
    m: 2,
    n: 2,
    phi: [0, 0],
    psi: [-0.785, 0.785],
    f0: [1, 1],
    g0: [1.414, 1.414],
    z: [0, 1, 0],
  },
};

const RANGE: RangeInfo = {
  t_min: -0.5,
  t_max: 1.0,
  min_blocking: { reason: "ProfileFlattening", index: 1 },
  max_blocking: { reason: "TrajectoryFlattening", index: 1 },
};

function meshAt(t: number): MeshFrame {
  return {
    t,
    class: "translational",
    vertices: [[0, 0, 0]],
    quads: [[0, 0, 0, 0]],
    rows: 3,
    cols: 3,
    isometry_residual: 0,
    face_residuals: [0],
    planarity: 0,
    dihedral: { min: null, max: null, mean: null, count: 0 },
  };
}

interface Scripted {
  client: ApiClient;
  meshCalls: number[];
  /** when set, mesh responses wait until released in order */
  gate: Array<() => void>;
  holdMesh: boolean;
  failNextPost: { status: number; body: unknown } | null;
}

function makeService(): Scripted {
  const state: Scripted = {
    client: undefined as unknown as ApiClient,
    meshCalls: [],
    gate: [],
    holdMesh: false,
    failNextPost: null,
  };
  const respond = (status: number, body: unknown): Response =>
    new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });

  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    if (url.endsWith("/presets/miura")) return respond(200, MIURA);
    if (init?.method === "POST" && url.endsWith("/designs")) {
      if (state.failNextPost) {
        const { status, body } = state.failNextPost;
        state.failNextPost = null;
        return respond(status, body);
      }
      return respond(201, { id: "abcdefabcdef", name: "miura", kind: "discrete" });
    }
    if (url.includes("/range")) return respond(200, RANGE);
    if (url.includes("/mesh")) {
      const t = Number(new URL(url, "http://x").searchParams.get("t"));
      state.meshCalls.push(t);
      if (t > RANGE.t_max! + 1e-12) {
        return respond(422, { error: "OutOfRange", range: RANGE, blocking: RANGE.max_blocking });
      }
      if (state.holdMesh) {
        await new Promise<void>((resolve) => state.gate.push(resolve));
      }
      if (init?.signal?.aborted) {
        throw Object.assign(new Error("aborted"), { name: "AbortError" });
      }
      return respond(200, meshAt(t));
    }
    if (url.includes("/obj")) {
      const t = Number(new URL(url, "http://x").searchParams.get("t"));
      return new Response(`v 0 0 0\n# t=${t}\n`, { status: 200 });
    }
    return respond(404, { error: "NotFound" });
  };
  state.client = new ApiClient("http://service", fetchImpl);
  return state;
}

describe("DesignSession", () => {
  let svc: Scripted;
  let session: DesignSession;

  beforeEach(async () => {
    svc = makeService();
    session = new DesignSession(svc.client);
    await session.loadPreset("miura");
  });

  it("acknowledges the preset with range and frame", () => {
    expect(session.designId).toBe("abcdefabcdef");
    expect(session.range?.t_min).toBe(-0.5);
    expect(session.range?.t_max).toBe(1.0);
    expect(session.frame?.mesh.t).toBe(0);
    expect(session.buffers.z).toEqual(["0", "1", "0"]);
  });

  it("clamps the slider to the admissible interval", async () => {
    await session.setParameter(5.0);
    expect(session.t).toBe(1.0);
    await session.setParameter(-2.0);
    expect(session.t).toBe(-0.5);
  });

  it("keeps the displayed frame consistent under racing requests", async () => {
    svc.holdMesh = true;
    const first = session.setParameter(0.2);
    const second = session.setParameter(0.7);
    // release in submit order; the older response must not win
    while (svc.gate.length < 2) await Promise.resolve();
    svc.gate.shift()!();
    svc.gate.shift()!();
    await Promise.all([first, second]);
    expect(session.frame?.t).toBe(0.7);
    expect(session.frame?.mesh.t).toBe(0.7);
  });

  it("surfaces validation errors inline and keeps the last valid design", async () => {
    svc.failNextPost = {
      status: 400,
      body: {
        error: "InvariantViolation",
        violations: [{ path: "payload.z[2]", message: "z[2] equals z[1]" }],
      },
    };
    const ok = await session.applyEdit("z", 2, "1");
    expect(ok).toBe(false);
    expect(session.violations[0].path).toBe("payload.z[2]");
    expect(session.designId).toBe("abcdefabcdef");
    expect(session.doc?.payload.z[2]).toBe(0); // unchanged
    // the rejected value stays visible in the edit buffer
    expect(session.buffers.z[2]).toBe("1");
  });

  it("rejects non-numeric input locally", async () => {
    const ok = await session.applyEdit("phi", 0, "abc");
    expect(ok).toBe(false);
    expect(session.violations[0].message).toContain("not a number");
  });

  it("accepts a valid edit and refreshes the frame", async () => {
    const ok = await session.applyEdit("f0", 0, "1.25");
    expect(ok).toBe(true);
    expect(session.doc?.payload.f0[0]).toBe(1.25);
    expect(session.violations).toEqual([]);
    expect(session.frame).not.toBeNull();
  });

  it("exports the acknowledged frame, not the slider preview", async () => {
    await session.setParameter(0.4);
    const { data } = await session.exportObj();
    expect(data).toContain("t=0.4");
  });

  it("export after a failed edit uses the last valid design", async () => {
    svc.failNextPost = {
      status: 400,
      body: { error: "InvariantViolation", violations: [{ path: "payload.g0[0]", message: "g0[0] must be nonzero" }] },
    };
    await session.applyEdit("g0", 0, "0");
    const { data } = await session.exportObj();
    expect(data.startsWith("v ")).toBe(true);
    expect(session.frame?.designId).toBe("abcdefabcdef");
  });

  it("maps blocking reasons to slider endpoint labels", () => {
    const labels = session.endpointLabels();
    expect(labels.min).toContain("profile strip 1");
    expect(labels.max).toContain("trajectory strip 1");
  });
});
