/** Display transforms only: orthographic projection of mesh frames and the
 * ground view.  No design geometry is computed here. */

export interface Vec2 {
  x: number;
  y: number;
}

export interface ViewAngles {
  yaw: number;
  pitch: number;
}

export interface Projected {
  points: Vec2[];
  depth: number[];
}

/** Rotate by yaw about z, then pitch about x; screen plane is (x, -z'). */
export function rotatePoint(v: number[], view: ViewAngles): number[] {
  const cy = Math.cos(view.yaw);
  const sy = Math.sin(view.yaw);
  const x1 = cy * v[0] + sy * v[1];
  const y1 = -sy * v[0] + cy * v[1];
  const z1 = v[2];
  const cp = Math.cos(view.pitch);
  const sp = Math.sin(view.pitch);
  const y2 = cp * y1 + sp * z1;
  const z2 = -sp * y1 + cp * z1;
  return [x1, y2, z2];
}

/** Map points into a width x height box with uniform scale and margin. */
export function fitToBox(
  pts: Vec2[],
  width: number,
  height: number,
  margin = 20,
): (p: Vec2) => Vec2 {
  let xmin = Infinity;
  let xmax = -Infinity;
  let ymin = Infinity;
  let ymax = -Infinity;
  for (const p of pts) {
    xmin = Math.min(xmin, p.x);
    xmax = Math.max(xmax, p.x);
    ymin = Math.min(ymin, p.y);
    ymax = Math.max(ymax, p.y);
  }
  const spanX = Math.max(xmax - xmin, 1e-12);
  const spanY = Math.max(ymax - ymin, 1e-12);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const cx = 0.5 * (xmin + xmax);
  const cy = 0.5 * (ymin + ymax);
  return (p) => ({
    x: width / 2 + (p.x - cx) * scale,
    y: height / 2 - (p.y - cy) * scale,
  });
}

/** Orthographic projection of 3D vertices; depth used for painter's sort. */
export function projectVertices(vertices: number[][], view: ViewAngles): Projected {
  const points: Vec2[] = [];
  const depth: number[] = [];
  for (const v of vertices) {
    const r = rotatePoint(v, view);
    points.push({ x: r[0], y: r[2] });
    depth.push(r[1]);
  }
  return { points, depth };
}

/** Ground view: drop the height coordinate. */
export function groundView(vertices: number[][]): Vec2[] {
  return vertices.map((v) => ({ x: v[0], y: v[1] }));
}

/** Quad draw order, far to near, by mean corner depth. */
export function paintOrder(quads: number[][], depth: number[]): number[] {
  const order = quads.map((_, k) => k);
  const mean = quads.map(
    (q) => q.reduce((acc, idx) => acc + depth[idx], 0) / q.length,
  );
  order.sort((a, b) => mean[a] - mean[b]);
  return order;
}

/** z-extent of a frame (flat sheets have extent ~0). */
export function heightExtent(vertices: number[][]): number {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of vertices) {
    lo = Math.min(lo, v[2]);
    hi = Math.max(hi, v[2]);
  }
  return vertices.length ? hi - lo : 0;
}
