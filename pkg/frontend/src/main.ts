/** DOM wiring of the designer: edit the design datum, drag the deformation
 * parameter inside the live range, inspect the folding surface, export OBJ.
 * All mathematics happens in the workbench service. */

import { ApiClient } from "./api.js";
import { formatResidual, residualColor } from "./colors.js";
import {
  fitToBox,
  groundView,
  heightExtent,
  paintOrder,
  projectVertices,
  type ViewAngles,
} from "./projection.js";
import { DesignSession } from "./session.js";
import { EDITABLE_FIELDS, type EditableField } from "./types.js";

const api = new ApiClient("");
const session = new DesignSession(api);
const view: ViewAngles = { yaw: 0.7, pitch: 0.5 };

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const presetSelect = el<HTMLSelectElement>("preset");
const loadButton = el<HTMLButtonElement>("load");
const slider = el<HTMLInputElement>("t-slider");
const tLabel = el<HTMLSpanElement>("t-value");
const minMark = el<HTMLSpanElement>("t-min");
const maxMark = el<HTMLSpanElement>("t-max");
const minReason = el<HTMLSpanElement>("min-reason");
const maxReason = el<HTMLSpanElement>("max-reason");
const exportButton = el<HTMLButtonElement>("export");
const messages = el<HTMLUListElement>("messages");
const status = el<HTMLDivElement>("status");
const editors = el<HTMLDivElement>("editors");
const canvas3d = el<HTMLCanvasElement>("view3d");
const canvasGround = el<HTMLCanvasElement>("ground");

const SLIDER_STEPS = 400;

let sliderTimer: number | undefined;

function sliderToT(raw: number): number {
  const r = session.range;
  if (!r) return 0;
  const hi = r.t_max ?? -r.t_min;
  return r.t_min + (raw / SLIDER_STEPS) * (hi - r.t_min);
}

function tToSlider(t: number): number {
  const r = session.range;
  if (!r) return 0;
  const hi = r.t_max ?? -r.t_min;
  return Math.round(((t - r.t_min) / (hi - r.t_min)) * SLIDER_STEPS);
}

function renderEditors(): void {
  editors.textContent = "";
  if (!session.doc) return;
  for (const field of EDITABLE_FIELDS) {
    const row = document.createElement("div");
    row.className = "editor-row";
    const label = document.createElement("label");
    label.textContent = field;
    row.appendChild(label);
    session.buffers[field].forEach((value, index) => {
      const input = document.createElement("input");
      input.type = "text";
      input.value = value;
      input.dataset.field = field;
      input.dataset.index = String(index);
      input.addEventListener("change", () => {
        void session.applyEdit(field as EditableField, index, input.value);
      });
      row.appendChild(input);
    });
    editors.appendChild(row);
  }
}

function renderMessages(): void {
  messages.textContent = "";
  for (const v of session.violations) {
    const li = document.createElement("li");
    li.textContent = v.path ? `${v.path}: ${v.message}` : v.message;
    messages.appendChild(li);
  }
  // highlight offending inputs
  for (const input of editors.querySelectorAll("input")) {
    const path = `payload.${input.dataset.field}[${input.dataset.index}]`;
    input.classList.toggle(
      "invalid",
      session.violations.some((v) => v.path === path),
    );
  }
}

function drawFrame(): void {
  const ctx = canvas3d.getContext("2d");
  const gtx = canvasGround.getContext("2d");
  if (!ctx || !gtx) return;
  ctx.clearRect(0, 0, canvas3d.width, canvas3d.height);
  gtx.clearRect(0, 0, canvasGround.width, canvasGround.height);
  const frame = session.frame;
  if (!frame) return;
  const mesh = frame.mesh;

  const projected = projectVertices(mesh.vertices, view);
  const fit = fitToBox(projected.points, canvas3d.width, canvas3d.height);
  const order = paintOrder(mesh.quads, projected.depth);
  for (const k of order) {
    const quad = mesh.quads[k];
    ctx.beginPath();
    quad.forEach((idx, i) => {
      const p = fit(projected.points[idx]);
      if (i === 0) ctx.moveTo(p.x, p.y);
      else ctx.lineTo(p.x, p.y);
    });
    ctx.closePath();
    ctx.fillStyle = residualColor(mesh.face_residuals[k] ?? 0);
    ctx.strokeStyle = "#1b2733";
    ctx.lineWidth = 1;
    ctx.fill();
    ctx.stroke();
  }

  const net = groundView(mesh.vertices);
  const gfit = fitToBox(net, canvasGround.width, canvasGround.height);
  gtx.strokeStyle = "#47617a";
  gtx.lineWidth = 1;
  for (const quad of mesh.quads) {
    gtx.beginPath();
    quad.forEach((idx, i) => {
      const p = gfit(net[idx]);
      if (i === 0) gtx.moveTo(p.x, p.y);
      else gtx.lineTo(p.x, p.y);
    });
    gtx.closePath();
    gtx.stroke();
  }

  status.textContent =
    `class ${mesh.class} | t = ${frame.t.toFixed(4)} | ` +
    `height extent ${heightExtent(mesh.vertices).toExponential(2)} | ` +
    `worst face residual ${formatResidual(mesh.isometry_residual)} | ` +
    `planarity ${mesh.planarity.toExponential(2)}`;
}

function render(): void {
  const r = session.range;
  if (r) {
    const hi = r.t_max ?? -r.t_min;
    minMark.textContent = r.t_min.toFixed(4);
    maxMark.textContent = r.t_max === null ? "unbounded" : hi.toFixed(4);
    const labels = session.endpointLabels();
    minReason.textContent = labels.min;
    maxReason.textContent = labels.max;
    slider.min = "0";
    slider.max = String(SLIDER_STEPS);
    slider.value = String(tToSlider(session.t));
  }
  tLabel.textContent = session.t.toFixed(4);
  renderMessages();
  drawFrame();
}

async function boot(): Promise<void> {
  const { presets } = await api.listPresets();
  presetSelect.textContent = "";
  for (const name of presets) {
    const opt = document.createElement("option");
    opt.value = name;
    opt.textContent = name;
    presetSelect.appendChild(opt);
  }
  if (presets.includes("miura")) presetSelect.value = "miura";
  await session.loadPreset(presetSelect.value);
  renderEditors();
  render();
}

session.onChange(() => {
  render();
});

loadButton.addEventListener("click", () => {
  void session.loadPreset(presetSelect.value).then(renderEditors);
});

slider.addEventListener("input", () => {
  const t = sliderToT(Number(slider.value));
  tLabel.textContent = t.toFixed(4);
  if (sliderTimer !== undefined) window.clearTimeout(sliderTimer);
  // debounce: the session keeps latest-wins semantics underneath
  sliderTimer = window.setTimeout(() => {
    void session.setParameter(t);
  }, 60);
});

exportButton.addEventListener("click", () => {
  void session.exportObj().then(({ filename, data }) => {
    const blob = new Blob([data], { type: "text/plain" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = filename;
    a.click();
    URL.revokeObjectURL(a.href);
  });
});

canvas3d.addEventListener("pointerdown", (down) => {
  const startYaw = view.yaw;
  const startPitch = view.pitch;
  const move = (ev: PointerEvent) => {
    view.yaw = startYaw + (ev.clientX - down.clientX) * 0.01;
    view.pitch = Math.min(
      Math.max(startPitch + (ev.clientY - down.clientY) * 0.01, -1.5),
      1.5,
    );
    drawFrame();
  };
  const up = () => {
    window.removeEventListener("pointermove", move);
    window.removeEventListener("pointerup", up);
  };
  window.addEventListener("pointermove", move);
  window.addEventListener("pointerup", up);
});

void boot();
