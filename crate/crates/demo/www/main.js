// Build the bindings first: see the README for the wasm-bindgen step.
import init, { Demo } from "./pkg/piezoloc_demo.js";

const PX_PER_MM = 40;
const MARGIN_MM = 0.8;
const MAP_STEP_MM = 1.0;

const canvas = document.getElementById("sensor");
const ctx = canvas.getContext("2d");
const $ = (id) => document.getElementById(id);

let demo;
let heat = null;
let last = null;

const toPx = (x, y) => [
  (x + MARGIN_MM) * PX_PER_MM,
  canvas.height - (y + MARGIN_MM) * PX_PER_MM,
];
const toMm = (px, py) => [
  px / PX_PER_MM - MARGIN_MM,
  (canvas.height - py) / PX_PER_MM - MARGIN_MM,
];

// Viridis-like ramp, t in [0, 1].
const STOPS = [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]];
function ramp(t) {
  const s = Math.min(Math.max(t, 0), 1) * (STOPS.length - 1);
  const k = Math.min(Math.floor(s), STOPS.length - 2);
  const f = s - k;
  const c = STOPS[k].map((a, i) => Math.round(a + (STOPS[k + 1][i] - a) * f));
  return `rgb(${c[0]},${c[1]},${c[2]})`;
}

function computeMap() {
  const pair = Number($("pair").value);
  const depth = Number($("depth").value);
  const values = demo.sensitivityMap(pair, depth, MAP_STEP_MM);
  const columns = Math.floor(demo.width() / MAP_STEP_MM) + 1;
  heat = { values, columns, rows: values.length / columns, max: Math.max(...values) };
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const [x0, y0] = toPx(0, demo.height());
  const [x1, y1] = toPx(demo.width(), 0);
  ctx.fillStyle = "#f4f4f4";
  ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
  if (heat && $("show-map").checked) {
    const cell = MAP_STEP_MM * PX_PER_MM;
    for (let r = 0; r < heat.rows; r++) {
      for (let c = 0; c < heat.columns; c++) {
        const [px, py] = toPx(c * MAP_STEP_MM, r * MAP_STEP_MM);
        ctx.fillStyle = ramp(heat.values[r * heat.columns + c] / heat.max);
        ctx.fillRect(px - cell / 2, py - cell / 2, cell, cell);
      }
    }
  }
  ctx.strokeStyle = "#333";
  ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
  const corners = [[0, 0], [demo.width(), 0], [0, demo.height()], [demo.width(), demo.height()]];
  corners.forEach(([x, y], i) => {
    const [px, py] = toPx(x, y);
    ctx.fillStyle = "#c00";
    ctx.fillRect(px - 5, py - 5, 10, 10);
    ctx.fillStyle = "#000";
    ctx.fillText(`E${i}`, px + 8, py + (y === 0 ? 14 : -6));
  });
  if (last) {
    const [tx, ty] = toPx(last.x, last.y);
    const [px, py] = toPx(last.px, last.py);
    ctx.strokeStyle = "#fff";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(tx, ty);
    ctx.lineTo(px, py);
    ctx.stroke();
    ctx.strokeStyle = "#000";
    ctx.beginPath();
    ctx.moveTo(tx - 7, ty - 7); ctx.lineTo(tx + 7, ty + 7);
    ctx.moveTo(tx - 7, ty + 7); ctx.lineTo(tx + 7, ty - 7);
    ctx.stroke();
    ctx.fillStyle = "#e6007e";
    ctx.beginPath();
    ctx.arc(px, py, 6, 0, 2 * Math.PI);
    ctx.fill();
    ctx.lineWidth = 1;
  }
}

function press(x, y) {
  const depth = Number($("depth").value);
  const noise = Number($("noise").value);
  const dr = demo.simulate(x, y, depth);
  const [px, py] = demo.localize(x, y, depth, noise);
  last = { x, y, px, py };
  const rest = demo.restResistances();
  const labels = demo.pairLabels();
  $("readout").querySelector("tbody").innerHTML = labels
    .map((l, i) => `<tr><td>${l}</td><td>${(rest[i] / 1e3).toFixed(2)}</td><td>${dr[i].toFixed(1)}</td></tr>`)
    .join("");
  const err = Math.hypot(px - x, py - y);
  $("result").textContent =
    `true (${x.toFixed(2)}, ${y.toFixed(2)}) mm, estimate (${px.toFixed(2)}, ${py.toFixed(2)}) mm, error ${err.toFixed(2)} mm`;
  draw();
}

async function main() {
  await init();
  demo = new Demo(1);
  demo.pairLabels().forEach((l, i) => $("pair").add(new Option(l, i)));
  $("status").textContent =
    `Localizer ready: KRR with lambda = ${demo.lambda().toExponential(1)}, sigma = ${demo.sigma().toExponential(1)}, ` +
    `noise sd = ${demo.noise_sd().toFixed(1)} Ω.`;
  computeMap();
  draw();

  canvas.addEventListener("click", (ev) => {
    const rect = canvas.getBoundingClientRect();
    const [x, y] = toMm(ev.clientX - rect.left, ev.clientY - rect.top);
    if (x < 0 || y < 0 || x > demo.width() || y > demo.height()) return;
    press(x, y);
  });
  $("depth").addEventListener("input", () => {
    $("depth-v").textContent = Number($("depth").value).toFixed(1);
  });
  $("depth").addEventListener("change", () => { computeMap(); draw(); });
  $("noise").addEventListener("input", () => {
    $("noise-v").textContent = Number($("noise").value).toFixed(1);
  });
  $("pair").addEventListener("change", () => { computeMap(); draw(); });
  $("show-map").addEventListener("change", draw);
}

main().catch((e) => { $("status").textContent = `Failed to start: ${e}`; });
