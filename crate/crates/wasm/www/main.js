import init, { kochStaircase, estimateDimension, WavePacket } from "./pkg/fractalqm_wasm.js";

const $ = (id) => document.getElementById(id);

function drawStaircase() {
  const level = Number($("st-level").value);
  const data = kochStaircase(level);
  const cv = $("st-canvas");
  const ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const n = data.length / 3;
  const sMax = data[3 * (n - 1) + 2];
  const scale = cv.width * 0.95;
  const x = (i) => cv.width * 0.025 + data[3 * i] * scale;
  const y = (i) => cv.height * 0.9 - data[3 * i + 1] * scale;
  ctx.lineWidth = 2;
  for (let i = 0; i + 1 < n; i++) {
    const t = data[3 * i + 2] / sMax;
    ctx.strokeStyle = `hsl(${240 - 240 * t}, 80%, 45%)`;
    ctx.beginPath();
    ctx.moveTo(x(i), y(i));
    ctx.lineTo(x(i + 1), y(i + 1));
    ctx.stroke();
  }
}

function runDimension() {
  try {
    const r = estimateDimension($("dim-kind").value, Number($("dim-level").value));
    const slopes = Array.from(r.slice(3), (s) => s.toExponential(2)).join(", ");
    $("dim-out").textContent =
      `α* = ${r[0].toFixed(6)}  bracket [${r[1].toFixed(6)}, ${r[2].toFixed(6)}]  log γ slopes: ${slopes}`;
  } catch (e) {
    $("dim-out").textContent = String(e);
  }
}

let packet = null;
let frame = 0;

function drawPacket() {
  const cv = $("wp-canvas");
  const ctx = cv.getContext("2d");
  const s = packet.staircase();
  const rho = packet.density();
  const span = s[s.length - 1] - s[0];
  const peak = Math.max(...rho, 1e-12);
  ctx.clearRect(0, 0, cv.width, cv.height);
  ctx.strokeStyle = "#1b5e9b";
  ctx.beginPath();
  for (let i = 0; i < s.length; i++) {
    const px = ((s[i] - s[0]) / span) * cv.width;
    const py = cv.height - (rho[i] / peak) * cv.height * 0.9;
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  }
  ctx.stroke();
  $("wp-out").textContent =
    `τ = ${packet.tau().toFixed(4)}   ∫|ψ|² dS = ${packet.totalProbability().toFixed(12)}`;
}

function tick() {
  packet.advance(5);
  drawPacket();
  frame = requestAnimationFrame(tick);
}

function startPacket() {
  cancelAnimationFrame(frame);
  try {
    packet = new WavePacket(
      Number($("wp-level").value),
      Number($("wp-sigma").value),
      Number($("wp-k0").value),
      Number($("wp-dt").value),
      $("wp-periodic").checked,
    );
  } catch (e) {
    $("wp-out").textContent = String(e);
    return;
  }
  tick();
}

await init();
$("st-draw").onclick = drawStaircase;
$("dim-run").onclick = runDimension;
$("wp-start").onclick = startPacket;
$("wp-stop").onclick = () => cancelAnimationFrame(frame);
drawStaircase();
runDimension();
