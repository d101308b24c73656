import init, {
  ambiguity_profile,
  tradeoff_json,
  two_stage_demo_json,
} from "./pkg/tsde_wasm_demo.js";

const DELTA_F = 120e3;
const K = 1024;
const N_CP = 128;

function clearCanvas(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function plotCurve(ctx, xs, ys, box, color, width = 1.6) {
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  for (let i = 0; i < xs.length; i++) {
    const x = box.x + box.w * xs[i];
    const y = box.y + box.h * (1 - ys[i]);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  }
  ctx.stroke();
}

function axisBox(canvas, pad = 34) {
  return { x: pad, y: 12, w: canvas.width - pad - 12, h: canvas.height - pad - 12 };
}

function drawAxes(ctx, box, xlabel, ylabel) {
  ctx.strokeStyle = "#999";
  ctx.lineWidth = 1;
  ctx.strokeRect(box.x, box.y, box.w, box.h);
  ctx.fillStyle = "#555";
  ctx.font = "12px system-ui";
  ctx.fillText(xlabel, box.x + box.w / 2 - 30, box.y + box.h + 26);
  ctx.save();
  ctx.translate(12, box.y + box.h / 2 + 20);
  ctx.rotate(-Math.PI / 2);
  ctx.fillText(ylabel, 0, 0);
  ctx.restore();
}

// --- Section 1: ambiguity profile -----------------------------------------

function drawAmbiguity() {
  const k1 = parseInt(document.getElementById("amb-k1").value, 10);
  const etaSlider = document.getElementById("amb-eta");
  etaSlider.max = K / k1;
  const eta = Math.min(parseInt(etaSlider.value, 10), K / k1);
  etaSlider.value = eta;
  document.getElementById("amb-eta-value").textContent = eta;

  const points = 2048;
  const profile = ambiguity_profile(DELTA_F, K, k1, N_CP, eta, points);
  const reference = ambiguity_profile(DELTA_F, K, k1, N_CP, 1, points);

  const canvas = document.getElementById("amb-canvas");
  const ctx = clearCanvas(canvas);
  const box = axisBox(canvas);
  drawAxes(ctx, box, "delay offset (fraction of 1/delta_f)", "|G|");

  const xs = Array.from({ length: points }, (_, i) => i / points);
  plotCurve(ctx, xs, Array.from(reference), box, "#bbbbbb", 1);
  plotCurve(ctx, xs, Array.from(profile), box, "#c0392b");

  ctx.fillStyle = "#333";
  ctx.font = "13px system-ui";
  const resNs = 1e9 / (DELTA_F * k1 * eta);
  const rangeNs = 1e9 / (DELTA_F * eta);
  ctx.fillText(
    `eta = ${eta}: resolution ${resNs.toFixed(2)} ns, unambiguous range ${rangeNs.toFixed(1)} ns`,
    box.x + 10,
    box.y + 18
  );
}

// --- Section 2: trade-off chart --------------------------------------------

function drawTradeoff() {
  const k1 = 32;
  const rows = JSON.parse(tradeoff_json(DELTA_F, K, k1, N_CP));
  const canvas = document.getElementById("trade-canvas");
  const ctx = clearCanvas(canvas);
  const box = axisBox(canvas, 48);
  drawAxes(ctx, box, "decimation factor eta", "seconds (log scale)");

  const values = rows.flatMap((r) => [r.tau_res_s, r.tau_u_s]);
  const lo = Math.log10(Math.min(...values));
  const hi = Math.log10(Math.max(...values));
  const toY = (v) => (Math.log10(v) - lo) / (hi - lo);
  const toX = (eta) => (eta - 1) / (rows.length - 1);

  plotCurve(ctx, rows.map((r) => toX(r.eta)), rows.map((r) => toY(r.tau_u_s)), box, "#2980b9", 2);
  plotCurve(ctx, rows.map((r) => toX(r.eta)), rows.map((r) => toY(r.tau_res_s)), box, "#c0392b", 2);

  ctx.font = "13px system-ui";
  ctx.fillStyle = "#2980b9";
  ctx.fillText("unambiguous range", box.x + 12, box.y + 20);
  ctx.fillStyle = "#c0392b";
  ctx.fillText("delay resolution", box.x + 12, box.y + 38);

  const fmt = (s) => (s >= 1e-6 ? `${(s * 1e6).toFixed(3)} us` : `${(s * 1e9).toFixed(2)} ns`);
  const pick = rows.filter((r) => [1, 2, 4, 8, 16, 32].includes(r.eta));
  document.getElementById("trade-table").innerHTML =
    "<table><tr><th>eta</th>" + pick.map((r) => `<td>${r.eta}</td>`).join("") + "</tr>" +
    "<tr><th>resolution</th>" + pick.map((r) => `<td>${fmt(r.tau_res_s)}</td>`).join("") + "</tr>" +
    "<tr><th>range</th>" + pick.map((r) => `<td>${fmt(r.tau_u_s)}</td>`).join("") + "</tr></table>";
}

// --- Section 3: the two-stage run ------------------------------------------

function spectrumPanel(ctx, box, spectrum, omega, truths, picks, title) {
  ctx.strokeStyle = "#999";
  ctx.strokeRect(box.x, box.y, box.w, box.h);
  const toX = (p) => box.x + (box.w * p) / N_CP;

  if (omega) {
    ctx.fillStyle = "rgba(241, 196, 15, 0.25)";
    for (const p of omega) {
      ctx.fillRect(toX(p), box.y, box.w / N_CP + 0.5, box.h);
    }
  }

  const peak = Math.max(1e-12, ...spectrum.map(([, v]) => v));
  ctx.strokeStyle = "#2c3e50";
  ctx.lineWidth = 1.2;
  ctx.beginPath();
  let started = false;
  for (const [p, v] of spectrum) {
    const x = toX(p) + box.w / N_CP / 2;
    const y = box.y + box.h * (1 - v / peak);
    if (!started) { ctx.moveTo(x, y); started = true; }
    else ctx.lineTo(x, y);
  }
  ctx.stroke();

  ctx.fillStyle = "#27ae60";
  for (const t of truths) {
    const x = toX(t) + box.w / N_CP / 2;
    ctx.beginPath();
    ctx.moveTo(x, box.y + 2);
    ctx.lineTo(x - 5, box.y + 12);
    ctx.lineTo(x + 5, box.y + 12);
    ctx.closePath();
    ctx.fill();
  }
  ctx.strokeStyle = "#c0392b";
  ctx.lineWidth = 2;
  for (const p of picks) {
    const x = toX(p) + box.w / N_CP / 2;
    ctx.beginPath();
    ctx.arc(x, box.y + box.h - 8, 5, 0, 2 * Math.PI);
    ctx.stroke();
  }

  ctx.fillStyle = "#333";
  ctx.font = "13px system-ui";
  ctx.fillText(title, box.x + 8, box.y + 16);
}

function runTwoStage() {
  const summary = document.getElementById("run-summary");
  try {
    const delays = document
      .getElementById("run-delays")
      .value.split(",")
      .map((s) => parseFloat(s.trim()))
      .filter((v) => Number.isFinite(v));
    const noiseless = document.getElementById("run-noiseless").checked;
    const snr = noiseless ? undefined : parseFloat(document.getElementById("run-snr").value);
    const gamma = parseFloat(document.getElementById("run-gamma").value);
    const seed = BigInt(Math.max(0, parseInt(document.getElementById("run-seed").value, 10) || 0));

    const view = JSON.parse(
      two_stage_demo_json(DELTA_F, K, 32, N_CP, new Float64Array(delays), snr, gamma, seed)
    );

    const canvas = document.getElementById("run-canvas");
    const ctx = clearCanvas(canvas);
    const top = { x: 40, y: 12, w: canvas.width - 52, h: 180 };
    const bottom = { x: 40, y: 230, w: canvas.width - 52, h: 180 };

    spectrumPanel(
      ctx, top, view.stage1.spectrum, view.omega, view.true_delays_samples,
      view.stage1.indices, "stage 1: eta = 1 (coarse, full range)"
    );
    spectrumPanel(
      ctx, bottom, view.estimate.spectrum, view.omega, view.true_delays_samples,
      view.estimate.indices,
      view.stage2_ran
        ? `stage 2: eta* = ${view.eta_star} (refined, searched inside the region)`
        : "no refinement possible (eta* = 1): stage-1 estimate kept"
    );
    ctx.fillStyle = "#555";
    ctx.font = "12px system-ui";
    ctx.fillText("delay (samples of T_s)", canvas.width / 2 - 60, canvas.height - 6);

    const sortedTrue = [...view.true_delays_samples].sort((a, b) => a - b);
    const sortedEst = [...view.estimate.delays_samples].sort((a, b) => a - b);
    summary.textContent =
      `true delays   : ${sortedTrue.map((v) => v.toFixed(2)).join(", ")} samples  (T_s = ${view.t_s_ns.toFixed(3)} ns)\n` +
      `stage-1 picks : ${view.stage1.indices.join(", ")}  -> occupied bins {${view.bins.join(", ")}} of width ${view.bin_width}\n` +
      `selection     : bin span ${view.bin_span}  =>  eta* = ${view.eta_star}\n` +
      `estimate      : ${sortedEst.map((v) => v.toFixed(2)).join(", ")} samples  ` +
      `(residual ${view.estimate.residual_ratio.toExponential(2)}${view.estimate.capped ? ", capped" : ""})`;
  } catch (err) {
    summary.textContent = `error: ${err}`;
  }
}

// --- wiring -----------------------------------------------------------------

await init();
document.getElementById("amb-k1").addEventListener("change", drawAmbiguity);
document.getElementById("amb-eta").addEventListener("input", drawAmbiguity);
document.getElementById("run-button").addEventListener("click", runTwoStage);
document.getElementById("run-noiseless").addEventListener("change", () => {
  document.getElementById("run-snr").disabled =
    document.getElementById("run-noiseless").checked;
});
document.getElementById("run-snr").disabled = true;

drawAmbiguity();
drawTradeoff();
runTwoStage();
