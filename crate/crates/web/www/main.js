import init, { true_peak_curve, stereo_scene, contingency } from "./pkg/mixqa_web.js";

const $ = (id) => document.getElementById(id);
const fmt = (x, digits = 2) => (x === null || x === undefined ? "−∞" : Number(x).toFixed(digits));

function readout(el, rows) {
  el.innerHTML = rows
    .map(([k, v, cls]) => `<tr><td>${k}</td><td class="${cls || ""}">${v}</td></tr>`)
    .join("");
}

function plot(ctx, series, xRange, yRange) {
  const { width, height } = ctx.canvas;
  const pad = 24;
  const sx = (x) => pad + ((x - xRange[0]) / (xRange[1] - xRange[0])) * (width - 2 * pad);
  const sy = (y) => height - pad - ((y - yRange[0]) / (yRange[1] - yRange[0])) * (height - 2 * pad);
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#e3e7eb";
  ctx.lineWidth = 1;
  for (const y of [-1, 0, 1]) {
    ctx.beginPath();
    ctx.moveTo(pad, sy(y));
    ctx.lineTo(width - pad, sy(y));
    ctx.stroke();
  }
  for (const s of series) {
    ctx.strokeStyle = ctx.fillStyle = s.color;
    ctx.lineWidth = s.width || 1.5;
    if (s.dots) {
      for (const [x, y] of s.points) {
        ctx.beginPath();
        ctx.arc(sx(x), sy(y), 3.5, 0, 2 * Math.PI);
        ctx.fill();
      }
    } else {
      ctx.beginPath();
      s.points.forEach(([x, y], i) => (i ? ctx.lineTo(sx(x), sy(y)) : ctx.moveTo(sx(x), sy(y))));
      ctx.stroke();
    }
  }
}

// ---- true peak ----

function updateTruePeak() {
  const freq = Number($("tp-freq").value);
  const phase = Number($("tp-phase").value);
  const level = Number($("tp-level").value);
  $("tp-freq-v").textContent = `${freq.toFixed(3)} × fs (${((freq * 48000) / 1000).toFixed(2)} kHz at 48 kHz)`;
  $("tp-phase-v").textContent = `${phase}°`;
  $("tp-level-v").textContent = `${level.toFixed(1)} dBFS`;
  const r = JSON.parse(true_peak_curve(freq, phase, level));
  if (r.error) {
    readout($("tp-out"), [["error", r.error, "err"]]);
    return;
  }
  const peak = 10 ** (level / 20);
  const x0 = r.samples[0][0];
  const x1 = r.samples[r.samples.length - 1][0];
  plot(
    $("tp-canvas").getContext("2d"),
    [
      { points: r.analog, color: "#9aa5b1", width: 1 },
      { points: r.interpolated, color: "#2f6fdf" },
      { points: r.samples, color: "#d9480f", dots: true },
    ],
    [x0, x1],
    [-1.15 * Math.max(peak, 1), 1.15 * Math.max(peak, 1)],
  );
  const miss = r.analog_peak_dbfs - r.sample_peak_dbfs;
  readout($("tp-out"), [
    ["sample peak", `${fmt(r.sample_peak_dbfs)} dBFS`],
    ["true peak (4x)", `${fmt(r.true_peak_dbtp)} dBTP`, r.true_peak_dbtp > 0 ? "bad" : ""],
    ["continuous peak", `${fmt(r.analog_peak_dbfs)} dBFS`],
    ["missed by sample peak", `${fmt(miss)} dB`],
    ["interpolator response", `${fmt(r.filter_response_db, 3)} dB`],
  ]);
}

// ---- stereo ----

function updateStereo() {
  const width = Number($("st-width").value);
  const delay = Number($("st-delay").value);
  const invert = $("st-invert").checked;
  const seed = Math.max(0, Math.min(9999, Number($("st-seed").value) | 0));
  $("st-width-v").textContent = width.toFixed(2);
  $("st-delay-v").textContent = `${delay} samples (${((delay / 48) * 1000).toFixed(0)} µs)`;
  const r = JSON.parse(stereo_scene(width, delay, invert, seed));
  if (r.error) {
    readout($("st-out"), [["error", r.error, "err"]]);
    return;
  }

  const ctx = $("st-canvas").getContext("2d");
  const { width: w, height: h } = ctx.canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#e3e7eb";
  ctx.beginPath();
  ctx.moveTo(w / 2, 0);
  ctx.lineTo(w / 2, h);
  ctx.moveTo(0, h / 2);
  ctx.lineTo(w, h / 2);
  ctx.stroke();
  const scale = w / 2 / 1.6;
  ctx.fillStyle = "rgba(47, 111, 223, 0.25)";
  for (const [s, m] of r.scope) {
    ctx.fillRect(w / 2 + s * scale, h / 2 - m * scale, 1.5, 1.5);
  }
  ctx.fillStyle = "#5a6570";
  ctx.fillText("mid", w / 2 + 4, 12);
  ctx.fillText("side", w - 26, h / 2 - 4);

  const rows = [["L/R correlation", fmt(r.lr_correlation, 3)]];
  if (r.stereo.error) rows.push(["stereo field", r.stereo.error, "err"]);
  else rows.push(["stereo field", `${r.stereo.category} (side/mid ${fmt(r.stereo.side_mid_db)} dB)`]);
  if (r.mono.error) rows.push(["mono fold-down", r.mono.error, "err"]);
  else
    rows.push([
      "mono fold-down",
      `${fmt(r.mono.folddown_db)} dB, M/S corr ${fmt(r.mono.mid_side_correlation, 3)}`,
      r.mono.compatible ? "good" : "bad",
    ]);
  if (r.phase.error) rows.push(["phase", r.phase.error, "err"]);
  else
    rows.push([
      "mean |Δφ|",
      `${fmt(r.phase.mean_abs_diff_rad, 3)} rad (flag above ${r.phase.threshold_rad})`,
      r.phase.has_issue ? "bad" : "good",
    ]);
  rows.push(["issues", r.issues.length ? r.issues.join(", ") : "none", r.issues.length ? "bad" : "good"]);
  readout($("st-out"), rows);
}

// ---- contingency table ----

const table = {
  rows: ["wide", "balanced", "narrow"],
  cols: ["phase ok", "phase issue"],
  counts: [
    [30, 22],
    [80, 12],
    [64, 6],
  ],
};

function renderGrid() {
  const grid = $("grid");
  const head = `<tr><th></th>${table.cols.map((c, j) => `<th><input data-col="${j}" value="${c}"></th>`).join("")}</tr>`;
  const body = table.rows
    .map(
      (r, i) =>
        `<tr><th><input data-row="${i}" value="${r}"></th>${table.counts[i]
          .map((v, j) => `<td><input type="number" min="0" step="1" data-i="${i}" data-j="${j}" value="${v}"></td>`)
          .join("")}</tr>`,
    )
    .join("");
  grid.innerHTML = head + body;
  grid.querySelectorAll("input").forEach((el) => el.addEventListener("input", onGridInput));
  updateTable();
}

function onGridInput(e) {
  const d = e.target.dataset;
  if (d.col !== undefined) table.cols[d.col] = e.target.value;
  else if (d.row !== undefined) table.rows[d.row] = e.target.value;
  else table.counts[d.i][d.j] = Math.max(0, Math.floor(Number(e.target.value) || 0));
  updateTable();
}

function updateTable() {
  const r = JSON.parse(contingency(JSON.stringify(table)));
  const ctx = $("ct-canvas").getContext("2d");
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  if (r.error) {
    readout($("ct-out"), [["error", r.error, "err"]]);
    return;
  }
  readout($("ct-out"), [
    ["n", r.n],
    ["χ²", `${fmt(r.statistic, 3)} (dof ${r.dof})`],
    ["p", r.p_value < 1e-4 ? r.p_value.toExponential(2) : fmt(r.p_value, 4)],
    ["Cramér's V", fmt(r.cramers_v, 3)],
  ]);

  // standardized residuals as a heat map
  const { width, height } = ctx.canvas;
  const left = 80;
  const top = 20;
  const cw = (width - left) / r.cols.length;
  const ch = (height - top) / r.rows.length;
  const maxAbs = Math.max(2, ...r.residuals.flat().map(Math.abs));
  ctx.font = "12px system-ui, sans-serif";
  ctx.textAlign = "center";
  r.residuals.forEach((row, i) =>
    row.forEach((v, j) => {
      const a = Math.min(1, Math.abs(v) / maxAbs);
      ctx.fillStyle = v >= 0 ? `rgba(217, 72, 15, ${a})` : `rgba(47, 111, 223, ${a})`;
      ctx.fillRect(left + j * cw + 1, top + i * ch + 1, cw - 2, ch - 2);
      ctx.fillStyle = "#1d232a";
      ctx.fillText(v.toFixed(2), left + (j + 0.5) * cw, top + (i + 0.5) * ch + 4);
    }),
  );
  ctx.fillStyle = "#5a6570";
  r.cols.forEach((c, j) => ctx.fillText(c, left + (j + 0.5) * cw, 13));
  ctx.textAlign = "right";
  r.rows.forEach((c, i) => ctx.fillText(c, left - 6, top + (i + 0.5) * ch + 4));
}

function resize(dRows, dCols) {
  if (dRows > 0) {
    table.rows.push(`row ${table.rows.length + 1}`);
    table.counts.push(table.cols.map(() => 0));
  } else if (dRows < 0 && table.rows.length > 1) {
    table.rows.pop();
    table.counts.pop();
  }
  if (dCols > 0) {
    table.cols.push(`col ${table.cols.length + 1}`);
    table.counts.forEach((r) => r.push(0));
  } else if (dCols < 0 && table.cols.length > 1) {
    table.cols.pop();
    table.counts.forEach((r) => r.pop());
  }
  renderGrid();
}

await init();
for (const id of ["tp-freq", "tp-phase", "tp-level"]) $(id).addEventListener("input", updateTruePeak);
for (const id of ["st-width", "st-delay", "st-invert", "st-seed"]) $(id).addEventListener("input", updateStereo);
$("add-row").onclick = () => resize(1, 0);
$("del-row").onclick = () => resize(-1, 0);
$("add-col").onclick = () => resize(0, 1);
$("del-col").onclick = () => resize(0, -1);
updateTruePeak();
updateStereo();
renderGrid();
