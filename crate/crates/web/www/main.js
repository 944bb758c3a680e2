import init, { wigner_image, metric_curve, photon_distribution } from "./pkg/catlab_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);

function state() {
  return { zr: num("z_re"), zi: num("z_im"), theta: num("theta"), m: parseInt($("m").value, 10) };
}

function guard(el, f) {
  try {
    el.classList.remove("err");
    f();
  } catch (e) {
    el.classList.add("err");
    el.textContent = String(e.message ?? e);
  }
}

// blue for negative, red for positive, white at zero
function colour(v, scale) {
  const t = Math.max(-1, Math.min(1, v / scale));
  const a = Math.round(255 * (1 - Math.abs(t)));
  return t < 0 ? [a, a, 255] : [255, a, a];
}

function drawWigner() {
  const s = state();
  const canvas = $("wigner");
  const n = canvas.width;
  guard($("wigner_info"), () => {
    const img = wigner_image(s.zr, s.zi, s.theta, s.m, num("kt"), num("nbar"), 4.5, n);
    const vals = img.values;
    const scale = Math.max(Math.abs(img.min), Math.abs(img.max));
    const ctx = canvas.getContext("2d");
    const data = ctx.createImageData(n, n);
    // q along x, p upward
    for (let i = 0; i < n; i++) {
      for (let j = 0; j < n; j++) {
        const [r, g, b] = colour(vals[i * n + j], scale);
        const k = 4 * ((n - 1 - j) * n + i);
        data.data[k] = r; data.data[k + 1] = g; data.data[k + 2] = b; data.data[k + 3] = 255;
      }
    }
    ctx.putImageData(data, 0, 0);
    const [q0, q1, p0, p1] = img.bounds;
    $("wigner_info").textContent =
      `min W = ${img.min.toFixed(5)}   δ ≈ ${img.delta.toFixed(5)}   q ∈ [${q0.toFixed(2)}, ${q1.toFixed(2)}], p ∈ [${p0.toFixed(2)}, ${p1.toFixed(2)}]`;
    img.free();
  });
}

function axes(ctx, w, h, pad, xr, yr, fx, fy) {
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(xr[0].toFixed(2), pad, h - pad + 14);
  ctx.fillText(xr[1].toFixed(2), w - pad - 24, h - pad + 14);
  ctx.fillText(yr[1].toPrecision(3), 2, pad + 4);
  ctx.fillText(yr[0].toPrecision(3), 2, h - pad);
  if (yr[0] < 0 && yr[1] > 0) {
    ctx.setLineDash([4, 4]);
    ctx.beginPath();
    ctx.moveTo(pad, fy(0));
    ctx.lineTo(w - pad, fy(0));
    ctx.stroke();
    ctx.setLineDash([]);
  }
}

function drawCurve() {
  const s = state();
  const canvas = $("curve");
  guard($("curve_info"), () => {
    const c = metric_curve($("metric").value, s.zr, s.zi, s.m, 400);
    const xs = [], ys = [];
    for (let k = 0; k < c.length; k += 2) {
      xs.push(c[k]);
      ys.push(c[k + 1]);
    }
    const finite = ys.filter(Number.isFinite);
    const lo = Math.min(...finite), hi = Math.max(...finite);
    const span = hi - lo || 1;
    const yr = [lo - 0.05 * span, hi + 0.05 * span];
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    const pad = 36;
    const fx = (x) => pad + ((x - xs[0]) / (xs[xs.length - 1] - xs[0])) * (w - 2 * pad);
    const fy = (y) => h - pad - ((y - yr[0]) / (yr[1] - yr[0])) * (h - 2 * pad);
    ctx.clearRect(0, 0, w, h);
    axes(ctx, w, h, pad, [xs[0], xs[xs.length - 1]], yr, fx, fy);
    ctx.strokeStyle = "#c33";
    ctx.beginPath();
    let pen = false;
    xs.forEach((x, k) => {
      if (!Number.isFinite(ys[k])) { pen = false; return; }
      pen ? ctx.lineTo(fx(x), fy(ys[k])) : ctx.moveTo(fx(x), fy(ys[k]));
      pen = true;
    });
    ctx.stroke();
    const at = ys.indexOf(hi);
    $("curve_info").textContent = `max ${hi.toPrecision(5)} at θ = ${xs[at].toFixed(4)}   min ${lo.toPrecision(5)}`;
    const mark = fx(s.theta);
    ctx.strokeStyle = "#36c";
    ctx.beginPath();
    ctx.moveTo(mark, pad);
    ctx.lineTo(mark, h - pad);
    ctx.stroke();
  });
}

function drawPnd() {
  const s = state();
  const canvas = $("pnd");
  guard($("pnd_info"), () => {
    const nMax = 15;
    const p = photon_distribution(s.zr, s.zi, s.theta, s.m, nMax);
    const ctx = canvas.getContext("2d");
    const { width: w, height: h } = canvas;
    const pad = 36;
    const top = Math.max(...p) * 1.05 || 1;
    const bw = (w - 2 * pad) / p.length;
    const fy = (y) => h - pad - (y / top) * (h - 2 * pad);
    ctx.clearRect(0, 0, w, h);
    axes(ctx, w, h, pad, [0, nMax], [0, top], null, fy);
    ctx.fillStyle = "#36c";
    p.forEach((v, n) => {
      ctx.fillRect(pad + n * bw + 2, fy(v), bw - 4, h - pad - fy(v));
    });
    const mean = p.reduce((a, v, n) => a + n * v, 0);
    $("pnd_info").textContent = `p0 = ${p[0].toFixed(4)}   p1 = ${p[1].toFixed(4)}   ⟨n⟩ ≈ ${mean.toFixed(4)}`;
  });
}

function redraw() {
  $("theta_out").textContent = num("theta").toFixed(3);
  $("kt_out").textContent = num("kt").toFixed(2);
  drawWigner();
  drawCurve();
  drawPnd();
}

await init();
for (const id of ["z_re", "z_im", "theta", "m", "kt", "nbar", "metric"]) {
  $(id).addEventListener("input", redraw);
}
redraw();
