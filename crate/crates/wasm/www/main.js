import init, { simulate, limit_density, dispersion } from "./pkg/qwalk_wasm.js";

const form = document.getElementById("params");
const status = document.getElementById("status");

function frame(canvas, xr, yr) {
  const ctx = canvas.getContext("2d");
  const pad = 36;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#333";
  ctx.font = "11px sans-serif";
  ctx.fillText(xr[0].toFixed(2), pad, canvas.height - pad / 3);
  ctx.fillText(xr[1].toFixed(2), pad + w - 24, canvas.height - pad / 3);
  ctx.fillText(yr[1].toFixed(2), 2, pad + 4);
  ctx.fillText(yr[0].toFixed(2), 2, pad + h);
  const px = (x) => pad + ((x - xr[0]) / (xr[1] - xr[0])) * w;
  const py = (y) => pad + h - ((Math.min(y, yr[1]) - yr[0]) / (yr[1] - yr[0])) * h;
  return { ctx, px, py };
}

function line(f, xs, ys, colour) {
  f.ctx.strokeStyle = colour;
  f.ctx.lineWidth = 1.5;
  f.ctx.beginPath();
  xs.forEach((x, i) => (i ? f.ctx.lineTo(f.px(x), f.py(ys[i])) : f.ctx.moveTo(f.px(x), f.py(ys[i]))));
  f.ctx.stroke();
}

function run(ev) {
  ev?.preventDefault();
  const p = Object.fromEntries([...new FormData(form)].map(([k, v]) => [k, Number(v)]));
  try {
    const probs = simulate(p.theta0, p.theta1, p.are, p.aim, p.bre, p.bim, p.t);
    const grid = limit_density(p.theta0, p.theta1, p.are, p.aim, p.bre, p.bim, 801);
    const disp = dispersion(p.theta0, p.theta1, 720);

    // Sites sit two apart, so p * t / 2 estimates the density of X_t / t.
    const xs = [...probs].map((_, i) => (2 * i - p.t) / p.t);
    const ys = [...probs].map((q) => (q * p.t) / 2);
    const gx = grid.filter((_, i) => i % 2 === 0);
    const gy = grid.filter((_, i) => i % 2 === 1);
    const inner = gy.filter((y, i) => Math.abs(gx[i]) < 0.9 * gx[gx.length - 1]);
    const top = 1.6 * Math.max(...inner);
    const f = frame(document.getElementById("dist"), [-1, 1], [0, top]);
    line(f, xs, ys, "#888");
    line(f, gx, gy, "#c00");

    const kx = disp.filter((_, i) => i % 2 === 0);
    const hy = disp.filter((_, i) => i % 2 === 1);
    const g = frame(document.getElementById("disp"), [0, 2 * Math.PI], [-1, 1]);
    line(g, [0, 2 * Math.PI], [0, 0], "#ccc");
    line(g, kx, hy, "#06c");
    status.textContent = "";
  } catch (e) {
    status.textContent = String(e.message ?? e);
  }
}

await init();
form.addEventListener("submit", run);
run();
