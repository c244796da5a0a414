import init, { MoDemo, single_objective_trace, hypervolume, contributions, ranks } from './pkg/lmmaes_web.js';

const $ = (id) => document.getElementById(id);
const PROBLEMS = [
  'two spheres', 'sphere + ellipsoid', 'two ellipsoids (same)', 'two ellipsoids',
  'sphere + rotated ellipsoid', 'ellipsoid + rotated ellipsoid', 'rotated ellipsoids (same)',
  'rotated ellipsoids', 'differently rotated ellipsoids',
];

// Linear or log axes mapped onto a canvas with a margin.
function frame(canvas, xr, yr, { logY = false, margin = 40 } = {}) {
  const ctx = canvas.getContext('2d');
  const w = canvas.width - 2 * margin;
  const h = canvas.height - 2 * margin;
  const ty = (v) => (logY ? Math.log10(v) : v);
  const [y0, y1] = [ty(yr[0]), ty(yr[1])];
  return {
    ctx,
    x: (v) => margin + ((v - xr[0]) / (xr[1] - xr[0])) * w,
    y: (v) => margin + h - ((ty(v) - y0) / (y1 - y0)) * h,
    invert: (px, py) => [
      xr[0] + ((px - margin) / w) * (xr[1] - xr[0]),
      y0 + ((margin + h - py) / h) * (y1 - y0),
    ],
    axes(xlabel, ylabel) {
      ctx.clearRect(0, 0, canvas.width, canvas.height);
      ctx.strokeStyle = '#888';
      ctx.strokeRect(margin, margin, w, h);
      ctx.fillStyle = '#444';
      ctx.font = '12px system-ui';
      ctx.fillText(xlabel, margin + w / 2 - 20, canvas.height - 8);
      ctx.save();
      ctx.translate(12, margin + h / 2 + 20);
      ctx.rotate(-Math.PI / 2);
      ctx.fillText(ylabel, 0, 0);
      ctx.restore();
      ctx.fillText(String(xr[0]), margin, margin + h + 14);
      ctx.fillText(fmt(xr[1]), margin + w - 30, margin + h + 14);
      ctx.fillText(logY ? `1e${Math.round(y0)}` : String(yr[0]), 2, margin + h);
      ctx.fillText(logY ? `1e${Math.round(y1)}` : String(yr[1]), 2, margin + 10);
    },
  };
}

const fmt = (v) => (Math.abs(v) >= 1e4 || (v !== 0 && Math.abs(v) < 1e-3) ? v.toExponential(2) : +v.toFixed(4));

function dot(ctx, x, y, r, fill, stroke) {
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  if (fill) { ctx.fillStyle = fill; ctx.fill(); }
  if (stroke) { ctx.strokeStyle = stroke; ctx.stroke(); }
}

function polyline(f, xs, ys, color) {
  const { ctx } = f;
  ctx.strokeStyle = color;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(f.x(x), f.y(ys[i])) : ctx.moveTo(f.x(x), f.y(ys[i]))));
  ctx.stroke();
}

// ---- multi-objective run ----
let demo = null;
let running = false;

function resetMo() {
  try {
    demo = new MoDemo(+$('mo-problem').value, +$('mo-n').value, +$('mo-mu').value, +$('mo-seed').value);
  } catch (e) {
    $('mo-info').textContent = String(e);
    demo = null;
  }
  drawMo();
}

function drawMo() {
  if (!demo) return;
  const f = frame($('mo-front'), [0, 1.5], [0, 1.5]);
  f.axes('f1', 'f2');
  polyline(f, [0, 1], [1, 0], '#bbb');
  const opt = demo.optimal();
  for (let i = 0; i < opt.length; i += 2) dot(f.ctx, f.x(opt[i]), f.y(opt[i + 1]), 6, null, '#2a7');
  const pts = demo.objectives();
  let outside = 0;
  for (let i = 0; i < pts.length; i += 2) {
    if (pts[i] > 1.5 || pts[i + 1] > 1.5) { outside++; continue; }
    dot(f.ctx, f.x(pts[i]), f.y(pts[i + 1]), 3.5, '#c33');
  }
  const gaps = demo.gap_history();
  const evals = demo.evaluation_history();
  const positive = gaps.map((g) => Math.max(g, 1e-12));
  const g = frame($('mo-gap'), [0, Math.max(evals[evals.length - 1], 1)], [1e-10, Math.max(...positive, 1)], { logY: true });
  g.axes('evaluations', 'hypervolume gap');
  polyline(g, evals, positive, '#36c');
  const sig = demo.sigmas();
  $('mo-info').textContent =
    `${demo.problem_name()}\nevaluations ${demo.evaluations()}\ngap ${fmt(demo.gap())}\n` +
    `outside plot ${outside}\nsigma range ${fmt(Math.min(...sig))} .. ${fmt(Math.max(...sig))}`;
}

function loop() {
  if (!running || !demo) return;
  const start = performance.now();
  try {
    while (performance.now() - start < 25) demo.step(5);
  } catch (e) {
    running = false;
    $('mo-info').textContent += `\nstopped: ${e}`;
  }
  drawMo();
  if (demo.gap() <= 1e-10) running = false;
  $('mo-toggle').textContent = running ? 'pause' : 'run';
  if (running) requestAnimationFrame(loop);
}

// ---- single-objective run ----
function runSo() {
  const n = +$('so-n').value;
  let trace;
  try {
    trace = single_objective_trace($('so-function').value, n, +$('so-seed').value, n * +$('so-budget').value, 1e-12);
  } catch (e) {
    $('so-info').textContent = String(e);
    return;
  }
  const xs = [];
  const ys = [];
  for (let i = 0; i < trace.length; i += 2) { xs.push(trace[i]); ys.push(Math.max(trace[i + 1], 1e-14)); }
  const f = frame($('so-plot'), [0, xs[xs.length - 1]], [Math.min(...ys), Math.max(...ys)], { logY: true });
  f.axes('evaluations', 'f(x) - f*');
  polyline(f, xs, ys, '#c63');
  $('so-info').textContent = `evaluations ${xs[xs.length - 1]}\nfinal ${fmt(ys[ys.length - 1])}\n` +
    `evaluations / n ${fmt(xs[xs.length - 1] / n)}`;
}

// ---- hypervolume calculator ----
let points = [];

function drawHv() {
  const f = frame($('hv-plot'), [0, 10], [0, 10]);
  f.axes('f1', 'f2');
  const flat = new Float64Array(points.flat());
  const c = contributions(flat);
  const r = ranks(flat);
  f.ctx.globalAlpha = 0.15;
  f.ctx.fillStyle = '#36c';
  for (let i = 0; i < points.length; i++) {
    const [a, b] = points[i];
    if (r[i] === 0 && a < 10 && b < 10) f.ctx.fillRect(f.x(a), f.y(10), f.x(10) - f.x(a), f.y(b) - f.y(10));
  }
  f.ctx.globalAlpha = 1;
  points.forEach(([a, b], i) => {
    dot(f.ctx, f.x(a), f.y(b), 4, r[i] === 0 ? '#36c' : null, '#36c');
    f.ctx.fillStyle = '#222';
    f.ctx.fillText(fmt(c[i]), f.x(a) + 6, f.y(b) - 6);
  });
  $('hv-info').textContent = `points ${points.length}\nhypervolume ${fmt(hypervolume(flat))}\n` +
    points.map(([a, b], i) => `(${a.toFixed(2)}, ${b.toFixed(2)}) rank ${r[i]} contribution ${fmt(c[i])}`).join('\n');
}

function clickHv(ev) {
  const rect = ev.target.getBoundingClientRect();
  const f = frame($('hv-plot'), [0, 10], [0, 10]);
  const [a, b] = f.invert(ev.clientX - rect.left, ev.clientY - rect.top);
  if (ev.shiftKey) {
    if (!points.length) return;
    let best = 0;
    points.forEach(([x, y], i) => {
      const [bx, by] = points[best];
      if ((x - a) ** 2 + (y - b) ** 2 < (bx - a) ** 2 + (by - b) ** 2) best = i;
    });
    points.splice(best, 1);
  } else {
    points.push([Math.max(0, a), Math.max(0, b)]);
  }
  drawHv();
}

await init();
PROBLEMS.forEach((name, i) => $('mo-problem').add(new Option(`${i + 1}: ${name}`, i + 1)));
$('mo-reset').onclick = () => { running = false; $('mo-toggle').textContent = 'run'; resetMo(); };
$('mo-toggle').onclick = () => {
  running = !running;
  $('mo-toggle').textContent = running ? 'pause' : 'run';
  if (running) requestAnimationFrame(loop);
};
$('so-run').onclick = runSo;
$('hv-plot').onclick = clickHv;
$('hv-clear').onclick = () => { points = []; drawHv(); };
points = [[1, 9], [5, 5], [9, 1]];
resetMo();
runSo();
drawHv();
