import init, { solve, growth, expansion } from "./pkg/lucas_repdigits_web.js";

const $ = (id) => document.getElementById(id);
const int = (id) => parseInt($(id).value, 10);

function status(id, msg, err = false) {
  $(id).textContent = msg;
  $(id).className = err ? "err" : "";
}

// the solver runs synchronously; let the status text paint first
function later(f) {
  return new Promise((res) => setTimeout(() => res(f()), 20));
}

async function runSolve() {
  status("solve-status", "working…");
  const t = performance.now();
  try {
    const rep = JSON.parse(await later(() =>
      solve(int("r"), int("s"), int("base"), int("mink"), $("rigorous").checked)));
    const rows = rep.solutions.map((s) =>
      `<tr><td>${s.n}</td><td>${s.m}</td><td>${s.value}</td><td>${s.a}</td><td>${s.k}</td></tr>`);
    $("solutions").innerHTML =
      "<tr><th>n</th><th>m</th><th>U_n − U_m</th><th>a</th><th>k</th></tr>" + rows.join("");
    $("solve-json").textContent = JSON.stringify(
      { config: rep.config, bounds: rep.bounds, reduction: rep.reduction }, null, 2);
    const secs = ((performance.now() - t) / 1000).toFixed(1);
    status("solve-status", `${rep.solutions.length} solutions, n ≤ ${rep.bounds.n_reduced} (${secs} s)`);
  } catch (e) {
    $("solutions").innerHTML = "";
    status("solve-status", String(e.message ?? e), true);
  }
}

function runGrowth() {
  let g;
  try {
    g = JSON.parse(growth(int("r"), int("s"), int("nmax")));
  } catch (e) {
    return status("growth-status", String(e.message ?? e), true);
  }
  status("growth-status", `δ ≈ ${g.delta.toFixed(6)}`);
  const c = $("plot"), ctx = c.getContext("2d");
  const pts = g.points;
  const ymax = Math.max(1, ...pts.map((p) => p.upper));
  const ymin = Math.min(0, ...pts.map((p) => p.lower));
  const x = (n) => 30 + (n / pts[pts.length - 1].n) * (c.width - 40);
  const y = (v) => c.height - 20 - ((v - ymin) / (ymax - ymin)) * (c.height - 30);
  ctx.clearRect(0, 0, c.width, c.height);
  const line = (key, colour) => {
    ctx.strokeStyle = colour;
    ctx.beginPath();
    let started = false;
    for (const p of pts) {
      if (p[key] === null) { started = false; continue; }
      started ? ctx.lineTo(x(p.n), y(p[key])) : ctx.moveTo(x(p.n), y(p[key]));
      started = true;
    }
    ctx.stroke();
  };
  line("lower", "#aaa");
  line("upper", "#aaa");
  line("log10_u", "#000");
  ctx.fillStyle = "#555";
  ctx.fillText(ymax.toFixed(0), 2, y(ymax) + 10);
  ctx.fillText("n = " + pts[pts.length - 1].n, c.width - 60, c.height - 5);
}

function runCf() {
  try {
    const e = JSON.parse(expansion(int("r"), int("s"), int("base"), int("terms")));
    const rows = e.partial_quotients.map((a, i) =>
      `${String(i).padStart(3)}  a = ${a.padEnd(6)}  q = ${e.denominators[i]}`);
    $("cf-out").textContent = `τ = ${e.tau}…\n\n` + rows.join("\n");
    status("cf-status", `${e.partial_quotients.length} certified terms`);
  } catch (e) {
    $("cf-out").textContent = "";
    status("cf-status", String(e.message ?? e), true);
  }
}

await init();
$("solve").onclick = runSolve;
$("growth").onclick = runGrowth;
$("cf").onclick = runCf;
runGrowth();
runCf();
