import init, { generate_network, events, solve } from "./pkg/tsmst_wasm.js";

const $ = (id) => document.getElementById(id);
const state = { text: null, net: null, events: [], solved: null };

function num(s) {
  const [p, q] = String(s).split("/");
  return q === undefined ? Number(p) : Number(p) / Number(q);
}

function weightAt(edge, t) {
  if (edge.absent.some(([a, b]) => num(a) - 0.001 < t && t < num(b) + 0.001)) return null;
  const k = Math.min(Math.floor(t) - 1, edge.weights.length - 2);
  const f = t - (k + 1);
  return num(edge.weights[k]) * (1 - f) + num(edge.weights[k + 1]) * f;
}

function currentTime() {
  const K = state.net ? state.net.horizon : 2;
  return 1 + (K - 1) * Number($("slider").value) / 1000;
}

function treeAt(t) {
  if (!state.solved) return null;
  const ivs = state.solved.result.intervals;
  return ivs.find((iv) => iv.start_approx <= t && t < iv.end_approx) ?? ivs[ivs.length - 1];
}

function color(i, n) {
  return `hsl(${(i * 360) / Math.max(n, 1)}, 65%, 45%)`;
}

function drawGraph(t, iv) {
  const c = $("graph"), g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const n = state.net.nodes, r = c.width / 2 - 30;
  const pos = [...Array(n).keys()].map((i) => [
    c.width / 2 + r * Math.cos((2 * Math.PI * i) / n),
    c.height / 2 + r * Math.sin((2 * Math.PI * i) / n),
  ]);
  const tree = new Set(iv ? iv.tree : []);
  g.font = "11px system-ui";
  state.net.edges.forEach((e, i) => {
    const w = weightAt(e, t);
    if (w === null) return;
    const [a, b] = [pos[e.u], pos[e.v]];
    g.strokeStyle = tree.has(e.id) ? color(i, state.net.edges.length) : "#ddd";
    g.lineWidth = tree.has(e.id) ? 3 : 1;
    g.beginPath(); g.moveTo(...a); g.lineTo(...b); g.stroke();
    if (tree.has(e.id)) {
      g.fillStyle = "#333";
      g.fillText(w.toFixed(1), (a[0] + b[0]) / 2 + 3, (a[1] + b[1]) / 2 - 3);
    }
  });
  pos.forEach(([x, y], i) => {
    g.fillStyle = "#fff"; g.strokeStyle = "#333"; g.lineWidth = 1;
    g.beginPath(); g.arc(x, y, 10, 0, 2 * Math.PI); g.fill(); g.stroke();
    g.fillStyle = "#333"; g.fillText(i, x - 3, y + 4);
  });
}

function drawCurves(t, iv) {
  const c = $("curves"), g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  const K = state.net.horizon, pad = 30;
  let lo = Infinity, hi = -Infinity;
  for (const e of state.net.edges) for (const w of e.weights) { lo = Math.min(lo, num(w)); hi = Math.max(hi, num(w)); }
  const X = (x) => pad + ((x - 1) / (K - 1)) * (c.width - 2 * pad);
  const Y = (y) => c.height - pad - ((y - lo) / (hi - lo || 1)) * (c.height - 2 * pad);
  if (state.solved) {
    state.solved.result.intervals.forEach((s, i) => {
      g.fillStyle = i % 2 ? "#f4f4f4" : "#fff";
      g.fillRect(X(s.start_approx), pad, X(s.end_approx) - X(s.start_approx), c.height - 2 * pad);
    });
  }
  const tree = new Set(iv ? iv.tree : []);
  const steps = 200;
  state.net.edges.forEach((e, i) => {
    g.strokeStyle = tree.has(e.id) ? color(i, state.net.edges.length) : "#ccc";
    g.lineWidth = tree.has(e.id) ? 2 : 1;
    g.beginPath();
    let pen = false;
    for (let s = 0; s <= steps; s++) {
      const x = 1 + ((K - 1) * s) / steps, w = weightAt(e, x);
      if (w === null) { pen = false; continue; }
      pen ? g.lineTo(X(x), Y(w)) : g.moveTo(X(x), Y(w));
      pen = true;
    }
    g.stroke();
  });
  g.fillStyle = "#000";
  for (const ev of state.events) g.fillRect(X(ev.time) - 1.5, Y(ev.value) - 1.5, 3, 3);
  g.strokeStyle = "#c00"; g.lineWidth = 1;
  g.beginPath(); g.moveTo(X(t), pad); g.lineTo(X(t), c.height - pad); g.stroke();
  g.fillStyle = "#333"; g.font = "11px system-ui";
  for (let k = 1; k <= K; k++) g.fillText(k, X(k) - 3, c.height - pad + 14);
}

function renderTable(iv) {
  const table = $("intervals");
  if (!state.solved) { table.innerHTML = ""; return; }
  const rows = state.solved.result.intervals.map((s) =>
    `<tr class="${s === iv ? "current" : ""}"><td>${s.start}</td><td>${s.end}</td>` +
    `<td style="text-align:left">${s.tree.join(" ")}</td></tr>`);
  table.innerHTML = "<tr><th>start</th><th>end</th><th>tree edges</th></tr>" + rows.join("");
}

function render() {
  if (!state.net) return;
  const t = currentTime(), iv = treeAt(t);
  $("time").textContent = `t = ${t.toFixed(3)}` + (iv ? `, interval [${iv.start}, ${iv.end})` : "");
  drawGraph(t, iv);
  drawCurves(t, iv);
  renderTable(iv);
}

function guarded(f) {
  return () => {
    $("error").textContent = "";
    try { f(); } catch (e) { $("error").textContent = e.message ?? String(e); }
  };
}

function doGenerate() {
  const v = (id) => Number($(id).value);
  state.text = generate_network(v("nodes"), v("edges"), v("horizon"), BigInt(v("seed")), v("absences"));
  state.net = JSON.parse(state.text);
  state.events = JSON.parse(events(state.text));
  state.solved = null;
  $("stats").textContent = `${state.events.length} intersection events`;
  $("timing").textContent = "";
  render();
}

function doSolve(algo) {
  if (!state.text) doGenerate();
  const t0 = performance.now();
  state.solved = JSON.parse(solve(state.text, algo));
  const ms = performance.now() - t0;
  $("timing").textContent = `${algo}: ${state.solved.result.intervals.length} intervals in ${ms.toFixed(1)} ms`;
  const s = state.solved.stats;
  $("stats").textContent = s
    ? `events ${s.events}; pruned: only tree ${s.only_tree}, only non-tree ${s.only_non_tree}, ` +
      `different bcc ${s.different_bcc}, no order change ${s.no_order_change}; active ${s.active}`
    : `${state.events.length} intersection events`;
  render();
}

await init();
$("generate").onclick = guarded(doGenerate);
$("solve-tso").onclick = guarded(() => doSolve("tso"));
$("solve-eio").onclick = guarded(() => doSolve("eio"));
$("slider").oninput = render;
guarded(doGenerate)();
