import init, { random_digraph_metrics, similarity_box, attack_scan } from "./pkg/eosio_forensics_web.js";

const $ = (id) => document.getElementById(id);
const SVG = "http://www.w3.org/2000/svg";

function svgEl(tag, attrs) {
  const el = document.createElementNS(SVG, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

function fmt(x) {
  return x === null || x === undefined ? "/" : Number(x).toFixed(4);
}

function bindOutputs(ids, fn) {
  for (const id of ids) {
    const input = $(id);
    const out = $(id + "-out");
    const update = () => {
      if (out) out.textContent = input.value;
      fn();
    };
    input.addEventListener("input", update);
    if (out) out.textContent = input.value;
  }
}

function fillTable(table, header, rows, rowClass) {
  table.replaceChildren();
  const head = table.insertRow();
  for (const h of header) {
    const th = document.createElement("th");
    th.textContent = h;
    head.appendChild(th);
  }
  rows.forEach((r, i) => {
    const tr = table.insertRow();
    if (rowClass) tr.className = rowClass(i);
    for (const c of r) tr.insertCell().textContent = c;
  });
}

function drawGraph() {
  const n = Number($("g-n").value);
  const res = JSON.parse(random_digraph_metrics(n, Number($("g-p").value), Number($("g-seed").value), $("g-weighted").checked));
  const r = res.report;
  fillTable($("g-table"), ["metric", "value"], [
    ["nodes", r.nodes],
    ["edges", r.edges],
    ["clustering", fmt(r.clustering)],
    ["assortativity", fmt(r.assortativity)],
    ["pearson in/out", fmt(r.pearson_in_out)],
    ["SCCs (largest)", `${r.scc_count} (${r.largest_scc})`],
    ["WCCs (largest)", `${r.wcc_count} (${r.largest_wcc})`],
  ]);
  const rank = $("g-rank");
  rank.replaceChildren(...res.pagerank_top.map((p) => {
    const li = document.createElement("li");
    li.textContent = `${p.account}  ${p.score.toFixed(4)}`;
    return li;
  }));

  const svg = $("g-svg");
  svg.replaceChildren();
  const pos = (i) => [Math.cos((2 * Math.PI * i) / n), Math.sin((2 * Math.PI * i) / n)];
  const maxW = Math.max(1, ...res.edges.map((e) => e[2]));
  for (const [u, v, w] of res.edges) {
    const [x1, y1] = pos(u);
    const [x2, y2] = pos(v);
    svg.appendChild(svgEl("line", { x1, y1, x2, y2, stroke: "#468", "stroke-opacity": 0.15 + 0.6 * (w / maxW), "stroke-width": 0.006 }));
  }
  const top = new Set(res.pagerank_top.map((p) => p.node));
  for (let i = 0; i < n; i++) {
    const [cx, cy] = pos(i);
    svg.appendChild(svgEl("circle", { cx, cy, r: 0.025, fill: top.has(i) ? "#c40" : "#333" }));
  }
}

// sample community distances: a tight bot-like cluster and a spread of ordinary communities
const POINTS = (() => {
  const pts = [];
  let s = 7;
  const rnd = () => ((s = (s * 16807) % 2147483647) / 2147483647);
  for (let i = 0; i < 20; i++) pts.push({ label: "bot" + i, dist_t: 0.02 + 0.18 * rnd(), dist_s: 0.1 * rnd() });
  for (let i = 0; i < 20; i++) pts.push({ label: "svc" + i, dist_t: 0.3 + 0.6 * rnd(), dist_s: 0.15 + 0.7 * rnd() });
  return JSON.stringify(pts);
})();

function drawBox() {
  const res = JSON.parse(similarity_box(Number($("b-mt").value), Number($("b-st").value), Number($("b-ms").value), Number($("b-ss").value), POINTS));
  const svg = $("b-svg");
  svg.replaceChildren();
  svg.appendChild(svgEl("rect", { x: 0, y: -1, width: 1, height: 1, fill: "none", stroke: "#999", "stroke-width": 0.003 }));
  const [t0, t1] = res.time_box;
  const [s0, s1] = res.target_box;
  svg.appendChild(svgEl("rect", { x: t0, y: -s1, width: t1 - t0, height: s1 - s0, fill: "#c40", "fill-opacity": 0.12, stroke: "#c40", "stroke-width": 0.004 }));
  for (const p of res.points) {
    svg.appendChild(svgEl("circle", { cx: p.dist_t, cy: -p.dist_s, r: 0.012, fill: p.inside ? "#c40" : "#456" }));
  }
  $("b-summary").textContent =
    `time box [${t0.toFixed(2)}, ${t1.toFixed(2)}], target box [${s0.toFixed(2)}, ${s1.toFixed(2)}]; ${res.inside} of ${res.points.length} communities inside`;
}

function runScan() {
  const res = JSON.parse(attack_scan(Number($("a-seed").value), Number($("a-w1").value), Number($("a-w2").value), Number($("a-w3").value)));
  $("a-summary").textContent =
    `${res.actions} actions, ${res.planted} planted attacks, ${res.findings.length} findings; recall ${res.recall.toFixed(2)}, precision ${res.precision.toFixed(2)}`;
  fillTable(
    $("a-table"),
    ["attacker", "victim", "kind", "profit", "ratio", "share"],
    res.findings.map((f) => [f.attacker, f.victim, f.kind, f.profit, f.ratio, f.profit_share === null ? "/" : f.profit_share.toFixed(3)]),
    (i) => (res.findings[i].planted ? "" : "miss"),
  );
}

async function main() {
  try {
    await init();
  } catch (e) {
    $("status").textContent = "Could not load pkg/eosio_forensics_web.js; build it first (see README).";
    $("status").className = "error";
    return;
  }
  $("status").textContent = "";
  bindOutputs(["g-n", "g-p", "g-seed", "g-weighted"], drawGraph);
  bindOutputs(["b-mt", "b-st", "b-ms", "b-ss"], drawBox);
  bindOutputs(["a-w1", "a-w2", "a-w3", "a-seed"], runScan);
  drawGraph();
  drawBox();
  runScan();
}

main();
