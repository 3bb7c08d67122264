import init, { expansion_map, rotate, coefficient_table } from "./pkg/nullharm_wasm.js";

const $ = (id) => document.getElementById(id);
const canvas = $("map");
const ctx = canvas.getContext("2d");
const NT = canvas.height, NP = canvas.width;

let ell = 2;
let coeffs = null;

function delta(l, j) {
  const c = new Float64Array(2 * (2 * l + 1));
  c[2 * (j + l)] = 1;
  return c;
}

function fmt(x) {
  return (x >= 0 ? " " : "") + x.toFixed(5);
}

// blue for negative, red for positive, white at zero
function color(v, scale) {
  const t = Math.max(-1, Math.min(1, v / scale));
  const a = Math.round(255 * (1 - Math.abs(t)));
  return t >= 0 ? [255, a, a] : [a, a, 255];
}

function draw() {
  const part = $("part").value;
  const z = expansion_map(ell, coeffs, NT, NP);
  const vals = new Float64Array(NT * NP);
  for (let i = 0; i < vals.length; i++) {
    const re = z[2 * i], im = z[2 * i + 1];
    vals[i] = part === "re" ? re : part === "im" ? im : Math.hypot(re, im);
  }
  const scale = vals.reduce((m, v) => Math.max(m, Math.abs(v)), 0) || 1;
  const img = ctx.createImageData(NP, NT);
  for (let i = 0; i < vals.length; i++) {
    const [r, g, b] = color(vals[i], scale);
    img.data.set([r, g, b, 255], 4 * i);
  }
  ctx.putImageData(img, 0, 0);

  const lines = [];
  for (let j = -ell; j <= ell; j++) {
    const k = 2 * (j + ell);
    lines.push(`j=${String(j).padStart(3)}  ${fmt(coeffs[k])} ${fmt(coeffs[k + 1])}i`);
  }
  $("coeffs").textContent = lines.join("\n");
}

function drawTable() {
  const t = coefficient_table(ell);
  const n = 2 * ell + 1;
  let html = "<table><tr><th>j \\ m</th>";
  for (let m = -ell; m <= ell; m++) html += `<th>${m}</th>`;
  html += "</tr>";
  for (let r = 0; r < n; r++) {
    html += `<tr><th>${r - ell}</th>`;
    for (let c = 0; c < n; c++) {
      const k = 2 * (r * n + c);
      html += `<td>${t[k].toFixed(4)}<br>${t[k + 1].toFixed(4)}i</td>`;
    }
    html += "</tr>";
  }
  $("table").innerHTML = html + "</table>";
}

function guarded(f) {
  return () => {
    try {
      $("status").textContent = "";
      f();
    } catch (e) {
      $("status").textContent = String(e.message ?? e);
    }
  };
}

const reset = guarded(() => {
  ell = Math.max(0, Math.min(12, parseInt($("ell").value, 10) || 0));
  $("j").min = -ell;
  $("j").max = ell;
  const j = Math.max(-ell, Math.min(ell, parseInt($("j").value, 10) || 0));
  $("ell").value = ell;
  $("j").value = j;
  coeffs = delta(ell, j);
  draw();
  drawTable();
});

const applyRotation = guarded(() => {
  const angle = parseFloat($("angle").value);
  coeffs = rotate(ell, coeffs, +$("ax").value, +$("ay").value, +$("az").value, angle);
  draw();
});

await init();
$("ell").addEventListener("change", reset);
$("j").addEventListener("change", reset);
$("reset").addEventListener("click", reset);
$("part").addEventListener("change", guarded(draw));
$("rotate").addEventListener("click", applyRotation);
$("angle").addEventListener("input", () => ($("angleval").textContent = (+$("angle").value).toFixed(2)));
reset();
