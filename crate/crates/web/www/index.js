import init, { tfunc_table, ring_structure, verify } from "./pkg/zsring_web.js";

const $ = (id) => document.getElementById(id);

function showTable(rows) {
  const table = document.createElement("table");
  const head = table.insertRow();
  head.appendChild(document.createElement("th")).textContent = "m \\ h";
  rows[0].forEach((cell) => {
    head.appendChild(document.createElement("th")).textContent = cell.h;
  });
  for (const row of rows) {
    const tr = table.insertRow();
    tr.appendChild(document.createElement("th")).textContent = row[0].m;
    for (const cell of row) {
      const td = tr.insertCell();
      td.textContent = cell.value;
      td.title = "profile " + cell.profile.join(", ");
    }
  }
  $("tfunc-out").replaceChildren(table);
}

function showJson(call) {
  const out = $("ring-out");
  out.classList.remove("error");
  try {
    out.textContent = JSON.stringify(JSON.parse(call($("ring").value, $("psi").value)), null, 2);
  } catch (e) {
    out.classList.add("error");
    out.textContent = e.message ?? String(e);
  }
}

await init();
$("tfunc-run").onclick = () => showTable(JSON.parse(tfunc_table(+$("max-m").value, +$("max-h").value)));
$("structure-run").onclick = () => showJson(ring_structure);
$("verify-run").onclick = () => showJson(verify);
$("tfunc-run").click();
