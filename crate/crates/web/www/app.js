import init, { evaluate, classify_orbifold, dinf_subgroup } from "./pkg/wh3k_web.js";

const $ = (id) => document.getElementById(id);

function show(out, f) {
  try {
    out.textContent = f();
    out.className = "";
  } catch (e) {
    out.textContent = String(e);
    out.className = "error";
  }
}

await init();

$("run").onclick = () =>
  show($("wh-out"), () =>
    evaluate($("dsl").value, $("ring").value, Number($("lo").value), Number($("hi").value), $("format").value));

$("classify").onclick = () =>
  show($("orb-out"), () =>
    classify_orbifold(Number($("genus").value), $("orientable").checked, $("cones").value, Number($("bdry").value)));

$("dinf").onclick = () => show($("dinf-out"), () => dinf_subgroup($("words").value));

$("run").click();
