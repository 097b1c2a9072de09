/** App shell: wires the flows to the DOM against a live serve API. */

import { ApiClient, fetchTransport } from "./api.js";
import { DerivationFlow, GrammarRewriteFlow, GraphRewriteFlow } from "./session.js";
import { renderSvg } from "./render.js";
import type { ApplyOutcome } from "./session.js";
import type { BesgPayload, SessionState } from "./model.js";

const $ = (id: string) => document.getElementById(id)!;

const api = new ApiClient(fetchTransport(
  (window as any).BESG_API ?? "http://127.0.0.1:8750"));

let derivation: DerivationFlow | null = null;
let graphRewrite: GraphRewriteFlow | null = null;

function drawState(state: SessionState) {
  $("diagram").innerHTML = renderSvg(state.render);
  if (state.decoded_render) {
    $("decoded").innerHTML = renderSvg(state.decoded_render);
  }
  const list = $("choices");
  list.innerHTML = "";
  for (const choice of state.choices) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.textContent =
      state.kind === "derivation"
        ? `expand ${choice.vertex} (${choice.label}) with production ${choice.production}`
        : `apply matching #${choice.index} (growth ${JSON.stringify(choice.growth)})`;
    button.onclick = () => void applyChoice(choice.index);
    item.appendChild(button);
    list.appendChild(item);
  }
  ($("decode-btn") as HTMLButtonElement).hidden =
    !(derivation?.canDecode ?? false);
  $("status").textContent =
    `session ${state.id} v${state.version}` +
    (state.terminal ? " — terminal" : "") +
    ` — ${state.graph.vertices.length} vertices`;
}

function handleOutcome(outcome: ApplyOutcome) {
  if (outcome.kind === "stale") {
    $("status").textContent = "choices were stale — refreshed, pick again";
  }
  drawState(outcome.state);
}

async function applyChoice(index: number) {
  if (derivation) handleOutcome(await derivation.applyChoice(index));
  else if (graphRewrite) handleOutcome(await graphRewrite.applyMatching(index));
}

async function refreshObjects() {
  const { objects } = await api.listObjects();
  const select = $("object-select") as HTMLSelectElement;
  select.innerHTML = "";
  for (const entry of objects) {
    const option = document.createElement("option");
    option.value = entry.name;
    option.textContent = `${entry.name} (${entry.kind})`;
    select.appendChild(option);
  }
}

function exportScript() {
  if (!derivation) return;
  const blob = new Blob([derivation.exportScript()], { type: "application/json" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "derivation.script.json";
  link.click();
}

async function startDerivation() {
  const name = ($("object-select") as HTMLSelectElement).value;
  derivation = new DerivationFlow(api);
  graphRewrite = null;
  drawState(await derivation.start(name));
}

async function startGraphRewrite() {
  const graph = ($("graph-name") as HTMLInputElement).value;
  const rule = ($("rule-name") as HTMLInputElement).value;
  graphRewrite = new GraphRewriteFlow(api);
  derivation = null;
  drawState(await graphRewrite.start(graph, rule));
}

async function runGrammarRewrite() {
  const host = ($("grammar-host") as HTMLInputElement).value;
  const rule = ($("grammar-rule") as HTMLInputElement).value;
  const treeText = ($("certify-tree") as HTMLTextAreaElement).value.trim();
  const flow = new GrammarRewriteFlow(api, host, rule);
  const matchings = await flow.listMatchings();
  const target = $("grammar-result");
  if (!matchings.length) {
    target.textContent = "no saturated matching in this host";
    return;
  }
  await flow.apply(0, treeText ? JSON.parse(treeText) : undefined);
  const hostPayload = (await api.getObject(host)).payload as BesgPayload;
  const lines = flow.diff(hostPayload).map((d) =>
    `production ${d.index} (${d.label}): ` +
    (d.removedEdges.length || d.addedEdges.length
      ? `-[${d.removedEdges.join(", ")}] +[${d.addedEdges.join(", ")}]`
      : "unchanged"));
  if (flow.certificate) {
    lines.push("", `certificate verified=${flow.certificate.verified}`,
               ...flow.certificate.transcript);
  }
  target.textContent = lines.join("\n") + "\n\n" + flow.resultBytes();
}

window.addEventListener("DOMContentLoaded", () => {
  void refreshObjects();
  $("start-derivation").onclick = () => void startDerivation();
  $("start-rewrite").onclick = () => void startGraphRewrite();
  $("run-grammar-rewrite").onclick = () => void runGrammarRewrite();
  $("decode-btn").onclick = () => {
    if (derivation) void derivation.decode().then(drawState);
  };
  $("undo-btn").onclick = () => {
    const flow = derivation ?? graphRewrite;
    if (flow) void flow.undo().then(drawState);
  };
  $("export-btn").onclick = exportScript;
});
