import { describe, expect, it } from "vitest";
import { renderSvg } from "../src/render.js";
import transcript from "../src/fixtures/derivation-session.json";
import type { SessionState } from "../src/model.js";

const states = transcript.states as unknown as SessionState[];
const initial = states[0];
const decoded = states[states.length - 1];

describe("renderSvg", () => {
  it("draws nonterminals as squares with labels", () => {
    const svg = renderSvg(initial.render);
    expect(svg).toContain('class="nonterminal"');
    expect(svg).toContain(">S</text>");
  });

  it("distinguishes node- and wire-vertices and dashes encoding edges", () => {
    const terminal = states[3];
    const encodedSvg = renderSvg(terminal.render);
    expect(encodedSvg).toContain("stroke-dasharray");
    const svg = renderSvg(decoded.decoded_render!);
    expect(svg).toContain('class="node-vertex"');
    expect(svg).toContain('class="wire-vertex"');
    expect(svg).not.toContain("stroke-dasharray");
    // every vertex is placed
    for (const vertex of decoded.decoded!.vertices) {
      expect(decoded.decoded_render!.layout[vertex.id]).toBeDefined();
    }
  });

  it("marks highlighted vertices", () => {
    const svg = renderSvg(initial.render, new Set(["n0"]));
    expect(svg).toContain("highlight");
  });
});
