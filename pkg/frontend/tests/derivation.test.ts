import { describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { canonicalJson } from "../src/canonical.js";
import { DerivationFlow } from "../src/session.js";
import type { SessionState } from "../src/model.js";
import transcript from "../src/fixtures/derivation-session.json";
import { scriptedTransport } from "./transport.js";

// recorded against a live serve instance: initial state, three applies
// (productions 0, 1, 2 of the SK_n grammar), then the decode payload
const states = transcript.states as unknown as SessionState[];
const [initial, afterFirst, afterSecond, terminal, decoded] = states;

function choiceFor(state: SessionState, production: number): number {
  const hit = state.choices.find((c) => c.production === production);
  if (!hit) throw new Error("choice not present");
  return hit.index;
}

describe("derivation flow", () => {
  it("steers by choices, re-rendering from authoritative payloads", async () => {
    const sid = initial.id;
    const transport = scriptedTransport([
      { method: "POST", path: "/sessions", payload: initial },
      { method: "POST", path: `/sessions/${sid}/apply`, payload: afterFirst },
      { method: "POST", path: `/sessions/${sid}/apply`, payload: afterSecond },
      { method: "POST", path: `/sessions/${sid}/apply`, payload: terminal },
      { method: "POST", path: `/sessions/${sid}/decode`, payload: decoded },
    ]);
    const flow = new DerivationFlow(new ApiClient(transport));
    await flow.start("skn");
    expect(flow.choices.length).toBe(1);
    expect(flow.canDecode).toBe(false);

    for (const [state, production] of [
      [initial, 0],
      [afterFirst, 1],
      [afterSecond, 2],
    ] as const) {
      const outcome = await flow.applyChoice(choiceFor(state, production));
      expect(outcome.kind).toBe("applied");
      // choice lists are always taken from the fresh payload
      expect(flow.choices).toEqual(outcome.state.choices);
    }
    expect(flow.state.terminal).toBe(true);
    expect(flow.canDecode).toBe(true);
    await flow.decode();
    expect(flow.state.decoded).toBeDefined();
    const labels = flow.state.decoded!.vertices.map((v) => v.label);
    expect(labels.filter((l) => l === "n").length).toBe(3);
    expect(labels.filter((l) => l === "w").length).toBe(3);
    transport.done();
  });

  it("refreshes and reports stale applies", async () => {
    const sid = initial.id;
    const transport = scriptedTransport([
      { method: "POST", path: "/sessions", payload: initial },
      {
        method: "POST",
        path: `/sessions/${sid}/apply`,
        status: 409,
        payload: { error: "session moved on" },
      },
      { method: "GET", path: `/sessions/${sid}`, payload: afterFirst },
    ]);
    const flow = new DerivationFlow(new ApiClient(transport));
    await flow.start("skn");
    const outcome = await flow.applyChoice(0);
    expect(outcome.kind).toBe("stale");
    // the flow resynchronized to the authoritative state
    expect(flow.state.version).toBe(afterFirst.version);
    transport.done();
  });

  it("exports the replayable script canonically", async () => {
    const sid = initial.id;
    const transport = scriptedTransport([
      { method: "POST", path: "/sessions", payload: initial },
      { method: "POST", path: `/sessions/${sid}/apply`, payload: afterFirst },
      { method: "POST", path: `/sessions/${sid}/apply`, payload: afterSecond },
      { method: "POST", path: `/sessions/${sid}/apply`, payload: terminal },
    ]);
    const flow = new DerivationFlow(new ApiClient(transport));
    await flow.start("skn");
    await flow.applyChoice(choiceFor(initial, 0));
    await flow.applyChoice(choiceFor(afterFirst, 1));
    await flow.applyChoice(choiceFor(afterSecond, 2));
    const exported = flow.exportScript();
    expect(exported).toBe(
      canonicalJson({ kind: "script", steps: terminal.steps }),
    );
    expect(exported.endsWith("\n")).toBe(true);
    transport.done();
  });
});
