/**
 * Flow state machines behind the studio screens.
 *
 * Every state shown is exactly a serve-API payload: flows never mutate
 * graphs client-side, they only hold the latest payload and a history trail
 * for the diff view.  Applies are pessimistic — the authoritative payload
 * replaces the screen — and a stale apply (409) refreshes the choices so
 * the user picks again.
 */

import { ApiClient, StaleSessionError } from "./api.js";
import { canonicalJson } from "./canonical.js";
import type {
  BesgPayload,
  CertificatePayload,
  GrammarRewriteMatching,
  ScriptPayload,
  SessionState,
} from "./model.js";

export type ApplyOutcome =
  | { kind: "applied"; state: SessionState }
  | { kind: "stale"; state: SessionState };

export class DerivationFlow {
  state!: SessionState;
  readonly trail: SessionState[] = [];

  constructor(private readonly api: ApiClient) {}

  async start(grammar: string): Promise<SessionState> {
    this.state = await this.api.startDerivation(grammar);
    return this.state;
  }

  /** Choices are always taken from the latest payload, never cached. */
  get choices() {
    return this.state.choices;
  }

  async applyChoice(index: number): Promise<ApplyOutcome> {
    try {
      const next = await this.api.apply(this.state.id, index, this.state.version);
      this.trail.push(this.state);
      this.state = next;
      return { kind: "applied", state: next };
    } catch (err) {
      if (err instanceof StaleSessionError) {
        this.state = await this.api.sessionState(this.state.id);
        return { kind: "stale", state: this.state };
      }
      throw err;
    }
  }

  get canDecode(): boolean {
    return Boolean(this.state.terminal && this.state.can_decode);
  }

  async decode(): Promise<SessionState> {
    this.state = await this.api.decode(this.state.id);
    return this.state;
  }

  async undo(): Promise<SessionState> {
    this.state = await this.api.undo(this.state.id);
    this.trail.pop();
    return this.state;
  }

  /** The replayable script: canonical bytes of the steps taken so far. */
  exportScript(): string {
    const payload: ScriptPayload = {
      kind: "script",
      steps: (this.state.steps ?? []).map(([v, p]) => [v, p]),
    };
    return canonicalJson(payload);
  }
}

export class GraphRewriteFlow {
  state!: SessionState;
  previous?: SessionState;

  constructor(private readonly api: ApiClient) {}

  async start(graph: string, rule: string): Promise<SessionState> {
    this.state = await this.api.startGraphRewrite(graph, rule);
    return this.state;
  }

  get matchings() {
    return this.state.choices;
  }

  async applyMatching(index: number): Promise<ApplyOutcome> {
    try {
      const next = await this.api.apply(this.state.id, index, this.state.version);
      this.previous = this.state;
      this.state = next;
      return { kind: "applied", state: next };
    } catch (err) {
      if (err instanceof StaleSessionError) {
        this.state = await this.api.sessionState(this.state.id);
        return { kind: "stale", state: this.state };
      }
      throw err;
    }
  }

  async undo(): Promise<SessionState> {
    this.state = await this.api.undo(this.state.id);
    this.previous = undefined;
    return this.state;
  }
}

export interface ProductionDiff {
  index: number;
  label: string;
  removedEdges: string[];
  addedEdges: string[];
}

export class GrammarRewriteFlow {
  matchings: GrammarRewriteMatching[] = [];
  host?: BesgPayload;
  result?: BesgPayload;
  certificate?: CertificatePayload;

  constructor(
    private readonly api: ApiClient,
    private readonly hostName: string,
    private readonly ruleName: string,
  ) {}

  async listMatchings(): Promise<GrammarRewriteMatching[]> {
    const response = await this.api.grammarRewrites(this.hostName, this.ruleName);
    this.matchings = response.matchings;
    return this.matchings;
  }

  async apply(index: number, certifyTree?: unknown): Promise<BesgPayload> {
    const response = await this.api.grammarRewrites(
      this.hostName, this.ruleName, index, certifyTree);
    this.matchings = response.matchings;
    this.result = response.result!;
    this.certificate = response.certificate;
    return this.result;
  }

  /** Production-by-production before/after diff for the result view. */
  diff(host: BesgPayload): ProductionDiff[] {
    if (!this.result) return [];
    const out: ProductionDiff[] = [];
    host.grammar.productions.forEach((before, i) => {
      const after = this.result!.grammar.productions[i];
      const fmt = (e: [string, string, string]) => e.join(" -");
      const beforeEdges = new Set(before.graph.edges.map(fmt));
      const afterEdges = new Set(after.graph.edges.map(fmt));
      out.push({
        index: i,
        label: before.label,
        removedEdges: [...beforeEdges].filter((e) => !afterEdges.has(e)).sort(),
        addedEdges: [...afterEdges].filter((e) => !beforeEdges.has(e)).sort(),
      });
    });
    return out;
  }

  /** Canonical bytes of the result payload, for external comparison. */
  resultBytes(): string {
    if (!this.result) throw new Error("no rewrite applied yet");
    return canonicalJson(this.result);
  }
}
