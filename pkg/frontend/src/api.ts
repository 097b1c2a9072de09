/** Typed client for the serve API; the transport is injectable for tests. */

import type {
  GrammarRewriteResponse,
  RenderPayload,
  SessionState,
} from "./model.js";

export type Transport = (
  method: string,
  path: string,
  body?: unknown,
) => Promise<{ status: number; payload: any }>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class StaleSessionError extends ApiError {
  constructor(message: string) {
    super(409, message);
  }
}

export function fetchTransport(baseUrl: string): Transport {
  return async (method, path, body) => {
    const response = await fetch(baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    return { status: response.status, payload };
  };
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  private async call(method: string, path: string, body?: unknown) {
    const { status, payload } = await this.transport(method, path, body);
    if (status === 409) throw new StaleSessionError(payload.error ?? "stale session");
    if (status >= 400) throw new ApiError(status, payload.error ?? `HTTP ${status}`);
    return payload;
  }

  listObjects(): Promise<{ objects: { name: string; kind: string }[] }> {
    return this.call("GET", "/objects");
  }

  loadObject(name: string, payload: unknown): Promise<{ name: string; kind: string }> {
    return this.call("POST", "/objects", { name, payload });
  }

  getObject(name: string): Promise<{ name: string; kind: string; payload: unknown }> {
    return this.call("GET", `/objects/${name}`);
  }

  startDerivation(grammar: string): Promise<SessionState> {
    return this.call("POST", "/sessions", { kind: "derivation", grammar });
  }

  startGraphRewrite(graph: string, rule: string): Promise<SessionState> {
    return this.call("POST", "/sessions", { kind: "graph-rewrite", graph, rule });
  }

  sessionState(id: string): Promise<SessionState> {
    return this.call("GET", `/sessions/${id}`);
  }

  apply(id: string, index: number, version: number): Promise<SessionState> {
    return this.call("POST", `/sessions/${id}/apply`, { index, version });
  }

  decode(id: string): Promise<SessionState> {
    return this.call("POST", `/sessions/${id}/decode`);
  }

  undo(id: string): Promise<SessionState> {
    return this.call("POST", `/sessions/${id}/undo`);
  }

  grammarRewrites(host: string, rule: string, apply?: number,
                  certifyTree?: unknown): Promise<GrammarRewriteResponse> {
    const body: Record<string, unknown> = { host, rule };
    if (apply !== undefined) body.apply = apply;
    if (certifyTree !== undefined) body.certify_tree = certifyTree;
    return this.call("POST", "/grammar-rewrites", body);
  }

  render(name: string): Promise<RenderPayload> {
    return this.call("GET", `/render/${name}`);
  }
}
