/** Wire-format types mirroring the serve API payloads. */

export type Edge = [string, string, string];

export interface GraphPayload {
  kind: "graph";
  alphabets: {
    vertex_labels: string[];
    terminal_labels: string[];
    node_labels: string[];
    edge_labels: string[];
    encoding_labels: string[];
  };
  vertices: { id: string; label: string }[];
  edges: Edge[];
}

export type Role = "node" | "wire" | "nonterminal";

export interface RenderPayload {
  graph: GraphPayload;
  layout: Record<string, [number, number]>;
  roles: Record<string, Role>;
  encoding_edges: Edge[];
}

export interface Choice {
  index: number;
  vertex?: string;
  production?: number;
  label?: string;
  vertex_map?: Record<string, string>;
  growth?: number[];
  host_variant?: GraphPayload;
}

export interface SessionState {
  id: string;
  kind: "derivation" | "graph-rewrite";
  version: number;
  terminal: boolean;
  steps?: [string, number][];
  graph: GraphPayload;
  render: RenderPayload;
  choices: Choice[];
  can_decode?: boolean;
  decoded?: GraphPayload;
  decoded_render?: RenderPayload;
}

export interface GrammarRewriteMatching {
  index: number;
  production_map: number[];
  vertex_maps: Record<string, string>[];
}

export interface CertificatePayload {
  verified: boolean;
  host_instance: GraphPayload;
  result_instance: GraphPayload;
  transcript: string[];
  replays: { paths: number[][]; script: ScriptPayload }[];
}

export interface GrammarRewriteResponse {
  host: string;
  rule: string;
  matchings: GrammarRewriteMatching[];
  result?: BesgPayload;
  certificate?: CertificatePayload;
}

export interface ProductionPayload {
  label: string;
  graph: { vertices: { id: string; label: string }[]; edges: Edge[] };
  connections: [string, string, string, string, string][];
  nt_order: string[];
}

export interface BesgPayload {
  kind: "besg";
  alphabets: GraphPayload["alphabets"];
  grammar: { initial: string; productions: ProductionPayload[] };
  decoding: { rules: unknown[] };
}

export interface ScriptPayload {
  kind: "script";
  steps: [string, number][];
}
