/** A scripted transport replaying recorded serve-API exchanges. */

import type { Transport } from "../src/api.js";

export interface Exchange {
  method: string;
  path: string;
  status?: number;
  payload: unknown;
  /** optional assertion on the request body */
  expectBody?: (body: any) => void;
}

export function scriptedTransport(exchanges: Exchange[]): Transport & { done(): void } {
  let cursor = 0;
  const transport = (async (method: string, path: string, body?: unknown) => {
    const expected = exchanges[cursor];
    if (!expected) {
      throw new Error(`unexpected request ${method} ${path}`);
    }
    cursor += 1;
    if (expected.method !== method || expected.path !== path) {
      throw new Error(
        `expected ${expected.method} ${expected.path}, got ${method} ${path}`,
      );
    }
    expected.expectBody?.(body);
    return { status: expected.status ?? 200, payload: expected.payload };
  }) as Transport & { done(): void };
  transport.done = () => {
    if (cursor !== exchanges.length) {
      throw new Error(`only ${cursor}/${exchanges.length} exchanges used`);
    }
  };
  return transport;
}
