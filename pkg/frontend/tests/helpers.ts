import type { LogEvent } from "../src/events.js";

export function makeEvent(seq: number, overrides: Partial<LogEvent> = {}): LogEvent {
  return {
    seq,
    timestamp: "2026-01-01T00:00:00+00:00",
    phase: "curating",
    agent_tag: "orchestrator",
    level: "info",
    message: `event ${seq}`,
    ...overrides,
  };
}

export function frame(event: LogEvent): string {
  return `id: ${event.seq}\nevent: log\ndata: ${JSON.stringify(event)}\n\n`;
}

export function heartbeat(): string {
  return ": heartbeat\n\n";
}

/** A body that emits the given chunks then closes. */
export function chunkedBody(chunks: string[]): ReadableStream<Uint8Array> {
  const encoder = new TextEncoder();
  let index = 0;
  return new ReadableStream({
    pull(controller) {
      if (index < chunks.length) {
        controller.enqueue(encoder.encode(chunks[index]));
        index += 1;
      } else {
        controller.close();
      }
    },
  });
}

export interface RecordedRequest {
  url: string;
  init?: RequestInit;
}

/** Sequential fake fetch: each call consumes the next responder. */
export function fakeFetch(
  responders: Array<(url: string) => Response>,
): { fetchImpl: typeof fetch; requests: RecordedRequest[] } {
  const requests: RecordedRequest[] = [];
  const fetchImpl = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    requests.push({ url, init });
    const responder = responders.shift();
    if (!responder) throw new Error(`no responder for ${url}`);
    return responder(url);
  }) as typeof fetch;
  return { fetchImpl, requests };
}

export function sseResponse(chunks: string[]): Response {
  return new Response(chunkedBody(chunks), {
    status: 200,
    headers: { "content-type": "text/event-stream" },
  });
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export async function eventually(
  predicate: () => boolean,
  timeoutMs = 10_000,
  intervalMs = 20,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    if (predicate()) return;
    await new Promise((resolve) => setTimeout(resolve, intervalMs));
  }
  throw new Error("condition never became true");
}
