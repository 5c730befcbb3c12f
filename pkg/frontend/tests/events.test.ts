import { describe, expect, it } from "vitest";

import { EventStream, type LogEvent, type StreamStatus } from "../src/events.js";
import { fakeFetch, frame, heartbeat, makeEvent, sseResponse } from "./helpers.js";

function collectStream(
  fetchImpl: typeof fetch,
  fromSeq = 0,
): { stream: EventStream; events: LogEvent[]; statuses: StreamStatus[] } {
  const events: LogEvent[] = [];
  const statuses: StreamStatus[] = [];
  const stream = new EventStream({
    baseUrl: "http://svc",
    sessionId: "s-1",
    fromSeq,
    retryDelayMs: 5,
    fetchImpl,
    onEvent: (event) => events.push(event),
    onStatus: (status) => statuses.push(status),
  });
  return { stream, events, statuses };
}

const terminalEvent = (seq: number) =>
  makeEvent(seq, { payload: { terminal: true, outcome: "completed" } });

describe("EventStream", () => {
  it("delivers events in order and stops at the terminal event", async () => {
    const { fetchImpl, requests } = fakeFetch([
      () =>
        sseResponse([
          frame(makeEvent(1)),
          heartbeat(),
          frame(makeEvent(2)),
          frame(terminalEvent(3)),
        ]),
    ]);
    const { stream, events, statuses } = collectStream(fetchImpl);
    await stream.start();
    expect(events.map((e) => e.seq)).toEqual([1, 2, 3]);
    expect(stream.done).toBe(true);
    expect(requests[0]?.url).toContain("last_seq=0");
    expect(statuses).toContain("connected");
    expect(statuses.at(-1)).toBe("closed");
  });

  it("drops duplicates when the server replays an overlap", async () => {
    const { fetchImpl } = fakeFetch([
      () => sseResponse([frame(makeEvent(1)), frame(makeEvent(2))]),
      () =>
        sseResponse([
          frame(makeEvent(1)),
          frame(makeEvent(2)),
          frame(makeEvent(3)),
          frame(terminalEvent(4)),
        ]),
    ]);
    const { stream, events } = collectStream(fetchImpl);
    await stream.start();
    expect(events.map((e) => e.seq)).toEqual([1, 2, 3, 4]);
  });

  it("re-requests from the last contiguous seq when it sees a gap", async () => {
    const { fetchImpl, requests } = fakeFetch([
      () => sseResponse([frame(makeEvent(1)), frame(makeEvent(2)), frame(makeEvent(5))]),
      () =>
        sseResponse([
          frame(makeEvent(3)),
          frame(makeEvent(4)),
          frame(makeEvent(5)),
          frame(terminalEvent(6)),
        ]),
    ]);
    const { stream, events } = collectStream(fetchImpl);
    await stream.start();
    expect(events.map((e) => e.seq)).toEqual([1, 2, 3, 4, 5, 6]);
    expect(requests.map((r) => r.url)).toEqual([
      "http://svc/sessions/s-1/events?last_seq=0",
      "http://svc/sessions/s-1/events?last_seq=2",
    ]);
  });

  it("reconnects from the cursor after a dropped connection", async () => {
    const { fetchImpl, requests } = fakeFetch([
      () => sseResponse([frame(makeEvent(1))]), // server closes without terminal
      () => sseResponse([frame(makeEvent(2)), frame(terminalEvent(3))]),
    ]);
    const { stream, events, statuses } = collectStream(fetchImpl);
    await stream.start();
    expect(events.map((e) => e.seq)).toEqual([1, 2, 3]);
    expect(requests[1]?.url).toContain("last_seq=1");
    expect(statuses.filter((s) => s === "reconnecting").length).toBe(1);
  });

  it("starts from a caller-provided cursor", async () => {
    const { fetchImpl, requests } = fakeFetch([
      () => sseResponse([frame(makeEvent(6)), frame(terminalEvent(7))]),
    ]);
    const { stream, events } = collectStream(fetchImpl, 5);
    await stream.start();
    expect(requests[0]?.url).toContain("last_seq=5");
    expect(events.map((e) => e.seq)).toEqual([6, 7]);
  });

  it("stop() ends the loop without a terminal event", async () => {
    const { fetchImpl } = fakeFetch([
      () => sseResponse([frame(makeEvent(1))]),
      () => sseResponse([heartbeat()]),
      () => sseResponse([heartbeat()]),
    ]);
    const { stream, events, statuses } = collectStream(fetchImpl);
    const running = stream.start();
    await new Promise((resolve) => setTimeout(resolve, 30));
    stream.stop();
    await running;
    expect(events.map((e) => e.seq)).toEqual([1]);
    expect(statuses.at(-1)).toBe("closed");
  });
});
