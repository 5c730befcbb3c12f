/** Resumable event stream over fetch + ReadableStream.
 *
 * The server speaks server-sent events addressed by sequence number. This
 * client owns the resume cursor: duplicates are dropped, a gap aborts the
 * connection and re-requests from the last contiguous sequence, and a broken
 * connection reconnects from the cursor. Identical behavior in the browser
 * and under node, where EventSource is unavailable.
 */

export interface LogEvent {
  seq: number;
  timestamp: string;
  phase: string;
  agent_tag: string;
  level: "info" | "warning" | "error";
  message: string;
  payload?: Record<string, unknown> & { terminal?: boolean };
}

export type StreamStatus = "connecting" | "connected" | "reconnecting" | "closed";

export interface EventStreamOptions {
  baseUrl: string;
  sessionId: string;
  fromSeq?: number;
  onEvent: (event: LogEvent) => void;
  onStatus?: (status: StreamStatus) => void;
  fetchImpl?: typeof fetch;
  retryDelayMs?: number;
}

function parseSseBlock(block: string): LogEvent | null {
  const dataLines: string[] = [];
  for (const line of block.split("\n")) {
    if (line.startsWith("data:")) dataLines.push(line.slice(5).trimStart());
  }
  if (dataLines.length === 0) return null; // comment / heartbeat block
  try {
    return JSON.parse(dataLines.join("\n")) as LogEvent;
  } catch {
    return null;
  }
}

export class EventStream {
  private cursor: number;
  private controller: AbortController | null = null;
  private stopped = false;
  private terminalSeen = false;
  readonly options: Required<Pick<EventStreamOptions, "retryDelayMs">> &
    EventStreamOptions;

  constructor(options: EventStreamOptions) {
    this.options = { retryDelayMs: 1000, ...options };
    this.cursor = options.fromSeq ?? 0;
  }

  get lastSeq(): number {
    return this.cursor;
  }

  get done(): boolean {
    return this.terminalSeen;
  }

  start(): Promise<void> {
    return this.loop();
  }

  stop(): void {
    this.stopped = true;
    this.controller?.abort();
  }

  /** Simulates a dropped connection; the loop reconnects from the cursor. */
  forceDisconnect(): void {
    this.controller?.abort();
  }

  private status(value: StreamStatus): void {
    this.options.onStatus?.(value);
  }

  private async loop(): Promise<void> {
    const fetchImpl = this.options.fetchImpl ?? fetch;
    let firstAttempt = true;
    while (!this.stopped && !this.terminalSeen) {
      this.status(firstAttempt ? "connecting" : "reconnecting");
      firstAttempt = false;
      this.controller = new AbortController();
      try {
        const url =
          `${this.options.baseUrl}/sessions/${this.options.sessionId}` +
          `/events?last_seq=${this.cursor}`;
        const response = await fetchImpl(url, {
          signal: this.controller.signal,
          headers: { accept: "text/event-stream" },
        });
        if (!response.ok || !response.body) {
          throw new Error(`stream request failed: ${response.status}`);
        }
        this.status("connected");
        await this.consume(response.body);
        if (this.terminalSeen) break;
        // the server closed without a terminal event: resume from the cursor
      } catch {
        if (this.stopped) break;
      }
      if (!this.stopped && !this.terminalSeen) {
        await new Promise((resolve) =>
          setTimeout(resolve, this.options.retryDelayMs),
        );
      }
    }
    this.status("closed");
  }

  private async consume(body: ReadableStream<Uint8Array>): Promise<void> {
    const reader = body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    try {
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        buffer += decoder.decode(value, { stream: true });
        let boundary = buffer.indexOf("\n\n");
        while (boundary !== -1) {
          const block = buffer.slice(0, boundary);
          buffer = buffer.slice(boundary + 2);
          if (!this.deliver(parseSseBlock(block))) return;
          boundary = buffer.indexOf("\n\n");
        }
      }
    } finally {
      reader.releaseLock();
    }
  }

  /** Returns false when the connection should be torn down (gap or terminal). */
  private deliver(event: LogEvent | null): boolean {
    if (event === null) return true;
    if (event.seq <= this.cursor) return true; // duplicate after reconnect
    if (event.seq > this.cursor + 1) {
      // gap: drop the connection and re-request from the last contiguous seq
      this.controller?.abort();
      return false;
    }
    this.cursor = event.seq;
    this.options.onEvent(event);
    if (event.payload?.terminal) {
      this.terminalSeen = true;
      this.controller?.abort();
      return false;
    }
    return true;
  }
}
