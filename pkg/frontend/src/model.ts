/** Client-side session model: the server view plus the buffered event log.
 * Everything rendered derives from these two inputs, so a hard refresh that
 * refetches the view and replays the log reconstructs the same screen. */

import type { SessionView } from "./api.js";
import type { LogEvent, StreamStatus } from "./events.js";

export const PHASES = ["curating", "generating", "selecting", "reviewing"] as const;
export type PhaseName = (typeof PHASES)[number];

export type PhaseState = "pending" | "active" | "done";
export type LevelFilter = "all" | "info" | "warning" | "error";

export class SessionModel {
  view: SessionView | null = null;
  events: LogEvent[] = [];
  streamStatus: StreamStatus = "connecting";
  levelFilter: LevelFilter = "all";

  applyView(view: SessionView): void {
    this.view = view;
  }

  /** Ordered, gap-free append; the stream client guarantees contiguity. */
  applyEvent(event: LogEvent): void {
    const last = this.lastSeq();
    if (event.seq <= last) return;
    if (event.seq !== last + 1) {
      throw new Error(`event buffer gap: have ${last}, got ${event.seq}`);
    }
    this.events.push(event);
  }

  applyStatus(status: StreamStatus): void {
    this.streamStatus = status;
  }

  lastSeq(): number {
    const last = this.events[this.events.length - 1];
    return last ? last.seq : 0;
  }

  /** The latest server-reported phase (events run ahead of polled views). */
  phase(): string {
    const last = this.events[this.events.length - 1];
    if (last) {
      const outcome = last.payload?.["outcome"];
      if (last.payload?.terminal && typeof outcome === "string") return outcome;
      if (last.phase !== "created") return last.phase;
    }
    return this.view?.phase ?? "created";
  }

  terminal(): boolean {
    const phase = this.phase();
    return phase === "completed" || phase === "failed";
  }

  awaitingGate(): boolean {
    return this.view?.phase === "awaiting_gate";
  }

  /** Ribbon state for the four pipeline phases. */
  ribbon(): Record<PhaseName, PhaseState> {
    const current = this.phase();
    const completedCount =
      current === "completed"
        ? PHASES.length
        : (this.view?.progress.phase_ordinal ?? 0);
    const states = {} as Record<PhaseName, PhaseState>;
    PHASES.forEach((name, index) => {
      if (index < completedCount) states[name] = "done";
      else if (name === current) states[name] = "active";
      else states[name] = "pending";
    });
    return states;
  }

  filteredEvents(): LogEvent[] {
    if (this.levelFilter === "all") return this.events;
    if (this.levelFilter === "warning") {
      return this.events.filter(
        (e) => e.level === "warning" || e.level === "error",
      );
    }
    return this.events.filter((e) => e.level === this.levelFilter);
  }

  /** Distinct agents seen so far with their event counts (activity panel). */
  agentActivity(): Array<[string, number]> {
    const counts = new Map<string, number>();
    for (const event of this.events) {
      counts.set(event.agent_tag, (counts.get(event.agent_tag) ?? 0) + 1);
    }
    return [...counts.entries()].sort((a, b) => b[1] - a[1]);
  }
}
