/** Console entry point: hash-routed single page over the HTTP/SSE surface. */

import { ApiClient } from "./api.js";
import { EventStream } from "./events.js";
import { SessionModel, type LevelFilter } from "./model.js";
import {
  gateArtifactFor,
  renderGatePanel,
  renderLaunchForm,
  renderLogView,
  renderResultsPanel,
  renderSessionList,
  renderStatusMonitor,
} from "./ui.js";

const client = new ApiClient("");

class SessionPage {
  private model = new SessionModel();
  private stream: EventStream | null = null;
  private pollTimer: number | null = null;

  constructor(
    private root: HTMLElement,
    private sessionId: string,
  ) {}

  async open(): Promise<void> {
    this.model.applyView(await client.getSession(this.sessionId));
    this.stream = new EventStream({
      baseUrl: "",
      sessionId: this.sessionId,
      fromSeq: 0,
      onEvent: (event) => {
        this.model.applyEvent(event);
        this.render();
      },
      onStatus: (status) => {
        this.model.applyStatus(status);
        this.render();
      },
    });
    void this.stream.start();
    this.pollTimer = window.setInterval(() => void this.refreshView(), 1500);
    this.render();
  }

  close(): void {
    this.stream?.stop();
    if (this.pollTimer !== null) window.clearInterval(this.pollTimer);
  }

  private async refreshView(): Promise<void> {
    this.model.applyView(await client.getSession(this.sessionId));
    if (this.model.terminal() && this.pollTimer !== null) {
      window.clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
    this.render();
  }

  private render(): void {
    const view = this.model.view;
    this.root.replaceChildren();
    this.root.append(renderStatusMonitor(this.model));

    if (view && this.model.awaitingGate()) {
      const artifactName = gateArtifactFor(view);
      if (artifactName) {
        void client
          .getArtifact(this.sessionId, artifactName)
          .then((artifactJson) => {
            this.root.append(
              renderGatePanel(view, artifactName, artifactJson, {
                onApprove: async () => {
                  await client.postGate(this.sessionId, "approve");
                  await this.refreshView();
                },
                onAbort: async () => {
                  await client.postGate(this.sessionId, "abort");
                  await this.refreshView();
                },
                onEdit: async (artifact, content) => {
                  await client.postGate(this.sessionId, "edit", {
                    artifact,
                    content: content as Record<string, unknown>,
                  });
                  await this.refreshView();
                },
              }),
            );
          });
      }
    }

    if (view && view.phase === "completed") {
      void client
        .getArtifact(this.sessionId, "reviewing_portfolio")
        .then((artifact) => {
          this.root.append(
            renderResultsPanel(
              artifact as Parameters<typeof renderResultsPanel>[0],
              view.artifacts,
              (name) => `/sessions/${this.sessionId}/artifacts/${name}`,
            ),
          );
        });
    }

    this.root.append(
      renderLogView(this.model, (filter: LevelFilter) => {
        this.model.levelFilter = filter;
        this.render();
      }),
    );
  }
}

let currentPage: SessionPage | null = null;

async function route(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  currentPage?.close();
  currentPage = null;
  root.replaceChildren();

  const match = window.location.hash.match(/^#\/s\/(.+)$/);
  if (match && match[1]) {
    currentPage = new SessionPage(root, match[1]);
    await currentPage.open();
    return;
  }

  root.append(
    renderLaunchForm({
      onLaunch: async (topic, numIdeas) => {
        const view = await client.createSession(topic, numIdeas);
        window.location.hash = `#/s/${view.session_id}`;
      },
    }),
    renderSessionList(await client.listSessions(), (sessionId) => {
      window.location.hash = `#/s/${sessionId}`;
    }),
  );
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
