/** DOM renderers for the four console regions: session control, status
 * monitor, final output, and live logs. No framework; plain elements. */

import { ApiClient, ApiError, type SessionView } from "./api.js";
import { PHASES, type LevelFilter, SessionModel } from "./model.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

// -- region (a): session control ---------------------------------------------

export interface LaunchHandlers {
  onLaunch: (topic: string, numIdeas: number) => Promise<void>;
}

export function renderLaunchForm(handlers: LaunchHandlers): HTMLFormElement {
  const form = el("form", "launch-form");
  const topic = el("input", "topic-input");
  topic.placeholder = "Research topic";
  topic.name = "topic";
  const numIdeas = el("input", "num-ideas-input");
  numIdeas.type = "number";
  numIdeas.value = "3";
  numIdeas.min = "1";
  numIdeas.name = "num_ideas";
  const submit = el("button", "launch-button", "Launch session");
  submit.type = "submit";
  submit.disabled = true;
  const error = el("p", "form-error");

  topic.addEventListener("input", () => {
    submit.disabled = topic.value.trim().length === 0;
  });
  form.addEventListener("submit", (raised) => {
    raised.preventDefault();
    error.textContent = "";
    handlers
      .onLaunch(topic.value.trim(), Number(numIdeas.value) || 3)
      .catch((failure: unknown) => {
        error.textContent =
          failure instanceof ApiError
            ? `launch rejected: ${failure.detail}`
            : "network failure, retry";
      });
  });
  form.append(topic, numIdeas, submit, error);
  return form;
}

// -- region (b): status monitor ------------------------------------------------

export function renderPhaseRibbon(model: SessionModel): HTMLElement {
  const ribbon = el("ol", "phase-ribbon");
  const states = model.ribbon();
  for (const phase of PHASES) {
    const item = el("li", `phase phase-${states[phase]}`, phase);
    item.dataset.phase = phase;
    item.dataset.state = states[phase];
    ribbon.append(item);
  }
  const terminal = el("li", `phase phase-terminal state-${model.phase()}`);
  terminal.textContent = model.terminal() ? model.phase() : "…";
  terminal.dataset.phase = "terminal";
  ribbon.append(terminal);
  return ribbon;
}

export function renderStatusMonitor(model: SessionModel): HTMLElement {
  const panel = el("section", "status-monitor");
  panel.append(renderPhaseRibbon(model));
  const view = model.view;
  const meta = el("dl", "status-meta");
  const rows: Array<[string, string]> = [
    ["session", view?.session_id ?? "-"],
    ["stream", model.streamStatus],
    ["elapsed", view ? `${view.progress.elapsed_seconds.toFixed(1)}s` : "-"],
    [
      "progress",
      view
        ? `${view.progress.phase_ordinal}/${view.progress.total_phases}`
        : "-",
    ],
  ];
  for (const [label, value] of rows) {
    meta.append(el("dt", undefined, label), el("dd", undefined, value));
  }
  const agents = el("ul", "agent-activity");
  for (const [agent, count] of model.agentActivity().slice(0, 8)) {
    agents.append(el("li", "agent", `${agent} (${count})`));
  }
  panel.append(meta, agents);
  if (view?.failure) {
    panel.append(
      el("p", "failure", `${view.failure.type}: ${view.failure.error}`),
    );
  }
  return panel;
}

// -- region (d): live logs ------------------------------------------------------

export function renderLogView(
  model: SessionModel,
  onFilterChange: (filter: LevelFilter) => void,
): HTMLElement {
  const panel = el("section", "log-view");
  const filter = el("select", "level-filter");
  for (const level of ["all", "info", "warning", "error"] as const) {
    const option = el("option", undefined, level);
    option.value = level;
    filter.append(option);
  }
  filter.value = model.levelFilter;
  filter.addEventListener("change", () =>
    onFilterChange(filter.value as LevelFilter),
  );
  const list = el("ul", "log-lines");
  for (const event of model.filteredEvents()) {
    const line = el(
      "li",
      `log-line level-${event.level}`,
      `[${event.seq}] ${event.phase} ${event.agent_tag}: ${event.message}`,
    );
    line.dataset.seq = String(event.seq);
    list.append(line);
  }
  panel.append(filter, list);
  return panel;
}

// -- gate panel -------------------------------------------------------------------

export interface GateHandlers {
  onApprove: () => Promise<void>;
  onAbort: () => Promise<void>;
  onEdit: (artifact: string, content: unknown) => Promise<void>;
}

export function renderGatePanel(
  view: SessionView,
  artifactName: string,
  artifactJson: unknown,
  handlers: GateHandlers,
): HTMLElement {
  const panel = el("section", "gate-panel");
  panel.append(
    el("h2", undefined, `Gate after ${view.gate_phase ?? "?"}`),
    el("p", "gate-artifact-name", artifactName),
  );
  const editor = el("textarea", "gate-editor");
  editor.value = JSON.stringify(artifactJson, null, 2);
  editor.rows = 16;
  const error = el("p", "gate-error");

  const approve = el("button", "gate-approve", "Approve");
  const abort = el("button", "gate-abort", "Abort");
  const applyEdit = el("button", "gate-edit", "Apply edit");
  const report = (failure: unknown) => {
    error.textContent =
      failure instanceof ApiError
        ? `rejected (${failure.status}): ${failure.detail}`
        : String(failure);
  };
  approve.addEventListener("click", () => handlers.onApprove().catch(report));
  abort.addEventListener("click", () => handlers.onAbort().catch(report));
  applyEdit.addEventListener("click", () => {
    // client-side validation: the payload must at least be well-formed JSON
    let parsed: unknown;
    try {
      parsed = JSON.parse(editor.value);
    } catch (failure) {
      error.textContent = `invalid JSON: ${String(failure)}`;
      return;
    }
    handlers.onEdit(artifactName, parsed).catch(report);
  });

  panel.append(editor, approve, applyEdit, abort, error);
  return panel;
}

// -- region (c): final output -------------------------------------------------------

interface PortfolioArtifact {
  portfolio: {
    ranked: Array<{
      idea_id: string;
      unified: number;
      meta_review: string;
    }>;
    selected_ids: string[];
    bands: Record<string, string>;
    statistics: Record<string, number>;
  };
  ideas: Array<{
    idea_id: string;
    title: string;
    strategy: string;
    lineage: string[];
    facets: {
      problem_statement: string;
      proposed_methodology: string;
      experimental_validation: string;
    };
  }>;
}

export function renderResultsPanel(
  artifact: PortfolioArtifact,
  artifactNames: string[],
  makeDownloadHref: (name: string) => string,
): HTMLElement {
  const panel = el("section", "results-panel");
  const { portfolio, ideas } = artifact;
  const byId = new Map(ideas.map((idea) => [idea.idea_id, idea]));
  panel.append(
    el(
      "p",
      "portfolio-stats",
      `mean unified ${portfolio.statistics["mean_unified"]?.toFixed(2)} over ` +
        `${portfolio.ranked.length} reviewed ideas`,
    ),
  );
  const cards = el("div", "idea-cards");
  for (const evaluation of portfolio.ranked) {
    if (!portfolio.selected_ids.includes(evaluation.idea_id)) continue;
    const idea = byId.get(evaluation.idea_id);
    const card = el("article", "idea-card");
    card.dataset.ideaId = evaluation.idea_id;
    card.append(
      el("h3", "idea-title", idea?.title ?? evaluation.idea_id),
      el(
        "p",
        "idea-score",
        `unified ${evaluation.unified.toFixed(2)} · ` +
          `${portfolio.bands[evaluation.idea_id] ?? "?"} · ${idea?.strategy ?? ""}`,
      ),
      el("p", "idea-problem", idea?.facets.problem_statement.slice(0, 280) ?? ""),
      el("p", "idea-meta-review", evaluation.meta_review.slice(0, 280)),
    );
    if (idea && idea.lineage.length > 0) {
      const lineage = el("p", "idea-lineage", "lineage: ");
      for (const parent of idea.lineage) {
        const link = el("a", "lineage-link", parent);
        link.href = `#idea-${parent}`;
        lineage.append(link, document.createTextNode(" "));
      }
      card.append(lineage);
    }
    cards.append(card);
  }
  panel.append(cards);

  const downloads = el("ul", "downloads");
  for (const name of artifactNames) {
    const item = el("li");
    const link = el("a", "download-link", name);
    link.href = makeDownloadHref(name);
    link.setAttribute("download", `${name}.json`);
    item.append(link);
    downloads.append(item);
  }
  panel.append(downloads);
  return panel;
}

// -- shell ------------------------------------------------------------------------

export function renderSessionList(
  sessions: SessionView[],
  onOpen: (sessionId: string) => void,
): HTMLElement {
  const list = el("ul", "session-list");
  for (const view of sessions) {
    const item = el("li", "session-item");
    const link = el("a", undefined, `${view.session_id} — ${view.phase}`);
    link.href = `#/s/${view.session_id}`;
    link.addEventListener("click", () => onOpen(view.session_id));
    item.append(link);
    list.append(item);
  }
  return list;
}

export function gateArtifactFor(view: SessionView): string | null {
  // artifact the operator most plausibly wants to touch at each gate
  const preferred: Record<string, string> = {
    curating: "curating_papers",
    generating: "generating_ideas_refined",
    selecting: "selecting_ideas_selected",
    reviewing: "reviewing_portfolio",
  };
  if (!view.gate_phase) return null;
  const name = preferred[view.gate_phase];
  return name && view.artifacts.includes(name) ? name : null;
}

export { ApiClient };
