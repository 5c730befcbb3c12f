"""Command-line client: run sessions synchronously, resume, inspect, export,
or serve the HTTP API. All pipeline logic lives in the core package."""

from __future__ import annotations

import json
import shutil
import sys
import threading
from pathlib import Path

import click

from .config import PipelineConfig
from .errors import IdeaPipeError
from .orchestrator import Orchestrator

DEFAULT_STATE_DIR = "./ideapipe-state"


def _print_events_until_terminal(orchestrator: Orchestrator, session_id: str,
                                 stop: threading.Event) -> threading.Thread:
    log = orchestrator.event_log(session_id)
    replay, live = log.subscribe(0)

    def pump():
        delivered = 0
        for event in replay:
            click.echo(_format_event(event), err=True)
            delivered = event.seq
        while not stop.is_set():
            try:
                event = live.get(timeout=0.2)
            except Exception:
                continue
            if event.seq <= delivered:
                continue
            delivered = event.seq
            click.echo(_format_event(event), err=True)
            if event.terminal:
                return
        log.unsubscribe(live)

    thread = threading.Thread(target=pump, daemon=True)
    thread.start()
    return thread


def _format_event(event) -> str:
    return f"[{event.seq:>4}] {event.phase:<12} {event.level:<7} {event.agent_tag}: {event.message}"


def _resolve_gates_interactively(orchestrator: Orchestrator, session_id: str):
    state = orchestrator.load_state(session_id)
    while state.phase == "awaiting_gate":
        click.echo(f"\n-- gate after phase {state.gate_phase} --", err=True)
        answer = click.prompt(
            "action (approve / abort / edit <artifact> <json-file>)",
            default="approve", err=True,
        ).strip()
        if answer.startswith("edit"):
            try:
                _, artifact, payload_path = answer.split(maxsplit=2)
                content = json.loads(Path(payload_path).read_text(encoding="utf-8"))
                orchestrator.resolve_gate(session_id, "edit",
                                          {"artifact": artifact, "content": content})
                continue
            except (ValueError, OSError, json.JSONDecodeError, IdeaPipeError) as exc:
                click.echo(f"edit failed: {exc}", err=True)
                continue
        orchestrator.resolve_gate(session_id, "abort" if answer == "abort" else "approve")
        state = orchestrator.run(session_id)
    return state


def _finish(orchestrator: Orchestrator, state) -> int:
    if state.phase == "completed":
        portfolio = orchestrator.store(state.session_id).path_for("reviewing_portfolio")
        click.echo(str(portfolio))
        return 0
    failure = state.failure or {}
    click.echo(f"session {state.session_id} ended in {state.phase}: "
               f"{failure.get('type', '')} {failure.get('error', '')}", err=True)
    return 1


@click.group()
def main() -> None:
    """Research ideation sessions: curate, generate, select, review."""


@main.command()
@click.option("--topic", required=True, help="Seed research topic.")
@click.option("--num-ideas", type=int, default=None, help="Requested portfolio size.")
@click.option("--backend", type=click.Choice(["scripted", "live"]), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON file of config fields; flags override it.")
@click.option("--out", "state_dir", default=DEFAULT_STATE_DIR, show_default=True,
              help="State directory for sessions and artifacts.")
@click.option("--seed", type=int, default=None, help="Session RNG seed.")
@click.option("--hitl", is_flag=True, help="Pause at a human gate after every phase.")
@click.option("--fixtures", type=click.Path(exists=True), default=None,
              help="Scripted fixture directory (defaults to the bundled set).")
def run(topic, num_ideas, backend, config_path, state_dir, seed, hitl, fixtures) -> None:
    """Run one session synchronously; events stream to stderr, and the final
    portfolio path prints to stdout."""
    try:
        config = PipelineConfig.load(config_path) if config_path else PipelineConfig()
        overrides: dict = {"topic": topic}
        if num_ideas is not None:
            overrides["num_ideas"] = num_ideas
        if backend is not None:
            overrides["backend"] = backend
        if seed is not None:
            overrides["rng_seed"] = seed
        if hitl:
            overrides["hitl"] = "gate_each_phase"
        config = config.with_overrides(overrides)

        orchestrator = Orchestrator(state_dir, fixtures_dir=fixtures)
        state = orchestrator.create_session(config)
        stop = threading.Event()
        printer = _print_events_until_terminal(orchestrator, state.session_id, stop)
        state = orchestrator.run(state.session_id)
        if state.phase == "awaiting_gate":
            state = _resolve_gates_interactively(orchestrator, state.session_id)
        printer.join(timeout=2.0)
        stop.set()
        sys.exit(_finish(orchestrator, state))
    except IdeaPipeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.argument("session_id")
@click.option("--out", "state_dir", default=DEFAULT_STATE_DIR, show_default=True)
@click.option("--fixtures", type=click.Path(exists=True), default=None)
def resume(session_id, state_dir, fixtures) -> None:
    """Continue a session from its first incomplete phase."""
    try:
        orchestrator = Orchestrator(state_dir, fixtures_dir=fixtures)
        orchestrator.load_state(session_id)  # NotFound before any side effects
        stop = threading.Event()
        printer = _print_events_until_terminal(orchestrator, session_id, stop)
        state = orchestrator.resume(session_id)
        if state.phase == "awaiting_gate":
            state = _resolve_gates_interactively(orchestrator, session_id)
        printer.join(timeout=2.0)
        stop.set()
        sys.exit(_finish(orchestrator, state))
    except IdeaPipeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.argument("session_id")
@click.option("--phase", default=None, help="Only list artifacts of this phase.")
@click.option("--out", "state_dir", default=DEFAULT_STATE_DIR, show_default=True)
def inspect(session_id, phase, state_dir) -> None:
    """Show a session's phase, stats, and artifact listing."""
    try:
        orchestrator = Orchestrator(state_dir)
        state = orchestrator.load_state(session_id)
        summary = {
            "session_id": state.session_id,
            "phase": state.phase,
            "gate_phase": state.gate_phase,
            "completed_phases": state.completed_phases,
            "stats": state.stats,
            "failure": state.failure,
            "artifacts": [
                name for name in sorted(state.artifact_index)
                if phase is None or name.startswith(f"{phase}_")
            ],
        }
        click.echo(json.dumps(summary, indent=2))
    except IdeaPipeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.argument("session_id")
@click.option("--dest", required=True, type=click.Path())
@click.option("--out", "state_dir", default=DEFAULT_STATE_DIR, show_default=True)
def export(session_id, dest, state_dir) -> None:
    """Copy a session's artifacts and manifest into a destination directory."""
    try:
        orchestrator = Orchestrator(state_dir)
        orchestrator.load_state(session_id)
        store = orchestrator.store(session_id)
        destination = Path(dest)
        destination.mkdir(parents=True, exist_ok=True)
        for name in store.names():
            shutil.copy2(store.path_for(name), destination / f"{name}.json")
        shutil.copy2(store.manifest_path, destination / "manifest.json")
        click.echo(str(destination))
    except IdeaPipeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--state-dir", default=DEFAULT_STATE_DIR, show_default=True)
@click.option("--backend", type=click.Choice(["scripted", "live"]), default="scripted",
              show_default=True)
@click.option("--fixtures", type=click.Path(exists=True), default=None)
def serve(host, port, state_dir, backend, fixtures) -> None:
    """Start the HTTP service the console UI talks to."""
    import uvicorn

    from .service import create_app

    app = create_app(state_dir, fixtures_dir=fixtures, default_backend=backend)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
