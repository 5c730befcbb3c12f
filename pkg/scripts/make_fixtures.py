#!/usr/bin/env python3
"""Regenerate the bundled scripted fixture set.

Runs the whole pipeline against the deterministic synthetic author, records
every chat request/response pair, and freezes them (plus the recorded
literature search responses) under src/ideapipe/fixtures/ktruss/. Then
replays the recording through the scripted backend to prove the set is
complete and the run is reproducible.

Usage: python scripts/make_fixtures.py [--check-only]
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from ideapipe.config import PipelineConfig
from ideapipe.gateway import RecordingChatBackend, StubEmbeddingBackend
from ideapipe.gateway.synthetic import SyntheticAuthorBackend
from ideapipe.orchestrator import BackendBundle, Orchestrator
from ideapipe.retrieval import FixtureSearchClient

FIXTURE_DIR = ROOT / "src" / "ideapipe" / "fixtures" / "ktruss"

TOPIC = "Scalable and robust algorithms for the k-truss breaking problem"
SEED = 0
NUM_IDEAS = 3
SYNTH_SEED = 1

# Hand-written offline literature pool. The graph-mining content is fixture
# text only; citation counts intentionally span orders of magnitude.
PAPERS = [
    ("kt-001", "Truss decomposition of massive networks", 2012, "PVLDB", 640,
     ["graph mining", "k-truss"],
     "We present external-memory and in-memory algorithms for truss decomposition, "
     "computing the trussness of every edge in graphs with billions of edges. "
     "Careful triangle enumeration and peeling order make the computation practical."),
    ("kt-002", "Parallel index construction for truss queries", 2016, "SIGMOD", 310,
     ["parallel algorithms", "index"],
     "A parallel index over edge trussness answers community queries in milliseconds. "
     "We exploit shared-memory parallel peeling and compressed adjacency layouts."),
    ("kt-003", "Incremental truss maintenance in dynamic graphs", 2017, "ICDE", 220,
     ["dynamic graphs", "maintenance"],
     "Edge insertions and deletions trigger cascading trussness updates. "
     "We bound the affected region and maintain the decomposition incrementally "
     "without global recomputation."),
    ("kt-004", "Breaking cohesive subgraphs: edge deletion attacks on k-truss", 2020,
     "CIKM", 85, ["attack", "edge deletion"],
     "We study the minimum edge set whose removal leaves no k-truss, prove hardness, "
     "and give greedy and local-search heuristics with empirical guarantees on social graphs."),
    ("kt-005", "Approximation algorithms for truss disruption budgets", 2022, "WWW", 40,
     ["approximation", "budget"],
     "Submodular-style relaxations yield bicriteria approximation algorithms for "
     "dismantling all k-trusses under a deletion budget, with provable gaps on random graphs."),
    ("kt-006", "Community search with triangle-connected truss models", 2014, "SIGMOD", 415,
     ["community search", "triangle"],
     "Triangle-connected k-truss communities support efficient online search. "
     "We design indexes that report maximal communities containing query vertices."),
    ("kt-007", "Distributed truss decomposition with vertex-centric frameworks", 2018,
     "VLDB", 150, ["distributed", "vertex-centric"],
     "A vertex-centric formulation of truss peeling runs on partitioned graphs, "
     "trading replication for communication rounds across workers."),
    ("kt-008", "Streaming triangle counting with bounded-error sketches", 2015, "KDD", 520,
     ["streaming", "sketches"],
     "Probabilistic sketches estimate local triangle counts in one pass over an edge "
     "stream, with additive error bounds that transfer to downstream cohesion metrics."),
    ("kt-009", "Temporal contact networks and containment interventions", 2021,
     "Nature Communications", 275, ["temporal networks", "epidemics"],
     "Interventions that sever structurally important contacts contain spreading "
     "processes on temporal networks. We compare structural proxies including "
     "dense-subgraph membership."),
    ("kt-010", "Learning edge importance for graph dismantling", 2022, "NeurIPS", 130,
     ["graph neural networks", "dismantling"],
     "A graph neural network predicts which edges accelerate dismantling objectives, "
     "generalizing from small synthetic graphs to large real networks."),
    ("kt-011", "Hierarchical dense subgraph hierarchies: nucleus decompositions", 2015,
     "WWW", 290, ["nucleus decomposition", "density"],
     "Nucleus decompositions generalize cores and trusses into a hierarchy of dense "
     "subgraphs, computed via higher-order peeling."),
    ("kt-012", "Local algorithms for truss membership without global peeling", 2019,
     "ICDE", 95, ["local algorithms", "membership"],
     "We answer whether an edge belongs to a k-truss by exploring a bounded "
     "neighborhood, avoiding full decomposition for localized queries."),
    ("kt-013", "GPU-accelerated triangle enumeration at scale", 2020, "SC", 110,
     ["GPU", "triangle enumeration"],
     "Load-balanced intersection kernels enumerate triangles on billion-edge graphs, "
     "feeding cohesion analytics with order-of-magnitude speedups."),
    ("kt-014", "Robustness of social communities under targeted edge removal", 2018,
     "ASONAM", 60, ["robustness", "social networks"],
     "We measure how community structure degrades as adversaries remove edges by "
     "betweenness, embeddedness, and support, and identify brittle regimes."),
    ("kt-015", "Minimum edge interdiction for dense subgraph elimination", 2023,
     "AAAI", 25, ["interdiction", "optimization"],
     "Integer programs and LP roundings interdict dense subgraphs with few deletions; "
     "we characterize instances where local reasoning is provably sufficient."),
    ("kt-016", "Sampling-based estimation of trussness distributions", 2021, "VLDB", 55,
     ["sampling", "estimation"],
     "Wedge and triangle sampling estimate the distribution of edge trussness without "
     "exact decomposition, enabling fast what-if analysis."),
    ("kt-017", "Cascading failures in interdependent infrastructure graphs", 2016,
     "Physica A", 180, ["cascading failures", "infrastructure"],
     "Edge failures propagate across coupled infrastructure layers; dense cores both "
     "shield and amplify cascades depending on coupling strength."),
    ("kt-018", "Anchored densest substructure preservation under deletion", 2022,
     "KDD", 45, ["anchoring", "preservation"],
     "Anchoring a few edges protects dense substructures from deletion attacks; we "
     "give complexity results and scalable anchoring heuristics."),
    ("kt-019", "Batch-dynamic parallel algorithms for cohesion maintenance", 2023,
     "SPAA", 30, ["batch-dynamic", "parallel"],
     "Batch-dynamic updates amortize cascading recomputation for core and truss "
     "maintenance, with work bounds parameterized by the affected subgraph."),
    ("kt-020", "Explaining structural importance in graph mining pipelines", 2024,
     "ICML", 15, ["explainability", "graph mining"],
     "We attribute structural importance scores to interpretable subgraph features, "
     "auditing learned edge rankings used in intervention planning."),
]


def paper_dicts() -> list[dict]:
    records = []
    for pid, title, year, venue, citations, keywords, abstract in PAPERS:
        records.append({
            "paper_id": pid,
            "title": title,
            "abstract": abstract,
            "authors": [f"Author {pid.upper()}-A", f"Author {pid.upper()}-B"],
            "year": year,
            "venue": venue,
            "citation_count": citations,
            "keywords": keywords,
            "relevance": 0.0,
            "citation_norm": 0.0,
            "combined_score": 0.0,
        })
    return records


def build_search_fixture(queries: list[str]) -> dict:
    """Deterministically spread the paper pool across the query plan.

    Every query gets a slice; many papers surface under several queries so
    the id-merge path is exercised.
    """
    records = paper_dicts()
    mapping: dict[str, list[dict]] = {}
    for i, query in enumerate(queries):
        start = (i * 3) % len(records)
        slice_ = [records[(start + j) % len(records)] for j in range(6)]
        mapping[query] = slice_
    return {"queries": mapping}


def config() -> PipelineConfig:
    return PipelineConfig(topic=TOPIC, num_ideas=NUM_IDEAS, backend="scripted",
                          rng_seed=SEED)


def compute_query_plan() -> list[str]:
    """Queries the pipeline will issue, derived with the same code paths."""
    from ideapipe.gateway import Gateway
    from ideapipe.retrieval import build_query_plan, decompose_topic

    gateway = Gateway(SyntheticAuthorBackend(SYNTH_SEED), StubEmbeddingBackend())
    concepts = decompose_topic(gateway, TOPIC)
    plan = build_query_plan(concepts, cap=config().query_cap)
    return list(plan.queries)


def record(search_fixture: dict) -> dict[str, str]:
    recorder = RecordingChatBackend(SyntheticAuthorBackend(SYNTH_SEED))

    def factory(cfg, events):
        return BackendBundle(
            chat=recorder,
            embedding=StubEmbeddingBackend(cfg.embedding_seed, cfg.embedding_dim),
            search=FixtureSearchClient(search_fixture["queries"], events=events),
        )

    with tempfile.TemporaryDirectory() as tmp:
        orchestrator = Orchestrator(tmp, backend_factory=factory)
        state = orchestrator.create_session(config())
        state = orchestrator.run(state.session_id)
        if state.phase != "completed":
            raise SystemExit(f"recording run did not complete: {state.phase} {state.failure}")
        summary = summarize(orchestrator, state.session_id)
    print(f"recorded {len(recorder.recorded)} chat fixtures; run summary: {summary}")
    if not 1 <= summary["high_quality"] <= NUM_IDEAS:
        raise SystemExit("calibration drift: adjust the synthetic seed or review ranges")
    if summary["selected"] != NUM_IDEAS:
        raise SystemExit(f"expected {NUM_IDEAS} selected ideas, got {summary['selected']}")
    return dict(recorder.recorded)


def summarize(orchestrator: Orchestrator, session_id: str) -> dict:
    portfolio = orchestrator.store(session_id).read("reviewing_portfolio")["portfolio"]
    return {
        "reviewed": len(portfolio["ranked"]),
        "high_quality": len(portfolio["high_quality_ids"]),
        "selected": len(portfolio["selected_ids"]),
        "mean_unified": round(portfolio["statistics"]["mean_unified"], 3),
    }


def verify(fixture_dir: Path) -> None:
    with tempfile.TemporaryDirectory() as tmp:
        orchestrator = Orchestrator(tmp, fixtures_dir=fixture_dir)
        state = orchestrator.create_session(config())
        state = orchestrator.run(state.session_id)
        if state.phase != "completed":
            raise SystemExit(f"replay did not complete: {state.phase} {state.failure}")
        print(f"replay ok: {summarize(orchestrator, state.session_id)}")


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--check-only", action="store_true",
                        help="only replay the existing fixture set")
    args = parser.parse_args()

    if args.check_only:
        verify(FIXTURE_DIR)
        return

    queries = compute_query_plan()
    search_fixture = build_search_fixture(queries)
    chat_fixture = record(search_fixture)

    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    (FIXTURE_DIR / "search.json").write_text(
        json.dumps(search_fixture, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (FIXTURE_DIR / "chat.json").write_text(
        json.dumps({"responses": chat_fixture}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")
    (FIXTURE_DIR / "meta.json").write_text(
        json.dumps({
            "topic": TOPIC,
            "rng_seed": SEED,
            "num_ideas": NUM_IDEAS,
            "synthetic_seed": SYNTH_SEED,
            "note": "regenerate with scripts/make_fixtures.py",
        }, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"fixtures written to {FIXTURE_DIR}")
    verify(FIXTURE_DIR)


if __name__ == "__main__":
    main()
