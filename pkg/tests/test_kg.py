"""Knowledge graph: parsing, four-phase construction, integrity properties."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph_from_edges, make_gateway
from ideapipe.errors import EmptyGraph
from ideapipe.events import CollectorSink
from ideapipe.kg import (
    KnowledgeGraph,
    canonical_name,
    enhance_relations,
    enrich_batch,
    expand_degree,
    merge_extraction,
    parse_extraction,
    sample_top_degree,
    seed_core,
)
from ideapipe.retrieval import PaperRecord


class TestParseExtraction:
    def test_typed_entity_auto_created_endpoint_and_relation(self):
        text = "ENTITIES:\n- GraphX (type: method)\nRELATIONSHIPS:\n- GraphX -> uses -> Pregel"
        entities, relations = parse_extraction(text)
        assert [(e.name, e.entity_type) for e in entities] == [
            ("GraphX", "method"), ("Pregel", "concept")]
        assert [(r.source, r.relation_type, r.target) for r in relations] == [
            ("GraphX", "uses", "Pregel")]

    def test_unicode_arrows_accepted(self):
        entities, relations = parse_extraction("RELATIONSHIPS:\n- A → improves → B")
        assert relations[0].relation_type == "improves"
        assert {e.name for e in entities} == {"A", "B"}

    def test_empty_sections_yield_empty_sets(self):
        assert parse_extraction("ENTITIES:\n\nRELATIONSHIPS:\n") == ([], [])

    def test_malformed_relation_skipped_with_warning(self):
        events = CollectorSink()
        _, relations = parse_extraction(
            "RELATIONSHIPS:\n- A -> uses\n- B -> uses -> C", events=events)
        assert len(relations) == 1
        assert any("malformed" in m for m in events.messages("warning"))

    def test_self_relation_skipped(self):
        events = CollectorSink()
        _, relations = parse_extraction("RELATIONSHIPS:\n- A -> uses -> a", events=events)
        assert relations == []
        assert any("self relation" in m for m in events.messages("warning"))


def extraction_reply(entity_count: int, relation_count: int) -> str:
    lines = ["ENTITIES:"]
    for i in range(entity_count):
        lines.append(f"- Entity {i} (type: method)")
    lines.append("RELATIONSHIPS:")
    for i in range(relation_count):
        lines.append(f"- Entity {i} -> uses -> Entity {i + 1}")
    return "\n".join(lines)


class TestSeedAndMerge:
    def test_seed_core_fixture_counts_and_phase_log(self):
        gateway, _ = make_gateway(lambda req: extraction_reply(12, 8))
        graph = KnowledgeGraph()
        seed_core(gateway, graph, "topic")
        assert len(graph.entities) == 12
        assert len(graph.relations) == 8
        assert graph.phase_log[0] == {"phase": 1, "entities_added": 12, "relations_added": 8}

    def test_merge_is_idempotent(self):
        gateway, _ = make_gateway(lambda req: extraction_reply(5, 3))
        graph = KnowledgeGraph()
        seed_core(gateway, graph, "topic")
        snapshot = graph.to_dict()
        entities, relations = parse_extraction(extraction_reply(5, 3))
        added = merge_extraction(graph, entities, relations, phase=1, source_id="topic")
        assert added == (0, 0)
        after = graph.to_dict()
        assert after["entities"] == snapshot["entities"]
        assert after["relations"] == snapshot["relations"]

    def test_existing_canonical_name_appends_provenance_only(self):
        graph = KnowledgeGraph()
        graph.upsert_entity("Graph Mining", "concept", 1, "topic")
        entity, created = graph.upsert_entity("  graph   MINING ", "method", 2, "batch")
        assert not created
        assert len(graph.entities) == 1
        assert entity.provenance == [(1, "topic"), (2, "batch")]

    def test_entities_only_extraction_is_valid(self):
        gateway, _ = make_gateway(lambda req: extraction_reply(4, 0))
        graph = KnowledgeGraph()
        seed_core(gateway, graph, "topic")
        assert len(graph.relations) == 0
        graph.validate()


class TestEnrichBatch:
    def test_fifty_papers_batch_three_issue_seventeen_prompts(self):
        gateway, backend = make_gateway(lambda req: extraction_reply(1, 0))
        graph = KnowledgeGraph()
        graph.upsert_entity("seed", "concept", 1, "topic")
        papers = [PaperRecord(paper_id=f"p{i}", title=f"T{i}") for i in range(50)]
        enrich_batch(gateway, graph, papers, batch_size=3)
        assert len(backend.calls) == 17  # ceil(50 / 3)

    def test_repeated_names_grow_provenance_not_count(self):
        gateway, _ = make_gateway(lambda req: extraction_reply(3, 1))
        graph = KnowledgeGraph()
        seed_core(gateway, graph, "topic")
        before = len(graph.entities)
        enrich_batch(gateway, graph, [PaperRecord(paper_id="p1", title="T")], batch_size=3)
        assert len(graph.entities) == before
        assert any(len(e.provenance) > 1 for e in graph.entities.values())


class TestSampling:
    def test_top_degree_sort_oracle(self):
        graph = graph_from_edges(
            [("A", f"x{i}") for i in range(5)]
            + [("B", f"y{i}") for i in range(3)]
            + [("C", "z0")]
        )
        top = sample_top_degree(graph, 2)
        assert [e.name for e in top] == ["A", "B"]

    def test_k_larger_than_node_count_clamps(self):
        graph = graph_from_edges([("A", "B")])
        assert len(sample_top_degree(graph, 10)) == 2

    def test_tie_breaks_on_canonical_name(self):
        graph = graph_from_edges([("beta", "alpha")])
        top = sample_top_degree(graph, 1)
        assert top[0].name == "alpha"

    def test_empty_graph_raises(self):
        with pytest.raises(EmptyGraph):
            sample_top_degree(KnowledgeGraph(), 3)


class TestExpandDegree:
    def test_small_graph_prompts_one_per_entity(self):
        gateway, backend = make_gateway(lambda req: "ENTITIES:\nRELATIONSHIPS:\n")
        graph = graph_from_edges([("A", "B"), ("C", "D")])
        expand_degree(gateway, graph, k=10)
        assert len(backend.calls) == 4  # clamp to node count

    def test_relations_among_existing_nodes_grow_edges_only(self):
        reply = "RELATIONSHIPS:\n- A -> complements -> D"
        gateway, _ = make_gateway(lambda req: reply)
        graph = graph_from_edges([("A", "B"), ("C", "D")])
        before_entities = len(graph.entities)
        before_relations = len(graph.relations)
        expand_degree(gateway, graph, k=1)
        assert len(graph.entities) == before_entities
        assert len(graph.relations) == before_relations + 1


class TestEnhanceRelations:
    def test_hybrid_sample_split_arithmetic(self):
        # 50 nodes, sample 20 at 0.6 -> 12 top-degree + 8 random distinct others
        sampled_names: list[list[str]] = []

        def handler(req):
            names = [line[2:].split(" (type:")[0]
                     for line in req.bindings["entity_list"].splitlines()]
            sampled_names.append(names)
            return "RELATIONSHIPS:\n"

        gateway, _ = make_gateway(handler)
        graph = graph_from_edges([("hub", f"n{i:02d}") for i in range(10)]
                                 + [(f"n{i:02d}", f"m{i:02d}") for i in range(9)]
                                 + [(f"a{i:02d}", f"b{i:02d}") for i in range(15)])
        assert len(graph.entities) == 50
        enhance_relations(gateway, graph, random.Random(0), sample_size=20,
                          top_fraction=0.6, iterations=2)
        for names in sampled_names:
            assert len(names) == 20
            assert len(set(names)) == 20
        top_12 = {e.name for e in sample_top_degree(graph, 12)}
        assert top_12 <= set(sampled_names[0])

    def test_small_graph_degenerates_to_whole_graph(self):
        gateway, _ = make_gateway(lambda req: "RELATIONSHIPS:\n")
        graph = graph_from_edges([(f"a{i}", f"b{i}") for i in range(5)])  # 10 nodes
        enhance_relations(gateway, graph, random.Random(0), sample_size=20, iterations=1)
        graph.validate()

    def test_unknown_entity_relation_dropped_with_warning(self):
        reply = ("ENTITIES:\n- brand new thing (type: concept)\n"
                 "RELATIONSHIPS:\n- A -> uses -> brand new thing")
        gateway, _ = make_gateway(lambda req: reply)
        events = CollectorSink()
        graph = graph_from_edges([("A", "B"), ("C", "D")])
        before = len(graph.entities)
        enhance_relations(gateway, graph, random.Random(0), sample_size=4,
                          iterations=1, events=events)
        assert len(graph.entities) == before
        warnings = events.messages("warning")
        assert any("may not add entities" in m for m in warnings)
        assert any("unknown entity" in m for m in warnings)
        assert graph.phase_log[-1]["entities_added"] == 0


names_strategy = st.lists(
    st.text(alphabet="abcdefg", min_size=1, max_size=3), min_size=2, max_size=12, unique=True)


class TestIntegrityProperties:
    @given(
        names=names_strategy,
        edges=st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=30),
        seed=st.integers(0, 2**16),
    )
    @settings(max_examples=100, deadline=None)
    def test_randomized_mutations_preserve_invariants(self, names, edges, seed):
        rng = random.Random(seed)
        graph = KnowledgeGraph()
        for name in names:
            graph.upsert_entity(name, "concept", 1, "t")
        ids = sorted(graph.entities)
        for a, b in edges:
            source, target = ids[a % len(ids)], ids[b % len(ids)]
            if source != target:
                graph.add_relation(source, target, rng.choice(["uses", "improves"]), 2, "t")
        graph.validate()
        assert graph.recomputed_degrees() == {i: graph.degree(i) for i in graph.entities}

    @given(names=names_strategy, seed=st.integers(0, 2**16))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_serialization_lossless(self, names, seed):
        rng = random.Random(seed)
        graph = KnowledgeGraph()
        for name in names:
            graph.upsert_entity(name, rng.choice(["concept", "method"]), 1, "t")
        ids = sorted(graph.entities)
        for _ in range(min(10, len(ids))):
            a, b = rng.sample(ids, 2)
            graph.add_relation(a, b, "uses", 1, "t")
        graph.log_phase(1, len(names), len(graph.relations))
        restored = KnowledgeGraph.from_dict(graph.to_dict())
        assert restored.to_dict() == graph.to_dict()
        restored.validate()
