"""Graph-of-thought sampling: depth-first walks over the knowledge graph,
scored for node quality, edge-type diversity, and length."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from ..errors import InvalidPath
from ..events import NULL_SINK, EventSink
from ..kg.model import KnowledgeGraph
from ..scoring import weighted_sum
from .models import ReasoningPath, ResearchPlan

AGENT = "got"

_TOKEN = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class PathWeights:
    node_quality: float = 0.6
    edge_diversity: float = 0.2
    length: float = 0.2


def score_path(
    graph: KnowledgeGraph,
    nodes: list[str] | tuple[str, ...],
    edge_types: list[str] | tuple[str, ...] | None = None,
    *,
    depth: int = 5,
    weights: PathWeights = PathWeights(),
) -> tuple[float, float, float, float]:
    """Score a simple path; returns (node_quality, edge_diversity, length_pref, total).

    node_quality is the mean normalized degree over path nodes,
    edge_diversity the distinct-type fraction over hops, and length_pref
    rewards depth up to the sampling bound.
    """
    if len(nodes) < 2:
        raise InvalidPath("a reasoning path needs at least two nodes")
    if len(set(nodes)) != len(nodes):
        raise InvalidPath("path repeats a node")
    for node in nodes:
        if node not in graph.entities:
            raise InvalidPath(f"unknown entity {node!r}")

    resolved_types: list[str] = []
    for i, (a, b) in enumerate(zip(nodes, nodes[1:])):
        available = graph.edge_types(a, b)
        if not available:
            raise InvalidPath(f"nodes {a!r} and {b!r} are not connected")
        if edge_types is not None:
            declared = edge_types[i]
            if declared not in available:
                raise InvalidPath(f"edge {a!r}->{b!r} has no relation of type {declared!r}")
            resolved_types.append(declared)
        else:
            resolved_types.append(sorted(available)[0])

    max_degree = graph.max_degree()
    node_quality = sum(graph.degree(n) / max_degree for n in nodes) / len(nodes)
    edge_count = len(nodes) - 1
    edge_diversity = len(set(resolved_types)) / edge_count
    length_pref = min(edge_count / depth, 1.0)
    total = weighted_sum(
        [
            (weights.node_quality, node_quality),
            (weights.edge_diversity, edge_diversity),
            (weights.length, length_pref),
        ],
        scale=10,
    )
    return node_quality, edge_diversity, length_pref, total


def _tie_spread(entities, degree_of, rng: random.Random):
    """Degree-descending order with seeded shuffling inside tie groups."""
    groups: dict[int, list] = {}
    for entity in entities:
        groups.setdefault(degree_of(entity), []).append(entity)
    ordered = []
    for degree in sorted(groups, reverse=True):
        group = sorted(groups[degree], key=lambda e: e.canonical)
        rng.shuffle(group)
        ordered.extend(group)
    return ordered


def sample_got_paths(
    graph: KnowledgeGraph,
    rng: random.Random,
    *,
    max_paths: int = 100,
    max_anchor_entities: int = 20,
    start_nodes: int = 10,
    branching: int = 3,
    depth: int = 5,
    min_score: float = 0.5,
    weights: PathWeights = PathWeights(),
    events: EventSink = NULL_SINK,
) -> list[ReasoningPath]:
    """Depth-first path sampling from the top-degree anchors.

    Starts at up to `start_nodes` hubs drawn from the top
    `max_anchor_entities` entities (ties spread by the seeded RNG), expands
    at most `branching` highest-degree unvisited neighbors per step, keeps
    every simple path of at most `depth` edges whose score clears
    `min_score`, and stops at `max_paths` retained paths.
    """
    graph.require_non_empty()
    anchors = _tie_spread(
        sorted(graph.entities.values(), key=lambda e: e.canonical),
        lambda e: graph.degree(e.entity_id),
        rng,
    )[:max_anchor_entities]
    starts = anchors[:min(start_nodes, len(anchors))]

    retained: list[ReasoningPath] = []
    counter = 0

    def visit(path: list[str]) -> None:
        nonlocal counter
        if len(retained) >= max_paths or len(path) - 1 >= depth:
            return
        in_path = set(path)
        neighbor_entities = [
            graph.entities[nid] for nid in graph.neighbors(path[-1]) if nid not in in_path
        ]
        ordered = _tie_spread(
            sorted(neighbor_entities, key=lambda e: e.canonical),
            lambda e: graph.degree(e.entity_id),
            rng,
        )
        for neighbor in ordered[:branching]:
            if len(retained) >= max_paths:
                return
            new_path = path + [neighbor.entity_id]
            nq, ed, lp, total = score_path(graph, new_path, depth=depth, weights=weights)
            if total >= min_score:
                counter += 1
                edge_types = tuple(
                    sorted(graph.edge_types(a, b))[0] for a, b in zip(new_path, new_path[1:])
                )
                retained.append(ReasoningPath(
                    path_id=f"path-{counter:04d}",
                    nodes=tuple(new_path),
                    edge_types=edge_types,
                    node_quality=nq,
                    edge_diversity=ed,
                    length_pref=lp,
                    total=total,
                ))
            visit(new_path)

    for start in starts:
        if len(retained) >= max_paths:
            break
        visit([start.entity_id])

    if not retained:
        events.emit("warning", "graph walk retained no reasoning paths above the score floor",
                    agent_tag=AGENT)
    return retained


def link_bridges(plan: ResearchPlan, paths: list[ReasoningPath], graph: KnowledgeGraph,
                 *, per_facet: int = 3) -> dict[str, list[str]]:
    """Attach each plan facet to the paths whose terminal entity best matches
    the facet's keywords (case-folded token overlap)."""
    facet_texts = {
        "problem_statement": plan.facets.problem_statement,
        "proposed_methodology": plan.facets.proposed_methodology,
        "experimental_validation": plan.facets.experimental_validation,
    }
    bridges: dict[str, list[str]] = {}
    for facet_name, facet_text in facet_texts.items():
        facet_tokens = set(_TOKEN.findall(facet_text.casefold()))
        candidates = []
        for path in paths:
            terminal = graph.entities[path.nodes[-1]]
            overlap = len(facet_tokens & set(_TOKEN.findall(terminal.canonical)))
            if overlap > 0:
                candidates.append((-overlap, -path.total, path.path_id))
        candidates.sort()
        bridges[facet_name] = [path_id for _, _, path_id in candidates[:per_facet]]
    return bridges
