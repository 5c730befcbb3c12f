"""Typed, provenance-tracked knowledge graph with degree and adjacency indexes."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import EmptyGraph

ENTITY_TYPES = {
    "problem", "method", "technique", "concept", "dataset",
    "metric", "application", "author", "institution", "other",
}

_WHITESPACE = re.compile(r"\s+")


def canonical_name(name: str) -> str:
    return _WHITESPACE.sub(" ", name.strip()).casefold()


def normalize_entity_type(declared: str | None) -> str:
    if declared is None or not declared.strip():
        return "concept"
    cleaned = declared.strip().casefold()
    return cleaned if cleaned in ENTITY_TYPES else "other"


@dataclass
class Entity:
    entity_id: str
    name: str
    entity_type: str = "concept"
    provenance: list[tuple[int, str]] = field(default_factory=list)

    @property
    def canonical(self) -> str:
        return canonical_name(self.name)


@dataclass(frozen=True)
class Relation:
    relation_id: str
    source: str
    target: str
    relation_type: str
    provenance: tuple[tuple[int, str], ...] = ()


@dataclass(frozen=True)
class ParsedEntity:
    name: str
    entity_type: str = "concept"


@dataclass(frozen=True)
class ParsedRelation:
    source: str
    relation_type: str
    target: str


class KnowledgeGraph:
    """Single-writer graph; reads are safe once mutation for a phase is done."""

    def __init__(self):
        self.entities: dict[str, Entity] = {}
        self.relations: dict[str, Relation] = {}
        self.phase_log: list[dict] = []
        self._by_canonical: dict[str, str] = {}
        self._relation_keys: set[tuple[str, str, str]] = set()
        self._adjacency: dict[str, dict[str, set[str]]] = {}
        self._degree: dict[str, int] = {}
        self._entity_seq = 0
        self._relation_seq = 0

    # -- lookups ---------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.entities)

    def entity_by_name(self, name: str) -> Entity | None:
        entity_id = self._by_canonical.get(canonical_name(name))
        return self.entities.get(entity_id) if entity_id else None

    def degree(self, entity_id: str) -> int:
        return self._degree.get(entity_id, 0)

    def max_degree(self) -> int:
        return max(self._degree.values(), default=0)

    def neighbors(self, entity_id: str) -> dict[str, set[str]]:
        """neighbor_id -> set of relation types on edges to that neighbor."""
        return self._adjacency.get(entity_id, {})

    def edge_types(self, a: str, b: str) -> set[str]:
        return self._adjacency.get(a, {}).get(b, set())

    # -- mutation ----------------------------------------------------------------

    def upsert_entity(self, name: str, entity_type: str, phase: int, source_id: str) -> tuple[Entity, bool]:
        """Insert or merge by canonical name. Returns (entity, created)."""
        canon = canonical_name(name)
        if not canon:
            raise ValueError("entity name must be non-blank")
        existing_id = self._by_canonical.get(canon)
        if existing_id is not None:
            entity = self.entities[existing_id]
            if (phase, source_id) not in entity.provenance:
                entity.provenance.append((phase, source_id))
            return entity, False
        self._entity_seq += 1
        entity = Entity(
            entity_id=f"e{self._entity_seq:04d}",
            name=_WHITESPACE.sub(" ", name.strip()),
            entity_type=normalize_entity_type(entity_type),
            provenance=[(phase, source_id)],
        )
        self.entities[entity.entity_id] = entity
        self._by_canonical[canon] = entity.entity_id
        self._adjacency[entity.entity_id] = {}
        self._degree[entity.entity_id] = 0
        return entity, True

    def add_relation(self, source_id: str, target_id: str, relation_type: str,
                     phase: int, provenance_id: str) -> tuple[Relation | None, bool]:
        """Returns (relation, created); (existing, False) for duplicates."""
        if source_id not in self.entities or target_id not in self.entities:
            raise KeyError("relation endpoints must exist")
        if source_id == target_id:
            raise ValueError("self relations are not allowed")
        key = (source_id, target_id, relation_type)
        if key in self._relation_keys:
            return None, False
        self._relation_seq += 1
        relation = Relation(
            relation_id=f"r{self._relation_seq:04d}",
            source=source_id,
            target=target_id,
            relation_type=relation_type,
            provenance=((phase, provenance_id),),
        )
        self.relations[relation.relation_id] = relation
        self._relation_keys.add(key)
        self._adjacency[source_id].setdefault(target_id, set()).add(relation_type)
        self._adjacency[target_id].setdefault(source_id, set()).add(relation_type)
        self._degree[source_id] += 1
        self._degree[target_id] += 1
        return relation, True

    def log_phase(self, phase: int, entities_added: int, relations_added: int) -> None:
        self.phase_log.append({
            "phase": phase,
            "entities_added": entities_added,
            "relations_added": relations_added,
        })

    # -- integrity ----------------------------------------------------------------

    def recomputed_degrees(self) -> dict[str, int]:
        degrees = {entity_id: 0 for entity_id in self.entities}
        for relation in self.relations.values():
            degrees[relation.source] += 1
            degrees[relation.target] += 1
        return degrees

    def validate(self) -> None:
        """Referential integrity and index consistency; raises on violation."""
        for relation in self.relations.values():
            if relation.source not in self.entities or relation.target not in self.entities:
                raise AssertionError(f"dangling relation {relation.relation_id}")
            if relation.source == relation.target:
                raise AssertionError(f"self relation {relation.relation_id}")
        if self.recomputed_degrees() != self._degree:
            raise AssertionError("degree index out of sync with relations")
        canonicals = [e.canonical for e in self.entities.values()]
        if len(canonicals) != len(set(canonicals)):
            raise AssertionError("duplicate canonical entity names")

    # -- persistence ----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "entities": [
                {
                    "entity_id": e.entity_id,
                    "name": e.name,
                    "entity_type": e.entity_type,
                    "provenance": [list(p) for p in e.provenance],
                }
                for e in sorted(self.entities.values(), key=lambda e: e.entity_id)
            ],
            "relations": [
                {
                    "relation_id": r.relation_id,
                    "source": r.source,
                    "target": r.target,
                    "relation_type": r.relation_type,
                    "provenance": [list(p) for p in r.provenance],
                }
                for r in sorted(self.relations.values(), key=lambda r: r.relation_id)
            ],
            "phase_log": list(self.phase_log),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KnowledgeGraph":
        graph = cls()
        for item in data.get("entities", []):
            entity = Entity(
                entity_id=item["entity_id"],
                name=item["name"],
                entity_type=item["entity_type"],
                provenance=[tuple(p) for p in item.get("provenance", [])],
            )
            graph.entities[entity.entity_id] = entity
            graph._by_canonical[entity.canonical] = entity.entity_id
            graph._adjacency[entity.entity_id] = {}
            graph._degree[entity.entity_id] = 0
            graph._entity_seq = max(graph._entity_seq, int(entity.entity_id[1:]))
        for item in data.get("relations", []):
            relation = Relation(
                relation_id=item["relation_id"],
                source=item["source"],
                target=item["target"],
                relation_type=item["relation_type"],
                provenance=tuple(tuple(p) for p in item.get("provenance", [])),
            )
            graph.relations[relation.relation_id] = relation
            graph._relation_keys.add((relation.source, relation.target, relation.relation_type))
            graph._adjacency[relation.source].setdefault(relation.target, set()).add(relation.relation_type)
            graph._adjacency[relation.target].setdefault(relation.source, set()).add(relation.relation_type)
            graph._degree[relation.source] += 1
            graph._degree[relation.target] += 1
            graph._relation_seq = max(graph._relation_seq, int(relation.relation_id[1:]))
        graph.phase_log = list(data.get("phase_log", []))
        return graph

    def require_non_empty(self) -> None:
        if not self.entities:
            raise EmptyGraph("knowledge graph has no entities")
