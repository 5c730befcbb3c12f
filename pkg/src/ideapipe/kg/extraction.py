"""Parser for the bullet-list extraction format the graph prompts request."""

from __future__ import annotations

import re

from ..events import NULL_SINK, EventSink
from .model import ParsedEntity, ParsedRelation, canonical_name, normalize_entity_type

AGENT = "kg_builder"

_ENTITY_HEADER = re.compile(r"^\s*ENTITIES\s*:?\s*$", re.IGNORECASE)
_RELATION_HEADER = re.compile(r"^\s*RELATIONSHIPS?\s*:?\s*$", re.IGNORECASE)
_BULLET = re.compile(r"^\s*[-*]\s+(.*)$")
_TYPED_ENTITY = re.compile(r"^(.*?)\s*\(\s*(?:type\s*:\s*)?([A-Za-z_ /]+?)\s*\)\s*$")
_ARROW = re.compile(r"\s*(?:->|→)\s*")


def parse_extraction(text: str, *, events: EventSink = NULL_SINK
                     ) -> tuple[list[ParsedEntity], list[ParsedRelation]]:
    """Parse ENTITIES / RELATIONSHIPS bullet sections.

    Relation endpoints that were never declared become concept entities, so
    the prompt's loose format cannot dangle. Malformed lines are skipped
    with a warning event, never fatal.
    """
    entities: list[ParsedEntity] = []
    relations: list[ParsedRelation] = []
    declared: set[str] = set()

    section = None
    for raw_line in text.splitlines():
        if _ENTITY_HEADER.match(raw_line):
            section = "entities"
            continue
        if _RELATION_HEADER.match(raw_line):
            section = "relations"
            continue
        bullet = _BULLET.match(raw_line)
        if not bullet or section is None:
            continue
        content = bullet.group(1).strip()
        if not content:
            continue

        if section == "entities":
            typed = _TYPED_ENTITY.match(content)
            if typed:
                name = typed.group(1).strip()
                # "concept/method" style multi-types: keep the first.
                entity_type = normalize_entity_type(typed.group(2).split("/")[0])
            else:
                name, entity_type = content, "concept"
            if not name:
                events.emit("warning", f"skipped entity line without a name: {content!r}",
                            agent_tag=AGENT)
                continue
            if canonical_name(name) not in declared:
                declared.add(canonical_name(name))
                entities.append(ParsedEntity(name=name, entity_type=entity_type))
        else:
            parts = [part.strip() for part in _ARROW.split(content)]
            if len(parts) != 3 or not all(parts):
                events.emit("warning", f"skipped malformed relation line: {content!r}",
                            agent_tag=AGENT)
                continue
            source, verb, target = parts
            if canonical_name(source) == canonical_name(target):
                events.emit("warning", f"skipped self relation line: {content!r}",
                            agent_tag=AGENT)
                continue
            relation_type = re.sub(r"\s+", "_", verb.strip().casefold())
            relations.append(ParsedRelation(source=source, relation_type=relation_type, target=target))
            for endpoint in (source, target):
                if canonical_name(endpoint) not in declared:
                    declared.add(canonical_name(endpoint))
                    entities.append(ParsedEntity(name=endpoint, entity_type="concept"))

    return entities, relations
