"""Tolerant section parser for idea-shaped model output."""

from __future__ import annotations

import re

from .models import IdeaFacets

# Canonical section -> heading aliases the models are prompted to use.
_ALIASES = {
    "title": ("title", "unified topic"),
    "problem_statement": ("problem statement", "integrated problem statement"),
    "proposed_methodology": ("proposed methodology", "combined methodology", "methodology"),
    "experimental_validation": (
        "experimental validation",
        "comprehensive experimental validation",
        "validation",
    ),
}

_HEADING = re.compile(
    r"^\s*(?:[#*]+\s*)?(?:\d+\.\s*)?([A-Za-z][A-Za-z ]+?)\s*:?\s*\**\s*$"
)
_INLINE_HEADING = re.compile(
    r"^\s*(?:[#*]+\s*)?(?:\d+\.\s*)?([A-Za-z][A-Za-z ]+?)\s*:\s*(.+)$"
)


def _canonical_section(label: str) -> str | None:
    cleaned = label.strip().casefold()
    for section, aliases in _ALIASES.items():
        if cleaned in aliases:
            return section
    return None


def parse_idea_sections(text: str) -> dict[str, str]:
    """Split model text into title/facet sections by their headings.

    Headings may be bolded, numbered, or carry inline content after the
    colon. Unrecognized text before the first heading is ignored.
    """
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for line in text.splitlines():
        matched = None
        inline_rest = None
        bare = _HEADING.match(line)
        if bare:
            matched = _canonical_section(bare.group(1))
        if matched is None:
            inline = _INLINE_HEADING.match(line)
            if inline:
                candidate = _canonical_section(inline.group(1))
                if candidate is not None:
                    matched = candidate
                    inline_rest = inline.group(2).strip().strip("*").strip()
        if matched is not None:
            current = matched
            sections[current] = [inline_rest] if inline_rest else []
            continue
        if current is not None:
            sections[current].append(line)
    return {name: "\n".join(lines).strip() for name, lines in sections.items()}


def parse_facets(text: str) -> IdeaFacets | None:
    """Facets from sectioned text; None when any facet is missing or blank."""
    sections = parse_idea_sections(text)
    values = [
        sections.get("problem_statement", ""),
        sections.get("proposed_methodology", ""),
        sections.get("experimental_validation", ""),
    ]
    if not all(v.strip() for v in values):
        return None
    return IdeaFacets(*values)


def word_count(text: str) -> int:
    return len(text.split())
