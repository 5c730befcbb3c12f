"""Prompt template catalog: plain-text bodies with named placeholders.

Each template ships as a text file next to this module and is addressed by
template_id. Rendering is a single byte-exact substitution pass, so braces
inside binding values are never re-expanded.
"""

from __future__ import annotations

import re
from importlib import resources

from ..errors import TemplateUnknown, UnboundPlaceholder
from .models import PromptTemplate

_PLACEHOLDER = re.compile(r"\{([a-z][a-z0-9_]*)\}")

# template_id -> expected output discipline for parse_structured
_CATALOG: dict[str, str] = {
    "topic_decomposition": "delimited_list",
    "kg_core_concepts": "free_text",
    "kg_extraction": "free_text",
    "kg_enrichment": "free_text",
    "kg_expansion": "free_text",
    "kg_relation_enhancement": "free_text",
    "gap_analysis": "free_text",
    "facet_decomposition": "free_text",
    "stepwise_planner": "free_text",
    "idea_variant_base": "free_text",
    "idea_variant_got": "free_text",
    "cross_pollination": "free_text",
    "idea_critique": "free_text",
    "refine_first_pass": "free_text",
    "refine_second_pass": "json_object",
    "internal_evaluation": "scored_lines",
    "idea_merging": "free_text",
    "detailed_review": "json_object",
    "novelty_assessment": "json_object",
    "repair": "free_text",
}


class TemplateCatalog:
    """Loads template bodies lazily and renders them with bound placeholders."""

    def __init__(self):
        self._cache: dict[str, PromptTemplate] = {}

    def ids(self) -> list[str]:
        return sorted(_CATALOG)

    def get(self, template_id: str) -> PromptTemplate:
        if template_id not in _CATALOG:
            raise TemplateUnknown(template_id)
        if template_id not in self._cache:
            body = (
                resources.files("ideapipe.gateway")
                .joinpath(f"templates/{template_id}.txt")
                .read_text(encoding="utf-8")
            )
            self._cache[template_id] = PromptTemplate(
                template_id=template_id,
                body=body,
                expected_output=_CATALOG[template_id],
            )
        return self._cache[template_id]

    def placeholders(self, template_id: str) -> list[str]:
        seen: list[str] = []
        for name in _PLACEHOLDER.findall(self.get(template_id).body):
            if name not in seen:
                seen.append(name)
        return seen

    def render(self, template_id: str, bindings: dict[str, str]) -> str:
        template = self.get(template_id)
        required = set(self.placeholders(template_id))
        missing = required - set(bindings)
        if missing:
            raise UnboundPlaceholder(template_id, sorted(missing))
        # Single pass: binding values containing braces stay verbatim.
        return _PLACEHOLDER.sub(lambda m: bindings[m.group(1)], template.body)


_default_catalog: TemplateCatalog | None = None


def default_catalog() -> TemplateCatalog:
    global _default_catalog
    if _default_catalog is None:
        _default_catalog = TemplateCatalog()
    return _default_catalog
