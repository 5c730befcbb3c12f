from .got import PathWeights, link_bridges, sample_got_paths, score_path
from .models import (
    Critique,
    IdeaFacets,
    IdeaIdAllocator,
    ReasoningPath,
    ResearchIdea,
    ResearchPlan,
    Revision,
)
from .parsing import parse_facets, parse_idea_sections, word_count
from .planner import plan
from .refine import critique, refine
from .variants import cross_pollinate, dedupe_drafts, generate_variants, render_path

__all__ = [
    "Critique",
    "IdeaFacets",
    "IdeaIdAllocator",
    "PathWeights",
    "ReasoningPath",
    "ResearchIdea",
    "ResearchPlan",
    "Revision",
    "critique",
    "cross_pollinate",
    "dedupe_drafts",
    "generate_variants",
    "link_bridges",
    "parse_facets",
    "parse_idea_sections",
    "plan",
    "refine",
    "render_path",
    "sample_got_paths",
    "score_path",
    "word_count",
]
