"""Deterministic synthetic author: a rule-based stand-in model.

Given any request it fabricates a plausible, parseable reply purely from the
request's bindings and a seeded hash, so recording a pipeline run against it
yields a complete scripted fixture set. It is fixture tooling, not a quality
model.
"""

from __future__ import annotations

import hashlib
import json
import random
import re

from .backends import BackendReply
from .models import ChatRequest

_WORD = re.compile(r"[A-Za-z][A-Za-z-]+")

_STOPWORDS = {
    "the", "and", "for", "with", "that", "this", "via", "from", "into",
    "over", "under", "near", "real", "time", "large", "scale", "problem",
}

_SENTENCE_TEMPLATES = (
    "The approach centers on {a} as the driver of progress on {b}.",
    "Existing treatments of {b} rarely account for {a}, limiting transfer beyond {c}.",
    "We combine {a} with {b} to reach behavior neither achieves alone near {c}.",
    "A dedicated component monitors {a} so that {b} stays stable under {c}.",
    "Careful handling of {a} reduces the cost usually attributed to {b}.",
    "The design isolates {a} behind a narrow contract, keeping {b} replaceable by {c}.",
    "Measurements track how {a} scales while {b} grows across {c} regimes.",
    "Prior benchmarks under-report the interaction between {a} and {b}.",
    "An incremental formulation of {a} avoids recomputing {b} after each {c}.",
    "Failure analysis of {a} informs fallback strategies once {b} degrades.",
    "The protocol stages {a} before {b}, simplifying attribution of gains from {c}.",
    "Robustness to noisy {a} follows from conservative bounds on {b} and {c}.",
)

# Wide filler vocabulary: each prose call samples its own slice, so two
# generated texts share the sentence skeletons but not their token sets.
_FILLERS = (
    "accumulators", "admission", "affinities", "aggregation", "anchors", "annotations",
    "arbitration", "archives", "assignments", "atlases", "audits", "backbones",
    "backlogs", "ballots", "barriers", "batches", "beacons", "bookkeeping",
    "boundaries", "bridges", "brokers", "buckets", "budgets", "caches",
    "calibration", "canaries", "capsules", "cascades", "catalogs", "checkpoints",
    "cohorts", "collisions", "compactions", "compression", "concourses", "contours",
    "contracts", "convoys", "cooldowns", "cordons", "corridors", "counters",
    "couplings", "credits", "cursors", "cutovers", "dampers", "dashboards",
    "deadlines", "decompositions", "defaults", "deferrals", "deltas", "dispatchers",
    "ditches", "dockets", "drains", "envelopes", "epochs", "escrows",
    "estimators", "fabrics", "fences", "filters", "fingerprints", "fixtures",
    "flares", "floodgates", "forecasts", "frontiers", "gradients", "guardrails",
    "handoffs", "harnesses", "hashes", "headrooms", "heuristics", "horizons",
    "hulls", "inventories", "journals", "junctions", "keels", "kernels",
    "lattices", "ledgers", "lenses", "manifests", "margins", "markers",
    "meshes", "mirrors", "moats", "anchorsets", "offsets", "outposts",
    "overlays", "pacing", "paddings", "partitions", "payloads", "perimeters",
    "pivots", "playbooks", "postings", "probes", "quotas", "relays",
    "replicas", "reservoirs", "residues", "rosters", "rotations", "runways",
    "saturations", "scaffolds", "schedules", "sentinels", "shards", "sketches",
    "snapshots", "spillovers", "stencils", "stockpiles", "syncs", "tallies",
    "templates", "thresholds", "tickets", "tranches", "trellises", "vaults",
)

_VERBS = ("uses", "improves", "based_on", "compares", "enables", "extends")
_SUGGESTION_POOL = (
    "tighten the evaluation plan with explicit baselines",
    "clarify the core algorithmic contribution",
    "add a complexity analysis for the main procedure",
    "justify dataset choices against the stated problem",
    "discuss failure modes and mitigation strategies",
    "position the idea against the closest prior work",
)


def _rng_for(request: ChatRequest, salt: int) -> random.Random:
    digest = hashlib.sha256(f"{salt}|{request.bindings_key()}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _theme_words(text: str, limit: int = 12) -> list[str]:
    words = []
    for word in _WORD.findall(text.lower()):
        if len(word) > 3 and word not in _STOPWORDS and word not in words:
            words.append(word)
        if len(words) >= limit:
            break
    return words or ["systems", "methods", "analysis", "graphs"]


def _prose(rng: random.Random, words: list[str], target_words: int) -> str:
    vocabulary = list(dict.fromkeys(words)) + rng.sample(_FILLERS, 25)
    sentences = []
    count = 0
    while count < target_words:
        template = rng.choice(_SENTENCE_TEMPLATES)
        a, b, c = rng.sample(vocabulary, 3)
        sentence = template.format(a=a, b=b, c=c)
        sentences.append(sentence)
        count += len(sentence.split())
    return " ".join(sentences)


def _phrases(rng: random.Random, words: list[str], n: int) -> list[str]:
    suffixes = ("decomposition", "maintenance", "estimation", "partitioning",
                "prioritization", "benchmarks", "analysis", "indexes", "updates",
                "approximation")
    phrases = []
    while len(phrases) < n:
        word = words[len(phrases) % len(words)]
        suffix = suffixes[(len(phrases) * 3 + rng.randrange(3)) % len(suffixes)]
        phrase = f"{word} {suffix}"
        if phrase not in phrases:
            phrases.append(phrase)
        else:
            phrases.append(f"{phrase} {len(phrases)}")
    return phrases


class SyntheticAuthorBackend:
    backend_id = "synthetic"

    def __init__(self, seed: int = 0, *, review_low: float = 2.7, review_high: float = 4.4):
        self.seed = seed
        self.review_low = review_low
        self.review_high = review_high

    def generate(self, request: ChatRequest, prompt: str) -> BackendReply:
        handler = getattr(self, f"_t_{request.template_id}", None)
        text = handler(request) if handler else self._fallback(request)
        return BackendReply(
            text=text,
            prompt_tokens=(len(prompt) + 3) // 4,
            completion_tokens=(len(text) + 3) // 4,
        )

    def _fallback(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        return _prose(rng, _theme_words(" ".join(request.bindings.values())), 80)

    # -- stage A -----------------------------------------------------------------

    def _t_topic_decomposition(self, request: ChatRequest) -> str:
        words = _theme_words(request.bindings["topic"])
        rng = _rng_for(request, self.seed)
        concepts = [request.bindings["topic"].lower().strip()]
        concepts += _phrases(rng, words, 7)
        concepts += [f"{words[0]} scalability", f"dynamic {words[-1]}"]
        return ", ".join(dict.fromkeys(concepts))

    def _entities_and_relations(self, rng: random.Random, names: list[str],
                                relation_count: int, *, include_unknown: bool = False) -> str:
        types = ("concept", "method", "technique", "metric", "dataset", "application")
        lines = ["ENTITIES:"]
        for i, name in enumerate(names):
            lines.append(f"- {name} (type: {types[i % len(types)]})")
        lines.append("")
        lines.append("RELATIONSHIPS:")
        for i in range(relation_count):
            a = names[i % len(names)]
            b = names[(i + 1 + i // len(names)) % len(names)]
            if a == b:
                continue
            verb = _VERBS[(i + rng.randrange(2)) % len(_VERBS)]
            lines.append(f"- {a} -> {verb} -> {b}")
        if include_unknown:
            lines.append(f"- {names[0]} -> compares -> unresolved auxiliary notion")
        return "\n".join(lines)

    def _t_kg_core_concepts(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        words = _theme_words(request.bindings["seed_topic"])
        names = _phrases(rng, words, 12)
        return self._entities_and_relations(rng, names, 10)

    def _t_kg_enrichment(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        batch = request.bindings["literature_batch"]
        titles = re.findall(r"Title:\s*(.+)", batch)
        keywords = []
        for match in re.findall(r"Keywords:\s*(.+)", batch):
            keywords.extend(k.strip() for k in match.split(",") if k.strip() and k.strip() != "n/a")
        names = []
        for title in titles:
            title_words = _theme_words(title, 4)
            names.append(" ".join(title_words[:2]))
        names.extend(keywords[:4])
        names = [n for n in dict.fromkeys(names) if n][:8]
        if not names:
            names = _phrases(rng, _theme_words(batch), 4)
        return self._entities_and_relations(rng, names, max(3, len(names) - 1))

    def _t_kg_expansion(self, request: ChatRequest) -> str:
        hub = request.bindings["hub_name"]
        rng = _rng_for(request, self.seed)
        fresh = [f"adaptive {hub}", f"{hub} certification"]
        lines = [
            "ENTITIES:",
            f"- {fresh[0]} (type: method)",
            f"- {fresh[1]} (type: metric)",
            "",
            "RELATIONSHIPS:",
            f"- {fresh[0]} -> extends -> {hub}",
            f"- {hub} -> compares -> {fresh[1]}",
        ]
        if rng.random() < 0.5:
            lines.append(f"- {fresh[1]} -> based_on -> {fresh[0]}")
        return "\n".join(lines)

    def _t_kg_relation_enhancement(self, request: ChatRequest) -> str:
        names = re.findall(r"^- (.+?) \(type:", request.bindings["entity_list"], re.MULTILINE)
        rng = _rng_for(request, self.seed)
        lines = ["RELATIONSHIPS:"]
        for i in range(0, max(len(names) - 2, 0), 2):
            verb = _VERBS[(i + rng.randrange(2)) % len(_VERBS)]
            lines.append(f"- {names[i]} -> {verb} -> {names[i + 2]}")
        # one deliberately unknown endpoint: phase 4 must drop it loudly
        if names:
            lines.append(f"- {names[0]} -> compares -> latent unseen construct")
        return "\n".join(lines)

    # -- stage B -----------------------------------------------------------------

    def _t_gap_analysis(self, request: ChatRequest) -> str:
        words = _theme_words(request.bindings["topic"] + " " +
                             request.bindings["knowledge_context"][:400])
        rng = _rng_for(request, self.seed)
        gaps = []
        for i in range(4):
            a, b = rng.sample(words, 2) if len(words) >= 2 else (words[0], words[0])
            gaps.append(f"GAP {i + 1}: current work on {a} does not address {b} at scale")
        return "\n".join(gaps)

    def _facet_block(self, rng: random.Random, words: list[str],
                     sizes: tuple[int, int, int]) -> str:
        return (
            f"Problem Statement:\n{_prose(rng, words, sizes[0])}\n\n"
            f"Proposed Methodology:\n{_prose(rng, words, sizes[1])}\n\n"
            f"Experimental Validation:\n{_prose(rng, words, sizes[2])}"
        )

    def _t_facet_decomposition(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        words = _theme_words(request.bindings["seed_topic"] + " " +
                             request.bindings["knowledge_context"][:600])
        return self._facet_block(rng, words, (430, 540, 430))

    def _t_stepwise_planner(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        words = _theme_words(" ".join(request.bindings.values())[:600])
        return "\n".join(f"Phase {i + 1}: {_prose(rng, words, 20)}" for i in range(8))

    def _variant(self, request: ChatRequest, flavor: str) -> str:
        rng = _rng_for(request, self.seed)
        words = _theme_words(" ".join(request.bindings.values())[:800])
        a, b = rng.sample(words, 2) if len(words) >= 2 else (words[0], words[0])
        title = f"{flavor} {a} for {b}".strip().capitalize()
        body = self._facet_block(rng, words, (70, 90, 70))
        return f"Title: {title}\n\n{body}"

    def _t_idea_variant_base(self, request: ChatRequest) -> str:
        hint_word = _theme_words(request.bindings["variant_hint"], 1)[0]
        return self._variant(request, f"{hint_word}-driven")

    def _t_idea_variant_got(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        words = _theme_words(request.bindings["reasoning_path"], 6)
        title = f"Path-guided {words[0]} via {words[-1]}".capitalize()
        body = self._facet_block(rng, words + _theme_words(
            request.bindings["problem_statement"][:300]), (70, 90, 70))
        return (f"Title: {title}\n\n{body}\n\n"
                f"Reasoning trace honored: {request.bindings['reasoning_path']}")

    def _t_cross_pollination(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        title1 = re.search(r"Title:\s*(.+)", request.bindings["idea1"])
        title2 = re.search(r"Title:\s*(.+)", request.bindings["idea2"])
        words = _theme_words(
            (title1.group(1) if title1 else "") + " " + (title2.group(1) if title2 else "")
            + " " + request.bindings["cross_connections"]
        )
        a = words[0]
        b = words[-1]
        body = self._facet_block(rng, words, (75, 95, 75))
        return f"Title: Hybrid {a} meets {b}\n\n{body}"

    def _t_idea_critique(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        scores = {name: round(rng.uniform(3.2, 4.7), 1)
                  for name in ("Novelty", "Feasibility", "Clarity", "Impact")}
        lines = [f"{name}: {value}" for name, value in scores.items()]
        lines.append("")
        lines.append("Suggestions:")
        for suggestion in rng.sample(_SUGGESTION_POOL, 2):
            lines.append(f"- {suggestion}")
        return "\n".join(lines)

    def _t_refine_first_pass(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        sections = {}
        current = None
        for line in request.bindings["idea"].splitlines():
            header = line.strip().rstrip(":")
            if header in ("Problem Statement", "Proposed Methodology", "Experimental Validation"):
                current = header
                sections[current] = []
            elif current:
                sections[current].append(line)
        words = _theme_words(request.bindings["suggestions"] + " " + request.bindings["idea"][:200])
        parts = []
        for header in ("Problem Statement", "Proposed Methodology", "Experimental Validation"):
            original = "\n".join(sections.get(header, [])).strip()
            addition = _prose(rng, words, 30)
            parts.append(f"{header}:\n{original}\n{addition}")
        return "\n\n".join(parts)

    def _t_refine_second_pass(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        words = _theme_words(request.bindings["validation"] + " " + request.bindings["problem"][:200])
        components = int(request.bindings.get("validation_components", "5"))
        paragraphs = [
            f"Component {i + 1}: {_prose(rng, words, 35)}" for i in range(components)
        ]
        expanded = request.bindings["validation"].strip() + " " + " ".join(paragraphs)
        return json.dumps({"Experimental Validation": expanded})

    # -- stage C -----------------------------------------------------------------

    def _t_internal_evaluation(self, request: ChatRequest) -> str:
        blocks = re.findall(r"^IDEA (\d+): (.*)$", request.bindings["ideas_batch"], re.MULTILINE)
        lines = []
        for number, title in blocks:
            rng = random.Random(int.from_bytes(
                hashlib.sha256(f"{self.seed}|score|{title}".encode("utf-8")).digest(), "big"))
            scores = [round(rng.uniform(3.0, 4.8), 1) for _ in range(4)]
            overall = round(sum(scores) / 4, 1)
            lines.append(f"IDEA {number}: solid direction - Score: {overall}/5")
            for name, value in zip(("Novelty", "Feasibility", "Clarity", "Impact"), scores):
                lines.append(f"{name}: {value}")
            lines.append("")
        return "\n".join(lines)

    def _t_idea_merging(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        titles = re.findall(r"Title:\s*(.+)", request.bindings["ideas_to_merge"])
        words = _theme_words(" ".join(titles) or request.bindings["ideas_to_merge"][:300])
        return (
            f"Unified Topic: Consolidated {words[0]} program\n\n"
            f"Integrated Problem Statement:\n{_prose(rng, words, 80)}\n\n"
            f"Combined Methodology:\n{_prose(rng, words, 100)}\n\n"
            f"Comprehensive Experimental Validation:\n{_prose(rng, words, 80)}"
        )

    # -- stage D -----------------------------------------------------------------

    def _review_range(self, rng: random.Random) -> tuple[float, float]:
        # a small fraction of ideas read as clear standouts
        if rng.random() < 0.12:
            return (3.8, self.review_high + 0.3)
        return (self.review_low, self.review_low + 0.9)

    def _t_detailed_review(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        low, high = self._review_range(rng)
        dims = {name: round(rng.uniform(low, min(high, 5.0)), 1)
                for name in ("novelty", "feasibility", "clarity", "impact", "methodology")}
        payload = {
            "scores": dims,
            "strengths": [f"clear articulation of {w}" for w in
                          _theme_words(request.bindings["idea"], 2)],
            "weaknesses": [f"unvalidated assumptions about {_theme_words(request.bindings['idea'], 3)[-1]}"],
            "suggestions": list(rng.sample(_SUGGESTION_POOL, 2)),
            "overall_assessment": "competent proposal with actionable gaps",
        }
        return json.dumps(payload, indent=2)

    def _t_novelty_assessment(self, request: ChatRequest) -> str:
        rng = _rng_for(request, self.seed)
        low, high = self._review_range(rng)
        dims = {name: round(rng.uniform(max(low - 0.2, 1.0), min(high - 0.1, 5.0)), 1)
                for name in ("technical", "problem", "application", "theoretical", "empirical")}
        payload = {
            "dimensions": dims,
            "highlights": [f"fresh angle on {_theme_words(request.bindings['idea'], 1)[0]}"],
            "suggestions": list(rng.sample(_SUGGESTION_POOL, 2)),
        }
        return json.dumps(payload, indent=2)

    def _t_repair(self, request: ChatRequest) -> str:
        return "{}"
