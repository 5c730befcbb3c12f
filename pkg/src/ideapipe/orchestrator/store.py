"""Artifact persistence: deterministic JSON files plus a digest manifest."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..errors import CorruptState, InvalidEdit, NotFound
from ..ideation.models import ResearchIdea, ResearchPlan
from ..kg.model import KnowledgeGraph
from ..retrieval.models import PaperRecord
from ..review.models import PortfolioReport
from .session import atomic_write_text


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class ArtifactStore:
    """One directory of phase artifacts per session, tracked in manifest.json.

    Artifact bodies hold no timestamps or session ids, so a fixed config,
    seed, and fixture set produce byte-identical files and manifest.
    """

    def __init__(self, session_dir: str | Path):
        self.session_dir = Path(session_dir)
        self.artifact_dir = self.session_dir / "artifacts"
        self.artifact_dir.mkdir(parents=True, exist_ok=True)
        self.manifest_path = self.session_dir / "manifest.json"

    def _manifest(self) -> dict[str, str]:
        if not self.manifest_path.exists():
            return {}
        return json.loads(self.manifest_path.read_text(encoding="utf-8"))["artifacts"]

    def _write_manifest(self, manifest: dict[str, str]) -> None:
        atomic_write_text(self.manifest_path,
                          canonical_json({"artifacts": dict(sorted(manifest.items()))}))

    def path_for(self, name: str) -> Path:
        return self.artifact_dir / f"{name}.json"

    def write(self, name: str, payload) -> Path:
        body = canonical_json(payload)
        path = self.path_for(name)
        atomic_write_text(path, body)
        manifest = self._manifest()
        manifest[name] = digest_bytes(body.encode("utf-8"))
        self._write_manifest(manifest)
        return path

    def read(self, name: str):
        path = self.path_for(name)
        if not path.exists():
            raise NotFound(f"no artifact named {name!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def read_bytes(self, name: str) -> bytes:
        path = self.path_for(name)
        if not path.exists():
            raise NotFound(f"no artifact named {name!r}")
        return path.read_bytes()

    def names(self) -> list[str]:
        return sorted(self._manifest())

    def digest(self, name: str) -> str:
        manifest = self._manifest()
        if name not in manifest:
            raise NotFound(f"no artifact named {name!r}")
        return manifest[name]

    def verify_all(self) -> None:
        for name, expected in self._manifest().items():
            path = self.path_for(name)
            if not path.exists():
                raise CorruptState(f"artifact {name!r} is missing from disk")
            actual = digest_bytes(path.read_bytes())
            if actual != expected:
                raise CorruptState(
                    f"artifact {name!r} digest mismatch: manifest {expected[:12]}…, "
                    f"disk {actual[:12]}…"
                )

    def manifest_bytes(self) -> bytes:
        return self.manifest_path.read_bytes()


# -- gate-edit validation -----------------------------------------------------


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidEdit(message)


def validate_artifact(name: str, payload) -> None:
    """Schema check for human gate edits; raises InvalidEdit on violation."""
    try:
        if name.endswith("_papers"):
            _require(isinstance(payload, dict), "papers artifact must be an object")
            _require(isinstance(payload.get("papers"), list), "papers must be a list")
            for item in payload["papers"]:
                record = PaperRecord.from_dict(item)
                _require(bool(record.paper_id), "every paper needs a paper_id")
        elif "_graph" in name:
            graph = KnowledgeGraph.from_dict(payload)
            graph.validate()
        elif name.endswith("_plan"):
            plan = ResearchPlan.from_dict(payload)
            _require(3 <= len(plan.gaps) <= 5, "plan must carry 3-5 gaps")
            _require(plan.facets.non_blank(), "plan facets must be non-blank")
        elif name.endswith("_paths"):
            _require(isinstance(payload.get("paths"), list), "paths artifact must list paths")
        elif "_ideas" in name:
            _require(isinstance(payload, list), "idea pool artifact must be a list")
            for item in payload:
                idea = ResearchIdea.from_dict(item)
                _require(idea.facets.non_blank(), f"{idea.idea_id} has a blank facet")
        elif name.endswith("_selection"):
            _require(isinstance(payload, dict), "selection artifact must be an object")
            _require("retained_ids" in payload, "selection artifact needs retained_ids")
        elif name.endswith("_portfolio"):
            _require(isinstance(payload, dict), "portfolio artifact must be an object")
            PortfolioReport.from_dict(payload["portfolio"])
        else:
            raise InvalidEdit(f"unknown artifact kind {name!r}")
    except InvalidEdit:
        raise
    except Exception as exc:
        raise InvalidEdit(f"artifact {name!r} failed validation: {exc}") from exc
