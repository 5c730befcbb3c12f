"""Scholarly search clients: a live HTTP client with backoff and a recorded
fixture client for offline runs."""

from __future__ import annotations

import json
import os
import time
from pathlib import Path
from typing import Protocol

import httpx

from ..errors import QuotaExhausted
from ..events import NULL_SINK, EventSink
from .models import PaperRecord

AGENT = "knowledge_grounding"
SEARCH_FIELDS = "title,abstract,authors,year,venue,citationCount,fieldsOfStudy"


class SearchClient(Protocol):
    def search(self, query: str, limit: int) -> list[PaperRecord]: ...


def _record_from_api(item: dict) -> PaperRecord:
    return PaperRecord(
        paper_id=str(item.get("paperId") or item.get("paper_id") or ""),
        title=item.get("title") or "",
        abstract=item.get("abstract") or "",
        authors=[a.get("name", "") if isinstance(a, dict) else str(a)
                 for a in item.get("authors") or []],
        year=int(item.get("year") or 0),
        venue=item.get("venue") or "",
        citation_count=int(item.get("citationCount") or item.get("citation_count") or 0),
        keywords=list(item.get("fieldsOfStudy") or item.get("keywords") or []),
    )


class HttpSearchClient:
    """Paper search against a Semantic Scholar compatible endpoint.

    Transient failures back off and retry; a persistently failing query
    degrades to an empty result rather than killing the phase. An explicit
    quota rejection aborts curation.
    """

    def __init__(self, base_url: str = "https://api.semanticscholar.org/graph/v1",
                 api_key: str | None = None, *, max_retries: int = 3,
                 retry_base_delay: float = 1.0, events: EventSink = NULL_SINK,
                 sleeper=time.sleep):
        headers = {}
        key = api_key if api_key is not None else os.environ.get("SCHOLAR_API_KEY", "")
        if key:
            headers["x-api-key"] = key
        self._client = httpx.Client(base_url=base_url.rstrip("/"), headers=headers, timeout=30.0)
        self._max_retries = max_retries
        self._retry_base_delay = retry_base_delay
        self._events = events
        self._sleep = sleeper

    def search(self, query: str, limit: int) -> list[PaperRecord]:
        if not query.strip():
            raise ValueError("query must be non-blank")
        attempt = 0
        while True:
            try:
                response = self._client.get(
                    "/paper/search",
                    params={"query": query, "limit": str(limit), "fields": SEARCH_FIELDS},
                )
            except httpx.HTTPError as exc:
                response = None
                failure = f"network error: {exc}"
            else:
                if response.status_code == 200:
                    data = response.json().get("data") or []
                    return [_record_from_api(item) for item in data if item.get("paperId")]
                if response.status_code == 403:
                    raise QuotaExhausted(f"scholarly API rejected the key/quota for {query!r}")
                failure = f"status {response.status_code}"

            if attempt >= self._max_retries:
                self._events.emit("warning",
                                  f"search {query!r} failed after {attempt} retries ({failure}); skipping",
                                  agent_tag=AGENT)
                return []
            self._sleep(self._retry_base_delay * (2 ** attempt))
            attempt += 1


class FixtureSearchClient:
    """Replays recorded search responses keyed by the exact query string."""

    def __init__(self, queries: dict[str, list[dict]], *, events: EventSink = NULL_SINK):
        self._queries = queries
        self._events = events

    @classmethod
    def from_file(cls, path: str | Path, *, events: EventSink = NULL_SINK) -> "FixtureSearchClient":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(data["queries"], events=events)

    def search(self, query: str, limit: int) -> list[PaperRecord]:
        if not query.strip():
            raise ValueError("query must be non-blank")
        if query not in self._queries:
            return []
        return [PaperRecord.from_dict(item) if "paper_id" in item else _record_from_api(item)
                for item in self._queries[query][:limit]]
