"""Exception hierarchy shared across the pipeline."""


class IdeaPipeError(Exception):
    """Base class for all pipeline errors."""


class InvalidConfig(IdeaPipeError):
    """Configuration failed validation. Carries field-level messages."""

    def __init__(self, problems: dict[str, str]):
        self.problems = dict(problems)
        detail = "; ".join(f"{field}: {msg}" for field, msg in sorted(self.problems.items()))
        super().__init__(f"invalid config: {detail}")


# --- gateway ---------------------------------------------------------------

class TemplateError(IdeaPipeError):
    """Template-family failure: unknown template, unbound placeholder, or
    a scripted backend asked for a request it has no fixture for."""


class TemplateUnknown(TemplateError):
    def __init__(self, template_id: str):
        self.template_id = template_id
        super().__init__(f"unknown prompt template: {template_id!r}")


class UnboundPlaceholder(TemplateError):
    def __init__(self, template_id: str, names: list[str]):
        self.template_id = template_id
        self.names = sorted(names)
        super().__init__(f"template {template_id!r} has unbound placeholders: {', '.join(self.names)}")


class ScriptedKeyMissing(TemplateError):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"scripted backend has no fixture for request key {key!r}")


class BackendUnavailable(IdeaPipeError):
    """Provider kept failing after the configured retries."""


class TransientBackendError(IdeaPipeError):
    """Retryable provider failure (timeouts, 429s, 5xx)."""


class Truncated(IdeaPipeError):
    """Backend truncated the completion; caller should shrink its bindings."""


class Unparseable(IdeaPipeError):
    """Structured output could not be recovered, even after the repair turn."""


class EmptyInput(IdeaPipeError):
    """Embedding request was empty or contained blank texts."""


class DimensionMismatch(IdeaPipeError):
    """Embedding provider changed vector dimension or model mid-session."""


# --- retrieval -------------------------------------------------------------

class TooFewConcepts(IdeaPipeError):
    """Topic decomposition yielded fewer than the minimum usable concepts."""


class QuotaExhausted(IdeaPipeError):
    """Scholarly API quota exceeded; the curation phase cannot proceed."""


# --- knowledge graph -------------------------------------------------------

class EmptyGraph(IdeaPipeError):
    """Operation requires a non-empty graph."""


# --- ideation --------------------------------------------------------------

class InvalidPath(IdeaPipeError):
    """Reasoning path is disconnected or repeats a node."""


class SelfPollination(IdeaPipeError):
    """Cross-pollination needs two distinct parent ideas."""


class RoundBudgetExhausted(IdeaPipeError):
    """Refinement round beyond the two-round budget."""


class InvalidPlanError(IdeaPipeError):
    """Gap analysis did not produce enough usable limitation statements."""


# --- orchestrator ----------------------------------------------------------

class WrongState(IdeaPipeError):
    """Session is not in a state that allows the requested action."""


class NotFound(IdeaPipeError):
    """No persisted session (or artifact) under that identifier."""


class CorruptState(IdeaPipeError):
    """Persisted artifact bytes do not match the manifest digest."""


class InvalidEdit(IdeaPipeError):
    """Gate edit payload does not validate against the artifact schema."""
