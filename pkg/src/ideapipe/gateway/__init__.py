from .backends import (
    BackendReply,
    ChatBackend,
    EmbeddingBackend,
    LiveChatBackend,
    LiveEmbeddingBackend,
    RecordingChatBackend,
    ScriptedChatBackend,
    StubEmbeddingBackend,
)
from .gateway import Gateway, GatewayStats, TokenBucket
from .models import ChatRequest, ChatResponse, EmbeddingVector, PromptTemplate, cosine, normalize
from .templates import TemplateCatalog, default_catalog

__all__ = [
    "BackendReply",
    "ChatBackend",
    "ChatRequest",
    "ChatResponse",
    "EmbeddingBackend",
    "EmbeddingVector",
    "Gateway",
    "GatewayStats",
    "LiveChatBackend",
    "LiveEmbeddingBackend",
    "PromptTemplate",
    "RecordingChatBackend",
    "ScriptedChatBackend",
    "StubEmbeddingBackend",
    "TemplateCatalog",
    "TokenBucket",
    "cosine",
    "default_catalog",
    "normalize",
]
