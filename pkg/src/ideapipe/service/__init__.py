from .app import SessionRunner, create_app
from .schemas import CreateSessionRequest, GateRequest, SessionView, session_view

__all__ = ["CreateSessionRequest", "GateRequest", "SessionRunner", "SessionView",
           "create_app", "session_view"]
