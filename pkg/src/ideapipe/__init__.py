"""ideapipe: a knowledge-grounded research ideation pipeline.

Four stages run end to end: literature curation into a knowledge graph,
diversified idea generation over graph reasoning paths, multi-stage
selection, and panel-style review into a final portfolio. Every stage
persists JSON artifacts and streams a durable event log, so sessions are
inspectable, resumable, and reproducible under the scripted backend.
"""

from .config import PipelineConfig
from .orchestrator import Orchestrator

__version__ = "0.1.0"

__all__ = ["Orchestrator", "PipelineConfig", "__version__"]
