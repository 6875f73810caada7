"""Interpreter for a small reactive orchestration scripting language."""

from .engine import Counters, Engine, EngineConfig, StepLimitExceeded, run_source
from .errors import IncompleteInput, LexError, OrcError, ParseError, RuntimeOrcError

__version__ = "0.1.0"

__all__ = [
    "Counters", "Engine", "EngineConfig", "IncompleteInput", "LexError", "OrcError", "ParseError",
    "RuntimeOrcError", "StepLimitExceeded", "run_source",
]
