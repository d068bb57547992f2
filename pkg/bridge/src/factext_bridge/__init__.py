"""Parser bridge: deterministic dependency parses over a stdio line protocol."""

from .model import HeuristicModel, SpacyModel, Word, load_model, tokenize
from .protocol import BridgeSession, batch_convert, block_lines, serve

__all__ = [
    "BridgeSession",
    "HeuristicModel",
    "SpacyModel",
    "Word",
    "batch_convert",
    "block_lines",
    "load_model",
    "serve",
    "tokenize",
]
