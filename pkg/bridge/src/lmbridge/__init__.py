"""Predictor wire-protocol server wrapping a seq2seq language model."""

from .model import BridgeConfig, Seq2SeqScorer, load_model
from .server import handle_request, serve

__version__ = "0.1.0"
__all__ = ["BridgeConfig", "Seq2SeqScorer", "load_model", "handle_request", "serve", "__version__"]
