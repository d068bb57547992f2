"""Rule-based open information extraction over dependency trees."""

from .deptree import ConlluError, DepTree, Token, parse_conllu, serialize_conllu, validate
from .evaluate import evaluate
from .pipeline import Config, ConfigError, load_config, run_document, run_sentence
from .providers import CallableProvider, ProviderError, SubprocessProvider
from .tuples import ExtractedTuple, extract_tuples, load_tuple_file, read_tuples_jsonl

__version__ = "0.1.0"

__all__ = [
    "CallableProvider",
    "Config",
    "ConfigError",
    "ConlluError",
    "DepTree",
    "ExtractedTuple",
    "ProviderError",
    "SubprocessProvider",
    "Token",
    "evaluate",
    "extract_tuples",
    "load_config",
    "load_tuple_file",
    "parse_conllu",
    "read_tuples_jsonl",
    "run_document",
    "run_sentence",
    "serialize_conllu",
    "validate",
    "__version__",
]
