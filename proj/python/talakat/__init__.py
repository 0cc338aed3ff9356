"""Talakat bullet hell level generation."""

from ._core import (
    ParseError,
    Simulation,
    check_golden,
    decode,
    entropy,
    evaluate,
    normalize,
    random_chromosome,
    replay,
    script_hash,
    validate,
)

__all__ = [
    "ParseError",
    "Simulation",
    "check_golden",
    "decode",
    "entropy",
    "evaluate",
    "normalize",
    "random_chromosome",
    "replay",
    "script_hash",
    "validate",
]
