"""Data generation, preprocessing and scoring tools for grammatical error correction."""

from gec_lab.errors import M2ParseError, ValidationError

__version__ = "0.1.0"

__all__ = ["M2ParseError", "ValidationError", "__version__"]
