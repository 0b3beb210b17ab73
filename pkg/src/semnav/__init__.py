"""Semantic navigation with answer set programming and LLM-generated constraints."""

from .errors import SemnavError

__version__ = "0.1.0"

__all__ = ["SemnavError", "__version__"]
