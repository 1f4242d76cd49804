"""normforge: corruption statistics, synthetic noise and evaluation for
word-aligned lexical normalization."""

from normforge.align import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
