"""Expression language, JSON documents, verification suites and the ``qmodular`` command."""
from .evaluate import SeriesDocument, evaluate, evaluate_text
from .parser import ParseError, UnknownName, parse, to_text

__all__ = ["SeriesDocument", "evaluate", "evaluate_text", "ParseError", "UnknownName",
           "parse", "to_text"]
