from __future__ import annotations

from typing import Optional

from ..syntax.terms import SourceSpan

UNKNOWN_PREDICATE = "unknown_predicate"
INSTANTIATION = "instantiation"
TYPE_ERROR = "type_error"
ZERO_DIVISOR = "zero_divisor"


class PrologRuntimeError(Exception):
    """An error raised while executing a query.

    ``predicate`` is set for unknown predicates; ``call_chain`` lists
    predicate indicators from the outermost call to the innermost.
    """

    def __init__(self, kind: str, message: str, span: Optional[SourceSpan] = None,
                 call_chain=(), predicate=None):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.span = span
        self.call_chain = tuple(call_chain)
        self.predicate = predicate

    def with_context(self, span, call_chain):
        if self.span is None:
            self.span = span
        if not self.call_chain:
            self.call_chain = tuple(call_chain)
        return self

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "message": self.message,
               "call_chain": [f"{n}/{a}" for n, a in self.call_chain]}
        if self.predicate is not None:
            out["predicate"] = f"{self.predicate[0]}/{self.predicate[1]}"
        if self.span is not None:
            out["line"] = self.span.start_line
            out["column"] = self.span.start_col
        return out

    def __repr__(self):
        return f"PrologRuntimeError({self.kind!r}, {self.message!r})"
