"""Syntax error records and caret-style rendering."""
from __future__ import annotations

from bisect import bisect_right

from .terms import SourceSpan


class LineMap:
    """Offset to 1-based (line, column) conversion for one source text."""

    def __init__(self, source: str):
        self.source = source
        self.starts = [0]
        for i, ch in enumerate(source):
            if ch == "\n":
                self.starts.append(i + 1)

    def position(self, offset: int) -> tuple:
        line = bisect_right(self.starts, offset) - 1
        return line + 1, offset - self.starts[line] + 1

    def span(self, start: int, end: int) -> SourceSpan:
        sl, sc = self.position(start)
        el, ec = self.position(end)
        return SourceSpan(start, end, sl, sc, el, ec)

    def line_text(self, line: int) -> str:
        start = self.starts[line - 1]
        end = self.source.find("\n", start)
        return self.source[start:] if end < 0 else self.source[start:end]


class PrologSyntaxError(Exception):
    """A located syntax error; ``snippet`` is the source line plus an underline."""

    def __init__(self, message: str, span: SourceSpan, snippet: str = ""):
        super().__init__(f"{span.start_line}:{span.start_col}: {message}")
        self.message = message
        self.span = span
        self.snippet = snippet

    def __eq__(self, other):
        return (isinstance(other, PrologSyntaxError) and self.message == other.message
                and self.span == other.span)

    def __hash__(self):
        return hash((self.message, self.span))

    def to_dict(self) -> dict:
        s = self.span
        return {"message": self.message, "line": s.start_line, "column": s.start_col,
                "end_line": s.end_line, "end_column": s.end_col,
                "start_offset": s.start_offset, "end_offset": s.end_offset,
                "snippet": self.snippet}


class SyntaxErrors(Exception):
    """Raised when a whole input is rejected; carries every error found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


def _marker(text: str, start_col: int, end_col: int) -> str:
    # columns are 1-based, end exclusive; tabs are kept so the marker lines up
    pad = "".join("\t" if ch == "\t" else " " for ch in text[: start_col - 1])
    width = max(1, end_col - start_col)
    return pad + "^" + "~" * (width - 1)


def make_snippet(lines: LineMap, span: SourceSpan) -> str:
    text = lines.line_text(span.start_line)
    if span.end_line == span.start_line:
        end_col = span.end_col
    else:
        end_col = len(text) + 1
    return text + "\n" + _marker(text, span.start_col, end_col)


def make_error(lines: LineMap, message: str, start: int, end: int) -> PrologSyntaxError:
    end = max(start, min(end, len(lines.source)))
    span = lines.span(start, end)
    return PrologSyntaxError(message, span, make_snippet(lines, span))


def render_error(source: str, err: PrologSyntaxError, color: bool = False) -> str:
    """Render one error as ``line:col`` header, offending line(s) and a marker line."""
    lines = LineMap(source)
    s = err.span
    red, bold, reset = ("\x1b[31m", "\x1b[1m", "\x1b[0m") if color else ("", "", "")
    header = f"{bold}{s.start_line}:{s.start_col}: syntax error: {err.message}{reset}"
    gutter = len(str(s.end_line))

    def row(n, text):
        return f"{n:>{gutter}} | {text}"

    def mark(text):
        return " " * gutter + " | " + red + text + reset

    first = lines.line_text(s.start_line)
    if s.start_line == s.end_line:
        out = [header, row(s.start_line, first), mark(_marker(first, s.start_col, s.end_col))]
    else:
        last = lines.line_text(s.end_line)
        out = [header, row(s.start_line, first),
               mark(_marker(first, s.start_col, len(first) + 1))]
        if s.end_line > s.start_line + 1:
            out.append(" " * gutter + " | …")
        out.append(row(s.end_line, last))
        out.append(mark(_marker(last, 1, max(2, s.end_col))))
    return "\n".join(out)


def render_errors(source: str, errors, color: bool = False) -> str:
    ordered = sorted(errors, key=lambda e: (e.span.start_offset, e.span.end_offset))
    return "\n\n".join(render_error(source, e, color) for e in ordered)
