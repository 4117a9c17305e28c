"""Tokenizer for the supported Prolog subset."""
from __future__ import annotations

from dataclasses import dataclass
from .errors import LineMap, SyntaxErrors, make_error
from .terms import SourceSpan

SYMBOL_CHARS = set("+-*/\\^<>=~:.?@#&$")
SOLO = {"!", ";"}
PUNCT = set("()[],|")
ESCAPES = {"n": "\n", "t": "\t", "\\": "\\", "'": "'"}


@dataclass(frozen=True)
class Token:
    kind: str            # atom, qatom, var, int, float, punct, end
    value: object
    span: SourceSpan
    layout_before: bool = False

    def __repr__(self):
        return f"{self.kind}:{self.value!r}"

    def is_punct(self, ch: str) -> bool:
        return self.kind == "punct" and self.value == ch


def _is_alnum(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


class Lexer:
    def __init__(self, source: str):
        self.src = source
        self.lines = LineMap(source)
        self.pos = 0
        self.tokens: list = []
        self.errors: list = []

    def span(self, start: int, end: int) -> SourceSpan:
        return self.lines.span(start, end)

    def error(self, message: str, start: int, end: int):
        self.errors.append(make_error(self.lines, message, start, end))

    def skip_layout(self) -> bool:
        src, n = self.src, len(self.src)
        start = self.pos
        while self.pos < n:
            ch = src[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "%":
                nl = src.find("\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            elif src.startswith("/*", self.pos):
                close = src.find("*/", self.pos + 2)
                if close < 0:
                    self.error("unterminated block comment", self.pos, n)
                    self.pos = n
                else:
                    self.pos = close + 2
            else:
                break
        return self.pos > start

    def run(self):
        src, n = self.src, len(self.src)
        layout = True
        while True:
            layout = self.skip_layout() or layout
            if self.pos >= n:
                break
            start = self.pos
            ch = src[start]
            if ch.isdigit():
                self.number(layout)
            elif ch == "_" or ch.isupper():
                end = start
                while end < n and _is_alnum(src[end]):
                    end += 1
                self.push("var", src[start:end], start, end, layout)
            elif ch.isalpha():
                end = start
                while end < n and _is_alnum(src[end]):
                    end += 1
                self.push("atom", src[start:end], start, end, layout)
            elif ch == "'":
                self.quoted(layout)
            elif ch == '"':
                end = src.find('"', start + 1)
                end = n if end < 0 else end + 1
                self.error("double-quoted strings are not supported", start, end)
                self.pos = end
            elif ch in PUNCT:
                self.push("punct", ch, start, start + 1, layout)
            elif ch in SOLO:
                self.push("atom", ch, start, start + 1, layout)
            elif ch in SYMBOL_CHARS:
                end = start
                while end < n and src[end] in SYMBOL_CHARS:
                    end += 1
                text = src[start:end]
                if text == "." and (end >= n or src[end].isspace() or src[end] == "%"):
                    self.push("end", ".", start, end, layout)
                else:
                    self.push("atom", text, start, end, layout)
            else:
                self.error(f"invalid character {ch!r}", start, start + 1)
                self.pos = start + 1
            layout = False
        return self.tokens

    def push(self, kind, value, start, end, layout):
        self.tokens.append(Token(kind, value, self.span(start, end), layout))
        self.pos = end

    def number(self, layout):
        src, n = self.src, len(self.src)
        start = end = self.pos
        while end < n and src[end].isdigit():
            end += 1
        is_float = False
        if end + 1 < n and src[end] == "." and src[end + 1].isdigit():
            is_float = True
            end += 1
            while end < n and src[end].isdigit():
                end += 1
        if end < n and src[end] in "eE":
            exp = end + 1
            if exp < n and src[exp] in "+-":
                exp += 1
            if exp < n and src[exp].isdigit() and is_float:
                end = exp
                while end < n and src[end].isdigit():
                    end += 1
        text = src[start:end]
        if is_float:
            self.push("float", float(text), start, end, layout)
        else:
            self.push("int", int(text), start, end, layout)

    def quoted(self, layout):
        src, n = self.src, len(self.src)
        start = self.pos
        i = start + 1
        chars = []
        while True:
            if i >= n:
                self.error("unterminated quoted atom", start, n)
                self.pos = n
                return
            ch = src[i]
            if ch == "'":
                if i + 1 < n and src[i + 1] == "'":
                    chars.append("'")
                    i += 2
                    continue
                break
            if ch == "\\":
                nxt = src[i + 1] if i + 1 < n else ""
                if nxt in ESCAPES:
                    chars.append(ESCAPES[nxt])
                    i += 2
                    continue
                self.error(f"unsupported escape sequence \\{nxt}", i, min(n, i + 2))
                i += 2
                continue
            if ch == "\n":
                self.error("unterminated quoted atom", start, i)
                self.pos = i
                return
            chars.append(ch)
            i += 1
        self.push("qatom", "".join(chars), start, i + 1, layout)


def lex(source: str):
    """Tokens and errors, without raising."""
    lexer = Lexer(source)
    tokens = lexer.run()
    return tokens, lexer.errors


def tokenize(source: str) -> list:
    """Tokenize ``source``; raises :class:`SyntaxErrors` on any lexical error."""
    tokens, errors = lex(source)
    if errors:
        raise SyntaxErrors(errors)
    return tokens


def token_kinds(tokens) -> list:
    return [(t.kind, t.value) for t in tokens]

