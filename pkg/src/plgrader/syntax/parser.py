"""Operator-precedence parser producing span-annotated terms and clauses."""
from __future__ import annotations

from .errors import LineMap, SyntaxErrors, make_error
from .lexer import Token, lex
from .terms import (Atom, Clause, Compound, Float, Int, Program, Var,
                    flatten_conjunction)

PREFIX_OPS = {":-": (1200, "fx"), "\\+": (900, "fy"), "-": (200, "fy")}

INFIX_OPS = {
    ":-": (1200, "xfx"),
    ";": (1100, "xfy"),
    "->": (1050, "xfy"),
    ",": (1000, "xfy"),
    **{op: (700, "xfx") for op in
       ("=", "\\=", "==", "\\==", "is", "<", ">", "=<", ">=", "=:=", "=\\=")},
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "*": (400, "yfx"),
    "/": (400, "yfx"),
    "//": (400, "yfx"),
    "mod": (400, "yfx"),
}

CONTROL = {(",", 2), (";", 2), ("->", 2), ("!", 0), ("\\+", 1), (":-", 1), (":-", 2)}


class _Fail(Exception):
    def __init__(self, message, start, end):
        self.message, self.start, self.end = message, start, end


class _ClauseParser:
    """Parses the tokens of one clause (or one query)."""

    def __init__(self, tokens, lines: LineMap):
        self.tokens = tokens
        self.lines = lines
        self.i = 0
        self.varmap = {}
        self.nvars = 0

    # -- helpers
    def peek(self, k=0):
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail_at(self, tok, message):
        if tok is None:
            start = self.tokens[0].span.start_offset if self.tokens else 0
            end = self.tokens[-1].span.end_offset if self.tokens else 0
            raise _Fail(message, start, end)
        raise _Fail(message, tok.span.start_offset, tok.span.end_offset)

    def span(self, a, b):
        return self.lines.span(a.start_offset, b.end_offset)

    def var(self, tok):
        name = tok.value
        if name == "_":
            v = Var("_", self.nvars, tok.span)
            self.nvars += 1
            return v
        if name not in self.varmap:
            self.varmap[name] = self.nvars
            self.nvars += 1
        return Var(name, self.varmap[name], tok.span)

    def expect(self, ch, what):
        tok = self.peek()
        if tok is None or not tok.is_punct(ch):
            if tok is None or tok.kind == "end":
                self.fail_at(None, f"missing '{ch}'" + (f" {what}" if what else ""))
            self.fail_at(tok, f"expected '{ch}'" + (f" {what}" if what else "")
                         + f", found {_describe(tok)}")
        return self.advance()

    @staticmethod
    def starts_term(tok) -> bool:
        if tok is None:
            return False
        if tok.kind in ("int", "float", "var", "qatom"):
            return True
        if tok.kind == "atom":
            return True
        return tok.kind == "punct" and tok.value in "(["

    # -- grammar
    def parse(self, maxprec):
        left, left_prec = self.primary(maxprec)
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok.kind == "atom" or tok.is_punct(","):
                name = tok.value
            else:
                break
            if name not in INFIX_OPS:
                break
            prec, kind = INFIX_OPS[name]
            if prec > maxprec:
                break
            left_max = prec - 1 if kind in ("xfx", "xfy") else prec
            right_max = prec - 1 if kind in ("xfx", "yfx") else prec
            if left_prec > left_max:
                self.fail_at(tok, f"operator priority clash at '{name}'")
            self.advance()
            right, _ = self.parse(right_max)
            left = Compound(name, (left, right), self.span(left.span, right.span))
            left_prec = prec
        return left, left_prec

    def primary(self, maxprec):
        tok = self.peek()
        if tok is None or tok.kind == "end":
            self.fail_at(None, "unexpected end of clause")
        self.advance()
        kind = tok.kind
        if kind == "int":
            return Int(tok.value, tok.span), 0
        if kind == "float":
            return Float(tok.value, tok.span), 0
        if kind == "var":
            return self.var(tok), 0
        if kind == "punct":
            if tok.value == "(":
                inner, _ = self.parse(1200)
                self.expect(")", "to close '('")
                return inner, 0
            if tok.value == "[":
                return self.list_term(tok), 0
            self.fail_at(tok, f"unexpected {_describe(tok)}")
        # atom or quoted atom
        name = tok.value
        nxt = self.peek()
        if nxt is not None and nxt.is_punct("(") and not nxt.layout_before:
            self.advance()
            args = [self.parse(999)[0]]
            while self.peek() is not None and self.peek().is_punct(","):
                self.advance()
                args.append(self.parse(999)[0])
            close = self.expect(")", "to close argument list")
            return Compound(name, tuple(args), self.span(tok.span, close.span)), 0
        if kind == "atom":
            if (name == "-" and nxt is not None and nxt.kind in ("int", "float")
                    and not nxt.layout_before):
                self.advance()
                cls = Int if nxt.kind == "int" else Float
                return cls(-nxt.value, self.span(tok.span, nxt.span)), 0
            if name in PREFIX_OPS and self.starts_term(nxt) and not self._is_infix_next(nxt):
                prec, op_kind = PREFIX_OPS[name]
                prec = min(prec, maxprec)
                arg, _ = self.parse(prec - 1 if op_kind == "fx" else prec)
                return Compound(name, (arg,), self.span(tok.span, arg.span)), prec
        return Atom(name, tok.span), 0

    def _is_infix_next(self, nxt) -> bool:
        # `- = X`: the prefix operator is an operand, the following atom an infix op
        if nxt.kind != "atom" or nxt.value not in INFIX_OPS or nxt.value in PREFIX_OPS:
            return False
        after = self.peek(1)
        return self.starts_term(after)

    def list_term(self, open_tok):
        nxt = self.peek()
        if nxt is not None and nxt.is_punct("]"):
            close = self.advance()
            return Atom("[]", self.span(open_tok.span, close.span))
        items = [self.parse(999)[0]]
        tail = None
        while True:
            tok = self.peek()
            if tok is not None and tok.is_punct(","):
                self.advance()
                items.append(self.parse(999)[0])
            elif tok is not None and tok.is_punct("|"):
                self.advance()
                tail = self.parse(999)[0]
                break
            else:
                break
        close = self.expect("]", "to close list")
        whole = self.span(open_tok.span, close.span)
        result = tail if tail is not None else Atom("[]", close.span)
        for k in range(len(items) - 1, -1, -1):
            cell_span = self.span(items[k].span, close.span) if k else whole
            result = Compound(".", (items[k], result), cell_span)
        return result

    def whole(self):
        term, _ = self.parse(1200)
        tok = self.peek()
        if tok is not None and tok.kind != "end":
            self.fail_at(tok, f"operator expected, found {_describe(tok)}")
        return term


def _describe(tok) -> str:
    if tok is None:
        return "end of input"
    if tok.kind == "end":
        return "end of clause"
    if tok.kind == "punct":
        return f"'{tok.value}'"
    return f"{tok.kind} {tok.value!r}" if tok.kind != "var" else f"variable {tok.value}"


def _split_clauses(tokens):
    chunk = []
    for tok in tokens:
        chunk.append(tok)
        if tok.kind == "end":
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def _to_clause(term, nvars, lines):
    if isinstance(term, Compound) and term.name == ":-" and len(term.args) == 2:
        head, body = term.args
        goals = tuple(flatten_conjunction(body))
    else:
        head, goals = term, ()
    if not isinstance(head, (Atom, Compound)):
        what = "variable" if isinstance(head, Var) else "number"
        raise _Fail(f"clause head cannot be a {what}",
                    head.span.start_offset, head.span.end_offset)
    key = (head.name, len(head.args) if isinstance(head, Compound) else 0)
    if key in CONTROL:
        raise _Fail(f"cannot redefine control construct {key[0]}/{key[1]}",
                    head.span.start_offset, head.span.end_offset)
    for goal in goals:
        if isinstance(goal, (Int, Float)):
            raise _Fail("body goal is not callable",
                        goal.span.start_offset, goal.span.end_offset)
    return Clause(head, goals, term.span, nvars)


def parse_program(source: str):
    """Parse a whole program; returns ``(Program, errors)``.

    A clause with an error is skipped up to its terminating ``.`` and parsing
    resumes with the next clause, so every independent error is reported.
    """
    lines = LineMap(source)
    tokens, errors = lex(source)
    errors = list(errors)
    lex_ranges = [(e.span.start_offset, e.span.end_offset) for e in errors]
    program = Program()
    prev_end = 0
    for chunk in _split_clauses(tokens):
        chunk_end = chunk[-1].span.end_offset
        lo, hi = prev_end, chunk_end
        prev_end = chunk_end
        if any(lo <= s < hi for s, _ in lex_ranges):
            continue
        terminated = chunk[-1].kind == "end"
        parser = _ClauseParser(chunk, lines)
        try:
            if terminated and len(chunk) == 1:
                raise _Fail("empty clause", chunk[0].span.start_offset, chunk_end)
            term = parser.whole()
            if not terminated:
                raise _Fail("missing terminating '.'", chunk[0].span.start_offset, chunk_end)
            if isinstance(term, Compound) and term.name == ":-" and len(term.args) == 1:
                program.directives.append(term.args[0])
            else:
                program.add(_to_clause(term, parser.nvars, lines))
        except _Fail as fail:
            errors.append(make_error(lines, fail.message, fail.start, fail.end))
    errors.sort(key=lambda e: (e.span.start_offset, e.span.end_offset))
    return program, errors


def parse_query(source: str):
    """Parse a single goal (conjunction allowed); a trailing ``.`` is optional."""
    term = parse_term(source)
    if isinstance(term, (Int, Float)):
        raise make_error(LineMap(source), "query is not callable", 0, len(source))
    return term


def parse_term(source: str):
    """Parse one term; raises :class:`PrologSyntaxError` on the first error."""
    lines = LineMap(source)
    tokens, errors = lex(source)
    if errors:
        raise errors[0]
    if tokens and tokens[-1].kind == "end":
        tokens = tokens[:-1]
    if any(t.kind == "end" for t in tokens):
        tok = next(t for t in tokens if t.kind == "end")
        raise make_error(lines, "a query is a single term", tok.span.start_offset,
                         tok.span.end_offset)
    if not tokens:
        raise make_error(lines, "empty query", 0, len(source))
    parser = _ClauseParser(tokens, lines)
    try:
        term = parser.whole()
    except _Fail as fail:
        raise make_error(lines, fail.message, fail.start, fail.end) from None
    return term


def parse_program_strict(source: str) -> Program:
    program, errors = parse_program(source)
    if errors:
        raise SyntaxErrors(errors)
    return program
