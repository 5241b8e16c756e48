"""Tokenizer and set-expression parser shared by the text formats.

Set expressions::

    set   := term ('+' term)*              union
    term  := atom ('&' atom)*              intersection
    atom  := 'TOP' | 'EMPTY' | 'EG' | 'I(' var ',' var ')' | 'G(' var ',' var ')'
           | '{' [subst (';' subst)*] '}' | '(' set ')'
    subst := 'eps' | binding (',' binding)*
    binding := var '/' (var | const)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import CarrierError, ParseError, PreconditionError
from .subst import (FlatSubst, SubCarrier, SubstSet, ground_bindings_set,
                    ground_pair_set, independent_set)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<arrow><-)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[(){},;/+&*.])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, comment: str | None = None, *, line: int = 1, col: int = 1) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        if comment and text.startswith(comment, pos):
            nl = text.find("\n", pos)
            if nl < 0:
                break
            col += nl - pos
            pos = nl
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind != "ws":
                out.append(Token(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.toks[self.pos]

    def peek_at(self, k: int) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek.text == text and self.peek.kind != "eof"

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek
        if tok.text != text or tok.kind == "eof":
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {found}", tok.line, tok.col)
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek
        if tok.kind != "ident":
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected {what}, found {found}", tok.line, tok.col)
        return self.next()

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek
        return ParseError(msg, tok.line, tok.col)


SET_KEYWORDS = ("TOP", "EMPTY", "EG", "I", "G")


def starts_set_atom(ts: TokenStream) -> bool:
    tok = ts.peek
    if tok.text in ("{",):
        return True
    if tok.kind == "ident" and tok.text in ("TOP", "EMPTY", "EG"):
        return True
    return tok.kind == "ident" and tok.text in ("I", "G") and ts.peek_at(1).text == "("


class SetExprParser:
    """Recursive-descent parser resolving names against a carrier."""

    def __init__(self, carrier: SubCarrier, ts: TokenStream):
        self.carrier = carrier
        self.alphabet = carrier.alphabet
        self.ts = ts

    def parse_set(self) -> SubstSet:
        s = self.parse_term()
        while self.ts.at("+"):
            self.ts.next()
            s = s | self.parse_term()
        return s

    def parse_term(self) -> SubstSet:
        s = self.parse_atom()
        while self.ts.at("&"):
            self.ts.next()
            s = s & self.parse_atom()
        return s

    def parse_atom(self) -> SubstSet:
        ts = self.ts
        tok = ts.peek
        if ts.accept("("):
            s = self.parse_set()
            ts.expect(")")
            return s
        if ts.at("{"):
            return self.parse_braces()
        if tok.kind == "ident":
            if tok.text == "TOP":
                ts.next()
                return self.carrier.top
            if tok.text == "EMPTY":
                ts.next()
                return self.carrier.empty
            if tok.text == "EG":
                ts.next()
                return ground_bindings_set(self.carrier)
            if tok.text in ("I", "G") and ts.peek_at(1).text == "(":
                ts.next()
                ts.expect("(")
                x = self.variable()
                ts.expect(",")
                y = self.variable()
                ts.expect(")")
                if x.text == y.text:
                    raise ts.error(f"{tok.text}(...) needs two distinct variables", x)
                build = independent_set if tok.text == "I" else ground_pair_set
                return build(self.carrier, x.text, y.text)
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ts.error(f"expected a set expression, found {found}")

    def variable(self) -> Token:
        tok = self.ts.ident("variable")
        if not self.alphabet.is_variable(tok.text):
            raise self.ts.error(f"{tok.text!r} is not a variable of the carrier", tok)
        return tok

    def parse_braces(self) -> SubstSet:
        ts = self.ts
        ts.expect("{")
        members = []
        if not ts.at("}"):
            members.append(self.parse_subst())
            while ts.accept(";"):
                members.append(self.parse_subst())
        ts.expect("}")
        return self.carrier.set(members)

    def parse_subst(self) -> FlatSubst:
        ts = self.ts
        start = ts.peek
        if start.kind == "ident" and start.text == "eps" and not self.alphabet.is_variable("eps"):
            ts.next()
            return self.carrier.eps
        bindings = [self.parse_binding()]
        while ts.accept(","):
            bindings.append(self.parse_binding())
        try:
            return self.carrier.subst(bindings)
        except (PreconditionError, CarrierError) as exc:
            raise ts.error(str(exc), start) from None

    def parse_binding(self) -> tuple[str, str]:
        ts = self.ts
        v = self.variable()
        ts.expect("/")
        t = ts.ident("variable or constant")
        if t.text not in self.alphabet.symbol_index:
            raise ts.error(f"{t.text!r} is not a variable or constant of the carrier", t)
        return v.text, t.text


def parse_set(text: str, carrier: SubCarrier) -> SubstSet:
    """Parse a single set expression."""
    ts = TokenStream(tokenize(text))
    s = SetExprParser(carrier, ts).parse_set()
    if ts.peek.kind != "eof":
        raise ts.error(f"unexpected {ts.peek.text!r} after set expression")
    return s


def parse_set_list(text: str, carrier: SubCarrier, *, line: int = 1, col: int = 1) -> list[SubstSet]:
    """Parse a whitespace-separated sequence of set expressions."""
    ts = TokenStream(tokenize(text, line=line, col=col))
    p = SetExprParser(carrier, ts)
    out = []
    while ts.peek.kind != "eof":
        out.append(p.parse_set())
    return out


def format_set(s: SubstSet) -> str:
    """Text that :func:`parse_set` maps back to ``s``."""
    return repr(s)
