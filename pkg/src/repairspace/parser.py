"""Concrete syntax for knowledge bases and queries.

KB files are UTF-8 text with up to three sections, in this order::

    @facts
    baby(m).
    @rules
    get_ill(X) :- go_to(X, Z).
    @constraints
    ! :- go_to(X, nanny), go_to(X, day_care).

Identifiers starting lowercase are constants/predicates, uppercase are
variables. ``%`` starts a line comment; whitespace is insignificant.
Queries are bare comma-separated atom lists: ``baby(X), get_ill(X)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .model import Atom, Constant, KnowledgeBase, NegativeConstraint, Query, Rule, Term, Variable

log = logging.getLogger(__name__)

_SECTIONS = ("@facts", "@rules", "@constraints")


class ParseError(Exception):
    """Syntax or validation error, with 1-based source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # lident | uident | section | punct | eof
    text: str
    line: int
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            col += 1
            i += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "@":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word not in _SECTIONS:
                raise ParseError(f"unknown section header {word!r}", line, col)
            tokens.append(_Token("section", word, line, col))
            col += j - i
            i = j
            continue
        if c == ":" and i + 1 < n and text[i + 1] == "-":
            tokens.append(_Token("punct", ":-", line, col))
            i += 2
            col += 2
            continue
        if c in "(),.!":
            tokens.append(_Token("punct", c, line, col))
            i += 1
            col += 1
            continue
        if c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "uident" if word[0].isupper() else "lident"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        return self.next()

    def fail(self, message: str) -> None:
        tok = self.peek()
        raise ParseError(message, tok.line, tok.column)

    # atoms -----------------------------------------------------------------

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "lident":
            self.next()
            return Constant(tok.text)
        if tok.kind == "uident":
            self.next()
            return Variable(tok.text)
        self.fail(f"expected a term, found {tok.text or 'end of input'!r}")
        raise AssertionError  # unreachable

    def parse_atom(self) -> Tuple[Atom, _Token]:
        tok = self.peek()
        if tok.kind != "lident":
            self.fail(f"expected a predicate name, found {tok.text or 'end of input'!r}")
        self.next()
        args: List[Term] = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text == ")":  # explicit 0-ary form p()
                self.next()
            else:
                args.append(self.parse_term())
                while self.peek().text == ",":
                    self.next()
                    args.append(self.parse_term())
                self.expect(")")
        return Atom(tok.text, tuple(args)), tok

    def parse_atom_list(self) -> List[Tuple[Atom, _Token]]:
        out = [self.parse_atom()]
        while self.peek().text == ",":
            self.next()
            out.append(self.parse_atom())
        return out


class _ArityTable:
    def __init__(self) -> None:
        self.arities: Dict[str, int] = {}

    def check(self, atom: Atom, tok: _Token) -> None:
        known = self.arities.get(atom.predicate)
        if known is None:
            self.arities[atom.predicate] = atom.arity
        elif known != atom.arity:
            raise ParseError(
                f"arity mismatch for predicate {atom.predicate!r}: "
                f"used with {atom.arity} argument(s), previously {known}",
                tok.line,
                tok.column,
            )


def parse_kb(text: str) -> KnowledgeBase:
    """Parse a KB file into a validated :class:`KnowledgeBase`.

    Fact order equals source order. Raises :class:`ParseError` on syntax
    errors, arity mismatches, non-ground or duplicate facts.
    """
    parser = _Parser(_tokenize(text))
    arities = _ArityTable()
    facts: List[Atom] = []
    rules: List[Rule] = []
    constraints: List[NegativeConstraint] = []
    seen_sections: List[str] = []

    while parser.peek().kind != "eof":
        tok = parser.peek()
        if tok.kind != "section":
            if not seen_sections:
                parser.fail("content before the first section header")
            parser.fail(f"unexpected {tok.text!r}")
        parser.next()
        if tok.text in seen_sections:
            raise ParseError(f"duplicate section {tok.text}", tok.line, tok.column)
        if seen_sections and _SECTIONS.index(tok.text) < _SECTIONS.index(seen_sections[-1]):
            raise ParseError(
                f"section {tok.text} must come before {seen_sections[-1]}", tok.line, tok.column
            )
        seen_sections.append(tok.text)

        while parser.peek().kind not in ("section", "eof"):
            if tok.text == "@facts":
                atom, atok = parser.parse_atom()
                parser.expect(".")
                arities.check(atom, atok)
                if not atom.is_ground():
                    raise ParseError(f"non-ground fact: {atom}", atok.line, atok.column)
                if atom in facts:
                    raise ParseError(f"duplicate fact: {atom}", atok.line, atok.column)
                facts.append(atom)
            elif tok.text == "@rules":
                head = parser.parse_atom_list()
                parser.expect(":-")
                body = parser.parse_atom_list()
                parser.expect(".")
                for a, t in head + body:
                    arities.check(a, t)
                rules.append(
                    Rule(
                        id=f"r{len(rules) + 1}",
                        body=tuple(a for a, _ in body),
                        head=tuple(a for a, _ in head),
                    )
                )
            else:  # @constraints
                parser.expect("!")
                parser.expect(":-")
                body = parser.parse_atom_list()
                parser.expect(".")
                for a, t in body:
                    arities.check(a, t)
                constraints.append(
                    NegativeConstraint(id=f"n{len(constraints) + 1}", body=tuple(a for a, _ in body))
                )

    return KnowledgeBase(facts=tuple(facts), rules=tuple(rules), constraints=tuple(constraints))


def parse_query(text: str, known_predicates: Optional[Iterable[str]] = None) -> Query:
    """Parse a comma-separated atom list into a :class:`Query`.

    With ``known_predicates`` given, predicates absent from it trigger a
    non-fatal warning (the query can still run; it just cannot match).
    """
    parser = _Parser(_tokenize(text))
    if parser.peek().kind == "eof":
        parser.fail("empty query")
    atoms = parser.parse_atom_list()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected {tok.text!r} after query", tok.line, tok.column)
    arities = _ArityTable()
    for a, t in atoms:
        arities.check(a, t)
    if known_predicates is not None:
        known = set(known_predicates)
        for a, _ in atoms:
            if a.predicate not in known:
                log.warning("query predicate %r is not used anywhere in the KB", a.predicate)
    return Query(atoms=tuple(a for a, _ in atoms))
