"""Recursive-descent parser for the DLV-dialect fragment.

Grammar::

    program    := { statement } ;
    statement  := directive | rule ;
    directive  := "#maxint" "=" INTEGER "." ;
    rule       := [ head ] [ ":-" body ] "." ;
    head       := atom { "v" atom } ;
    body       := bodyelem { "," bodyelem } ;
    bodyelem   := [ "not" ] atom | comparison | aggregate ;
    comparison := term cmpop term ;
    aggregate  := "#count" "{" VARIABLE ":" atom "}" cmpop term ;
    atom       := IDENT [ "(" term { "," term } ")" ] ;
    term       := IDENT | VARIABLE | INTEGER ;

``%`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from ..errors import ArityError, AspSyntaxError, SafetyError, UnsupportedAggregate
from .syntax import (
    AggregateAtom,
    Atom,
    Comparison,
    Constant,
    Integer,
    Literal,
    Program,
    Rule,
    Variable,
    largest_integer,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<neq>!=|<>)
  | (?P<cmp><=|>=|<|>|=)
  | (?P<directive>\#[A-Za-z_]+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<punct>[.,(){}:])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def iter_tokens(text: str):
    """Yield tokens lazily so that the first error in reading order is reported."""
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise AspSyntaxError(line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group()
        if kind == "neq":
            raise AspSyntaxError(line, col, f"operator {value!r} is not part of the dialect")
        if kind not in ("ws", "comment"):
            if kind == "punct":
                kind = value
            yield Token(kind, value, line, col)
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    yield Token("eof", "", line, pos - line_start + 1)


def tokenize(text: str) -> list[Token]:
    return list(iter_tokens(text))


class _Parser:
    def __init__(self, text):
        self._source = iter_tokens(text)
        self.tokens = []
        self.pos = 0

    def _fill(self, i):
        while len(self.tokens) <= i:
            if self.tokens and self.tokens[-1].kind == "eof":
                return self.tokens[-1]
            self.tokens.append(next(self._source))
        return self.tokens[i]

    @property
    def tok(self):
        return self._fill(self.pos)

    def peek(self, offset=1):
        return self._fill(self.pos + offset)

    def advance(self):
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.tok
        return AspSyntaxError(tok.line, tok.column, message)

    def describe(self, tok):
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def expect(self, kind, what=None):
        if self.tok.kind != kind:
            raise self.error(f"expected {what or repr(kind)}, found {self.describe(self.tok)}")
        return self.advance()

    # statements

    def parse(self):
        rules = []
        maxint = None
        while self.tok.kind != "eof":
            if self.tok.kind == "directive":
                if self.tok.text != "#maxint":
                    raise self.error(f"unknown directive {self.tok.text}")
                maxint = self.directive()
            else:
                rules.append(self.rule())
        return rules, maxint

    def directive(self):
        self.advance()
        if self.tok.text != "=":
            raise self.error(f"expected '=' after #maxint, found {self.describe(self.tok)}")
        self.advance()
        value = int(self.expect("int", "an integer").text)
        self.expect(".", "'.'")
        return value

    def rule(self):
        start = self.tok
        head = []
        body = []
        if self.tok.kind == "ident":
            head.append(self.atom())
            while self.tok.kind == "ident" and self.tok.text == "v":
                self.advance()
                head.append(self.atom())
        elif self.tok.kind != "if":
            raise self.error(f"expected a rule, found {self.describe(self.tok)}")
        if self.tok.kind == "if":
            self.advance()
            body.append(self.body_element(constraint=not head))
            while self.tok.kind == ",":
                self.advance()
                body.append(self.body_element(constraint=not head))
        if self.tok.kind != ".":
            raise self.error(f"expected '.', found {self.describe(self.tok)}")
        self.advance()
        return Rule(tuple(head), tuple(body), start.line, start.column)

    def body_element(self, constraint):
        tok = self.tok
        if tok.kind == "ident" and tok.text == "not":
            self.advance()
            if self.tok.kind != "ident":
                raise self.error(f"expected an atom after 'not', found {self.describe(self.tok)}")
            return Literal(self.atom(), negated=True)
        if tok.kind == "directive":
            return self.aggregate(constraint)
        if tok.kind == "ident" and self.peek().kind != "cmp":
            return Literal(self.atom())
        if tok.kind in ("ident", "var", "int"):
            return self.comparison()
        raise self.error(f"expected a body element, found {self.describe(tok)}")

    def comparison(self):
        left_tok = self.tok
        left = self.term()
        if self.tok.kind != "cmp":
            raise self.error(f"expected a comparison operator, found {self.describe(self.tok)}")
        op = self.advance().text
        right_tok = self.tok
        right = self.term()
        for t, at in ((left, left_tok), (right, right_tok)):
            if isinstance(t, Constant):
                raise self.error("comparison operands must be integers or variables", at)
        return Comparison(left, op, right)

    def aggregate(self, constraint):
        tok = self.advance()
        name = tok.text
        if name != "#count":
            if name in ("#sum", "#max", "#min", "#times"):
                raise UnsupportedAggregate(tok.line, tok.column, f"aggregate {name} is not supported")
            raise self.error(f"unknown directive {name}", tok)
        if not constraint:
            raise self.error("aggregates are only allowed in integrity constraints", tok)
        lbrace = self.expect("{", "'{'")
        var_tok = self.expect("var", "a variable")
        self.expect(":", "':'")
        if self.tok.kind != "ident":
            raise self.error(f"expected an atom, found {self.describe(self.tok)}")
        inner = self.atom()
        if self.tok.kind == "eof":
            raise self.error("unclosed '{'", lbrace)
        self.expect("}", "'}'")
        if self.tok.kind != "cmp":
            raise self.error(f"expected a comparison operator, found {self.describe(self.tok)}")
        op = self.advance().text
        guard_tok = self.tok
        guard = self.term()
        if isinstance(guard, Constant):
            raise self.error("aggregate guard must be an integer or a variable", guard_tok)
        bound = Variable(var_tok.text)
        if bound not in inner.args:
            raise self.error(f"variable {bound} does not occur in {inner}", var_tok)
        return AggregateAtom(bound, inner, op, guard)

    def atom(self):
        name = self.expect("ident", "a predicate name")
        if name.text in ("not", "v"):
            raise self.error(f"{name.text!r} cannot be used as a predicate name", name)
        if self.tok.kind != "(":
            return Atom(name.text)
        lparen = self.advance()
        args = [self.term()]
        while self.tok.kind == ",":
            self.advance()
            args.append(self.term())
        if self.tok.kind == "eof":
            raise self.error("unclosed parenthesis", lparen)
        self.expect(")", "')'")
        return Atom(name.text, tuple(args))

    def term(self):
        tok = self.tok
        if tok.kind == "ident":
            self.advance()
            return Constant(tok.text)
        if tok.kind == "var":
            self.advance()
            return Variable(tok.text)
        if tok.kind == "int":
            self.advance()
            return Integer(int(tok.text))
        if tok.kind == "eof":
            raise self.error("unexpected end of input, expected a term")
        raise self.error(f"expected a term, found {self.describe(tok)}")


def check_safety(rule: Rule, index: int = 0) -> None:
    """Raise SafetyError for the first variable not bound by a positive body atom."""
    bound = set()
    for atom in rule.positive_body():
        bound.update(atom.variables())
    candidates = []
    for atom in rule.head:
        candidates.extend(atom.variables())
    for b in rule.body:
        if isinstance(b, Literal):
            if b.negated:
                candidates.extend(b.variables())
        else:
            candidates.extend(b.variables())
    for v in candidates:
        if v not in bound:
            raise SafetyError(index, v.name, rule.line, rule.column)


def check_arities(rules) -> None:
    arity = {}
    for rule in rules:
        for atom in rule.atoms():
            expected = arity.setdefault(atom.predicate, atom.arity)
            if expected != atom.arity:
                raise ArityError(atom.predicate, expected, atom.arity)


def parse_program(text: str, maxint: int | None = None) -> Program:
    """Parse ``text`` into a Program.

    The bound on integers is taken from a ``#maxint=N.`` directive if present,
    else from ``maxint``, else from the largest integer literal in the text.
    """
    rules, directive = _Parser(text).parse()
    for i, rule in enumerate(rules):
        check_safety(rule, i)
    check_arities(rules)
    if directive is not None:
        bound = directive
    elif maxint is not None:
        bound = maxint
    else:
        bound = largest_integer(rules)
    return Program(tuple(rules), bound)
