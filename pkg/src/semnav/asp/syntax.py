"""Abstract syntax of the DLV-dialect fragment, with canonical printing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

COMPARISON_OPS = ("<", "<=", ">", ">=", "=")


@dataclass(frozen=True)
class Constant:
    symbol: str

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Integer:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


Term = Union[Constant, Integer, Variable]
GroundTerm = Union[Constant, Integer]


def term_key(term: Term):
    """Total order on terms: integers first (numerically), then constants, then variables."""
    if isinstance(term, Integer):
        return (0, term.value, "")
    if isinstance(term, Constant):
        return (1, 0, term.symbol)
    return (2, 0, term.name)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()

    @property
    def arity(self):
        return len(self.args)

    @property
    def signature(self):
        return (self.predicate, len(self.args))

    def variables(self) -> Iterator[Variable]:
        for t in self.args:
            if isinstance(t, Variable):
                yield t

    def is_ground(self):
        return not any(isinstance(t, Variable) for t in self.args)

    def key(self):
        return (self.predicate, tuple(term_key(t) for t in self.args))

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(str(t) for t in self.args)})"


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def variables(self):
        return self.atom.variables()

    def key(self):
        return (0, int(self.negated), self.atom.key())

    def __str__(self):
        return f"not {self.atom}" if self.negated else str(self.atom)


@dataclass(frozen=True)
class Comparison:
    left: Term
    op: str
    right: Term

    def variables(self):
        for t in (self.left, self.right):
            if isinstance(t, Variable):
                yield t

    def key(self):
        return (1, self.op, term_key(self.left), term_key(self.right))

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class AggregateAtom:
    """``#count{bound_var : inner} op guard``; only ``#count`` exists in the fragment."""

    bound_var: Variable
    inner: Atom
    op: str
    guard: Term
    function: str = "count"

    def global_variables(self):
        """Variables of the aggregate that are not locally bound."""
        for v in self.inner.variables():
            if v != self.bound_var:
                yield v
        if isinstance(self.guard, Variable):
            yield self.guard

    def variables(self):
        return self.global_variables()

    def key(self):
        return (2, self.inner.key(), self.op, term_key(self.guard))

    def __str__(self):
        return f"#{self.function}{{{self.bound_var} : {self.inner}}} {self.op} {self.guard}"


BodyElement = Union[Literal, Comparison, AggregateAtom]


@dataclass(frozen=True)
class Rule:
    head: tuple = ()
    body: tuple = ()
    line: int | None = field(default=None, compare=False)
    column: int | None = field(default=None, compare=False)

    @property
    def is_constraint(self):
        return not self.head

    @property
    def is_fact(self):
        return len(self.head) == 1 and not self.body and self.head[0].is_ground()

    @property
    def is_disjunctive(self):
        return len(self.head) > 1

    def positive_body(self):
        return [b.atom for b in self.body if isinstance(b, Literal) and not b.negated]

    def negative_body(self):
        return [b.atom for b in self.body if isinstance(b, Literal) and b.negated]

    def aggregates(self):
        return [b for b in self.body if isinstance(b, AggregateAtom)]

    def comparisons(self):
        return [b for b in self.body if isinstance(b, Comparison)]

    def atoms(self) -> Iterator[Atom]:
        yield from self.head
        for b in self.body:
            if isinstance(b, Literal):
                yield b.atom
            elif isinstance(b, AggregateAtom):
                yield b.inner

    def is_ground(self):
        for a in self.head:
            if not a.is_ground():
                return False
        for b in self.body:
            if isinstance(b, AggregateAtom):
                if any(True for _ in b.global_variables()):
                    return False
            elif any(True for _ in b.variables()):
                return False
        return True

    def key(self):
        return (tuple(a.key() for a in self.head), tuple(b.key() for b in self.body))

    def __str__(self):
        head = " v ".join(str(a) for a in self.head)
        if not self.body:
            return f"{head}."
        body = ", ".join(str(b) for b in self.body)
        if not head:
            return f":- {body}."
        return f"{head} :- {body}."


def largest_integer(rules) -> int:
    """Largest integer literal occurring anywhere in ``rules`` (0 when there is none)."""
    best = 0
    for rule in rules:
        for atom in rule.atoms():
            for t in atom.args:
                if isinstance(t, Integer):
                    best = max(best, t.value)
        for b in rule.body:
            if isinstance(b, Comparison):
                terms = (b.left, b.right)
            elif isinstance(b, AggregateAtom):
                terms = (b.guard,)
            else:
                continue
            for t in terms:
                if isinstance(t, Integer):
                    best = max(best, t.value)
    return best


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    maxint: int = 0

    def signatures(self):
        """Predicate arities in order of first use."""
        seen = {}
        for rule in self.rules:
            for atom in rule.atoms():
                seen.setdefault(atom.predicate, atom.arity)
        return seen

    def __add__(self, other):
        return merge_programs(self, other)


def merge_programs(*programs, maxint=None) -> Program:
    """Concatenate programs, re-checking predicate arities across them.

    ``maxint`` defaults to the largest maxint among the inputs.
    """
    from ..errors import ArityError

    rules = []
    arity = {}
    for p in programs:
        for rule in p.rules:
            for atom in rule.atoms():
                expected = arity.setdefault(atom.predicate, atom.arity)
                if expected != atom.arity:
                    raise ArityError(atom.predicate, expected, atom.arity)
            rules.append(rule)
    if maxint is None:
        maxint = max((p.maxint for p in programs), default=0)
    return Program(tuple(rules), maxint)


def print_program(program: Program) -> str:
    """Canonical text: one rule per line.

    A ``#maxint`` directive is emitted only when the program's bound differs from
    the one that would be inferred from its integer literals, so that
    parsing the output reproduces the same program.
    """
    lines = []
    if program.maxint != largest_integer(program.rules):
        lines.append(f"#maxint={program.maxint}.")
    lines.extend(str(r) for r in program.rules)
    return "\n".join(lines)


def count_effective_lines(text: str) -> int:
    count = 0
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("%"):
            count += 1
    return count
