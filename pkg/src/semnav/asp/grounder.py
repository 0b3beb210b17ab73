"""Instantiation of programs into variable-free ground programs."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

from ..errors import DomainOverflow
from .syntax import (
    AggregateAtom,
    Atom,
    Constant,
    Integer,
    Literal,
    Program,
    Rule,
    Variable,
    print_program,
    term_key,
)

DEFAULT_RULE_CAP = 10**6


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple
    atom_universe: tuple
    maxint: int = 0

    def to_program(self) -> Program:
        return Program(self.rules, self.maxint)

    def __str__(self):
        return print_program(self.to_program())


def compare_terms(left, op, right) -> bool:
    if op == "=":
        return left == right
    lk, rk = term_key(left), term_key(right)
    if op == "<":
        return lk < rk
    if op == "<=":
        return lk <= rk
    if op == ">":
        return lk > rk
    if op == ">=":
        return lk >= rk
    raise ValueError(f"unknown comparison operator {op!r}")


def _subst_term(t, s):
    if isinstance(t, Variable):
        return s.get(t, t)
    return t


def _subst_atom(atom, s, keep=None):
    if not atom.args:
        return atom
    return Atom(atom.predicate, tuple(t if t == keep else _subst_term(t, s) for t in atom.args))


def _in_range(term, maxint):
    return not isinstance(term, Integer) or term.value <= maxint


def _unify(pattern: Atom, ground_atom: Atom, s: dict, maxint: int):
    """Extend substitution ``s`` so that ``pattern`` matches ``ground_atom``, or None."""
    out = s
    for p, g in zip(pattern.args, ground_atom.args):
        if isinstance(p, Variable):
            bound = out.get(p)
            if bound is None:
                if not _in_range(g, maxint):
                    return None
                if out is s:
                    out = dict(s)
                out[p] = g
            elif bound != g:
                return None
        elif p != g:
            return None
    return out


def _comparisons_hold(rule, s):
    for c in rule.comparisons():
        if not compare_terms(_subst_term(c.left, s), c.op, _subst_term(c.right, s)):
            return False
    return True


def _matches(rule: Rule, index, maxint):
    """All substitutions binding the rule's positive body to atoms in ``index``."""
    positives = rule.positive_body()

    def join(i, s):
        if i == len(positives):
            if _comparisons_hold(rule, s):
                yield s
            return
        pattern = positives[i]
        for cand in index.get(pattern.signature, ()):
            s2 = _unify(pattern, cand, s, maxint)
            if s2 is not None:
                yield from join(i + 1, s2)

    return join(0, {})


def _instantiate(rule: Rule, s, keep_negative) -> Rule:
    head = tuple(_subst_atom(a, s) for a in rule.head)
    body = []
    for b in rule.body:
        if isinstance(b, Literal):
            atom = _subst_atom(b.atom, s)
            if b.negated and not keep_negative(atom):
                continue
            body.append(Literal(atom, b.negated))
        elif isinstance(b, AggregateAtom):
            local = dict(s)
            local.pop(b.bound_var, None)
            body.append(
                AggregateAtom(
                    b.bound_var,
                    _subst_atom(b.inner, local, keep=b.bound_var),
                    b.op,
                    _subst_term(b.guard, local),
                )
            )
        # comparisons are fully evaluated and dropped
    return Rule(head, tuple(body))


def _finish(rules, maxint) -> GroundProgram:
    unique = sorted(set(rules), key=Rule.key)
    universe = set()
    for r in unique:
        universe.update(r.head)
        for b in r.body:
            if isinstance(b, Literal):
                universe.add(b.atom)
    return GroundProgram(tuple(unique), tuple(sorted(universe, key=Atom.key)), maxint)


def derivable_atoms(program: Program) -> dict:
    """Over-approximation of the atoms true in any answer set, indexed by signature.

    Negation is ignored and every disjunct of a fired head is assumed true.
    """
    index = defaultdict(set)
    changed = True
    while changed:
        changed = False
        for rule in program.rules:
            if not rule.head:
                continue
            for s in list(_matches(rule, index, program.maxint)):
                for h in rule.head:
                    g = _subst_atom(h, s)
                    bucket = index[g.signature]
                    if g not in bucket:
                        bucket.add(g)
                        changed = True
    return index


def ground(program: Program, *, naive: bool = False, cap: int = DEFAULT_RULE_CAP) -> GroundProgram:
    """Instantiate ``program``.

    The default strategy only produces instances whose positive body atoms are
    derivable; ``naive=True`` substitutes every variable with every domain
    element (program constants and the integers ``0..maxint``) and serves as
    a reference.  Both have the same answer sets.
    """
    if naive:
        return _ground_naive(program, cap)
    index = derivable_atoms(program)
    possible = set().union(*index.values()) if index else set()
    out = []
    for rule in program.rules:
        for s in _matches(rule, index, program.maxint):
            out.append(_instantiate(rule, s, possible.__contains__))
            if len(out) > cap:
                raise DomainOverflow(f"more than {cap} ground rules")
    return _finish(out, program.maxint)


def program_constants(program: Program) -> list:
    consts = set()
    for rule in program.rules:
        for atom in rule.atoms():
            consts.update(t for t in atom.args if isinstance(t, Constant))
        for c in rule.comparisons():
            consts.update(t for t in (c.left, c.right) if isinstance(t, Constant))
    return sorted(consts, key=term_key)


def _rule_variables(rule: Rule):
    seen = []
    for atom in rule.head:
        seen.extend(atom.variables())
    for b in rule.body:
        seen.extend(b.variables())
    return list(dict.fromkeys(seen))


def _ground_naive(program: Program, cap: int) -> GroundProgram:
    domain = [Integer(i) for i in range(program.maxint + 1)] + program_constants(program)
    out = []
    total = 0
    for rule in program.rules:
        variables = _rule_variables(rule)
        total += len(domain) ** len(variables)
        if total > cap:
            raise DomainOverflow(f"more than {cap} ground rules")
        for values in itertools.product(domain, repeat=len(variables)):
            s = dict(zip(variables, values))
            if _comparisons_hold(rule, s):
                out.append(_instantiate(rule, s, lambda _atom: True))
    return _finish(out, program.maxint)
