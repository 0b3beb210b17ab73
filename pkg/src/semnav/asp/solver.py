"""Answer set enumeration for ground disjunctive programs with ``#count`` constraints.

The search assigns atoms chronologically and propagates two kinds of
inferences after every decision:

* rule propagation: a rule whose body is true needs a true head atom, and a
  rule whose head is false cannot have a true body;
* support propagation: an atom can only be true if some rule has a true body
  and no other true head atom (every answer set of a disjunctive program is
  supported in this sense).

Every total assignment that survives is a supported model; it is accepted
when no strictly smaller model of its reduct exists.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from ..errors import ResourceExceeded
from .grounder import GroundProgram, compare_terms
from .syntax import AggregateAtom, Atom, Integer, Literal

DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class AnswerSet:
    atoms: frozenset

    def sorted_atoms(self):
        return sorted(str(a) for a in self.atoms)

    def __contains__(self, atom):
        return atom in self.atoms

    def __iter__(self):
        return iter(sorted(self.atoms, key=Atom.key))

    def __len__(self):
        return len(self.atoms)

    def __str__(self):
        return "{" + ", ".join(self.sorted_atoms()) + "}"


@dataclass(frozen=True)
class SolveReport:
    answer_sets: tuple
    elapsed: float = field(default=0.0, compare=False)

    @property
    def count(self):
        return len(self.answer_sets)

    def to_dict(self):
        return {
            "count": self.count,
            "answer_sets": [s.sorted_atoms() for s in self.answer_sets],
            "elapsed_s": self.elapsed,
        }


def canonical_order(sets):
    return sorted(sets, key=AnswerSet.sorted_atoms)


def aggregate_matches(agg: AggregateAtom, universe) -> list:
    """Universe atoms that are instances of the aggregate's inner atom."""
    pattern = agg.inner
    out = []
    for atom in universe:
        if atom.signature != pattern.signature:
            continue
        value = None
        for p, g in zip(pattern.args, atom.args):
            if p == agg.bound_var:
                if value is None:
                    value = g
                elif value != g:
                    break
            elif p != g:
                break
        else:
            out.append(atom)
    return out


def aggregate_holds(agg: AggregateAtom, count: int) -> bool:
    return compare_terms(Integer(count), agg.op, agg.guard)


class _Conflict(Exception):
    pass


@dataclass
class _Rule:
    head: tuple
    pos: tuple
    neg: tuple
    aggs: tuple  # (matching atom ids, AggregateAtom)


class _Search:
    def __init__(self, gp: GroundProgram, budget: int):
        self.atoms = list(gp.atom_universe)
        self.index = {a: i for i, a in enumerate(self.atoms)}
        self.rules = []
        self.head_rules = [[] for _ in self.atoms]
        for rule in gp.rules:
            pos, neg, aggs = [], [], []
            for b in rule.body:
                if isinstance(b, Literal):
                    (neg if b.negated else pos).append(self.index[b.atom])
                elif isinstance(b, AggregateAtom):
                    ids = tuple(self.index[m] for m in aggregate_matches(b, self.atoms))
                    aggs.append((ids, b))
            r = _Rule(tuple(self.index[h] for h in rule.head), tuple(pos), tuple(neg), tuple(aggs))
            self.rules.append(r)
            for h in r.head:
                self.head_rules[h].append(r)
        self.budget = budget
        self.decisions = 0
        self.found = []

    # truth values: True, False, None (unassigned)

    @staticmethod
    def _set(a, x, v):
        cur = a[x]
        if cur is None:
            a[x] = v
            return True
        if cur != v:
            raise _Conflict
        return False

    @staticmethod
    def _agg_status(a, ids, agg):
        true = sum(1 for i in ids if a[i] is True)
        open_ = sum(1 for i in ids if a[i] is None)
        results = {aggregate_holds(agg, c) for c in range(true, true + open_ + 1)}
        if len(results) == 2:
            return None
        return results.pop()

    def _body_state(self, a, r):
        """Return (false?, open literals, open aggregates)."""
        open_lits = []
        open_aggs = 0
        for p in r.pos:
            v = a[p]
            if v is False:
                return True, None, 0
            if v is None:
                open_lits.append((p, True))
        for q in r.neg:
            v = a[q]
            if v is True:
                return True, None, 0
            if v is None:
                open_lits.append((q, False))
        for ids, agg in r.aggs:
            st = self._agg_status(a, ids, agg)
            if st is False:
                return True, None, 0
            if st is None:
                open_aggs += 1
        return False, open_lits, open_aggs

    def _propagate(self, a):
        changed = True
        while changed:
            changed = False
            for r in self.rules:
                if any(a[h] is True for h in r.head):
                    continue
                body_false, open_lits, open_aggs = self._body_state(a, r)
                if body_false:
                    continue
                open_head = [h for h in r.head if a[h] is None]
                if not open_lits and not open_aggs:
                    if not open_head:
                        raise _Conflict
                    if len(open_head) == 1:
                        changed |= self._set(a, open_head[0], True)
                elif not open_head and not open_aggs and len(open_lits) == 1:
                    x, positive = open_lits[0]
                    changed |= self._set(a, x, not positive)
            for x, rules in enumerate(self.head_rules):
                if a[x] is False:
                    continue
                supports = []
                for r in rules:
                    if any(a[h] is True for h in r.head if h != x):
                        continue
                    if self._body_state(a, r)[0]:
                        continue
                    supports.append(r)
                    if len(supports) > 1:
                        break
                if not supports:
                    changed |= self._set(a, x, False)
                elif a[x] is True and len(supports) == 1:
                    r = supports[0]
                    for p in r.pos:
                        changed |= self._set(a, p, True)
                    for q in r.neg:
                        changed |= self._set(a, q, False)
                    for h in r.head:
                        if h != x:
                            changed |= self._set(a, h, False)

    def run(self):
        self._search([None] * len(self.atoms))
        return self.found

    def _search(self, a):
        try:
            self._propagate(a)
        except _Conflict:
            return
        for x, v in enumerate(a):
            if v is None:
                break
        else:
            model = frozenset(i for i, v in enumerate(a) if v)
            if not self._has_smaller_model(model):
                self.found.append(model)
            return
        self.decisions += 1
        if self.decisions > self.budget:
            raise ResourceExceeded(f"search exceeded {self.budget} decisions")
        for value in (True, False):
            b = list(a)
            b[x] = value
            self._search(b)

    def _has_smaller_model(self, model):
        """Is there a model of the reduct w.r.t. ``model`` strictly inside it?"""
        clauses = []
        for r in self.rules:
            if not r.head or any(q in model for q in r.neg):
                continue
            if all(p in model for p in r.pos):
                clauses.append((frozenset(r.pos), frozenset(h for h in r.head if h in model)))
        # at least one atom of the model must be dropped
        clauses.append((model, frozenset()))
        return _satisfiable(clauses, {})


def _satisfiable(clauses, assignment):
    """Tiny DPLL over clauses written as (atoms that must be false, atoms that may be true)."""
    assignment = dict(assignment)
    while True:
        unit = None
        for neg, pos in clauses:
            if any(assignment.get(x) is False for x in neg) or any(assignment.get(x) is True for x in pos):
                continue
            open_neg = [x for x in neg if x not in assignment]
            open_pos = [x for x in pos if x not in assignment]
            if not open_neg and not open_pos:
                return False
            if len(open_neg) + len(open_pos) == 1:
                unit = (open_neg[0], False) if open_neg else (open_pos[0], True)
                break
        if unit is None:
            break
        assignment[unit[0]] = unit[1]
    for neg, pos in clauses:
        if any(assignment.get(x) is False for x in neg) or any(assignment.get(x) is True for x in pos):
            continue
        x = next(iter(sorted((set(neg) | set(pos)) - assignment.keys())))
        return _satisfiable(clauses, {**assignment, x: False}) or _satisfiable(
            clauses, {**assignment, x: True}
        )
    return True


def solve(gp: GroundProgram, limit: int | None = None, *, budget: int = DEFAULT_NODE_BUDGET) -> SolveReport:
    """Enumerate all answer sets of ``gp`` in canonical order.

    With ``limit`` only the first ``limit`` sets of the canonical order are kept.
    """
    if limit is not None and limit < 1:
        raise ValueError("limit must be a positive integer")
    start = time.perf_counter()
    search = _Search(gp, budget)
    models = search.run()
    sets = canonical_order(AnswerSet(frozenset(search.atoms[i] for i in m)) for m in models)
    if limit is not None:
        sets = sets[:limit]
    return SolveReport(tuple(sets), time.perf_counter() - start)


# Reference check, deliberately independent of the search above.


def _body_true(rule, interpretation, universe):
    for b in rule.body:
        if isinstance(b, Literal):
            if (b.atom in interpretation) == b.negated:
                return False
        elif isinstance(b, AggregateAtom):
            n = sum(1 for m in aggregate_matches(b, universe) if m in interpretation)
            if not aggregate_holds(b, n):
                return False
    return True


def check_stability(gp: GroundProgram, candidate) -> bool:
    """Decide whether ``candidate`` is an answer set of ``gp`` by brute force.

    The candidate must be a model of every rule (constraints included); the
    reduct is then searched exhaustively for a model that is a proper subset.
    """
    interp = frozenset(candidate)
    universe = gp.atom_universe
    if not interp <= set(universe):
        raise ValueError("candidate contains atoms outside the program's universe")
    for rule in gp.rules:
        if _body_true(rule, interp, universe) and not interp.intersection(rule.head):
            return False

    reduct = []
    for rule in gp.rules:
        if not rule.head or any(a in interp for a in rule.negative_body()):
            continue
        reduct.append((frozenset(rule.positive_body()), frozenset(rule.head) & interp))

    # atoms every model of the reduct must contain
    forced = set()
    grew = True
    while grew:
        grew = False
        for pos, head in reduct:
            if len(head) == 1 and pos <= forced and not head <= forced:
                forced |= head
                grew = True
    free = sorted(interp - forced, key=Atom.key)
    for size in range(len(free)):
        for subset in itertools.combinations(free, size):
            smaller = forced.union(subset)
            if all(not pos <= smaller or head & smaller for pos, head in reduct):
                return False
    return True
