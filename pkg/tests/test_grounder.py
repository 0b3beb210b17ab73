import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import answer_sets
from progen import random_nonground_text
from semnav.asp import AggregateAtom, Variable, ground, parse_program, print_program, solve
from semnav.asp.syntax import Comparison
from semnav.errors import DomainOverflow
from semnav.roadworld import emit_extrinsic_facts, intrinsic_handbook
from semnav.world import RoadWorld


def ground_strings(text, maxint=None, **kw):
    return {str(r) for r in ground(parse_program(text, maxint), **kw).rules}


def test_direct_substitution():
    assert ground_strings("p(X) :- d(X). d(1). d(2).", 2) == {
        "d(1).",
        "d(2).",
        "p(1) :- d(1).",
        "p(2) :- d(2).",
    }


def test_ordering_constraint_instances():
    # Independent enumeration: all (T1, T2) over the three junctions with T1 >= T2.
    expected_pairs = [(t1, t2) for t1, t2 in itertools.product(range(1, 4), repeat=2) if t1 >= t2]
    assert expected_pairs == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    expected = {f":- cross_left({a}), cross_straight({b})." for a, b in expected_pairs}

    context = print_program(intrinsic_handbook()) + "\n" + print_program(emit_extrinsic_facts(RoadWorld.unknown(3)))
    rules = ground_strings(context + "\n:-cross_left(T1), cross_straight(T2), T1>=T2.", 3)
    got = {r for r in rules if r.startswith(":- cross_left(") and "cross_straight" in r}
    assert got == expected


def test_empty_comparison_slice():
    assert ground_strings(":- q(X), X > 5. q(0). q(1). q(2). q(3).", 3) == {"q(0).", "q(1).", "q(2).", "q(3)."}
    assert ground_strings(":- q(X), X > 5. q(0). q(1). q(2). q(3).", 3, naive=True) == {
        "q(0).",
        "q(1).",
        "q(2).",
        "q(3).",
    }


def test_variables_beyond_maxint_are_not_instantiated():
    gp = ground(parse_program("d(5). p(X) :- d(X).", 3))
    assert {str(r) for r in gp.rules} == {"d(5)."}


def test_aggregate_keeps_bound_variable():
    gp = ground(parse_program("g(2). p(1). :- g(N), #count{T : p(T)} > N."))
    agg = [b for r in gp.rules for b in r.body if isinstance(b, AggregateAtom)]
    assert len(agg) == 1
    assert agg[0].bound_var == Variable("T")
    assert str(agg[0]) == "#count{T : p(T)} > 2"


def test_no_residual_variables_or_comparisons():
    rng = random.Random(11)
    for _ in range(100):
        gp = ground(parse_program(random_nonground_text(rng)))
        for r in gp.rules:
            assert r.is_ground()
            assert not any(isinstance(b, Comparison) for b in r.body)
        universe = set(gp.atom_universe)
        for r in gp.rules:
            assert set(r.head) <= universe
            assert {a for a in r.positive_body() + r.negative_body()} <= universe


def test_negation_of_underivable_atom_is_dropped():
    assert ground_strings("a :- not b.") == {"a."}


def test_rules_are_sorted_deterministically():
    gp = ground(parse_program("z. b :- z. a :- z. :- a, b."))
    assert [str(r) for r in gp.rules] == [":- a, b.", "a :- z.", "b :- z.", "z."]


def test_idempotence():
    rng = random.Random(5)
    for _ in range(100):
        gp = ground(parse_program(random_nonground_text(rng)))
        again = ground(gp.to_program())
        assert again.rules == gp.rules


def test_domain_overflow():
    with pytest.raises(DomainOverflow):
        ground(parse_program("p(X) :- d(X). d(1). d(2). d(3).", 3), cap=3)
    with pytest.raises(DomainOverflow):
        ground(parse_program("p(X, Y, Z) :- d(X), d(Y), d(Z). d(1).", 50), naive=True, cap=1000)


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_smart_and_naive_grounding_agree(rnd):
    program = parse_program(random_nonground_text(rnd))
    smart = ground(program)
    naive = ground(program, naive=True)
    assert len(smart.rules) <= len(naive.rules)
    assert answer_sets(solve(smart)) == answer_sets(solve(naive))
