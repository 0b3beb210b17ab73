"""Brute-force referee for semantic correctness.

Plans are enumerated directly from the road world; nothing here parses,
grounds or solves a logic program.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import LengthMismatch, WorldError
from .world import JunctionKind, Maneuver, ManeuverPlan, PlanStep, RoadWorld, extract_plan


@dataclass(frozen=True)
class StructuredInstruction:
    directives: tuple

    def __post_init__(self):
        if not self.directives:
            raise WorldError("an instruction needs at least one maneuver")

    @classmethod
    def from_names(cls, names) -> "StructuredInstruction":
        return cls(tuple(Maneuver.parse(n) for n in names))

    def __len__(self):
        return len(self.directives)


@dataclass(frozen=True)
class SemanticVerdict:
    ok: bool
    missing: frozenset = field(default_factory=frozenset)
    spurious: frozenset = field(default_factory=frozenset)


def enumerate_valid_plans(instr: StructuredInstruction, world: RoadWorld) -> frozenset:
    if len(instr) != len(world):
        raise LengthMismatch(
            f"instruction has {len(instr)} maneuvers but the world has {len(world)} junctions"
        )
    choices = [[s.kind] if s.known else list(JunctionKind) for s in world.slots]
    plans = set()
    for kinds in itertools.product(*choices):
        steps = tuple(
            PlanStep(slot.index, kind, maneuver)
            for slot, kind, maneuver in zip(world.slots, kinds, instr.directives)
        )
        plans.add(ManeuverPlan(steps))
    return frozenset(plans)


def compare(report, oracle_plans) -> SemanticVerdict:
    """Set-compare the plans read from ``report``'s answer sets with the oracle's."""
    produced = frozenset(extract_plan(s) for s in report.answer_sets)
    expected = frozenset(oracle_plans)
    missing = expected - produced
    spurious = produced - expected
    ok = not missing and not spurious and bool(expected)
    return SemanticVerdict(ok, missing, spurious)
