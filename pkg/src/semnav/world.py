"""Junction-sequence world: kinds, maneuvers, slots and maneuver plans.

This module has no dependency on the ASP engine so that the plan oracle,
which builds on it, stays independent of parsing, grounding and solving.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

from .errors import MalformedModel, WorldError

ROUNDABOUT_EXITS = 4


class JunctionKind(Enum):
    INTERSECTION = "intersection"
    ROUNDABOUT = "roundabout"

    @property
    def exits(self):
        return ROUNDABOUT_EXITS if self is JunctionKind.ROUNDABOUT else None

    @property
    def predicate(self):
        return "inter" if self is JunctionKind.INTERSECTION else "round"

    @property
    def letter(self):
        return "i" if self is JunctionKind.INTERSECTION else "r"


class Maneuver(Enum):
    LEFT = "left"
    STRAIGHT = "straight"
    RIGHT = "right"

    @property
    def predicate(self):
        return f"cross_{self.value}"

    @classmethod
    def parse(cls, name: str) -> "Maneuver":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise WorldError(f"unknown maneuver {name!r}") from None


KIND_LETTERS = {"i": JunctionKind.INTERSECTION, "r": JunctionKind.ROUNDABOUT, "u": None}
_KIND_BY_PREDICATE = {k.predicate: k for k in JunctionKind}
_MANEUVER_BY_PREDICATE = {m.predicate: m for m in Maneuver}


@dataclass(frozen=True)
class JunctionSlot:
    index: int
    kind: Optional[JunctionKind] = None  # None: the detector could not tell

    @property
    def known(self):
        return self.kind is not None


@dataclass(frozen=True)
class RoadWorld:
    slots: tuple

    def __post_init__(self):
        if not self.slots:
            raise WorldError("a road world needs at least one junction")
        for expected, slot in enumerate(self.slots, start=1):
            if slot.index != expected:
                raise WorldError(f"junction indices must be 1..n, got {slot.index} at position {expected}")

    @classmethod
    def from_kinds(cls, kinds) -> "RoadWorld":
        """Build from letters ``i`` (intersection), ``r`` (roundabout), ``u`` (unknown).

        ``kinds`` may be a comma-separated string or a sequence of letters.
        """
        if isinstance(kinds, str):
            kinds = [k for k in kinds.split(",") if k.strip()]
        slots = []
        for i, letter in enumerate(kinds, start=1):
            key = letter.strip().lower()
            if key not in KIND_LETTERS:
                raise WorldError(f"unknown junction kind {letter!r} (expected i, r or u)")
            slots.append(JunctionSlot(i, KIND_LETTERS[key]))
        return cls(tuple(slots))

    @classmethod
    def unknown(cls, n: int) -> "RoadWorld":
        return cls(tuple(JunctionSlot(i) for i in range(1, n + 1)))

    def __len__(self):
        return len(self.slots)

    @property
    def unknown_count(self):
        return sum(1 for s in self.slots if not s.known)

    def kind_letters(self):
        return [s.kind.letter if s.known else "u" for s in self.slots]


class PlanStep(NamedTuple):
    index: int
    kind: JunctionKind
    maneuver: Maneuver

    def __str__(self):
        return f"{self.index}:{self.kind.value}:{self.maneuver.value}"


@dataclass(frozen=True)
class ManeuverPlan:
    steps: tuple

    def __post_init__(self):
        indices = [s.index for s in self.steps]
        if indices != sorted(set(indices)):
            raise WorldError("plan steps must have unique, ascending indices")

    @classmethod
    def of(cls, *steps) -> "ManeuverPlan":
        return cls(tuple(PlanStep(*s) for s in steps))

    def maneuvers(self):
        return [s.maneuver for s in self.steps]

    def __str__(self):
        return "[" + ", ".join(str(s) for s in self.steps) + "]"


def _index_of(atom):
    if len(atom.args) != 1 or not hasattr(atom.args[0], "value"):
        raise MalformedModel(f"expected a single integer argument in {atom}")
    return atom.args[0].value


def extract_plan(answer_set) -> ManeuverPlan:
    """Read the kind and maneuver chosen at every junction of an answer set.

    Junctions are those mentioned by ``junction/1``, a kind atom or a
    maneuver atom; each must carry exactly one of each.
    """
    kinds, maneuvers, junctions = {}, {}, set()
    for atom in answer_set:
        if atom.predicate == "junction" and len(atom.args) == 1:
            junctions.add(_index_of(atom))
        elif atom.predicate in _KIND_BY_PREDICATE:
            kinds.setdefault(_index_of(atom), []).append(_KIND_BY_PREDICATE[atom.predicate])
        elif atom.predicate in _MANEUVER_BY_PREDICATE:
            maneuvers.setdefault(_index_of(atom), []).append(_MANEUVER_BY_PREDICATE[atom.predicate])
    junctions |= kinds.keys() | maneuvers.keys()
    steps = []
    for i in sorted(junctions):
        m = maneuvers.get(i, [])
        k = kinds.get(i, [])
        if len(m) != 1:
            raise MalformedModel(f"junction {i} has {len(m)} maneuvers, expected exactly one")
        if len(k) != 1:
            raise MalformedModel(f"junction {i} has {len(k)} kinds, expected exactly one")
        steps.append(PlanStep(i, k[0], m[0]))
    return ManeuverPlan(tuple(steps))
