"""Extrinsic detection facts and the intrinsic driving handbook."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .asp.parser import parse_program
from .asp.syntax import Atom, Integer, Program, Rule
from .world import JunctionKind, RoadWorld

HANDBOOK_VERSION = 1


def handbook_text() -> str:
    return resources.files("semnav").joinpath("resources/handbook.lp").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def intrinsic_handbook() -> Program:
    """The fixed traffic-rule program; it does not depend on any instruction."""
    return parse_program(handbook_text())


def emit_extrinsic_facts(world: RoadWorld) -> Program:
    """Facts describing the detected junctions.

    Every slot yields ``junction(i)``; known slots add ``known_inter(i)`` or
    ``known_round(i)``, the others ``unknown_kind(i)``.
    """
    junctions = []
    kinds = []
    for slot in world.slots:
        idx = (Integer(slot.index),)
        junctions.append(Rule((Atom("junction", idx),)))
        if slot.kind is JunctionKind.INTERSECTION:
            kinds.append(Rule((Atom("known_inter", idx),)))
        elif slot.kind is JunctionKind.ROUNDABOUT:
            kinds.append(Rule((Atom("known_round", idx),)))
        else:
            kinds.append(Rule((Atom("unknown_kind", idx),)))
    return Program(tuple(junctions + kinds), len(world))
