"""A small answer set programming engine for a DLV-dialect fragment."""

from .grounder import GroundProgram, ground
from .parser import parse_program
from .solver import AnswerSet, SolveReport, check_stability, solve
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
    count_effective_lines,
    merge_programs,
    print_program,
)

__all__ = [
    "AggregateAtom",
    "AnswerSet",
    "Atom",
    "Comparison",
    "Constant",
    "GroundProgram",
    "Integer",
    "Literal",
    "Program",
    "Rule",
    "SolveReport",
    "Variable",
    "check_stability",
    "count_effective_lines",
    "ground",
    "merge_programs",
    "parse_program",
    "print_program",
    "solve",
]
