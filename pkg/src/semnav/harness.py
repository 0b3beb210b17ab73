"""End-to-end experiment runs: prompt, code, parse, ground, solve, referee."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .asp.grounder import ground
from .asp.parser import parse_program
from .asp.solver import solve
from .asp.syntax import count_effective_lines, merge_programs
from .errors import AspError, ConfigError, LlmError, MalformedModel, SemnavError
from .llm import (
    PromptBundle,
    ProviderConfig,
    TaskKind,
    build_prompt,
    complete,
    default_guidelines,
    extract_code,
    fixture_complete,
)
from .oracle import SemanticVerdict, StructuredInstruction, compare, enumerate_valid_plans
from .roadworld import emit_extrinsic_facts, handbook_text, intrinsic_handbook
from .world import JunctionKind, Maneuver, ManeuverPlan, PlanStep, RoadWorld

logger = logging.getLogger(__name__)

REPORT_KEYS = ("id", "model", "syntax_ok", "semantic_ok", "lines", "answer_set_count", "elapsed_s")


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    instruction_text: str
    world: RoadWorld
    models: tuple
    task_kind: TaskKind = TaskKind.CONSTRAINTS_ONLY
    structured_instruction: Optional[StructuredInstruction] = None
    oracle_plans: Optional[frozenset] = None
    fixtures_dir: Optional[Path] = None
    providers: dict = field(default_factory=dict)
    live: bool = False

    def __post_init__(self):
        if self.task_kind is TaskKind.CONSTRAINTS_ONLY:
            if self.structured_instruction is None:
                raise ConfigError(f"{self.id}: constraints-only experiments need a structured instruction")
            if len(self.structured_instruction) != len(self.world):
                raise ConfigError(
                    f"{self.id}: instruction has {len(self.structured_instruction)} maneuvers "
                    f"for {len(self.world)} junctions"
                )
        elif self.oracle_plans is None:
            raise ConfigError(f"{self.id}: rules-and-constraints experiments need explicit oracle plans")
        if not self.models:
            raise ConfigError(f"{self.id}: no models listed")

    def expected_plans(self) -> frozenset:
        if self.oracle_plans is not None:
            return self.oracle_plans
        return enumerate_valid_plans(self.structured_instruction, self.world)

    def bundle(self) -> PromptBundle:
        return PromptBundle(handbook_text(), self.instruction_text, default_guidelines(), self.task_kind)


@dataclass(frozen=True)
class ExperimentResult:
    id: str
    model_name: str
    syntax_ok: bool
    semantic_ok: bool
    lines: Optional[int] = None
    answer_set_count: Optional[int] = None
    elapsed_s: Optional[float] = None
    verdict_detail: Optional[SemanticVerdict] = None
    error: Optional[str] = field(default=None, compare=False)

    def to_dict(self):
        return {
            "id": self.id,
            "model": self.model_name,
            "syntax_ok": self.syntax_ok,
            "semantic_ok": self.semantic_ok,
            "lines": self.lines,
            "answer_set_count": self.answer_set_count,
            "elapsed_s": None if self.elapsed_s is None else round(self.elapsed_s, 6),
        }


def _parse_plan(entries) -> ManeuverPlan:
    """``["i:right", "r:left"]`` -> plan over junctions 1, 2, ..."""
    steps = []
    for i, entry in enumerate(entries, start=1):
        try:
            letter, maneuver = str(entry).split(":")
            kind = {"i": JunctionKind.INTERSECTION, "r": JunctionKind.ROUNDABOUT}[letter.strip()]
        except (ValueError, KeyError):
            raise ConfigError(f"bad plan step {entry!r}, expected '<i|r>:<maneuver>'") from None
        steps.append(PlanStep(i, kind, Maneuver.parse(maneuver)))
    return ManeuverPlan(tuple(steps))


def load_spec(path) -> ExperimentSpec:
    """Read an experiment spec file (YAML); relative paths resolve against its directory."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"spec file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping")
    try:
        world = RoadWorld.from_kinds(data["world"])
        structured = data.get("structured_instruction")
        plans = data.get("oracle_plans")
        fixtures = data.get("fixtures")
        providers = {
            name: ProviderConfig(**cfg) for name, cfg in (data.get("providers") or {}).items()
        }
        return ExperimentSpec(
            id=str(data["id"]),
            instruction_text=str(data["instruction"]),
            world=world,
            models=tuple(data["models"]),
            task_kind=TaskKind(data.get("task", TaskKind.CONSTRAINTS_ONLY.value)),
            structured_instruction=StructuredInstruction.from_names(structured) if structured else None,
            oracle_plans=frozenset(_parse_plan(p) for p in plans) if plans else None,
            fixtures_dir=(path.parent / fixtures) if fixtures else None,
            providers=providers,
            live=data.get("source", "fixtures") == "live",
        )
    except KeyError as exc:
        raise ConfigError(f"{path}: missing field {exc.args[0]}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _response(spec: ExperimentSpec, model: str, prompt: str, client):
    if spec.live:
        if model not in spec.providers:
            raise ConfigError(f"{spec.id}: no provider configured for {model}")
        return complete(prompt, spec.providers[model], model_name=model, client=client)
    return fixture_complete(spec.id, model, spec.fixtures_dir)


def run_model(spec: ExperimentSpec, model: str, *, client=None) -> ExperimentResult:
    """One row of the verdict table; failures are recorded, never raised."""
    row = dict(id=spec.id, model_name=model, syntax_ok=False, semantic_ok=False)
    try:
        response = _response(spec, model, build_prompt(spec.bundle()), client)
        code = extract_code(response)
        generated = parse_program(code)
        if spec.task_kind is TaskKind.CONSTRAINTS_ONLY:
            for rule in generated.rules:
                if rule.head:
                    raise ConfigError(f"line {rule.line}: statement with a head in a constraints-only task")
        facts = emit_extrinsic_facts(spec.world)
        program = merge_programs(intrinsic_handbook(), facts, generated, maxint=len(spec.world))
    except (AspError, LlmError, ConfigError) as exc:
        return ExperimentResult(**row, error=str(exc))
    row.update(syntax_ok=True, lines=count_effective_lines(code))
    try:
        report = solve(ground(program))
        row.update(answer_set_count=report.count, elapsed_s=report.elapsed)
        verdict = compare(report, spec.expected_plans())
    except (AspError, MalformedModel) as exc:
        return ExperimentResult(**row, error=str(exc))
    row["semantic_ok"] = verdict.ok
    return ExperimentResult(**row, verdict_detail=verdict)


def _check_source(spec: ExperimentSpec):
    if spec.live:
        return
    if spec.fixtures_dir is None or not Path(spec.fixtures_dir).is_dir():
        raise ConfigError(f"{spec.id}: fixtures directory not found: {spec.fixtures_dir}")


def run_experiment(spec: ExperimentSpec, *, client=None) -> list:
    _check_source(spec)
    results = []
    for model in spec.models:
        try:
            results.append(run_model(spec, model, client=client))
        except SemnavError as exc:
            logger.exception("%s/%s failed", spec.id, model)
            results.append(ExperimentResult(spec.id, model, False, False, error=str(exc)))
    return results


def run_id3(spec: ExperimentSpec, model: Optional[str] = None, *, client=None) -> ExperimentResult:
    """Detour experiment: generated rules are allowed and expected plans come from the experiment file."""
    if spec.task_kind is not TaskKind.RULES_AND_CONSTRAINTS:
        raise ConfigError(f"{spec.id} is not a rules-and-constraints experiment")
    _check_source(spec)
    return run_model(spec, model or spec.models[0], client=client)


def render_report(results, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in results], indent=2, ensure_ascii=False)
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    header = ("ID", "LLM Model", "Syntax", "Semantic", "Lines")
    rows = [
        (
            r.id,
            r.model_name,
            "✓" if r.syntax_ok else "✗",
            "✓" if r.semantic_ok else "✗",
            "-" if r.lines is None else str(r.lines),
        )
        for r in results
    ]
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(len(header))]

    def fmt_row(row):
        return "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()

    lines = [fmt_row(header), fmt_row(tuple("-" * w for w in widths))]
    lines.extend(fmt_row(row) for row in rows)
    return "\n".join(lines)
