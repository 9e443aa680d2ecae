"""Shipped theory packs and golden scenarios."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from ..config import DEFAULT_CONFIG, EngineConfig
from ..dsl import Scenario, parse, parse_scenario
from ..kernel import Literal, Theory, validate
from ..solver import (
    STATUS_CREDULOUS,
    STATUS_NO_ARGUMENT,
    STATUS_REJECTED,
    STATUS_SCEPTICAL,
    query,
)

PACK_FILES = {
    "attribution-text": "attribution_text.arg",
    "attribution-fig2": "attribution_fig2.arg",
    "attribution-ladder": "attribution_ladder.arg",
    "ehealth": "ehealth.arg",
    "ehealth-nopriorities": "ehealth_nopriorities.arg",
}

SCENARIO_FILES = (
    "ssh_attack.scn",
    "ssh_attack_fig2.scn",
    "c2_attack.scn",
    "ehealth_emergency.scn",
    "ehealth_emotional.scn",
    "ehealth_intensive.scn",
    "ehealth_unconscious.scn",
    "ehealth_double_permission.scn",
    "ehealth_family.scn",
)

EXPECT_TO_STATUS = {
    "accepted": STATUS_SCEPTICAL,
    "accepted-credulous": STATUS_CREDULOUS,
    "rejected": STATUS_REJECTED,
    "no-argument": STATUS_NO_ARGUMENT,
}


class PackError(Exception):
    pass


def pack_names() -> list[str]:
    return sorted(PACK_FILES)


def pack_text(name: str) -> str:
    if name not in PACK_FILES:
        raise PackError(f"unknown pack {name!r}; available: {', '.join(pack_names())}")
    return resources.files(__package__).joinpath(PACK_FILES[name]).read_text("utf-8")


def load_pack(name: str) -> Theory:
    theory = parse(pack_text(name), PACK_FILES.get(name, name), name=name)
    diags = validate(theory)
    if diags:
        raise PackError(f"pack {name} fails validation: "
                        + "; ".join(str(d) for d in diags))
    return theory


def load_theory_file(path: str | Path, name: str = "") -> Theory:
    p = Path(path)
    return parse(p.read_text("utf-8"), str(p), name=name or p.stem)


def scenario_text(filename: str) -> str:
    return resources.files(__package__).joinpath(filename).read_text("utf-8")


def load_scenario(filename: str) -> Scenario:
    return parse_scenario(scenario_text(filename), filename)


def load_scenario_file(path: str | Path) -> Scenario:
    p = Path(path)
    return parse_scenario(p.read_text("utf-8"), str(p))


@dataclass(frozen=True)
class ExpectationResult:
    stage: int
    goal: Literal
    expected: str  # engine status names
    actual: str
    ok: bool


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    rows: tuple[ExpectationResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    def stage_passed(self, stage: int) -> bool:
        return all(r.ok for r in self.rows if r.stage == stage)

    def diff_lines(self) -> list[str]:
        out = []
        for r in self.rows:
            mark = "ok  " if r.ok else "FAIL"
            line = f"{mark} stage {r.stage}: {r.goal} => {r.actual}"
            if not r.ok:
                line += f" (expected {r.expected})"
            out.append(line)
        return out


def run_scenario(scenario: Scenario, theory: Theory | None = None,
                 config: EngineConfig = DEFAULT_CONFIG) -> ScenarioResult:
    """Execute the staged evidence cumulatively and compare each
    expected verdict; failures are results, not errors."""
    theory = theory if theory is not None else load_pack(scenario.pack)
    rows: list[ExpectationResult] = []
    evidence: list[Literal] = []
    for stage_no, stage in enumerate(scenario.stages, start=1):
        evidence.extend(stage)
        for e in scenario.expectations:
            if e.stage != stage_no:
                continue
            verdicts = query(theory, evidence, e.goal, config)
            actual = verdicts[0].status if verdicts else STATUS_NO_ARGUMENT
            expected = EXPECT_TO_STATUS[e.status]
            rows.append(ExpectationResult(stage_no, e.goal, expected, actual,
                                          actual == expected))
    return ScenarioResult(scenario, tuple(rows))
