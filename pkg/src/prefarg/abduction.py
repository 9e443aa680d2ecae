"""Abductive search: minimal assumption sets that make a goal accepted.

Breadth-first over delta size, so every returned answer is
subset-minimal for its tier without a post-filter. Candidate literals
come from the declared abducibles grounded over the (sort-restricted)
domain, minus anything already asserted or clashing with the evidence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .config import DEFAULT_CONFIG, EngineConfig
from .kernel import Literal, Term, Theory, incompatible, literal_key
from .solver import (
    STATUS_CREDULOUS,
    STATUS_SCEPTICAL,
    analyze,
    verdict_for,
)

TIER_SCEPTICAL = "sceptical"
TIER_CREDULOUS = "credulous"


@dataclass(frozen=True)
class AbductiveAnswer:
    delta: tuple[Literal, ...]  # sorted, consistent, subset-minimal
    resulting_status: str


@dataclass(frozen=True)
class AbductionResult:
    answers: tuple[AbductiveAnswer, ...]
    truncated: bool = False


def _position_candidates(theory: Theory, predicate: str, position: int,
                         domain: frozenset[str]) -> list[str]:
    """Constants plausible at one argument position: sort members for
    sort-linked variables seen there, constants seen there, or the whole
    domain when a position is unconstrained."""
    from .grounding import sort_of_variable

    sorts = theory.sort_map()
    out: set[str] = set()
    unconstrained = False
    seen_any = False
    literals: list[Literal] = []
    for r in theory.rules:
        literals.append(r.head)
        literals.extend(r.body)
    for p in theory.priorities:
        literals.extend(p.body)
    for lit in literals:
        if lit.predicate != predicate or len(lit.args) <= position:
            continue
        seen_any = True
        t = lit.args[position]
        if t.is_var:
            declared = sorts.get(sort_of_variable(t.name))
            if declared is None:
                unconstrained = True
            else:
                out |= declared
        else:
            out.add(t.name)
    for f in theory.facts:
        if f.predicate == predicate and len(f.args) > position:
            out.add(f.args[position].name)
            seen_any = True
    if unconstrained or not seen_any:
        return sorted(domain)
    return sorted(out)


def abducible_space(theory: Theory, evidence: Iterable[Literal]) -> list[Literal]:
    """Ground abducible literals, excluding anything already active or
    incompatible with the active facts."""
    enriched = theory.with_facts(evidence)
    active = set(enriched.facts)
    out: list[Literal] = []
    for pred, arity, negated in sorted(theory.abducibles):
        pools = [_position_candidates(enriched, pred, i, enriched.domain)
                 for i in range(arity)]
        for combo in itertools.product(*pools):
            lit = Literal(pred, tuple(Term(c, False) for c in combo), negated)
            if lit in active:
                continue
            if any(incompatible(lit, f, theory) for f in active):
                continue
            out.append(lit)
    out.sort(key=literal_key)
    return out


def _delta_consistent(delta: tuple[Literal, ...], theory: Theory) -> bool:
    for a, b in itertools.combinations(delta, 2):
        if incompatible(a, b, theory):
            return False
    return True


def _achieves(status: str, tier: str) -> bool:
    if tier == TIER_SCEPTICAL:
        return status == STATUS_SCEPTICAL
    return status in (STATUS_SCEPTICAL, STATUS_CREDULOUS)


def abduce(theory: Theory, evidence: Iterable[Literal], goal: Literal,
           tier: str = TIER_SCEPTICAL, max_size: int = 2,
           config: EngineConfig = DEFAULT_CONFIG) -> AbductionResult:
    """All subset-minimal consistent deltas of size <= max_size whose
    assumption yields at least `tier` acceptance of the ground goal."""
    if not goal.is_ground:
        raise ValueError("abduction goal must be ground")
    if tier not in (TIER_SCEPTICAL, TIER_CREDULOUS):
        raise ValueError(f"unknown tier {tier!r}")
    evidence = list(evidence)

    def status_of(delta: tuple[Literal, ...]) -> str:
        analysis = analyze(theory, evidence + list(delta),
                           goal.constants(), config)
        return verdict_for(analysis, goal, config, semantics="preferred").status

    answers: list[AbductiveAnswer] = []
    found: list[frozenset[Literal]] = []
    explored = 0
    truncated = False

    base = status_of(())
    explored += 1
    if _achieves(base, tier):
        return AbductionResult((AbductiveAnswer((), base),), False)

    space = abducible_space(theory, evidence)
    for size in range(1, max_size + 1):
        if truncated:
            break
        for combo in itertools.combinations(space, size):
            dset = frozenset(combo)
            if any(prev <= dset for prev in found):
                continue  # supersets of answers can not be minimal
            if not _delta_consistent(combo, theory):
                continue
            explored += 1
            if explored > config.abduction_budget:
                truncated = True
                break
            status = status_of(combo)
            if _achieves(status, tier):
                found.append(dset)
                answers.append(AbductiveAnswer(
                    tuple(sorted(combo, key=literal_key)), status))

    answers.sort(key=lambda a: (len(a.delta), tuple(map(literal_key, a.delta))))
    return AbductionResult(tuple(answers), truncated)
