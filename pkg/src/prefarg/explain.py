"""Human-readable and machine-readable justifications for verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .abduction import AbductiveAnswer, TIER_SCEPTICAL, abduce
from .config import DEFAULT_CONFIG, EngineConfig
from .kernel import Literal, Theory, literal_key
from .solver import (
    Analysis,
    Argument,
    is_fact_instance,
    STATUS_NO_ARGUMENT,
    STATUS_REJECTED,
    Verdict,
    analyze,
    compare_at_conflict,
    verdict_for,
)


@dataclass(frozen=True)
class CounterInfo:
    argument: Argument
    point: Literal
    # 'defeated-by-winner' | 'defeats-winner' | 'mutual'
    direction: str
    decided_by: tuple[str, ...]
    via: str


@dataclass(frozen=True)
class Explanation:
    verdict: Verdict
    winner: Optional[Argument]
    counters: tuple[CounterInfo, ...]
    hints: tuple[AbductiveAnswer, ...] = ()


def _winner_key(arg: Argument) -> tuple:
    return (len(arg.support), arg.rule_labels(), arg.key())


def explain_verdict(theory: Theory, evidence: Iterable[Literal], goal: Literal,
                    config: EngineConfig = DEFAULT_CONFIG,
                    with_hints: bool = False, hint_max: int = 2) -> Explanation:
    """Run the query and justify the outcome: the deterministically
    selected winning argument (smallest support, then label order), each
    counter-argument with the priority chain that decided it, and, on
    request, abductive hints toward the complementary outcome."""
    if not goal.is_ground:
        raise ValueError("explanation goal must be ground")
    evidence = list(evidence)
    extras = set(goal.constants())
    for e in evidence:
        extras |= e.constants()
    analysis = analyze(theory, evidence, extras, config)
    verdict = verdict_for(analysis, goal, config)

    if verdict.status == STATUS_NO_ARGUMENT:
        hints = _hints(theory, evidence, goal, verdict.status,
                       hint_max, config) if with_hints else ()
        return Explanation(verdict, None, (), hints)

    candidates = (list(verdict.witnesses) if verdict.witnesses
                  else [analysis.graph.nodes[i]
                        for i in analysis.arguments_for(goal)])
    winner = min(candidates, key=_winner_key)
    winner_idx = analysis.graph.nodes.index(winner)

    counters: list[CounterInfo] = []
    seen: set[tuple] = set()
    for attack in analysis.graph.attacks:
        if attack.target != winner_idx:
            continue
        counter = analysis.graph.nodes[attack.attacker]
        key = (attack.attacker, literal_key(attack.point))
        if key in seen:
            continue
        seen.add(key)
        sub = winner.sub_argument(attack.point)
        context = frozenset(analysis.gt.facts) | counter.heads | sub.heads
        cmp = compare_at_conflict(counter, winner, analysis.gt, context,
                                  attack.point)
        if cmp.outcome == "target":
            direction = "defeated-by-winner"
        elif cmp.outcome == "attacker":
            direction = "defeats-winner"
        else:
            direction = "mutual"
        counters.append(CounterInfo(counter, attack.point, direction,
                                    cmp.decided_by, cmp.via))
    counters.sort(key=lambda c: (c.argument.key(), literal_key(c.point)))

    hints = _hints(theory, evidence, goal, verdict.status,
                   hint_max, config) if with_hints else ()
    return Explanation(verdict, winner, tuple(counters), hints)


def _hints(theory: Theory, evidence: list[Literal], goal: Literal,
           status: str, hint_max: int,
           config: EngineConfig) -> tuple[AbductiveAnswer, ...]:
    """Assumptions that would flip the outcome: establish the goal when
    it failed, or establish its complement when it held."""
    target = goal if status in (STATUS_REJECTED, STATUS_NO_ARGUMENT) \
        else goal.complement()
    result = abduce(theory, evidence, target, TIER_SCEPTICAL, hint_max, config)
    return tuple(a for a in result.answers if a.delta)


# ---------------------------------------------------------------------------
# Rendering

def _describe_argument(arg: Argument) -> list[str]:
    lines = []
    for g in arg.support:
        if is_fact_instance(g):
            continue
        body = ", ".join(str(b) for b in g.body) if g.body else "(default)"
        lines.append(f"    {g.schema}: {g.head} <- {body}" if g.body
                     else f"    {g.schema}: {g.head} {body}")
    return lines


def render_text(e: Explanation) -> str:
    v = e.verdict
    lines = [f"goal: {v.query}", f"status: {v.status}"]
    for note in v.notes:
        lines.append(f"note: {note}")
    if e.winner is None:
        lines.append("no rule concludes the goal and it is not a fact.")
    else:
        label = ("winning argument" if v.status.startswith("accepted")
                 else "strongest rejected attempt")
        lines.append(f"{label}:")
        lines.extend(_describe_argument(e.winner))
        premises = e.winner.premises()
        if premises:
            lines.append("  evidence used: " + ", ".join(str(p) for p in premises))
    for c in e.counters:
        who = ", ".join(c.argument.rule_labels()) or "facts"
        premises = ", ".join(str(p) for p in c.argument.premises())
        source = f"{who} on {premises}" if premises else who
        chain = ", ".join(c.decided_by)
        head = f"  counter-argument for {c.argument.conclusion} via {source}: "
        if c.direction == "defeated-by-winner":
            lines.append(head + f"the winner defeats it at {c.point} "
                                f"(decided by {chain})")
        elif c.direction == "defeats-winner":
            lines.append(head + f"defeats the argument at {c.point} "
                                f"(decided by {chain})")
        else:
            lines.append(head + f"neither defeats the other at {c.point} "
                                "(mutually undecided)")
    for h in e.hints:
        assume = ", ".join(str(l) for l in h.delta)
        lines.append(f"  hint: assuming {assume} would flip the outcome "
                     f"({h.resulting_status})")
    return "\n".join(lines) + "\n"


def _rules_document(arg: Argument) -> list[dict]:
    out = []
    for g in arg.support:
        label = "fact" if is_fact_instance(g) else g.schema
        out.append({
            "label": label,
            "head": str(g.head),
            "body": [str(b) for b in g.body],
        })
    return out


def render_structured(e: Explanation) -> dict:
    """The wire document: {goal, status, winner, conflicts, hints}."""
    v = e.verdict
    conflicts = []
    for c in e.counters:
        conflicts.append({
            "against": "fact" if is_fact_instance(c.argument.top)
            else c.argument.top.schema,
            "at": str(c.point),
            "decidedBy": list(c.decided_by) if c.decided_by else "undecided",
        })
    return {
        "goal": str(v.query),
        "status": v.status,
        "winner": {"rules": _rules_document(e.winner)} if e.winner else None,
        "conflicts": conflicts,
        "hints": [{"assume": [str(l) for l in h.delta]} for h in e.hints],
    }
