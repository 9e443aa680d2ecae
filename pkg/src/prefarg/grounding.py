"""Finite ground instantiation of a theory over its constant domain.

Variables range over the whole domain unless their name links to a
declared sort (lowercased, trailing digits stripped: ``Country2`` uses
sort ``country``). Extra constants injected at query time extend every
range so that defaults still ground over fresh query constants.

Unsafe rules (head variables unbound by the body, e.g. defaults with an
empty body) are instantiated over the full range of those variables.
Instance order is deterministic: lexicographic by schema label, then by
substitution.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, replace
from functools import reduce
from typing import Iterable, Optional

from .config import DEFAULT_CONFIG, EngineConfig, GroundingExplosion
from .kernel import (
    ArgumentRule,
    Literal,
    PriorityRule,
    Term,
    Theory,
    literal_key,
)

_TRAILING_DIGITS = re.compile(r"\d+$")


def sort_of_variable(name: str) -> str:
    return _TRAILING_DIGITS.sub("", name).lower()


@dataclass(frozen=True)
class GroundRule:
    """One ground instance of an argument-rule schema (or a fact leaf)."""

    schema: str
    index: int
    head: Literal
    body: tuple[Literal, ...]
    layer: Optional[str] = None

    @property
    def ref(self) -> tuple[str, int]:
        return (self.schema, self.index)

    def __str__(self) -> str:
        if not self.body:
            return f"{self.schema}[{self.index}]: {self.head}"
        return (f"{self.schema}[{self.index}]: {self.head} <- "
                + ", ".join(str(b) for b in self.body))


@dataclass(frozen=True)
class GroundPriority:
    """One ground priority instance relating two ground instances one
    level down (rule instances at level 1, priority instances above)."""

    schema: str
    index: int
    level: int
    higher: tuple[str, int]
    lower: tuple[str, int]
    body: tuple[Literal, ...]

    @property
    def ref(self) -> tuple[str, int]:
        return (self.schema, self.index)


@dataclass(frozen=True)
class GroundTheory:
    facts: frozenset[Literal]
    instances: tuple[GroundRule, ...]
    priorities: tuple[GroundPriority, ...]
    domain: frozenset[str]
    theory: Theory

    def instance(self, ref: tuple[str, int]) -> GroundRule:
        return self._instance_map[ref]

    def priority_instance(self, ref: tuple[str, int]) -> GroundPriority:
        return self._priority_map[ref]

    @property
    def _instance_map(self) -> dict[tuple[str, int], GroundRule]:
        m = getattr(self, "_imap", None)
        if m is None:
            m = {g.ref: g for g in self.instances}
            object.__setattr__(self, "_imap", m)
        return m

    @property
    def _priority_map(self) -> dict[tuple[str, int], GroundPriority]:
        m = getattr(self, "_pmap", None)
        if m is None:
            m = {g.ref: g for g in self.priorities}
            object.__setattr__(self, "_pmap", m)
        return m

    def as_theory(self) -> Theory:
        """Re-express the grounding as a (ground) theory. When a schema
        produced a single instance it keeps its label, so grounding a
        ground theory round-trips."""
        per_schema: dict[str, int] = {}
        for g in self.instances:
            per_schema[g.schema] = per_schema.get(g.schema, 0) + 1
        names: dict[tuple[str, int], str] = {}
        rules = []
        for g in self.instances:
            label = g.schema if per_schema[g.schema] == 1 else f"{g.schema}_{g.index}"
            names[g.ref] = label
            rules.append(ArgumentRule(label, g.head, g.body, g.layer))
        pnames: dict[tuple[str, int], str] = {}
        per_pschema: dict[str, int] = {}
        for p in self.priorities:
            per_pschema[p.schema] = per_pschema.get(p.schema, 0) + 1
        priorities = []
        for p in sorted(self.priorities, key=lambda p: (p.level, p.schema, p.index)):
            label = p.schema if per_pschema[p.schema] == 1 else f"{p.schema}_{p.index}"
            pnames[p.ref] = label
            refmap = names if p.level == 1 else pnames
            priorities.append(PriorityRule(
                label, refmap[p.higher], refmap[p.lower], p.body, p.level))
        return Theory(
            facts=self.facts,
            rules=tuple(rules),
            priorities=tuple(priorities),
            incompatibilities=self.theory.incompatibilities,
            abducibles=self.theory.abducibles,
            sorts=self.theory.sorts,
            name=self.theory.name,
        ).with_domain_closure()


def _subst_key(binding: dict[str, Term]) -> tuple:
    return tuple((v, binding[v].name) for v in sorted(binding))


def _variable_ranges(variables: Iterable[str], sorts: dict[str, frozenset[str]],
                     domain: frozenset[str], extras: frozenset[str]) -> dict[str, tuple[str, ...]]:
    """Constants claimed by no sort (fresh evidence or query constants)
    extend every sorted range, so defaults still ground over them."""
    full = domain | extras
    claimed: frozenset[str] = frozenset().union(*sorts.values()) if sorts else frozenset()
    unclaimed = full - claimed
    ranges = {}
    for v in sorted(set(variables)):
        declared = sorts.get(sort_of_variable(v))
        pool = (declared | unclaimed) if declared is not None else full
        ranges[v] = tuple(sorted(pool))
    return ranges


def _enumerate(ranges: dict[str, tuple[str, ...]]):
    names = sorted(ranges)
    for combo in itertools.product(*(ranges[n] for n in names)):
        yield {n: Term(c, False) for n, c in zip(names, combo)}


def _count(ranges: dict[str, tuple[str, ...]]) -> int:
    return reduce(lambda a, r: a * len(r), ranges.values(), 1)


def ground(theory: Theory, extra_constants: Iterable[str] = (),
           config: EngineConfig = DEFAULT_CONFIG) -> GroundTheory:
    """Produce the full ground instantiation.

    Raises GroundingExplosion before materializing anything if the
    instance count would exceed the configured cap.
    """
    extras = frozenset(extra_constants) - theory.domain
    domain = frozenset(theory.domain | extras)
    sorts = theory.sort_map()

    rule_ranges = {r.label: _variable_ranges(r.variables(), sorts, domain, extras)
                   for r in theory.rules}
    prio_vars = {}
    for p in theory.priorities:
        vs = set(p.variables())
        higher = theory.rule_by_label(p.higher) or theory.priority_by_label(p.higher)
        lower = theory.rule_by_label(p.lower) or theory.priority_by_label(p.lower)
        for ref in (higher, lower):
            if ref is not None:
                vs |= ref.variables()
        prio_vars[p.label] = vs
    # Priority variables must transitively include the referenced
    # schemas' variables so instance references resolve.
    changed = True
    while changed:
        changed = False
        for p in theory.priorities:
            if p.level > 1:
                for ref in (p.higher, p.lower):
                    if ref in prio_vars and not prio_vars[ref] <= prio_vars[p.label]:
                        prio_vars[p.label] = prio_vars[p.label] | prio_vars[ref]
                        changed = True
    prio_ranges = {p.label: _variable_ranges(prio_vars[p.label], sorts, domain, extras)
                   for p in theory.priorities}

    total = 0
    worst = ("", 0)
    for label, ranges in itertools.chain(rule_ranges.items(), prio_ranges.items()):
        n = _count(ranges)
        total += n
        if n > worst[1]:
            worst = (label, n)
    if total > config.max_instances:
        raise GroundingExplosion(worst[0], total, config.max_instances)

    instances: list[GroundRule] = []
    index_of: dict[str, dict[tuple, int]] = {}
    for r in sorted(theory.rules, key=lambda r: r.label):
        index_of[r.label] = {}
        for i, binding in enumerate(_enumerate(rule_ranges[r.label])):
            head = r.head.substitute(binding)
            body = tuple(b.substitute(binding) for b in r.body)
            instances.append(GroundRule(r.label, i, head, body, r.layer))
            own = {v: binding[v] for v in r.variables()}
            index_of[r.label][_subst_key(own)] = i

    priorities: list[GroundPriority] = []
    prio_index_of: dict[str, dict[tuple, int]] = {}
    for p in sorted(theory.priorities, key=lambda p: (p.level, p.label)):
        prio_index_of[p.label] = {}
        higher_rule = theory.rule_by_label(p.higher)
        lower_rule = theory.rule_by_label(p.lower)
        higher_prio = theory.priority_by_label(p.higher)
        lower_prio = theory.priority_by_label(p.lower)
        for i, binding in enumerate(_enumerate(prio_ranges[p.label])):
            if p.level == 1:
                hvars = higher_rule.variables() if higher_rule else set()
                lvars = lower_rule.variables() if lower_rule else set()
                href = (p.higher, index_of[p.higher][_subst_key(
                    {v: binding[v] for v in hvars})])
                lref = (p.lower, index_of[p.lower][_subst_key(
                    {v: binding[v] for v in lvars})])
            else:
                hvars = prio_vars[p.higher] if higher_prio else set()
                lvars = prio_vars[p.lower] if lower_prio else set()
                href = (p.higher, prio_index_of[p.higher][_subst_key(
                    {v: binding[v] for v in hvars})])
                lref = (p.lower, prio_index_of[p.lower][_subst_key(
                    {v: binding[v] for v in lvars})])
            body = tuple(b.substitute(binding) for b in p.body)
            priorities.append(GroundPriority(p.label, i, p.level, href, lref, body))
            own = {v: binding[v] for v in prio_vars[p.label]}
            prio_index_of[p.label][_subst_key(own)] = i

    instances.sort(key=lambda g: (g.schema, g.index))
    priorities.sort(key=lambda g: (g.level, g.schema, g.index))
    return GroundTheory(
        facts=frozenset(theory.facts),
        instances=tuple(instances),
        priorities=tuple(priorities),
        domain=domain,
        theory=theory,
    )
