"""Core vocabulary: terms, literals, rules, priorities, theories.

All values are immutable after construction and may be shared freely
across threads. Well-formedness is checked by :func:`validate`, which
returns diagnostics instead of raising so that callers (CLI, service,
editor tooling) can report every problem at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

LAYERS = ("tactical", "operational", "strategic")

# Reserved label prefix for synthetic fact instances; the DSL never
# produces labels starting with '~', so no user label can collide.
FACT_LABEL = "~fact"


@dataclass(frozen=True, order=True)
class Term:
    """A constant or a variable. Variables are distinguished lexically
    (leading uppercase) by the DSL; the kernel just records the kind."""

    name: str
    is_var: bool = False

    def __str__(self) -> str:
        return self.name


def const(name: str) -> Term:
    return Term(name, False)


def var(name: str) -> Term:
    return Term(name, True)


@dataclass(frozen=True, order=True)
class Literal:
    """A predicate applied to terms, optionally strongly negated."""

    predicate: str
    args: tuple[Term, ...] = ()
    negated: bool = False

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_ground(self) -> bool:
        return all(not t.is_var for t in self.args)

    def complement(self) -> "Literal":
        return replace(self, negated=not self.negated)

    def variables(self) -> set[str]:
        return {t.name for t in self.args if t.is_var}

    def constants(self) -> set[str]:
        return {t.name for t in self.args if not t.is_var}

    def substitute(self, binding: dict[str, Term]) -> "Literal":
        if not self.args:
            return self
        return replace(
            self,
            args=tuple(binding.get(t.name, t) if t.is_var else t for t in self.args),
        )

    def __str__(self) -> str:
        body = self.predicate
        if self.args:
            body += "(" + ", ".join(str(t) for t in self.args) + ")"
        return f"neg {body}" if self.negated else body


def complement(lit: Literal) -> Literal:
    """Flip the explicit-negation marker; involution by construction."""
    return lit.complement()


@dataclass(frozen=True)
class ArgumentRule:
    """A labeled defeasible rule. An empty body encodes a default."""

    label: str
    head: Literal
    body: tuple[Literal, ...] = ()
    layer: Optional[str] = None

    def variables(self) -> set[str]:
        out = self.head.variables()
        for lit in self.body:
            out |= lit.variables()
        return out

    def constants(self) -> set[str]:
        out = self.head.constants()
        for lit in self.body:
            out |= lit.constants()
        return out


@dataclass(frozen=True)
class PriorityRule:
    """`higher > lower`, optionally conditional on `body`.

    Level 1 relates argument rules; level k relates level-(k-1)
    priority rules. The relation is read off the referenced labels at
    load time.
    """

    label: str
    higher: str
    lower: str
    body: tuple[Literal, ...] = ()
    level: int = 1

    def variables(self) -> set[str]:
        out: set[str] = set()
        for lit in self.body:
            out |= lit.variables()
        return out

    def constants(self) -> set[str]:
        out: set[str] = set()
        for lit in self.body:
            out |= lit.constants()
        return out


@dataclass(frozen=True)
class IncompatibilityDecl:
    """A declared pair of contrary literal patterns (shared variables
    express the required agreement, e.g. same data object and user).

    The complement relation (L vs neg L) is always on and is not
    declared. Declared patterns are symmetric; two *distinct* ground
    literals matching the pair are incompatible, which also lets a
    declaration express functionality (owner(C1,X) ~ owner(C2,X)).
    """

    left: Literal
    right: Literal


@dataclass(frozen=True)
class Theory:
    """Facts + argument rules + leveled priorities + declarations."""

    facts: frozenset[Literal] = frozenset()
    rules: tuple[ArgumentRule, ...] = ()
    priorities: tuple[PriorityRule, ...] = ()
    incompatibilities: tuple[IncompatibilityDecl, ...] = ()
    abducibles: frozenset[tuple[str, int, bool]] = frozenset()  # (pred, arity, negated)
    sorts: tuple[tuple[str, tuple[str, ...]], ...] = ()  # (name, constants)
    domain: frozenset[str] = frozenset()
    name: str = ""

    def rule_by_label(self, label: str) -> Optional[ArgumentRule]:
        for r in self.rules:
            if r.label == label:
                return r
        return None

    def priority_by_label(self, label: str) -> Optional[PriorityRule]:
        for p in self.priorities:
            if p.label == label:
                return p
        return None

    def sort_map(self) -> dict[str, frozenset[str]]:
        return {name: frozenset(consts) for name, consts in self.sorts}

    def mentioned_constants(self) -> set[str]:
        out: set[str] = set()
        for f in self.facts:
            out |= f.constants()
        for r in self.rules:
            out |= r.constants()
        for p in self.priorities:
            out |= p.constants()
        for d in self.incompatibilities:
            out |= d.left.constants() | d.right.constants()
        for _, consts in self.sorts:
            out |= set(consts)
        return out

    def with_domain_closure(self) -> "Theory":
        """Auto-extend the domain with every mentioned constant."""
        return replace(self, domain=frozenset(self.domain | self.mentioned_constants()))

    def with_priority(self, decision: PriorityRule) -> "Theory":
        return replace(self, priorities=self.priorities + (decision,))

    def with_facts(self, extra: Iterable[Literal]) -> "Theory":
        merged = frozenset(self.facts | set(extra))
        return replace(self, facts=merged).with_domain_closure()


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    label: Optional[str] = None

    def __str__(self) -> str:
        where = f" [{self.label}]" if self.label else ""
        return f"{self.code}: {self.message}{where}"


def literal_key(lit: Literal) -> tuple:
    """Canonical sort key used everywhere deterministic order matters."""
    return (lit.predicate, tuple(t.name for t in lit.args), lit.negated)


def match_pattern(pattern: Literal, ground: Literal,
                  binding: Optional[dict[str, Term]] = None) -> Optional[dict[str, Term]]:
    """Match a literal pattern against a ground literal, extending
    `binding`. Returns the extended binding or None."""
    if (pattern.predicate != ground.predicate
            or pattern.negated != ground.negated
            or len(pattern.args) != len(ground.args)):
        return None
    out = dict(binding) if binding else {}
    for p, g in zip(pattern.args, ground.args):
        if p.is_var:
            bound = out.get(p.name)
            if bound is None:
                out[p.name] = g
            elif bound != g:
                return None
        elif p != g:
            return None
    return out


def incompatible(l1: Literal, l2: Literal, theory: Theory) -> bool:
    """True iff l2 is the complement of l1, or (l1,l2) are distinct and
    match a declared incompatibility pattern under one substitution."""
    if l2 == l1.complement():
        return True
    if l1 == l2:
        return False
    for decl in theory.incompatibilities:
        for left, right in ((decl.left, decl.right), (decl.right, decl.left)):
            binding = match_pattern(left, l1)
            if binding is not None and match_pattern(right, l2, binding) is not None:
                return True
    return False


def _check_level_discipline(theory: Theory, diags: list[Diagnostic]) -> None:
    rule_labels = {r.label for r in theory.rules}
    prio_level = {p.label: p.level for p in theory.priorities}

    def level_of(label: str) -> Optional[int]:
        if label in rule_labels:
            return 0
        return prio_level.get(label)

    for p in theory.priorities:
        for ref in (p.higher, p.lower):
            lv = level_of(ref)
            if lv is None:
                diags.append(Diagnostic(
                    "dangling-reference",
                    f"priority references unknown label {ref}", p.label))
            elif lv != p.level - 1:
                diags.append(Diagnostic(
                    "level-mismatch",
                    f"level-{p.level} priority may only reference "
                    f"level-{p.level - 1} rules, got {ref} (level {lv})",
                    p.label))


def validate(theory: Theory) -> list[Diagnostic]:
    """Check every type invariant; empty list iff the theory is clean.

    Two runs on the same theory yield identical diagnostics (pure).
    """
    diags: list[Diagnostic] = []

    seen: dict[str, str] = {}
    for kind, label in itertools.chain(
            (("rule", r.label) for r in theory.rules),
            (("priority", p.label) for p in theory.priorities)):
        if label in seen:
            diags.append(Diagnostic("duplicate-label", f"duplicate label {label}", label))
        else:
            seen[label] = kind

    for p in theory.priorities:
        if p.higher == p.lower:
            diags.append(Diagnostic(
                "irreflexive", f"irreflexivity violated: {p.higher} > {p.lower}", p.label))

    _check_level_discipline(theory, diags)

    arities: dict[str, int] = {}

    def check_arity(lit: Literal, where: Optional[str]) -> None:
        known = arities.setdefault(lit.predicate, lit.arity)
        if known != lit.arity:
            diags.append(Diagnostic(
                "arity-mismatch",
                f"predicate {lit.predicate} used with arity {lit.arity}, "
                f"first seen with arity {known}", where))

    for f in sorted(theory.facts, key=literal_key):
        if not f.is_ground:
            diags.append(Diagnostic("non-ground-fact", f"fact contains variables: {f}"))
        check_arity(f, None)
    for r in theory.rules:
        check_arity(r.head, r.label)
        for lit in r.body:
            check_arity(lit, r.label)
        if r.layer is not None and r.layer not in LAYERS:
            diags.append(Diagnostic("bad-layer", f"unknown evidence layer {r.layer}", r.label))
    for p in theory.priorities:
        for lit in p.body:
            check_arity(lit, p.label)

    for f in sorted(theory.facts, key=literal_key):
        if f.complement() in theory.facts and not f.negated:
            diags.append(Diagnostic(
                "contradictory-facts", f"both {f} and its complement are asserted"))

    missing = theory.mentioned_constants() - set(theory.domain)
    for c in sorted(missing):
        diags.append(Diagnostic(
            "constant-outside-domain",
            f"constant {c} is not in the declared domain (load with domain closure)"))

    return diags
