"""Static conflict analysis over rule schemas.

A pair of rules conflicts when their heads unify into an incompatible
pair and some coherent witness (body literals asserted as facts, fresh
constants for unbound variables, merged where the declarations force it)
makes both bodies fire together. Pairs whose conflict is subsumed by a
strictly more specific same-conclusion rule inside the other body are
shadowed and attributed to that rule instead.

Each surviving pair is checked against the engine: if a priority chain
decides it in the witness context it is resolved, otherwise a
specificity-based priority suggestion is offered.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .config import DEFAULT_CONFIG, EngineConfig
from .grounding import sort_of_variable
from .kernel import (
    ArgumentRule,
    Literal,
    PriorityRule,
    Term,
    Theory,
    incompatible,
    literal_key,
)
from .solver import analyze, compare_at_conflict


class ResolutionError(Exception):
    pass


@dataclass(frozen=True)
class ConflictReport:
    rule_a: str
    rule_b: str
    head_a: Literal  # witness-grounded incompatible heads
    head_b: Literal
    unifier: tuple[tuple[str, str], ...]  # variable -> chosen constant
    witness: tuple[Literal, ...]
    body_a: tuple[Literal, ...]  # witness-grounded bodies
    body_b: tuple[Literal, ...]
    resolution: Optional[tuple[str, ...]]  # deciding labels, None = unresolved
    winner: Optional[str] = None  # rule label favored by the resolution
    suggestion: Optional[PriorityRule] = None

    @property
    def unresolved(self) -> bool:
        return self.resolution is None


# ---------------------------------------------------------------------------
# Sorted unification on function-free terms

class _Env:
    """Union-find over variables with sort-range tracking.

    A range of None means unconstrained (no declared sort)."""

    def __init__(self, ranges: dict[str, Optional[frozenset[str]]]):
        self.parent: dict[str, str] = {}
        self.bound: dict[str, str] = {}  # representative -> constant
        self.ranges = dict(ranges)

    def find(self, v: str) -> str:
        root = v
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while self.parent.get(v, v) != v:
            self.parent[v], v = root, self.parent[v]
        return root

    @staticmethod
    def _meet(r1, r2):
        if r1 is None:
            return r2
        if r2 is None:
            return r1
        return r1 & r2

    def unify(self, a: Term, b: Term) -> bool:
        if not a.is_var and not b.is_var:
            return a.name == b.name
        if a.is_var and b.is_var:
            ra, rb = self.find(a.name), self.find(b.name)
            if ra == rb:
                return True
            ba, bb = self.bound.get(ra), self.bound.get(rb)
            if ba is not None and bb is not None and ba != bb:
                return False
            merged = self._meet(self.ranges[ra], self.ranges[rb])
            if merged is not None and not merged:
                return False
            self.parent[ra] = rb
            self.ranges[rb] = merged
            if ba is not None:
                if merged is not None and ba not in merged:
                    return False
                self.bound[rb] = ba
            return True
        if b.is_var:
            a, b = b, a
        root = self.find(a.name)
        cur = self.bound.get(root)
        if cur is not None:
            return cur == b.name
        rng = self.ranges[root]
        if rng is not None and b.name not in rng:
            return False
        self.bound[root] = b.name
        return True

    def resolve(self, t: Term) -> Term:
        if not t.is_var:
            return t
        root = self.find(t.name)
        c = self.bound.get(root)
        return Term(c, False) if c is not None else Term(root, True)


def _unify_literals(l1: Literal, l2: Literal, env: _Env) -> bool:
    if (l1.predicate != l2.predicate or l1.negated != l2.negated
            or len(l1.args) != len(l2.args)):
        return False
    return all(env.unify(a, b) for a, b in zip(l1.args, l2.args))


def _sort_key(v: str) -> str:
    # renamed-apart variables keep their sort link ("Patient__l" -> patient)
    return sort_of_variable(v.split("__", 1)[0])


def _var_ranges(variables: Iterable[str],
                theory: Theory) -> dict[str, Optional[frozenset[str]]]:
    sorts = theory.sort_map()
    return {v: sorts.get(_sort_key(v)) for v in set(variables)}


def _rename(rule: ArgumentRule, suffix: str) -> ArgumentRule:
    mapping = {v: Term(f"{v}__{suffix}", True) for v in rule.variables()}
    return ArgumentRule(
        rule.label,
        rule.head.substitute(mapping),
        tuple(b.substitute(mapping) for b in rule.body),
        rule.layer,
    )


def _head_unifiers(a: ArgumentRule, b: ArgumentRule, theory: Theory) -> list[_Env]:
    """Environments making head(a) incompatible with head(b)."""
    ranges = _var_ranges(a.variables() | b.variables(), theory)
    out: list[_Env] = []
    env = _Env(ranges)
    if _unify_literals(a.head, b.head.complement(), env):
        out.append(env)
    for decl in theory.incompatibilities:
        for left, right in ((decl.left, decl.right), (decl.right, decl.left)):
            pvars = {f"{v}__pat" for v in left.variables() | right.variables()}
            mapping = {v: Term(f"{v}__pat", True)
                       for v in left.variables() | right.variables()}
            lpat = left.substitute(mapping)
            rpat = right.substitute(mapping)
            env = _Env({**ranges, **_var_ranges(pvars, theory)})
            if _unify_literals(lpat, a.head, env) and _unify_literals(rpat, b.head, env):
                out.append(env)
    return out


# ---------------------------------------------------------------------------
# Witness search

def _fresh_constant(base: str, taken: set[str]) -> str:
    name = base
    i = 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    taken.add(name)
    return name


def _ground_with(env: _Env, assignment: dict[str, Term], lit: Literal) -> Literal:
    resolved = lit.substitute({v: env.resolve(Term(v, True))
                               for v in lit.variables()})
    return resolved.substitute(assignment)


def _witness_search(body: list[Literal], heads: list[Literal], env: _Env,
                    theory: Theory) -> Optional[dict[str, Term]]:
    """Assign remaining variables to fresh constants, merging variables
    of compatible sorts when that is what makes the bodies coexist.
    First consistent assignment in canonical order wins (merges tried
    before fresh constants, so witnesses stay small). Heads only
    contribute variables; consistency is checked on the bodies."""
    def resolve_all(lits: list[Literal]) -> list[Literal]:
        return [lit.substitute({v: env.resolve(Term(v, True))
                                for v in lit.variables()}) for lit in lits]

    resolved_body = resolve_all(body)
    resolved_heads = resolve_all(heads)
    free = sorted({v for lit in resolved_body + resolved_heads
                   for v in lit.variables()})
    ranges = {v: env.ranges[env.find(v)] for v in free}
    classes: list[tuple[tuple[str, ...], Optional[frozenset[str]]]] = []

    def consistent(assignment: dict[str, Term]) -> bool:
        facts = sorted({lit.substitute(assignment) for lit in resolved_body},
                       key=literal_key)
        for x, y in itertools.combinations(facts, 2):
            if incompatible(x, y, theory):
                return False
        return True

    def assignment_of() -> dict[str, Term]:
        taken = set(theory.domain)
        out: dict[str, Term] = {}
        for members, _rng in classes:
            base = _sort_key(members[0]) or "w"
            name = _fresh_constant(base + "0", taken)
            for m in members:
                out[m] = Term(name, False)
        return out

    def search(i: int) -> Optional[dict[str, Term]]:
        if i == len(free):
            assignment = assignment_of()
            return assignment if consistent(assignment) else None
        v = free[i]
        for k in range(len(classes)):
            members, rng = classes[k]
            merged = _Env._meet(rng, ranges[v])
            if merged is None or merged:
                classes[k] = (members + (v,), merged)
                got = search(i + 1)
                if got is not None:
                    return got
                classes[k] = (members, rng)
        classes.append(((v,), ranges[v]))
        got = search(i + 1)
        if got is not None:
            return got
        classes.pop()
        return None

    return search(0)


# ---------------------------------------------------------------------------
# Shadow filter

def _subsumes_into(rule: ArgumentRule, head: Literal, pool: set[Literal],
                   theory: Theory) -> Optional[frozenset[Literal]]:
    """Ground `rule` so its head equals `head` and its body lands inside
    `pool`; returns the grounded body or None."""

    def extend(binding: dict[str, Term], pat: Literal, target: Literal
               ) -> Optional[dict[str, Term]]:
        if (pat.predicate != target.predicate or pat.negated != target.negated
                or len(pat.args) != len(target.args)):
            return None
        out = dict(binding)
        for p, t in zip(pat.args, target.args):
            if p.is_var:
                cur = out.get(p.name)
                if cur is None:
                    out[p.name] = t
                elif cur != t:
                    return None
            elif p != t:
                return None
        return out

    start = extend({}, rule.head, head)
    if start is None:
        return None

    body = list(rule.body)

    def walk(i: int, binding: dict[str, Term]) -> Optional[dict[str, Term]]:
        if i == len(body):
            return binding
        for target in sorted(pool, key=literal_key):
            nxt = extend(binding, body[i], target)
            if nxt is not None:
                got = walk(i + 1, nxt)
                if got is not None:
                    return got
        return None

    final = walk(0, start)
    if final is None:
        return None
    return frozenset(b.substitute(final) for b in body)


def _shadowed(theory: Theory, label_a: str, label_b: str,
              head_a: Literal, head_b: Literal,
              body_a: frozenset[Literal], body_b: frozenset[Literal]) -> bool:
    """(A,B) is shadowed when a third rule C concludes like A from a body
    strictly between A's and B's: the conflict belongs to (C,B)."""
    for c in theory.rules:
        if c.label in (label_a, label_b):
            continue
        for head, small, big in ((head_a, body_a, body_b),
                                 (head_b, body_b, body_a)):
            grounded = _subsumes_into(c, head, set(big), theory)
            if grounded is not None and small < grounded <= big:
                return True
    return False


# ---------------------------------------------------------------------------
# Detection

def _resolution_for(theory: Theory, report_pair: tuple[ArgumentRule, ArgumentRule],
                    head_a: Literal, head_b: Literal,
                    witness: tuple[Literal, ...],
                    config: EngineConfig) -> tuple[Optional[tuple[str, ...]], Optional[str]]:
    """Ask the engine whether priorities decide the pair when both bodies
    hold. Returns (deciding labels, winning label) or (None, None)."""
    rule_a, rule_b = report_pair
    analysis = analyze(theory, witness,
                       {t.name for lit in witness for t in lit.args}, config)
    args_a = [analysis.graph.nodes[i] for i in analysis.arguments_for(head_a)
              if analysis.graph.nodes[i].top.schema == rule_a.label]
    args_b = [analysis.graph.nodes[i] for i in analysis.arguments_for(head_b)
              if analysis.graph.nodes[i].top.schema == rule_b.label]
    if not args_a or not args_b:
        return None, None
    a, b = args_a[0], args_b[0]
    context = frozenset(analysis.gt.facts) | a.heads | b.heads
    cmp = compare_at_conflict(a, b, analysis.gt, context, b.conclusion)
    if cmp.outcome == "attacker":
        return cmp.decided_by, rule_a.label
    if cmp.outcome == "target":
        return cmp.decided_by, rule_b.label
    return None, None


def detect_conflicts(theory: Theory,
                     config: EngineConfig = DEFAULT_CONFIG) -> list[ConflictReport]:
    """One report per conflicting rule-schema pair, deterministic order."""
    reports: list[ConflictReport] = []
    rules = sorted(theory.rules, key=lambda r: r.label)
    for a, b in itertools.combinations(rules, 2):
        ra = _rename(a, "l")
        rb = _rename(b, "r")
        report = None
        for env in _head_unifiers(ra, rb, theory):
            assignment = _witness_search(list(ra.body) + list(rb.body),
                                         [ra.head, rb.head], env, theory)
            if assignment is None:
                continue
            head_a = _ground_with(env, assignment, ra.head)
            head_b = _ground_with(env, assignment, rb.head)
            body_a = frozenset(_ground_with(env, assignment, l) for l in ra.body)
            body_b = frozenset(_ground_with(env, assignment, l) for l in rb.body)
            if _shadowed(theory, a.label, b.label, head_a, head_b, body_a, body_b):
                continue
            witness = tuple(sorted(body_a | body_b, key=literal_key))
            resolution, winner = _resolution_for(
                theory, (a, b), head_a, head_b, witness, config)
            unifier = tuple(sorted(
                (v, env.resolve(Term(v, True)).name)
                for v in ra.head.variables() | rb.head.variables()))
            report = ConflictReport(
                a.label, b.label, head_a, head_b, unifier, witness,
                tuple(sorted(body_a, key=literal_key)),
                tuple(sorted(body_b, key=literal_key)),
                resolution, winner)
            break
        if report is not None:
            if report.unresolved:
                from dataclasses import replace as _replace
                report = _replace(report, suggestion=suggest_priority(report, theory))
            reports.append(report)
    reports.sort(key=lambda r: (r.rule_a, r.rule_b))
    return reports


def suggest_priority(report: ConflictReport,
                     theory: Optional[Theory] = None) -> Optional[PriorityRule]:
    """Specificity heuristic: when one unified body strictly extends the
    other, propose more-specific > less-specific (no condition)."""
    if not report.unresolved:
        return None
    set_a, set_b = set(report.body_a), set(report.body_b)
    if set_a < set_b:
        higher, lower = report.rule_b, report.rule_a
    elif set_b < set_a:
        higher, lower = report.rule_a, report.rule_b
    else:
        return None
    label = f"{higher}_over_{lower}".replace(".", "_")
    if theory is not None:
        taken = {r.label for r in theory.rules} | {p.label for p in theory.priorities}
        base = label
        i = 0
        while label in taken:
            i += 1
            label = f"{base}{i}"
    return PriorityRule(label, higher, lower, (), level=1)


def apply_resolution(theory: Theory, decision: PriorityRule) -> Theory:
    """Append a priority decision; re-running detection reflects it."""
    labels = {r.label for r in theory.rules} | {p.label for p in theory.priorities}
    if decision.label in labels:
        raise ResolutionError(f"duplicate label {decision.label}")
    level = {r.label: 0 for r in theory.rules}
    level.update({p.label: p.level for p in theory.priorities})
    for ref in (decision.higher, decision.lower):
        if ref not in level:
            raise ResolutionError(f"dangling reference {ref}")
    expected = level[decision.higher] + 1
    if level[decision.higher] != level[decision.lower] or decision.level != expected:
        raise ResolutionError(
            f"priority must relate same-level labels one level down "
            f"(got {decision.higher}, {decision.lower})")
    return theory.with_priority(decision)
