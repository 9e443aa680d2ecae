"""Argument construction, preference comparison, defeat graph, acceptance.

Arguments are subset-minimal derivations over the ground instances; facts
enter as empty-body leaf instances. Attacks connect an argument's
conclusion to any incompatible sub-conclusion of the target (undermining
included). Preference filtering compares the attacker's top rule against
the target's sub-argument at the conflict point.

The comparison works on *claims*: applicable priority instances whose
subject heads coincide with the two conflicting literals. Conflicting
claims escalate one priority level; when no higher level speaks, the
claim grounded in the strictly more specific context prevails; otherwise
the conflict is undecided and both defeat directions survive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import _semantics
from .config import (
    ArgumentExplosion,
    DEFAULT_CONFIG,
    EngineConfig,
    GraphTooLarge,
)
from .grounding import (
    GroundPriority,
    GroundRule,
    GroundTheory,
    _variable_ranges,
    ground,
)
from .kernel import FACT_LABEL, Literal, Theory, incompatible, literal_key


class EvidenceContradiction(Exception):
    """Asserted evidence clashes with active facts."""


# ---------------------------------------------------------------------------
# Forward chaining

def derive_closure(facts: Iterable[Literal],
                   instances: Iterable[GroundRule]) -> frozenset[Literal]:
    """Least fixpoint of forward rule application over ground instances.

    Inconsistent closures are allowed; consistency is handled by the
    argumentation layer.
    """
    known = set(facts)
    rules = list(instances)
    changed = True
    while changed:
        changed = False
        for r in rules:
            if r.head not in known and all(b in known for b in r.body):
                known.add(r.head)
                changed = True
    return frozenset(known)


# ---------------------------------------------------------------------------
# Arguments

@dataclass(frozen=True)
class Argument:
    """A subset-minimal derivation of one conclusion.

    ``support`` contains ground rule instances; fact leaves are
    empty-body instances with the reserved fact label. Minimality makes
    the support head-functional, so each sub-conclusion identifies one
    instance.
    """

    conclusion: Literal
    support: tuple[GroundRule, ...]  # sorted by (schema, index)
    top: GroundRule

    @property
    def by_head(self) -> dict[Literal, GroundRule]:
        cached = getattr(self, "_by_head", None)
        if cached is None:
            cached = {g.head: g for g in self.support}
            object.__setattr__(self, "_by_head", cached)
        return cached

    @property
    def heads(self) -> frozenset[Literal]:
        return frozenset(self.by_head)

    def rule_labels(self) -> tuple[str, ...]:
        return tuple(sorted({g.schema for g in self.support
                             if not is_fact_instance(g)}))

    def premises(self) -> tuple[Literal, ...]:
        return tuple(sorted((g.head for g in self.support
                             if is_fact_instance(g)), key=literal_key))

    def sub_argument(self, point: Literal) -> "Argument":
        """The argument for a sub-conclusion, carved out of this one."""
        if point == self.conclusion:
            return self
        top = self.by_head[point]
        keep: set[GroundRule] = set()
        stack = [top]
        while stack:
            inst = stack.pop()
            if inst in keep:
                continue
            keep.add(inst)
            for b in inst.body:
                stack.append(self.by_head[b])
        return Argument(point, tuple(sorted(keep, key=lambda g: g.ref)), top)

    def key(self) -> tuple:
        return (literal_key(self.conclusion), tuple(g.ref for g in self.support))

    def __str__(self) -> str:
        labels = ", ".join(f"{g.schema}[{g.index}]" for g in self.support)
        return f"<{self.conclusion} via {labels}>"


def is_fact_instance(g: GroundRule) -> bool:
    return g.schema.startswith(FACT_LABEL)


def fact_leaves(gt: GroundTheory) -> list[GroundRule]:
    # the literal is embedded in the synthetic label so leaf identity is
    # stable when further facts arrive (argument sets stay monotone)
    ordered = sorted(gt.facts, key=literal_key)
    return [GroundRule(f"{FACT_LABEL}:{f}", 0, f, ()) for f in ordered]


def build_arguments(gt: GroundTheory, goal: Optional[Literal] = None,
                    config: EngineConfig = DEFAULT_CONFIG) -> list[Argument]:
    """All subset-minimal arguments, for `goal` or for every derivable
    literal when goal is None. Deterministic order."""
    leaves = fact_leaves(gt)
    supports: dict[Literal, list[frozenset[GroundRule]]] = {}

    def add_support(lit: Literal, cand: frozenset[GroundRule]) -> bool:
        row = supports.setdefault(lit, [])
        for existing in row:
            if existing <= cand:
                return False
        row[:] = [s for s in row if not (cand <= s)]
        row.append(cand)
        return True

    for leaf in leaves:
        add_support(leaf.head, frozenset((leaf,)))

    total = lambda: sum(len(v) for v in supports.values())
    changed = True
    while changed:
        changed = False
        for inst in gt.instances:
            if inst.body:
                rows = [supports.get(b) for b in inst.body]
                if any(r is None for r in rows):
                    continue
                for combo in itertools.product(*rows):
                    cand = frozenset((inst,)).union(*combo)
                    if add_support(inst.head, cand):
                        changed = True
            else:
                if add_support(inst.head, frozenset((inst,))):
                    changed = True
        if total() > config.max_arguments:
            raise ArgumentExplosion(
                f"argument construction exceeded cap {config.max_arguments}")

    args: list[Argument] = []
    for lit in supports:
        if goal is not None and lit != goal:
            continue
        for supp in supports[lit]:
            by_head = {g.head: g for g in supp}
            args.append(Argument(lit, tuple(sorted(supp, key=lambda g: g.ref)),
                                 by_head[lit]))
    args.sort(key=Argument.key)
    return args


# ---------------------------------------------------------------------------
# Preference comparison

@dataclass(frozen=True)
class Comparison:
    outcome: str  # 'attacker' | 'target' | 'undecided'
    decided_by: tuple[str, ...] = ()  # schema labels of the deciding claims
    via: str = ""  # 'priority' | 'specificity' | ''


@dataclass
class _ClaimIndex:
    """Per-ground-theory index of priority instances.

    Each instance carries the heads of its subject instances and the
    full condition set (own body plus, transitively, the bodies that
    must hold for its subjects to be in force).
    """

    by_heads: dict[tuple, list[GroundPriority]] = field(default_factory=dict)
    needed: dict[tuple[str, int], frozenset[Literal]] = field(default_factory=dict)
    next_level: dict[int, list[GroundPriority]] = field(default_factory=dict)

    @classmethod
    def build(cls, gt: GroundTheory) -> "_ClaimIndex":
        idx = cls()
        for p in sorted(gt.priorities, key=lambda p: p.level):
            if p.level == 1:
                hi = gt.instance(p.higher)
                lo = gt.instance(p.lower)
                need = frozenset(p.body) | set(hi.body) | set(lo.body)
                key = (literal_key(hi.head), literal_key(lo.head))
                idx.by_heads.setdefault(key, []).append(p)
            else:
                need = (frozenset(p.body)
                        | idx.needed[p.higher]
                        | idx.needed[p.lower])
                idx.next_level.setdefault(p.level, []).append(p)
            idx.needed[p.ref] = need
        return idx

    def claims(self, winner_head: Literal, loser_head: Literal,
               context: frozenset[Literal]) -> list[GroundPriority]:
        key = (literal_key(winner_head), literal_key(loser_head))
        return [p for p in self.by_heads.get(key, ())
                if self.needed[p.ref] <= context]


def _resolve_claims(idx: _ClaimIndex,
                    pro_a: list[GroundPriority], pro_b: list[GroundPriority],
                    context: frozenset[Literal], level: int) -> Comparison:
    if not pro_a and not pro_b:
        return Comparison("undecided")
    if pro_a and not pro_b:
        return Comparison("attacker", tuple(sorted({p.schema for p in pro_a})),
                          "priority")
    if pro_b and not pro_a:
        return Comparison("target", tuple(sorted({p.schema for p in pro_b})),
                          "priority")
    refs_a = {p.ref for p in pro_a}
    refs_b = {p.ref for p in pro_b}
    up_a: list[GroundPriority] = []
    up_b: list[GroundPriority] = []
    for q in idx.next_level.get(level + 1, ()):
        if not (frozenset(q.body) <= context):
            continue
        if q.higher in refs_a and q.lower in refs_b:
            up_a.append(q)
        elif q.higher in refs_b and q.lower in refs_a:
            up_b.append(q)
    if up_a or up_b:
        # A contested level is settled above it or not at all.
        return _resolve_claims(idx, up_a, up_b, context, level + 1)
    # No higher level speaks: the strictly more specific context wins.
    dom_a = [p for p in pro_a
             if all(idx.needed[q.ref] < idx.needed[p.ref] for q in pro_b)]
    if dom_a:
        return Comparison("attacker", tuple(sorted({p.schema for p in dom_a})),
                          "specificity")
    dom_b = [p for p in pro_b
             if all(idx.needed[q.ref] < idx.needed[p.ref] for q in pro_a)]
    if dom_b:
        return Comparison("target", tuple(sorted({p.schema for p in dom_b})),
                          "specificity")
    return Comparison("undecided")


def compare_at_conflict(attacker: Argument, target: Argument, gt: GroundTheory,
                        context: frozenset[Literal],
                        point: Optional[Literal] = None,
                        _idx: Optional[_ClaimIndex] = None) -> Comparison:
    """Rank two conflicting arguments at the conflict point (the
    target's conclusion by default)."""
    point = point if point is not None else target.conclusion
    idx = _idx if _idx is not None else _ClaimIndex.build(gt)
    pro_a = idx.claims(attacker.conclusion, point, context)
    pro_b = idx.claims(point, attacker.conclusion, context)
    return _resolve_claims(idx, pro_a, pro_b, context, 1)


# ---------------------------------------------------------------------------
# Defeat graph

@dataclass(frozen=True)
class Attack:
    attacker: int
    target: int
    point: Literal


@dataclass(frozen=True)
class Defeat:
    attacker: int
    target: int
    point: Literal
    decided_by: tuple[str, ...]  # empty = undecided conflict (mutual)
    via: str  # 'priority' | 'specificity' | 'undecided'


@dataclass(frozen=True)
class DefeatGraph:
    nodes: tuple[Argument, ...]
    attacks: tuple[Attack, ...]
    defeats: tuple[Defeat, ...]

    def defeat_adjacency(self) -> list[list[int]]:
        """attackers-per-node at node level (deduplicated)."""
        att: list[set[int]] = [set() for _ in self.nodes]
        for d in self.defeats:
            att[d.target].add(d.attacker)
        return [sorted(s) for s in att]


def build_defeat_graph(gt: GroundTheory, args: list[Argument],
                       config: EngineConfig = DEFAULT_CONFIG) -> DefeatGraph:
    theory = gt.theory
    idx = _ClaimIndex.build(gt)

    # Which present literals are incompatible with which: computed once
    # over the distinct conclusion/sub-conclusion literals.
    conclusions: dict[Literal, list[int]] = {}
    for i, a in enumerate(args):
        conclusions.setdefault(a.conclusion, []).append(i)
    sub_literals = sorted({h for a in args for h in a.heads}, key=literal_key)
    concl_literals = sorted(conclusions, key=literal_key)
    incompat: dict[Literal, list[Literal]] = {}
    for c in sub_literals:
        row = [l for l in concl_literals if incompatible(l, c, theory)]
        if row:
            incompat[c] = row

    attacks: list[Attack] = []
    defeats: list[Defeat] = []
    for t_i, target in enumerate(args):
        for point in sorted(target.heads, key=literal_key):
            for concl in incompat.get(point, ()):
                sub = target.sub_argument(point)
                for a_i in conclusions[concl]:
                    attacker = args[a_i]
                    attacks.append(Attack(a_i, t_i, point))
                    context = frozenset(gt.facts) | attacker.heads | sub.heads
                    cmp = compare_at_conflict(attacker, target, gt, context,
                                              point, _idx=idx)
                    if cmp.outcome == "attacker":
                        defeats.append(Defeat(a_i, t_i, point,
                                              cmp.decided_by, cmp.via))
                    elif cmp.outcome == "undecided":
                        defeats.append(Defeat(a_i, t_i, point, (), "undecided"))
                    # target strictly stronger: the attack does not defeat

    attacks.sort(key=lambda a: (a.attacker, a.target, literal_key(a.point)))
    defeats.sort(key=lambda d: (d.attacker, d.target, literal_key(d.point)))
    return DefeatGraph(tuple(args), tuple(attacks), tuple(defeats))


# ---------------------------------------------------------------------------
# Semantics

def grounded_extension(graph: DefeatGraph) -> list[Argument]:
    accepted, _ = _semantics.grounded_partition(graph.defeat_adjacency())
    return [graph.nodes[i] for i in sorted(accepted)]


def preferred_extensions(graph: DefeatGraph,
                         config: EngineConfig = DEFAULT_CONFIG) -> list[list[Argument]]:
    n = len(graph.nodes)
    if n > config.preferred_cap:
        raise GraphTooLarge(
            f"{n} arguments exceed the exact-enumeration cap "
            f"{config.preferred_cap}; rely on grounded semantics")
    subsets = _semantics.preferred_subsets(graph.defeat_adjacency())
    out = [sorted(s) for s in subsets]
    out.sort()
    return [[graph.nodes[i] for i in ext] for ext in out]


# ---------------------------------------------------------------------------
# Queries

STATUS_SCEPTICAL = "accepted-sceptically"
STATUS_CREDULOUS = "accepted-credulously"
STATUS_REJECTED = "rejected"
STATUS_NO_ARGUMENT = "no-argument"


@dataclass(frozen=True)
class Verdict:
    query: Literal
    status: str
    witnesses: tuple[Argument, ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Analysis:
    """One grounded-and-solved snapshot of a theory plus evidence."""

    gt: GroundTheory
    arguments: tuple[Argument, ...]
    graph: DefeatGraph
    grounded: frozenset[int]

    def arguments_for(self, goal: Literal) -> list[int]:
        return [i for i, a in enumerate(self.graph.nodes) if a.conclusion == goal]


def check_evidence(theory: Theory, evidence: Iterable[Literal]) -> None:
    active = set(theory.facts)
    for e in evidence:
        for f in sorted(active, key=literal_key):
            if incompatible(e, f, theory):
                raise EvidenceContradiction(f"{e} contradicts active fact {f}")
        active.add(e)


def analyze(theory: Theory, evidence: Iterable[Literal] = (),
            extra_constants: Iterable[str] = (),
            config: EngineConfig = DEFAULT_CONFIG) -> Analysis:
    evidence = list(evidence)
    check_evidence(theory, evidence)
    extras = set(extra_constants)
    for e in evidence:
        extras |= e.constants()
    enriched = theory.with_facts(evidence)
    gt = ground(enriched, extras, config)
    args = build_arguments(gt, None, config)
    graph = build_defeat_graph(gt, args, config)
    accepted, _ = _semantics.grounded_partition(graph.defeat_adjacency())
    return Analysis(gt, tuple(args), graph, frozenset(accepted))


def _components(adjacency: list[list[int]]) -> list[int]:
    """Weakly-connected component id per node."""
    n = len(adjacency)
    undirected: list[set[int]] = [set() for _ in range(n)]
    for node, atts in enumerate(adjacency):
        for a in atts:
            undirected[node].add(a)
            undirected[a].add(node)
    comp = [-1] * n
    cid = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = cid
        while stack:
            v = stack.pop()
            for u in undirected[v]:
                if comp[u] == -1:
                    comp[u] = cid
                    stack.append(u)
        cid += 1
    return comp


def _credulous_nodes(analysis: Analysis, candidates: set[int],
                     config: EngineConfig) -> tuple[set[int], set[int]]:
    """Nodes among `candidates` in at least one preferred extension of
    their conflict component. Returns (credulous, skipped): components
    over the cap are skipped and reported."""
    adjacency = analysis.graph.defeat_adjacency()
    comp = _components(adjacency)
    credulous: set[int] = set()
    skipped: set[int] = set()
    for cid in sorted({comp[i] for i in candidates}):
        members = [i for i in range(len(comp)) if comp[i] == cid]
        if len(members) > config.preferred_cap:
            skipped |= {i for i in candidates if comp[i] == cid}
            continue
        remap = {node: k for k, node in enumerate(members)}
        sub_adj = [[remap[a] for a in adjacency[node] if comp[a] == cid]
                   for node in members]
        for ext in _semantics.preferred_subsets(sub_adj):
            for k in ext:
                node = members[k]
                if node in candidates:
                    credulous.add(node)
    return credulous, skipped


def ground_goals(theory: Theory, goal: Literal,
                 extra_constants: Iterable[str] = ()) -> list[Literal]:
    """All groundings of a goal pattern over the domain (plus extras),
    honoring sort-linked variable names."""
    if goal.is_ground:
        return [goal]
    extras = frozenset(extra_constants) - theory.domain
    domain = frozenset(theory.domain | extras)
    ranges = _variable_ranges(goal.variables(), theory.sort_map(), domain, extras)
    names = sorted(ranges)
    out = []
    for combo in itertools.product(*(ranges[n] for n in names)):
        binding = {n: c for n, c in zip(names, combo)}
        from .kernel import Term
        out.append(goal.substitute({n: Term(c, False) for n, c in binding.items()}))
    out.sort(key=literal_key)
    return out


def verdict_for(analysis: Analysis, goal: Literal,
                config: EngineConfig = DEFAULT_CONFIG,
                semantics: str = "preferred") -> Verdict:
    idxs = analysis.arguments_for(goal)
    if not idxs:
        return Verdict(goal, STATUS_NO_ARGUMENT)
    in_grounded = [i for i in idxs if i in analysis.grounded]
    if in_grounded:
        return Verdict(goal, STATUS_SCEPTICAL,
                       tuple(analysis.graph.nodes[i] for i in in_grounded))
    if semantics == "grounded":
        return Verdict(goal, STATUS_REJECTED)
    credulous, skipped = _credulous_nodes(analysis, set(idxs), config)
    if credulous:
        return Verdict(goal, STATUS_CREDULOUS,
                       tuple(analysis.graph.nodes[i] for i in sorted(credulous)))
    notes = ("preferred-enumeration-skipped: conflict component over cap",) \
        if skipped else ()
    return Verdict(goal, STATUS_REJECTED, (), notes)


def query(theory: Theory, evidence: Iterable[Literal], goal: Literal,
          config: EngineConfig = DEFAULT_CONFIG,
          semantics: str = "preferred") -> list[Verdict]:
    """Decide a goal pattern. Evidence is added as facts for this query
    only; goal variables are grounded over the domain plus any fresh
    query constants."""
    evidence = list(evidence)
    extras: set[str] = set(goal.constants())
    for e in evidence:
        extras |= e.constants()
    analysis = analyze(theory, evidence, extras, config)
    goals = ground_goals(theory, goal, extras)
    return [verdict_for(analysis, g, config, semantics) for g in goals]
