"""Definition-level brute-force oracles, independent of the engine path.

Arguments come from exhaustive subset enumeration over the ground
instances, admissibility from exhaustive subset enumeration over the
arguments, grounded acceptance from iterating the defense function.
Everything here favors transparency over speed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from prefarg.grounding import GroundTheory
from prefarg.kernel import Literal, incompatible, literal_key
from prefarg.solver import fact_leaves


@dataclass(frozen=True)
class OArg:
    conclusion: Literal
    refs: frozenset  # (schema, index) pairs

    def key(self):
        return (literal_key(self.conclusion), tuple(sorted(self.refs)))


def _closure_of(members) -> set[Literal]:
    known: set[Literal] = set()
    changed = True
    while changed:
        changed = False
        for inst in members:
            if inst.head not in known and all(b in known for b in inst.body):
                known.add(inst.head)
                changed = True
    return known


def oracle_arguments(gt: GroundTheory) -> list[OArg]:
    """Every (conclusion, instance subset) where the subset derives the
    conclusion and no proper subset does."""
    universe = list(gt.instances) + fact_leaves(gt)
    n = len(universe)
    closures: dict[int, set[Literal]] = {}
    for mask in range(1 << n):
        members = [universe[i] for i in range(n) if mask >> i & 1]
        closures[mask] = _closure_of(members)
    out = []
    for mask in range(1, 1 << n):
        bits = [i for i in range(n) if mask >> i & 1]
        for lit in closures[mask]:
            if all(lit not in closures[mask & ~(1 << i)] for i in bits):
                out.append(OArg(lit, frozenset(universe[i].ref for i in bits)))
    out.sort(key=OArg.key)
    return out


def _heads(gt: GroundTheory, arg: OArg) -> set[Literal]:
    by_ref = {g.ref: g for g in list(gt.instances) + fact_leaves(gt)}
    return {by_ref[r].head for r in arg.refs}


def _sub_refs(gt: GroundTheory, arg: OArg, point: Literal) -> frozenset:
    by_ref = {g.ref: g for g in list(gt.instances) + fact_leaves(gt)}
    by_head = {by_ref[r].head: by_ref[r] for r in arg.refs}
    keep = set()
    stack = [by_head[point]]
    while stack:
        inst = stack.pop()
        if inst.ref in keep:
            continue
        keep.add(inst.ref)
        for b in inst.body:
            stack.append(by_head[b])
    return frozenset(keep)


def _needed(gt: GroundTheory, p) -> frozenset[Literal]:
    if p.level == 1:
        return (frozenset(p.body)
                | set(gt.instance(p.higher).body)
                | set(gt.instance(p.lower).body))
    return (frozenset(p.body)
            | _needed(gt, gt.priority_instance(p.higher))
            | _needed(gt, gt.priority_instance(p.lower)))


def oracle_compare(gt: GroundTheory, concl_a: Literal, point: Literal,
                   context: set[Literal]) -> str:
    """'attacker' | 'target' | 'undecided', chasing the comparison
    definition directly."""
    level1 = [p for p in gt.priorities if p.level == 1]

    def applicable(p):
        return _needed(gt, p) <= context

    pro_a = [p for p in level1 if applicable(p)
             and gt.instance(p.higher).head == concl_a
             and gt.instance(p.lower).head == point]
    pro_b = [p for p in level1 if applicable(p)
             and gt.instance(p.higher).head == point
             and gt.instance(p.lower).head == concl_a]

    def resolve(side_a, side_b, level):
        if not side_a and not side_b:
            return "undecided"
        if side_a and not side_b:
            return "attacker"
        if side_b and not side_a:
            return "target"
        refs_a = {p.ref for p in side_a}
        refs_b = {p.ref for p in side_b}
        ups = [q for q in gt.priorities
               if q.level == level + 1 and frozenset(q.body) <= context]
        up_a = [q for q in ups if q.higher in refs_a and q.lower in refs_b]
        up_b = [q for q in ups if q.higher in refs_b and q.lower in refs_a]
        if up_a or up_b:
            return resolve(up_a, up_b, level + 1)
        if any(all(_needed(gt, q) < _needed(gt, p) for q in side_b)
               for p in side_a):
            return "attacker"
        if any(all(_needed(gt, q) < _needed(gt, p) for q in side_a)
               for p in side_b):
            return "target"
        return "undecided"

    return resolve(pro_a, pro_b, 1)


def oracle_defeats(gt: GroundTheory, args: list[OArg]) -> set[tuple]:
    """(attacker key, target key, point key) triples that survive the
    preference comparison (undecided conflicts survive both ways)."""
    out = set()
    by_ref = {g.ref: g for g in list(gt.instances) + fact_leaves(gt)}
    for a, b in itertools.product(args, repeat=2):
        for point in _heads(gt, b):
            if not incompatible(a.conclusion, point, gt.theory):
                continue
            sub_heads = {by_ref[r].head for r in _sub_refs(gt, b, point)}
            context = set(gt.facts) | _heads(gt, a) | sub_heads
            outcome = oracle_compare(gt, a.conclusion, point, context)
            if outcome in ("attacker", "undecided"):
                out.add((a.key(), b.key(), literal_key(point)))
    return out


def _node_defeats(args: list[OArg], edges: set[tuple]) -> dict[int, set[int]]:
    """defeaters-per-node from edge triples."""
    key_to_idx = {a.key(): i for i, a in enumerate(args)}
    defeaters: dict[int, set[int]] = {i: set() for i in range(len(args))}
    for attacker, target, _point in edges:
        defeaters[key_to_idx[target]].add(key_to_idx[attacker])
    return defeaters


def oracle_grounded(args: list[OArg], edges: set[tuple]) -> set[int]:
    """Least fixpoint of the defense function, by naive iteration."""
    defeaters = _node_defeats(args, edges)
    n = len(args)
    accepted: set[int] = set()
    while True:
        defended = {i for i in range(n)
                    if all(defeaters[d] & accepted for d in defeaters[i])}
        if defended == accepted:
            return accepted
        accepted = defended


def oracle_preferred(args: list[OArg], edges: set[tuple]) -> list[frozenset[int]]:
    """Maximal admissible sets by full subset enumeration."""
    defeaters = _node_defeats(args, edges)
    n = len(args)
    admissible = []
    for mask in range(1 << n):
        nodes = {i for i in range(n) if mask >> i & 1}
        if any(defeaters[i] & nodes for i in nodes):
            continue  # not conflict-free
        if all(all(defeaters[d] & nodes for d in defeaters[i]) for i in nodes):
            admissible.append(frozenset(nodes))
    return [s for s in admissible
            if not any(s < t for t in admissible)]


def oracle_statuses(gt: GroundTheory) -> dict[tuple, str]:
    """Literal-key -> acceptance status over all derivable literals."""
    args = oracle_arguments(gt)
    edges = oracle_defeats(gt, args)
    grounded = oracle_grounded(args, edges)
    preferred = oracle_preferred(args, edges)
    credulous = set().union(*preferred) if preferred else set()
    out: dict[tuple, str] = {}
    by_concl: dict[tuple, list[int]] = {}
    for i, a in enumerate(args):
        by_concl.setdefault(literal_key(a.conclusion), []).append(i)
    for key, idxs in by_concl.items():
        if any(i in grounded for i in idxs):
            out[key] = "accepted-sceptically"
        elif any(i in credulous for i in idxs):
            out[key] = "accepted-credulously"
        else:
            out[key] = "rejected"
    return out


# ---------------------------------------------------------------------------
# Random ground theories for the equivalence suite

def random_ground_theory(seed: int):
    """A small random ground theory (<= 12 rules, <= 6 constants,
    <= 4 priorities over <= 2 levels) that passes validation and stays
    within oracle reach (instances <= 13, arguments <= 16)."""
    import random

    from prefarg.kernel import (
        ArgumentRule,
        Literal,
        PriorityRule,
        Term,
        Theory,
        validate,
    )

    rng = random.Random(seed)
    constants = ["k1", "k2", "k3", "k4", "k5", "k6"][: rng.randint(1, 6)]
    preds = ["p", "q", "r", "s", "t"]
    arity = {p: rng.choice([0, 1]) for p in preds}

    def random_literal():
        pred = rng.choice(preds)
        args = tuple(Term(rng.choice(constants), False)
                     for _ in range(arity[pred]))
        return Literal(pred, args, rng.random() < 0.45)

    for attempt in range(200):
        n_rules = rng.choice([3, 4, 5, 6, 7, 8, 8, 9, 10, 12][: 10])
        if rng.random() < 0.85:
            n_rules = min(n_rules, 8)
        rules = []
        for i in range(n_rules):
            head = random_literal()
            body = []
            for _ in range(rng.randint(0, 2)):
                lit = random_literal()
                if lit != head:
                    body.append(lit)
            rules.append(ArgumentRule(f"g{i + 1}", head, tuple(dict.fromkeys(body))))
        facts = []
        for _ in range(rng.randint(0, 3)):
            lit = random_literal()
            if lit.complement() not in facts and lit not in facts:
                facts.append(lit)
        priorities = []
        n_prio = rng.randint(0, 4)
        label_pool = [r.label for r in rules]
        for j in range(n_prio):
            level1 = [p.label for p in priorities if p.level == 1]
            if len(level1) >= 2 and rng.random() < 0.35:
                hi, lo = rng.sample(level1, 2)
                level = 2
            else:
                hi, lo = rng.sample(label_pool, 2)
                level = 1
            body = ()
            if level == 1 and rng.random() < 0.4:
                body = (random_literal(),)
            priorities.append(PriorityRule(f"pr{j + 1}", hi, lo, body, level))
        theory = Theory(
            facts=frozenset(facts),
            rules=tuple(rules),
            priorities=tuple(priorities),
        ).with_domain_closure()
        if validate(theory):
            continue
        if len(theory.rules) + len(theory.facts) > 13:
            continue
        gt_args = None
        try:
            from prefarg.grounding import ground

            gt = ground(theory)
            gt_args = oracle_arguments(gt)
        except Exception:
            continue
        if len(gt_args) > 16:
            continue
        return theory
    raise RuntimeError(f"no valid random theory for seed {seed}")
