import pytest
from hypothesis import given, strategies as st

from prefarg.kernel import (
    ArgumentRule,
    Literal,
    PriorityRule,
    Term,
    Theory,
    complement,
    incompatible,
    validate,
)

constants = st.sampled_from(["a", "b", "c1", "c2"])
literals = st.builds(
    Literal,
    predicate=st.sampled_from(["p", "q", "access"]),
    args=st.lists(st.builds(Term, constants, st.just(False)),
                  max_size=2).map(tuple),
    negated=st.booleans(),
)


def lit(pred, *args, negated=False):
    return Literal(pred, tuple(Term(a, False) for a in args), negated)


@given(literals)
def test_complement_involution(l):
    assert complement(complement(l)) == l
    assert complement(l) != l


@given(literals)
def test_complement_always_incompatible(l):
    assert incompatible(l, complement(l), Theory())


def ehealth_contraries() -> Theory:
    from prefarg.kernel import IncompatibilityDecl

    decl = IncompatibilityDecl(
        Literal("access", (Term("D", True), Term("U", True), Term("permitted", False))),
        Literal("access", (Term("D", True), Term("U", True), Term("denied", False))),
    )
    return Theory(incompatibilities=(decl,)).with_domain_closure()


def test_declared_contraries_match():
    t = ehealth_contraries()
    assert incompatible(lit("access", "x", "d", "permitted"),
                        lit("access", "x", "d", "denied"), t)


def test_declared_contraries_need_shared_bindings():
    t = ehealth_contraries()
    assert not incompatible(lit("access", "x", "d", "permitted"),
                            lit("access", "y", "d", "denied"), t)


def test_complement_route_without_declarations():
    assert incompatible(lit("perform", "a", "c1"),
                        lit("perform", "a", "c1", negated=True), Theory())


def test_pattern_requires_distinct_literals():
    from prefarg.kernel import IncompatibilityDecl

    decl = IncompatibilityDecl(
        Literal("owner", (Term("C1", True), Term("X", True))),
        Literal("owner", (Term("C2", True), Term("X", True))),
    )
    t = Theory(incompatibilities=(decl,)).with_domain_closure()
    assert incompatible(lit("owner", "c", "x"), lit("owner", "c2", "x"), t)
    assert not incompatible(lit("owner", "c", "x"), lit("owner", "c", "x"), t)


@given(st.lists(literals, min_size=2, max_size=2, unique=True))
def test_incompatible_symmetric(pair):
    t = ehealth_contraries()
    a, b = pair
    assert incompatible(a, b, t) == incompatible(b, a, t)


def test_validate_duplicate_label():
    t = Theory(rules=(
        ArgumentRule("a1", lit("p")),
        ArgumentRule("a1", lit("q")),
    )).with_domain_closure()
    diags = validate(t)
    assert any("duplicate label a1" in d.message for d in diags)


def test_validate_irreflexive_priority():
    t = Theory(
        rules=(ArgumentRule("a2", lit("p")),),
        priorities=(PriorityRule("b1", "a2", "a2"),),
    ).with_domain_closure()
    assert any("irreflexivity violated" in d.message for d in validate(t))


def test_validate_level_discipline():
    t = Theory(
        rules=(ArgumentRule("a1", lit("p")), ArgumentRule("a2", lit("q"))),
        priorities=(
            PriorityRule("b1", "a1", "a2", level=1),
            PriorityRule("c1", "b1", "a1", level=2),  # a1 is level 0
        ),
    ).with_domain_closure()
    assert any(d.code == "level-mismatch" for d in validate(t))


def test_validate_dangling_reference():
    t = Theory(
        rules=(ArgumentRule("a1", lit("p")),),
        priorities=(PriorityRule("b1", "a1", "ghost"),),
    ).with_domain_closure()
    assert any(d.code == "dangling-reference" for d in validate(t))


def test_validate_contradictory_facts():
    t = Theory(facts=frozenset({lit("p", "a"), lit("p", "a", negated=True)})
               ).with_domain_closure()
    assert any(d.code == "contradictory-facts" for d in validate(t))


def test_validate_non_ground_fact():
    t = Theory(facts=frozenset({Literal("p", (Term("X", True),))})
               ).with_domain_closure()
    assert any(d.code == "non-ground-fact" for d in validate(t))


def test_validate_arity_mismatch():
    t = Theory(rules=(
        ArgumentRule("a1", lit("p", "a")),
        ArgumentRule("a2", lit("p")),
    )).with_domain_closure()
    assert any(d.code == "arity-mismatch" for d in validate(t))


def test_validate_idempotent_and_clean_packs(packs):
    for theory in packs.values():
        assert validate(theory) == []
        assert validate(theory) == validate(theory)
