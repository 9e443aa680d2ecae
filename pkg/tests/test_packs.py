import pytest

from prefarg.dsl import parse_literal
from prefarg.kernel import validate
from prefarg.packs import (
    PackError,
    SCENARIO_FILES,
    load_pack,
    load_scenario,
    run_scenario,
)
from prefarg.solver import query


def test_pack_rule_counts(packs):
    ehealth = packs["ehealth"]
    # shorthand heads expand one rule per data category:
    # 1a-1c, 2..6, 7a-7c, 8, 9, 10a-10b, 11..14
    assert len(ehealth.rules) == 19
    assert len(ehealth.priorities) == 7

    fig2 = packs["attribution-fig2"]
    assert len(fig2.rules) == 5
    assert len([p for p in fig2.priorities if p.level == 1]) == 4
    assert len([p for p in fig2.priorities if p.level == 2]) == 1

    text = packs["attribution-text"]
    assert len(text.rules) == 5

    assert len(packs["ehealth-nopriorities"].priorities) == 0


def test_unknown_pack_errors():
    with pytest.raises(PackError):
        load_pack("attribution-imaginary")


def test_packs_validate_clean(packs):
    for name, theory in packs.items():
        assert validate(theory) == [], name


def test_layer_tags(packs):
    fig2 = {r.label: r.layer for r in packs["attribution-fig2"].rules}
    assert fig2["fig2.a2"] == "tactical"
    ladder = {r.label: r.layer for r in packs["attribution-ladder"].rules}
    assert ladder["lad.a6"] == "tactical"     # code language
    assert ladder["lad.a7"] == "operational"  # motive
    assert ladder["lad.a8"] == "operational"  # capability


def test_encoding_equivalence_between_text_and_fig2(packs, ssh_stages):
    evidence = []
    for stage in ssh_stages:
        evidence.extend(stage)
        for goal in ("perform(a, c1)", "neg perform(a, c1)",
                     "perform(a, c2)", "neg perform(a, c2)"):
            text = query(packs["attribution-text"], evidence,
                         parse_literal(goal))
            fig2 = query(packs["attribution-fig2"], evidence,
                         parse_literal(goal))
            assert [v.status for v in text] == [v.status for v in fig2], goal


@pytest.mark.parametrize("filename", SCENARIO_FILES)
def test_shipped_scenarios_pass(filename):
    result = run_scenario(load_scenario(filename))
    assert result.passed, "\n".join(result.diff_lines())


def test_emotional_case_matrix(packs):
    theory = packs["ehealth"]
    evidence = [parse_literal(t) for t in (
        "owner(c, x)", "pdata(x)", "emot(c)",
        "owner(c, x2)", "presc(x2)", "owner(c, x3)", "pinfo(x3)")]

    def status(goal):
        return query(theory, evidence, parse_literal(goal))[0].status

    assert status("access(x, c, denied)") == "accepted-sceptically"
    assert status("access(x, c, permitted)") == "rejected"
    assert status("access(x2, c, permitted)") == "accepted-sceptically"
    assert status("access(x3, c, permitted)") == "accepted-sceptically"


def test_scenario_failure_reported_not_raised(packs):
    from prefarg.dsl import parse_scenario

    s = parse_scenario(
        "scenario wrong.\npack attribution-text.\n"
        "stage 1: sourceIP(a, ip1), geoloc(ip1, c1).\n"
        "expect 1: perform(a, c1) => rejected.\n")
    result = run_scenario(s)
    assert not result.passed
    assert any("FAIL" in line for line in result.diff_lines())


def test_abducibles_declared(packs):
    assert ("avoid", 2, False) in packs["attribution-text"].abducibles
    assert ("fperm", 2, True) in packs["ehealth"].abducibles
