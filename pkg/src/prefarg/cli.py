"""Command-line front door.

Exit codes: 0 ok, 1 scenario failure, 2 usage or parse problem,
3 unresolved conflicts (so packs can be linted in CI).
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .abduction import abduce
from .config import DEFAULT_CONFIG, EngineLimitError
from .conflicts import ResolutionError, apply_resolution, detect_conflicts
from .dsl import ParseError, parse_literal, print_theory
from .explain import explain_verdict, render_structured, render_text
from .kernel import Literal, PriorityRule, Theory, validate
from .packs import (
    PackError,
    load_pack,
    load_scenario_file,
    load_theory_file,
    pack_names,
    run_scenario,
)
from .service import DEFAULT_HOST, DEFAULT_PORT, create_app
from .solver import EvidenceContradiction, query

EXIT_OK = 0
EXIT_SCENARIO_FAILURE = 1
EXIT_USAGE = 2
EXIT_UNRESOLVED = 3


def _color_enabled() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _style(text: str, **kwargs) -> str:
    return click.style(text, **kwargs) if _color_enabled() else text


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _load_theory(source: str) -> Theory:
    """A .arg path or a shipped pack name."""
    path = Path(source)
    try:
        if path.exists():
            return load_theory_file(path)
        if source in pack_names():
            return load_pack(source)
    except ParseError as e:
        _fail(e.annotated(path.read_text("utf-8")) if path.exists() else str(e))
    except PackError as e:
        _fail(str(e))
    _fail(f"no such file or pack: {source} (packs: {', '.join(pack_names())})")
    raise AssertionError  # unreachable


def _parse_literal_arg(text: str) -> Literal:
    try:
        return parse_literal(text)
    except ParseError as e:
        _fail(f"bad literal {text!r}: {e}")
        raise AssertionError


def _json_out(doc) -> None:
    click.echo(json.dumps(doc, sort_keys=True, indent=2))


@click.group()
@click.version_option(package_name="prefarg")
def main() -> None:
    """Decide queries over defeasible rule bases with priorities."""


@main.command()
@click.argument("source")
def check(source: str) -> None:
    """Parse and validate a theory; exit 0 iff clean."""
    theory = _load_theory(source)
    diags = validate(theory)
    for d in diags:
        click.echo(str(d))
    if diags:
        sys.exit(EXIT_USAGE)
    click.echo(_style("ok", fg="green") + f": {len(theory.rules)} rules, "
               f"{len(theory.priorities)} priorities, "
               f"{len(theory.facts)} facts")


def _collect_evidence(asserts: tuple[str, ...]) -> list[Literal]:
    return [_parse_literal_arg(a) for a in asserts]


@main.command(name="query")
@click.argument("source")
@click.option("--assert", "asserts", multiple=True, metavar="LITERAL",
              help="evidence literal, repeatable")
@click.option("--goal", required=True, metavar="PATTERN")
@click.option("--semantics", type=click.Choice(["grounded", "preferred"]),
              default="preferred", show_default=True)
@click.option("--json", "as_json", is_flag=True, help="stable JSON output")
def query_cmd(source: str, asserts: tuple[str, ...], goal: str,
              semantics: str, as_json: bool) -> None:
    """Decide a goal pattern under the given evidence."""
    theory = _load_theory(source)
    evidence = _collect_evidence(asserts)
    pattern = _parse_literal_arg(goal)
    try:
        verdicts = query(theory, evidence, pattern, DEFAULT_CONFIG, semantics)
    except (EvidenceContradiction, EngineLimitError) as e:
        _fail(str(e))
        return
    if as_json:
        _json_out({"goal": goal, "verdicts": [
            {"goal": str(v.query), "status": v.status,
             "witnesses": [list(a.rule_labels()) for a in v.witnesses],
             "notes": list(v.notes)}
            for v in verdicts]})
        return
    width = max((len(str(v.query)) for v in verdicts), default=4)
    for v in verdicts:
        status = v.status
        if status.startswith("accepted"):
            status = _style(status, fg="green")
        elif status == "rejected":
            status = _style(status, fg="red")
        click.echo(f"{str(v.query):<{width}}  {status}")


@main.command()
@click.argument("source")
@click.option("--assert", "asserts", multiple=True, metavar="LITERAL")
@click.option("--goal", required=True, metavar="GROUND-LITERAL")
@click.option("--hints", is_flag=True, help="include abductive hints")
@click.option("--json", "as_json", is_flag=True)
def explain(source: str, asserts: tuple[str, ...], goal: str,
            hints: bool, as_json: bool) -> None:
    """Justify the verdict on a ground goal."""
    theory = _load_theory(source)
    evidence = _collect_evidence(asserts)
    lit = _parse_literal_arg(goal)
    if not lit.is_ground:
        _fail(f"explanation goal must be ground: {lit}")
    explanation = explain_verdict(theory, evidence, lit, DEFAULT_CONFIG,
                                  with_hints=hints)
    if as_json:
        _json_out(render_structured(explanation))
    else:
        click.echo(render_text(explanation), nl=False)


@main.command()
@click.argument("source")
@click.option("--suggest", is_flag=True, help="show specificity suggestions")
@click.option("--json", "as_json", is_flag=True)
def conflicts(source: str, suggest: bool, as_json: bool) -> None:
    """Report conflicting rule pairs; exit 3 if any is unresolved."""
    theory = _load_theory(source)
    reports = detect_conflicts(theory)
    unresolved = [r for r in reports if r.unresolved]
    if as_json:
        from .service import _report_doc

        _json_out({"conflicts": [_report_doc(r) for r in reports],
                   "unresolved": len(unresolved)})
    else:
        for r in reports:
            if r.unresolved:
                line = f"{r.rule_a} ~ {r.rule_b}: " + _style("unresolved", fg="red")
                if suggest and r.suggestion:
                    line += f"  (suggest {r.suggestion.higher} > {r.suggestion.lower})"
            else:
                line = (f"{r.rule_a} ~ {r.rule_b}: decided by "
                        + ", ".join(r.resolution) + f" (winner {r.winner})")
            click.echo(line)
        click.echo(f"{len(reports)} conflicts, {len(unresolved)} unresolved")
    if unresolved:
        sys.exit(EXIT_UNRESOLVED)


@main.command(name="abduce")
@click.argument("source")
@click.option("--assert", "asserts", multiple=True, metavar="LITERAL")
@click.option("--goal", required=True, metavar="GROUND-LITERAL")
@click.option("--max", "max_size", default=2, show_default=True)
@click.option("--tier", type=click.Choice(["sceptical", "credulous"]),
              default="sceptical", show_default=True)
@click.option("--json", "as_json", is_flag=True)
def abduce_cmd(source: str, asserts: tuple[str, ...], goal: str,
               max_size: int, tier: str, as_json: bool) -> None:
    """Minimal assumption sets that would establish the goal."""
    theory = _load_theory(source)
    evidence = _collect_evidence(asserts)
    lit = _parse_literal_arg(goal)
    if not lit.is_ground:
        _fail(f"abduction goal must be ground: {lit}")
    result = abduce(theory, evidence, lit, tier, max_size)
    if as_json:
        _json_out({"truncated": result.truncated, "answers": [
            {"assume": [str(l) for l in a.delta], "status": a.resulting_status}
            for a in result.answers]})
        return
    if not result.answers:
        click.echo("no assumption set establishes the goal within the size bound")
    for a in result.answers:
        assume = ", ".join(str(l) for l in a.delta) or "(nothing: already holds)"
        click.echo(f"assume {assume}  -> {a.resulting_status}")
    if result.truncated:
        click.echo("search truncated by budget", err=True)


@main.command()
@click.argument("scn", type=click.Path(exists=True))
def scenario(scn: str) -> None:
    """Run a staged scenario file; exit 1 on any failing expectation."""
    try:
        s = load_scenario_file(scn)
    except ParseError as e:
        _fail(e.annotated(Path(scn).read_text("utf-8")))
        return
    result = run_scenario(s)
    click.echo(f"scenario {s.name} (pack {s.pack})")
    for line in result.diff_lines():
        styled = line
        if line.startswith("FAIL"):
            styled = _style(line, fg="red")
        click.echo("  " + styled)
    stages = len(s.stages)
    passed = sum(1 for i in range(1, stages + 1) if result.stage_passed(i))
    click.echo(f"{passed}/{stages} stages pass")
    if not result.passed:
        sys.exit(EXIT_SCENARIO_FAILURE)


@main.command()
@click.argument("source")
def repl(source: str) -> None:
    """Interactive loop: assert/retract/query/explain/conflicts/prefer/
    abduce/save, mirroring the service semantics."""
    theory = _load_theory(source)
    evidence: list[Literal] = []
    click.echo(f"loaded {source}; verbs: assert, retract, query, explain, "
               "conflicts, prefer, abduce, save, quit")
    while True:
        try:
            line = input("prefarg> ").strip()
        except EOFError:
            break
        if not line:
            continue
        verb, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if verb in ("quit", "exit"):
                break
            elif verb == "assert":
                lit = parse_literal(rest)
                from .solver import check_evidence

                check_evidence(theory, evidence + [lit])
                evidence.append(lit)
                click.echo(f"asserted {lit}")
            elif verb == "retract":
                lit = parse_literal(rest)
                if lit in evidence:
                    evidence.remove(lit)
                    click.echo(f"retracted {lit}")
                else:
                    click.echo("not asserted")
            elif verb == "query":
                for v in query(theory, evidence, parse_literal(rest)):
                    click.echo(f"{v.query}  {v.status}")
            elif verb == "explain":
                e = explain_verdict(theory, evidence, parse_literal(rest))
                click.echo(render_text(e), nl=False)
            elif verb == "conflicts":
                for r in detect_conflicts(theory):
                    state = ("unresolved" if r.unresolved
                             else "decided by " + ", ".join(r.resolution))
                    click.echo(f"{r.rule_a} ~ {r.rule_b}: {state}")
            elif verb == "prefer":
                # prefer <label>: <higher> > <lower> [when ...]
                from .dsl import parse as parse_theory

                scratch = parse_theory(print_theory(theory)
                                       + f"prefer {rest}\n"
                                       if rest.endswith(".")
                                       else print_theory(theory)
                                       + f"prefer {rest}.\n")
                new = scratch.priorities[-1]
                theory = apply_resolution(
                    theory, PriorityRule(new.label, new.higher, new.lower,
                                         new.body, new.level))
                click.echo(f"added {new.label}: {new.higher} > {new.lower}")
            elif verb == "abduce":
                parts = rest.rsplit(" ", 1)
                size = 2
                if len(parts) == 2 and parts[1].isdigit():
                    rest, size = parts[0], int(parts[1])
                result = abduce(theory, evidence, parse_literal(rest),
                                max_size=size)
                for a in result.answers:
                    assume = ", ".join(str(l) for l in a.delta) or "(already holds)"
                    click.echo(f"assume {assume}  -> {a.resulting_status}")
                if not result.answers:
                    click.echo("no assumption set found")
            elif verb == "save":
                target = Path(rest or "session.arg")
                target.write_text(print_theory(theory.with_facts(evidence)),
                                  encoding="utf-8")
                click.echo(f"saved {target}")
            else:
                click.echo(f"unknown verb {verb!r}")
        except (ParseError, EvidenceContradiction, ResolutionError,
                EngineLimitError, ValueError) as e:
            click.echo(f"error: {e}")


@main.command()
@click.argument("source")
@click.option("--host", default=DEFAULT_HOST, show_default=True)
@click.option("--port", default=DEFAULT_PORT, show_default=True)
@click.option("--allow-origin", default=None,
              help="enable CORS for this origin (use * for any)")
@click.option("--serve-ui", default=None, type=click.Path(exists=True),
              help="serve a built workbench bundle at /ui")
def serve(source: str, host: str, port: int, allow_origin: str,
          serve_ui: str) -> None:
    """Run the HTTP service over a pack or theory file."""
    extra = {}
    path = Path(source)
    if path.exists():
        theory = _load_theory(source)
        extra[path.stem] = theory
        click.echo(f"serving theory {path.stem} (and shipped packs) "
                   f"on {host}:{port}")
    elif source in pack_names():
        click.echo(f"serving pack {source} on {host}:{port}")
    else:
        _fail(f"no such file or pack: {source}")
    app = create_app(extra, allow_origin, serve_ui)
    from .service import run as run_service

    run_service(app, host, port)


if __name__ == "__main__":
    main()
