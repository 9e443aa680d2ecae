"""Text language for theories and scenario files.

One statement per line-or-more, terminated by ``.``; ``%`` starts a line
comment. Lowercase identifiers are constants/predicates, leading-uppercase
identifiers are variables. ``neg`` marks strong negation. Parsing is
first-error-wins: the first problem is reported with a source span and an
expected-token hint.

parse(print(theory)) is structurally the identity for every valid theory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .kernel import (
    ArgumentRule,
    IncompatibilityDecl,
    LAYERS,
    Literal,
    PriorityRule,
    Term,
    Theory,
    literal_key,
)

FILE_EXTENSION = ".arg"
SCENARIO_EXTENSION = ".scn"

STATUS_NAMES = ("accepted", "accepted-credulous", "rejected", "no-argument")


@dataclass(frozen=True)
class SourceSpan:
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected: str = ""):
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{span}: {message}{hint}")
        self.message = message
        self.span = span
        self.expected = expected

    def annotated(self, text: str) -> str:
        """Render the offending line with a caret marker."""
        lines = text.splitlines()
        if not (1 <= self.span.start_line <= len(lines)):
            return str(self)
        line = lines[self.span.start_line - 1]
        caret = " " * (self.span.start_col - 1) + "^"
        return f"{self}\n  {line}\n  {caret}"


# ---------------------------------------------------------------------------
# Lexer

_PUNCT = ("<-", "=>", ".", ":", ",", "(", ")", "{", "}", "=", ">", "~", "/")

_IDENT_START = re.compile(r"[A-Za-z_]")
_IDENT_CONT = re.compile(r"[A-Za-z0-9_]")


@dataclass(frozen=True)
class Token:
    kind: str  # 'ident' | 'var' | 'num' | punctuation | 'eof'
    value: str
    span: SourceSpan


class _Lexer:
    def __init__(self, text: str, filename: str):
        self.text = text.replace("\r\n", "\n").replace("\r", "\n")
        self.filename = filename
        self.pos = 0
        self.line = 1
        self.col = 1

    def _span(self, line: int, col: int, length: int) -> SourceSpan:
        return SourceSpan(self.filename, line, col, line, col + max(length - 1, 0))

    def _advance(self, n: int) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def tokens(self) -> list[Token]:
        out: list[Token] = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\n":
                self._advance(1)
                continue
            if ch == "%":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance(1)
                continue
            line, col = self.line, self.col
            two = self.text[self.pos:self.pos + 2]
            if two in ("<-", "=>"):
                out.append(Token(two, two, self._span(line, col, 2)))
                self._advance(2)
                continue
            if ch in ".:,(){}=>~/":
                out.append(Token(ch, ch, self._span(line, col, 1)))
                self._advance(1)
                continue
            if ch.isdigit():
                start = self.pos
                while self.pos < len(self.text) and self.text[self.pos].isdigit():
                    self._advance(1)
                val = self.text[start:self.pos]
                out.append(Token("num", val, self._span(line, col, len(val))))
                continue
            if _IDENT_START.match(ch):
                start = self.pos
                self._advance(1)
                while self.pos < len(self.text):
                    c = self.text[self.pos]
                    if _IDENT_CONT.match(c):
                        self._advance(1)
                    elif c in ".-" and self.pos + 1 < len(self.text) \
                            and _IDENT_CONT.match(self.text[self.pos + 1]):
                        # dots and dashes join identifier segments
                        # (namespaced labels, pack names) but a trailing
                        # '.' is always the statement terminator.
                        self._advance(2)
                    else:
                        break
                val = self.text[start:self.pos]
                kind = "var" if val[0].isupper() else "ident"
                out.append(Token(kind, val, self._span(line, col, len(val))))
                continue
            raise ParseError(f"unexpected character {ch!r}",
                             self._span(line, col, 1), "a statement")
        out.append(Token("eof", "", self._span(self.line, self.col, 1)))
        return out


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, text: str, filename: str):
        self.toks = _Lexer(text, filename).tokens()
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, kind: str, expected: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"unexpected {describe(t)}", t.span, expected)
        return self.next()

    def expect_ident(self, expected: str) -> Token:
        return self.expect("ident", expected)

    # -- grammar pieces --

    def literal(self) -> Literal:
        negated = False
        t = self.peek()
        if t.kind == "ident" and t.value == "neg":
            self.next()
            negated = True
            t = self.peek()
        if t.kind != "ident":
            raise ParseError(f"unexpected {describe(t)}", t.span, "a predicate name")
        pred = self.next().value
        args: list[Term] = []
        if self.peek().kind == "(":
            self.next()
            while True:
                a = self.peek()
                if a.kind == "ident":
                    args.append(Term(self.next().value, False))
                elif a.kind == "var":
                    args.append(Term(self.next().value, True))
                else:
                    raise ParseError(f"unexpected {describe(a)}", a.span,
                                     "a constant or variable")
                if self.peek().kind == ",":
                    self.next()
                    continue
                break
            self.expect(")", "')'")
        return Literal(pred, tuple(args), negated)

    def literal_list(self) -> tuple[Literal, ...]:
        lits = [self.literal()]
        while self.peek().kind == ",":
            self.next()
            lits.append(self.literal())
        return tuple(lits)

    def end(self) -> None:
        self.expect(".", "'.' to end the statement")


def describe(t: Token) -> str:
    if t.kind == "eof":
        return "end of input"
    return f"{t.value!r}"


@dataclass
class _TheoryBuilder:
    facts: list[Literal] = field(default_factory=list)
    rules: list[ArgumentRule] = field(default_factory=list)
    priorities: list[PriorityRule] = field(default_factory=list)
    incompat: list[IncompatibilityDecl] = field(default_factory=list)
    abducibles: list[tuple[str, int, bool]] = field(default_factory=list)
    sorts: dict[str, tuple[str, ...]] = field(default_factory=dict)
    layers: dict[str, str] = field(default_factory=dict)

    def label_level(self, label: str) -> Optional[int]:
        for r in self.rules:
            if r.label == label:
                return 0
        for p in self.priorities:
            if p.label == label:
                return p.level
        return None

    def build(self, name: str = "") -> Theory:
        rules = tuple(
            ArgumentRule(r.label, r.head, r.body, self.layers.get(r.label))
            for r in self.rules
        )
        theory = Theory(
            facts=frozenset(self.facts),
            rules=rules,
            priorities=tuple(self.priorities),
            incompatibilities=tuple(self.incompat),
            abducibles=frozenset(self.abducibles),
            sorts=tuple(sorted((n, tuple(sorted(cs))) for n, cs in self.sorts.items())),
            name=name,
        )
        return theory.with_domain_closure()


def _parse_statement(p: _Parser, b: _TheoryBuilder) -> None:
    t = p.expect_ident("a statement keyword "
                       "(fact, rule, prefer, conflict, abducible, sort, layer)")
    kw = t.value
    if kw == "fact":
        b.facts.append(p.literal())
        p.end()
    elif kw == "rule":
        label = p.expect_ident("a rule label").value
        p.expect(":", "':' after the label")
        head = p.literal()
        body: tuple[Literal, ...] = ()
        if p.peek().kind == "<-":
            arrow = p.next()
            if p.peek().kind == ".":
                raise ParseError("dangling '<-' with no body", arrow.span,
                                 "a literal list")
            body = p.literal_list()
        p.end()
        b.rules.append(ArgumentRule(label, head, body))
    elif kw == "prefer":
        label = p.expect_ident("a priority label").value
        p.expect(":", "':' after the label")
        higher_tok = p.expect_ident("the higher rule label")
        p.expect(">", "'>'")
        lower_tok = p.expect_ident("the lower rule label")
        body: tuple[Literal, ...] = ()
        if p.peek().kind == "ident" and p.peek().value == "when":
            p.next()
            body = p.literal_list()
        p.end()
        hl = b.label_level(higher_tok.value)
        ll = b.label_level(lower_tok.value)
        if hl is None:
            raise ParseError(f"unknown label {higher_tok.value} "
                             "(labels must be defined before use)",
                             higher_tok.span, "a previously defined label")
        if ll is None:
            raise ParseError(f"unknown label {lower_tok.value} "
                             "(labels must be defined before use)",
                             lower_tok.span, "a previously defined label")
        if hl != ll:
            raise ParseError(
                f"priority relates labels of different levels "
                f"({higher_tok.value} is level {hl}, {lower_tok.value} is level {ll})",
                higher_tok.span, "two labels of the same level")
        b.priorities.append(PriorityRule(label, higher_tok.value, lower_tok.value,
                                         body, level=hl + 1))
    elif kw == "conflict":
        left = p.literal()
        p.expect("~", "'~' between the two patterns")
        right = p.literal()
        p.end()
        b.incompat.append(IncompatibilityDecl(left, right))
    elif kw == "abducible":
        pred = p.expect_ident("a predicate name").value
        p.expect("/", "'/<arity>'")
        arity = int(p.expect("num", "an arity").value)
        negated = False
        if p.peek().kind == "ident" and p.peek().value == "neg":
            p.next()
            negated = True
        p.end()
        b.abducibles.append((pred, arity, negated))
    elif kw == "sort":
        name = p.expect_ident("a sort name").value
        p.expect("=", "'='")
        p.expect("{", "'{'")
        consts: list[str] = []
        if p.peek().kind != "}":
            consts.append(p.expect_ident("a constant").value)
            while p.peek().kind == ",":
                p.next()
                consts.append(p.expect_ident("a constant").value)
        p.expect("}", "'}'")
        p.end()
        b.sorts[name] = tuple(consts)
    elif kw == "layer":
        label_tok = p.expect_ident("a rule label")
        p.expect(":", "':'")
        layer_tok = p.expect_ident("tactical, operational or strategic")
        if layer_tok.value not in LAYERS:
            raise ParseError(f"unknown layer {layer_tok.value}", layer_tok.span,
                             "tactical, operational or strategic")
        p.end()
        if all(r.label != label_tok.value for r in b.rules):
            raise ParseError(f"layer for unknown rule {label_tok.value}",
                             label_tok.span, "a previously defined rule label")
        b.layers[label_tok.value] = layer_tok.value
    else:
        raise ParseError(f"unknown statement {kw!r}", t.span,
                         "fact, rule, prefer, conflict, abducible, sort or layer")


def parse(text: str, filename: str = "<input>", name: str = "") -> Theory:
    """Parse a theory file. Raises ParseError on the first problem."""
    p = _Parser(text, filename)
    b = _TheoryBuilder()
    while p.peek().kind != "eof":
        _parse_statement(p, b)
    return b.build(name)


def parse_literal(text: str, filename: str = "<literal>") -> Literal:
    """Parse a single literal (the wire syntax used in JSON strings)."""
    p = _Parser(text, filename)
    lit = p.literal()
    t = p.peek()
    if t.kind == ".":
        p.next()
        t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {describe(t)}", t.span, "end of literal")
    return lit


# ---------------------------------------------------------------------------
# Pretty printer

def format_literal(lit: Literal) -> str:
    return str(lit)


def _format_rule(r: ArgumentRule) -> str:
    head = format_literal(r.head)
    if r.body:
        return (f"rule {r.label}: {head} <- "
                + ", ".join(format_literal(l) for l in r.body) + ".")
    return f"rule {r.label}: {head}."


def _format_priority(p: PriorityRule) -> str:
    base = f"prefer {p.label}: {p.higher} > {p.lower}"
    if p.body:
        base += " when " + ", ".join(format_literal(l) for l in p.body)
    return base + "."


def print_theory(theory: Theory) -> str:
    """Canonical text form: one statement per line, stable order."""
    lines: list[str] = []
    for name, consts in sorted(theory.sorts):
        lines.append(f"sort {name} = {{" + ", ".join(sorted(consts)) + "}.")
    for pred, arity, negated in sorted(theory.abducibles):
        suffix = " neg" if negated else ""
        lines.append(f"abducible {pred}/{arity}{suffix}.")
    for decl in sorted(theory.incompatibilities,
                       key=lambda d: (literal_key(d.left), literal_key(d.right))):
        lines.append(f"conflict {format_literal(decl.left)} ~ "
                     f"{format_literal(decl.right)}.")
    for f in sorted(theory.facts, key=literal_key):
        lines.append(f"fact {format_literal(f)}.")
    for r in sorted(theory.rules, key=lambda r: r.label):
        lines.append(_format_rule(r))
    for p in sorted(theory.priorities, key=lambda p: (p.level, p.label)):
        lines.append(_format_priority(p))
    for r in sorted(theory.rules, key=lambda r: r.label):
        if r.layer:
            lines.append(f"layer {r.label}: {r.layer}.")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Scenario files (.scn): a pack reference plus staged evidence and
# expected verdicts. Cumulative: stage n sees all evidence of stages <= n.

@dataclass(frozen=True)
class Expectation:
    stage: int
    goal: Literal
    status: str  # one of STATUS_NAMES


@dataclass(frozen=True)
class Scenario:
    name: str
    pack: str
    stages: tuple[tuple[Literal, ...], ...]
    expectations: tuple[Expectation, ...]


def parse_scenario(text: str, filename: str = "<scenario>") -> Scenario:
    p = _Parser(text, filename)
    name = ""
    pack = ""
    stages: dict[int, tuple[Literal, ...]] = {}
    expects: list[Expectation] = []
    while p.peek().kind != "eof":
        t = p.expect_ident("scenario, pack, stage or expect")
        if t.value == "scenario":
            name = p.expect_ident("a scenario name").value
            p.end()
        elif t.value == "pack":
            pack = p.expect_ident("a pack name").value
            p.end()
        elif t.value == "stage":
            n_tok = p.expect("num", "a stage number")
            n = int(n_tok.value)
            p.expect(":", "':'")
            lits = p.literal_list()
            p.end()
            if n in stages:
                raise ParseError(f"stage {n} declared twice", n_tok.span,
                                 "a fresh stage number")
            stages[n] = lits
        elif t.value == "expect":
            n_tok = p.expect("num", "a stage number")
            n = int(n_tok.value)
            p.expect(":", "':'")
            goal = p.literal()
            p.expect("=>", "'=>'")
            status_tok = p.expect_ident("a status")
            if status_tok.value not in STATUS_NAMES:
                raise ParseError(f"unknown status {status_tok.value}",
                                 status_tok.span, " | ".join(STATUS_NAMES))
            p.end()
            expects.append(Expectation(n, goal, status_tok.value))
        else:
            raise ParseError(f"unknown statement {t.value!r}", t.span,
                             "scenario, pack, stage or expect")
    if not pack:
        raise ParseError("scenario has no pack statement",
                         p.peek().span, "'pack <name>.'")
    ordered = tuple(stages[k] for k in sorted(stages))
    if sorted(stages) != list(range(1, len(stages) + 1)):
        raise ParseError("stage numbers must be 1..n without gaps",
                         p.peek().span, "consecutive stage numbers")
    for e in expects:
        if not (1 <= e.stage <= len(ordered)):
            raise ParseError(f"expect references missing stage {e.stage}",
                             p.peek().span, "a declared stage")
    return Scenario(name or "unnamed", pack, ordered, tuple(expects))
