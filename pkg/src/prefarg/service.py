"""Session-oriented HTTP API over the engine.

Sessions are in-memory: a base pack plus applied priority decisions and
an evidence log. Mutations are serialized per session and bump a
monotonically increasing revision; identical mutation histories produce
identical responses. Literals travel in DSL syntax inside JSON strings.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .abduction import abduce
from .config import DEFAULT_CONFIG, EngineConfig
from .conflicts import ResolutionError, apply_resolution, detect_conflicts
from .dsl import ParseError, parse_literal, print_theory
from .explain import explain_verdict, render_structured
from .kernel import Literal, PriorityRule, Theory, literal_key
from .packs import PackError, load_pack, pack_names
from .solver import EvidenceContradiction, query

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 7878


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 span: Optional[str] = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.span = span


@dataclass
class Session:
    id: str
    pack: str
    base: Theory
    applied: list[PriorityRule] = field(default_factory=list)
    evidence: list[Literal] = field(default_factory=list)
    log: list[dict] = field(default_factory=list)
    revision: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def theory(self) -> Theory:
        t = self.base
        for p in self.applied:
            t = t.with_priority(p)
        return t

    def snapshot(self) -> tuple[Theory, tuple[Literal, ...], int]:
        with self.lock:
            return self.theory, tuple(self.evidence), self.revision

    def snapshot_text(self) -> str:
        theory, evidence, revision = self.snapshot()
        lines = [f"% session {self.id} pack {self.pack} revision {revision}"]
        for entry in self.log:
            lines.append(f"% {entry['op']} {entry['literal']} at {entry['at']}")
        text = print_theory(theory)
        evidence_lines = [f"fact {l}." for l in sorted(evidence, key=literal_key)]
        return "\n".join(lines) + "\n" + text + "\n".join(evidence_lines) + "\n"


def _parse_wire_literal(text: str) -> Literal:
    try:
        return parse_literal(text)
    except ParseError as e:
        raise ServiceError(422, "bad-literal", e.message, str(e.span))


def _verdict_doc(v) -> dict:
    return {
        "goal": str(v.query),
        "status": v.status,
        "witnesses": [
            {"conclusion": str(a.conclusion), "rules": list(a.rule_labels()),
             "premises": [str(p) for p in a.premises()]}
            for a in v.witnesses
        ],
        "notes": list(v.notes),
    }


def _report_doc(r) -> dict:
    doc = {
        "ruleA": r.rule_a,
        "ruleB": r.rule_b,
        "headA": str(r.head_a),
        "headB": str(r.head_b),
        "unifier": {v: c for v, c in r.unifier},
        "witness": [str(l) for l in r.witness],
        "resolution": list(r.resolution) if r.resolution is not None else "unresolved",
        "winner": r.winner,
    }
    if r.suggestion is not None:
        doc["suggestion"] = {
            "label": r.suggestion.label,
            "higher": r.suggestion.higher,
            "lower": r.suggestion.lower,
            "when": [str(l) for l in r.suggestion.body],
        }
    else:
        doc["suggestion"] = None
    return doc


def _evidence_predicates(theory: Theory) -> list[dict]:
    """Predicates an analyst can assert, with arity and the evidence
    layer of the rules that consume them."""
    head_preds = {r.head.predicate for r in theory.rules}
    seen: dict[tuple[str, int], Optional[str]] = {}
    for r in sorted(theory.rules, key=lambda r: r.label):
        for b in r.body:
            key = (b.predicate, b.arity)
            if b.predicate in head_preds:
                continue
            if key not in seen or (seen[key] is None and r.layer):
                seen[key] = r.layer
    for pred, arity, _neg in sorted(theory.abducibles):
        seen.setdefault((pred, arity), None)
    return [{"name": p, "arity": a, "layer": seen[(p, a)]}
            for p, a in sorted(seen)]


def create_app(extra_theories: Optional[dict[str, Theory]] = None,
               allow_origin: Optional[str] = None,
               serve_ui: Optional[str] = None,
               config: EngineConfig = DEFAULT_CONFIG) -> FastAPI:
    app = FastAPI(title="prefarg service", version="0.1.0")
    sessions: dict[str, Session] = {}
    theories = dict(extra_theories or {})

    if allow_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[allow_origin] if allow_origin != "*" else ["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ServiceError)
    async def _service_error(_request: Request, exc: ServiceError):
        body = {"code": exc.code, "message": exc.message}
        if exc.span:
            body["span"] = exc.span
        return JSONResponse(status_code=exc.status, content=body)

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise ServiceError(404, "unknown-session", f"no session {session_id}")
        return s

    def load_base(pack: str) -> Theory:
        if pack in theories:
            return theories[pack]
        try:
            return load_pack(pack)
        except PackError as e:
            raise ServiceError(404, "unknown-pack", str(e))

    @app.get("/packs")
    def packs_endpoint():
        return {"packs": sorted(set(pack_names()) | set(theories))}

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await request.json()
        pack = body.get("pack", "")
        base = load_base(pack)
        sid = secrets.token_hex(8)
        sessions[sid] = Session(sid, pack, base)
        return {"sessionId": sid, "revision": 0}

    @app.post("/sessions/{session_id}/evidence")
    async def mutate_evidence(session_id: str, request: Request):
        s = get_session(session_id)
        body = await request.json()
        asserts = [_parse_wire_literal(t) for t in body.get("assert", [])]
        retracts = [_parse_wire_literal(t) for t in body.get("retract", [])]
        for lit in asserts + retracts:
            if not lit.is_ground:
                raise ServiceError(422, "non-ground-evidence",
                                   f"evidence must be ground: {lit}")
        with s.lock:
            active = list(s.evidence)
            for lit in retracts:
                if lit in active:
                    active.remove(lit)
            theory = s.theory
            try:
                from .solver import check_evidence

                check_evidence(theory, active + asserts)
            except EvidenceContradiction as e:
                raise ServiceError(409, "contradiction", str(e))
            for lit in asserts:
                if lit not in active:
                    active.append(lit)
            now = time.time()
            for lit in retracts:
                s.log.append({"op": "retract", "literal": str(lit), "at": now})
                s.revision += 1
            for lit in asserts:
                s.log.append({"op": "assert", "literal": str(lit), "at": now})
                s.revision += 1
            s.evidence = active
            return {"revision": s.revision}

    @app.get("/sessions/{session_id}/query")
    def query_endpoint(session_id: str, goal: str,
                       semantics: str = "preferred"):
        s = get_session(session_id)
        theory, evidence, revision = s.snapshot()
        pattern = _parse_wire_literal(goal)
        verdicts = query(theory, evidence, pattern, config, semantics)
        return {"revision": revision,
                "verdicts": [_verdict_doc(v) for v in verdicts]}

    @app.get("/sessions/{session_id}/explain")
    def explain_endpoint(session_id: str, goal: str, hints: bool = False,
                         maxSize: int = 2):
        s = get_session(session_id)
        theory, evidence, revision = s.snapshot()
        lit = _parse_wire_literal(goal)
        if not lit.is_ground:
            raise ServiceError(422, "non-ground-goal",
                               f"explanation goal must be ground: {lit}")
        explanation = explain_verdict(theory, evidence, lit, config,
                                      with_hints=hints, hint_max=maxSize)
        return {"revision": revision, "explanation": render_structured(explanation)}

    @app.get("/sessions/{session_id}/conflicts")
    def conflicts_endpoint(session_id: str):
        s = get_session(session_id)
        theory, _evidence, revision = s.snapshot()
        reports = detect_conflicts(theory, config)
        return {"revision": revision,
                "conflicts": [_report_doc(r) for r in reports]}

    @app.post("/sessions/{session_id}/priorities")
    async def priorities_endpoint(session_id: str, request: Request):
        s = get_session(session_id)
        body = await request.json()
        when = tuple(_parse_wire_literal(t) for t in body.get("when", []))
        with s.lock:
            theory = s.theory
            levels = {r.label: 0 for r in theory.rules}
            levels.update({p.label: p.level for p in theory.priorities})
            higher = body.get("higher", "")
            lower = body.get("lower", "")
            if higher not in levels or lower not in levels:
                raise ServiceError(422, "dangling-label",
                                   f"unknown rule label in {higher} > {lower}")
            decision = PriorityRule(body.get("label", ""), higher, lower, when,
                                    level=levels[higher] + 1)
            try:
                apply_resolution(theory, decision)
            except ResolutionError as e:
                raise ServiceError(422, "bad-priority", str(e))
            s.applied.append(decision)
            s.revision += 1
            s.log.append({"op": "prefer", "literal": decision.label,
                          "at": time.time()})
            return {"revision": s.revision}

    @app.post("/sessions/{session_id}/abduce")
    async def abduce_endpoint(session_id: str, request: Request):
        s = get_session(session_id)
        body = await request.json()
        theory, evidence, revision = s.snapshot()
        goal = _parse_wire_literal(body.get("goal", ""))
        if not goal.is_ground:
            raise ServiceError(422, "non-ground-goal",
                               f"abduction goal must be ground: {goal}")
        tier = body.get("tier", "sceptical")
        max_size = int(body.get("maxSize", 2))
        try:
            result = abduce(theory, evidence, goal, tier, max_size, config)
        except ValueError as e:
            raise ServiceError(422, "bad-request", str(e))
        return {
            "revision": revision,
            "truncated": result.truncated,
            "answers": [
                {"assume": [str(l) for l in a.delta],
                 "status": a.resulting_status}
                for a in result.answers
            ],
        }

    @app.get("/sessions/{session_id}")
    def session_endpoint(session_id: str):
        s = get_session(session_id)
        theory, evidence, revision = s.snapshot()
        return {
            "revision": revision,
            "sessionId": s.id,
            "pack": s.pack,
            "theory": print_theory(theory),
            "evidence": [str(l) for l in evidence],
            "log": list(s.log),
            "appliedPriorities": [
                {"label": p.label, "higher": p.higher, "lower": p.lower,
                 "when": [str(l) for l in p.body]}
                for p in s.applied
            ],
            "constants": sorted(theory.domain),
            "evidencePredicates": _evidence_predicates(theory),
        }

    if serve_ui:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=serve_ui, html=True), name="ui")

    return app


def run(app: FastAPI, host: str = DEFAULT_HOST, port: int = DEFAULT_PORT) -> None:
    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
