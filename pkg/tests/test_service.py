import json

import pytest
from fastapi.testclient import TestClient

from prefarg.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def make_session(client, pack="ehealth"):
    r = client.post("/sessions", json={"pack": pack})
    assert r.status_code == 200
    return r.json()["sessionId"]


def test_unknown_pack_is_404(client):
    r = client.post("/sessions", json={"pack": "nope"})
    assert r.status_code == 404
    assert r.json()["code"] == "unknown-pack"


def test_unknown_session_is_404(client):
    r = client.get("/sessions/deadbeef/query", params={"goal": "p"})
    assert r.status_code == 404


def test_evidence_and_query_flow(client):
    sid = make_session(client)
    r = client.post(f"/sessions/{sid}/evidence", json={
        "assert": ["treatd(d, c)", "owner(c, x)", "pdata(x)"]})
    assert r.status_code == 200 and r.json()["revision"] == 3
    r = client.get(f"/sessions/{sid}/query",
                   params={"goal": "access(x, d, Status)"})
    verdicts = {v["goal"]: v["status"] for v in r.json()["verdicts"]}
    assert verdicts["access(x, d, denied)"] == "accepted-sceptically"
    assert r.json()["revision"] == 3


def test_assert_then_retract_reverts(client):
    sid = make_session(client, "attribution-text")
    client.post(f"/sessions/{sid}/evidence", json={
        "assert": ["sourceIP(a, ip1)", "geoloc(ip1, c1)"]})

    def status():
        r = client.get(f"/sessions/{sid}/query",
                       params={"goal": "perform(a, c1)"})
        return r.json()["verdicts"][0]["status"], r.json()["revision"]

    before, rev0 = status()
    assert before == "accepted-sceptically"
    r = client.post(f"/sessions/{sid}/evidence", json={"assert": ["spoofed(ip1)"]})
    assert r.json()["revision"] == rev0 + 1
    mid, _ = status()
    assert mid == "rejected"
    r = client.post(f"/sessions/{sid}/evidence", json={"retract": ["spoofed(ip1)"]})
    assert r.json()["revision"] == rev0 + 2
    after, _ = status()
    assert after == before


def test_contradictory_evidence_is_409(client):
    sid = make_session(client)
    client.post(f"/sessions/{sid}/evidence", json={"assert": ["treatd(d, c)"]})
    r = client.post(f"/sessions/{sid}/evidence",
                    json={"assert": ["neg treatd(d, c)"]})
    assert r.status_code == 409
    assert r.json()["code"] == "contradiction"
    # declared contraries trigger it too (one owner per data object)
    client.post(f"/sessions/{sid}/evidence", json={"assert": ["owner(c, x)"]})
    r = client.post(f"/sessions/{sid}/evidence",
                    json={"assert": ["owner(c2, x)"]})
    assert r.status_code == 409


def test_dangling_priority_is_422(client):
    sid = make_session(client)
    r = client.post(f"/sessions/{sid}/priorities",
                    json={"label": "zz", "higher": "ghost", "lower": "eh.r3"})
    assert r.status_code == 422
    assert r.json()["code"] == "dangling-label"


def test_priority_application_changes_conflicts(client):
    sid = make_session(client, "ehealth-nopriorities")
    r = client.get(f"/sessions/{sid}/conflicts")
    docs = r.json()["conflicts"]
    assert len(docs) == 7
    assert all(d["resolution"] == "unresolved" for d in docs)
    assert all(d["suggestion"] is not None for d in docs)
    first = docs[0]
    r = client.post(f"/sessions/{sid}/priorities", json={
        "label": first["suggestion"]["label"],
        "higher": first["suggestion"]["higher"],
        "lower": first["suggestion"]["lower"],
    })
    assert r.status_code == 200 and r.json()["revision"] == 1
    docs2 = client.get(f"/sessions/{sid}/conflicts").json()["conflicts"]
    resolved = [d for d in docs2 if d["resolution"] != "unresolved"]
    assert len(resolved) == 1


def test_abduce_endpoint(client):
    sid = make_session(client, "attribution-text")
    client.post(f"/sessions/{sid}/evidence", json={
        "assert": ["sourceIP(a, ip1)", "geoloc(ip1, c1)", "spoofed(ip1)"]})
    r = client.post(f"/sessions/{sid}/abduce", json={
        "goal": "perform(a, c1)", "tier": "sceptical", "maxSize": 1})
    body = r.json()
    assert body["truncated"] is False
    assert {"assume": ["avoid(a, c1)"], "status": "accepted-sceptically"} \
        in body["answers"]


def test_explain_endpoint(client):
    sid = make_session(client)
    client.post(f"/sessions/{sid}/evidence", json={
        "assert": ["treatd(d, c)", "owner(c, x)", "pdata(x)"]})
    r = client.get(f"/sessions/{sid}/explain",
                   params={"goal": "access(x, d, denied)"})
    doc = r.json()["explanation"]
    assert doc["status"] == "accepted-sceptically"
    assert any(rule["label"] == "eh.r3" for rule in doc["winner"]["rules"])
    r = client.get(f"/sessions/{sid}/explain", params={"goal": "access(x, d, S)"})
    assert r.status_code == 422


def test_session_hydration_document(client):
    sid = make_session(client)
    client.post(f"/sessions/{sid}/evidence", json={"assert": ["treatd(d, c)"]})
    doc = client.get(f"/sessions/{sid}").json()
    assert doc["pack"] == "ehealth"
    assert doc["evidence"] == ["treatd(d, c)"]
    assert doc["revision"] == 1
    assert "rule eh.r3:" in doc["theory"]
    assert any(p["name"] == "emerg" for p in doc["evidencePredicates"])
    assert "c" in doc["constants"]


def test_revision_monotonicity(client):
    sid = make_session(client)
    seen = 0
    for payload in ({"assert": ["treatd(d, c)"]},
                    {"assert": ["owner(c, x)"]},
                    {"retract": ["treatd(d, c)"]}):
        r = client.post(f"/sessions/{sid}/evidence", json=payload)
        rev = r.json()["revision"]
        assert rev > seen
        seen = rev


def test_identical_histories_identical_bytes():
    def run():
        client = TestClient(create_app())
        sid = make_session(client, "attribution-text")
        client.post(f"/sessions/{sid}/evidence", json={
            "assert": ["sourceIP(a, ip1)", "geoloc(ip1, c1)", "spoofed(ip1)"]})
        out = []
        for path, params in (
                ("query", {"goal": "perform(a, Country)"}),
                ("explain", {"goal": "perform(a, c1)"}),
                ("conflicts", {})):
            r = client.get(f"/sessions/{sid}/{path}", params=params)
            out.append(json.dumps(r.json(), sort_keys=True))
        return "\n".join(out)

    assert run() == run()


def test_cli_and_service_agree(packs):
    """Shared engine path: the service and a direct query return the
    same verdicts for the same theory and evidence."""
    from prefarg.dsl import parse_literal
    from prefarg.solver import query

    client = TestClient(create_app())
    sid = make_session(client, "ehealth")
    evidence = ["treatd(d, c)", "owner(c, x)", "pdata(x)", "emerg(c)"]
    client.post(f"/sessions/{sid}/evidence", json={"assert": evidence})
    r = client.get(f"/sessions/{sid}/query", params={"goal": "access(x, d, Status)"})
    service_verdicts = {v["goal"]: v["status"] for v in r.json()["verdicts"]}
    direct = query(packs["ehealth"], [parse_literal(t) for t in evidence],
                   parse_literal("access(x, d, Status)"))
    assert service_verdicts == {str(v.query): v.status for v in direct}
