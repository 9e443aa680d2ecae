import pytest

from prefarg.dsl import parse_literal
from prefarg.packs import load_pack


@pytest.fixture(scope="session")
def packs():
    return {name: load_pack(name) for name in (
        "attribution-text", "attribution-fig2", "attribution-ladder",
        "ehealth", "ehealth-nopriorities")}


@pytest.fixture()
def lit():
    return parse_literal


SSH_STAGES = (
    ("sourceIP(a, ip1)", "geoloc(ip1, c1)"),
    ("spoofed(ip1)",),
    ("avoid(a, c1)",),
)


@pytest.fixture()
def ssh_stages():
    return [[parse_literal(t) for t in stage] for stage in SSH_STAGES]
