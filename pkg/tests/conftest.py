from pathlib import Path

import pytest

from declarelax import build_net, check_soundness, derive_matrix

DATA_DIR = Path(__file__).parent / "data"

# The nine-activity procurement process used throughout: create and
# approve a requisition, then either reject it or order, receive and
# quality-check the goods, receive the invoice, pay, and complete.
PROCUREMENT_PAIRS = frozenset(
    {
        ("CPR", "KPR"),
        ("KPR", "CPO"),
        ("KPR", "RR"),
        ("CPO", "RG"),
        ("RG", "PQC"),
        ("PQC", "RI"),
        ("RI", "SP"),
        ("SP", "CO"),
    }
)

PROCUREMENT_ACTIVITIES = ("CO", "CPO", "CPR", "KPR", "PQC", "RG", "RI", "RR", "SP")


def make_procurement_net():
    places = ["i", "p1", "p2", "p3", "p4", "p5", "p6", "p7", "o"]
    transitions = [
        ("t1", "CPR"),
        ("t2", "KPR"),
        ("t3", "CPO"),
        ("t4", "RG"),
        ("t5", "PQC"),
        ("t6", "RI"),
        ("t7", "SP"),
        ("t8", "CO"),
        ("t9", "RR"),
    ]
    arcs = [
        ("i", "t1"),
        ("t1", "p1"),
        ("p1", "t2"),
        ("t2", "p2"),
        ("p2", "t3"),
        ("t3", "p3"),
        ("p2", "t9"),
        ("t9", "o"),
        ("p3", "t4"),
        ("t4", "p4"),
        ("p4", "t5"),
        ("t5", "p5"),
        ("p5", "t6"),
        ("t6", "p6"),
        ("p6", "t7"),
        ("t7", "p7"),
        ("p7", "t8"),
        ("t8", "o"),
    ]
    return build_net(places, transitions, arcs)


@pytest.fixture(scope="session")
def procurement_net():
    return make_procurement_net()


@pytest.fixture(scope="session")
def procurement_graph(procurement_net):
    verdict = check_soundness(procurement_net)
    assert verdict.sound
    return verdict.graph


@pytest.fixture(scope="session")
def procurement_matrix(procurement_net, procurement_graph):
    return derive_matrix(procurement_net, procurement_graph)


@pytest.fixture(scope="session")
def procurement_pnml():
    return (DATA_DIR / "running_example.pnml").read_text()


@pytest.fixture(scope="session")
def office_supply_log():
    return (DATA_DIR / "office_supply_case.csv").read_text()
