import sys
from pathlib import Path

import pytest

from semnav.asp import ground, merge_programs, parse_program, solve
from semnav.roadworld import emit_extrinsic_facts, intrinsic_handbook
from semnav.world import RoadWorld

TESTS = Path(__file__).parent
ROOT = TESTS.parent
EXPERIMENTS = ROOT / "experiments"
DATA = TESTS / "data"

sys.path.insert(0, str(TESTS))

# Listing of the constraints produced for the three-junction instruction,
# kept byte-for-byte including its blank separator lines.
LISTING_1 = """\
:-#count{T : cross_left(T)}=0.
:-#count{T : cross_left(T)}>1.

:-#count{T : cross_straight(T)}=0.
:-#count{T : cross_straight(T)}>1.

:-#count{T : cross_right(T)}=0.
:-#count{T : cross_right(T)}>1.

:-cross_left(T1), cross_straight(T2), T1>=T2.
:-cross_left(T1), cross_right(T3), T1>=T3.

:-cross_straight(T2), cross_right(T3),T2>=T3.
"""


def solve_text(text, maxint=None):
    return solve(ground(parse_program(text, maxint)))


def solve_world(world, extra=""):
    """Handbook + detection facts for ``world`` + optional extra program text."""
    parts = [intrinsic_handbook(), emit_extrinsic_facts(world)]
    if extra:
        parts.append(parse_program(extra))
    return solve(ground(merge_programs(*parts, maxint=len(world))))


def answer_sets(report):
    return {frozenset(str(a) for a in s.atoms) for s in report.answer_sets}


@pytest.fixture
def listing_1():
    return LISTING_1


@pytest.fixture
def three_unknown():
    return RoadWorld.unknown(3)


class NetworkBlocked(RuntimeError):
    pass


@pytest.fixture(autouse=True)
def no_network(request, monkeypatch):
    """Fail any socket connection attempt unless the test is marked ``live``."""
    if request.node.get_closest_marker("live"):
        yield
        return
    import socket

    def refuse(*args, **kwargs):
        raise NetworkBlocked("network access attempted in a hermetic test")

    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket.socket, "connect_ex", refuse)
    monkeypatch.setattr(socket, "create_connection", refuse)
    yield
