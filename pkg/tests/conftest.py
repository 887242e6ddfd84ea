from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from potgame import CommGame

settings.register_profile("potgame", deadline=None, max_examples=60)
settings.load_profile("potgame")

GAMES_DIR = Path(__file__).resolve().parent.parent / "games"

F = Fraction


def separating():
    return CommGame(prior=(F(1, 2), F(1, 2)), sender_payoff=((1, 0), (0, F(1, 2))), receiver_payoff=((1, 0), (1, 2)))


def matching():
    return CommGame(prior=(F(1, 2), F(1, 2)), sender_payoff=((2, 0), (0, 2)), receiver_payoff=((0, 2), (2, 0)))


@pytest.fixture
def ex1():
    return separating()


@pytest.fixture
def match_game():
    return matching()


def rationals(max_num=9, max_den=3):
    return st.builds(Fraction, st.integers(0, max_num), st.integers(1, max_den))


@st.composite
def priors(draw, m):
    w = draw(st.lists(st.integers(1, 9), min_size=m, max_size=m))
    total = sum(w)
    return tuple(Fraction(x, total) for x in w)


@st.composite
def games(draw, max_states=3, max_actions=3, states=None):
    m = states if states is not None else draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_actions))
    mat = st.lists(st.lists(rationals(), min_size=m, max_size=m), min_size=k, max_size=k)
    return CommGame(prior=draw(priors(m)), sender_payoff=draw(mat), receiver_payoff=draw(mat))


def random_game(rng, m, k, max_den=3):
    """Plain-random counterpart of ``games`` for the fixed-size acceptance loops."""

    def entry():
        return Fraction(rng.randint(0, 9), rng.randint(1, max_den))

    w = [rng.randint(1, 9) for _ in range(m)]
    prior = tuple(Fraction(x, sum(w)) for x in w)
    U = [[entry() for _ in range(m)] for _ in range(k)]
    V = [[entry() for _ in range(m)] for _ in range(k)]
    return CommGame(prior=prior, sender_payoff=U, receiver_payoff=V)


# One line per acceptance criterion, echoed in the terminal summary so the
# verdicts are visible even with output capture on.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
