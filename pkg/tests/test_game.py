import json
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from potgame import numeric as nm
from potgame.errors import DegenerateSignal, DimensionMismatch, ParseError, PlausibilityViolation, ValidationError
from potgame.game import (
    BeliefOutcome,
    CommGame,
    dump_game,
    expected_receiver_payoff,
    expected_sender_payoff,
    parse_game,
    posterior_from_structure,
    structure_from_posterior,
)

from conftest import GAMES_DIR, games, separating

I2 = ((1, 0), (0, 1))


def doc(**over):
    base = {"prior": ["1/2", "1/2"], "sender_payoff": [["1", "0"], ["0", "1/2"]], "receiver_payoff": [["1", "0"], ["1", "2"]]}
    base.update(over)
    return json.dumps(base)


def test_parse_example_file():
    g = parse_game((GAMES_DIR / "separating.json").read_bytes())
    assert g == separating()
    assert g.states == ("w1", "w2") and g.actions == ("a1", "a2")
    assert g.nonnegative_sender


def test_default_labels():
    g = parse_game(doc())
    assert g.states == ("w1", "w2")
    assert g.actions == ("a1", "a2")


@pytest.mark.parametrize("over", [
    {"prior": ["0", "1"]},
    {"prior": ["1/2", "1/3"]},
    {"sender_payoff": [["1", "0", "1"], ["0", "1", "1"]]},
    {"receiver_payoff": [["1", "0"]]},
    {"sender_payoff": [["1", "0"], ["1"]]},
    {"states": ["only"]},
])
def test_parse_validation_errors(over):
    with pytest.raises(ValidationError):
        parse_game(doc(**over))


@pytest.mark.parametrize("text", [
    doc(prior=["0.5", "0.5"]),
    "not json",
    "[1, 2]",
    json.dumps({"prior": ["1"]}),
    doc(sender_payoff="oops"),
    b"\xff\xfe",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_game(text)


def test_dump_round_trip(ex1):
    assert parse_game(dump_game(ex1)) == ex1


def test_payoff_truth_telling(ex1):
    # full revelation, receiver plays action k in state k
    assert expected_sender_payoff(ex1, I2, I2) == F(3, 4)


def test_payoff_babbling(ex1):
    pi = ((1,), (1,))
    a = ((0, 1),)
    assert expected_sender_payoff(ex1, pi, a) == F(1, 4)
    assert expected_receiver_payoff(ex1, pi, a) == F(3, 2)


def test_payoff_constant_game():
    g = CommGame(prior=(F(1, 3), F(2, 3)), sender_payoff=((5, 5), (5, 5)), receiver_payoff=((0, 0), (0, 0)))
    assert expected_sender_payoff(g, ((F(1, 2), F(1, 2)), (1, 0)), ((1, 0), (F(1, 4), F(3, 4)))) == 5


def test_payoff_shape_errors(ex1):
    with pytest.raises(DimensionMismatch):
        expected_sender_payoff(ex1, ((1,),), ((1, 0),))
    with pytest.raises(DimensionMismatch):
        expected_sender_payoff(ex1, I2, ((1, 0),))


def test_posterior_example():
    g = CommGame(prior=(F(1, 4), F(3, 4)), sender_payoff=((1, 0),), receiver_payoff=((1, 0),))
    out = posterior_from_structure(g, ((1, 0), (F(1, 3), F(2, 3))))
    assert out.gamma == (F(1, 2), F(1, 2))
    assert out.lam == ((F(1, 2), 0), (F(1, 2), 1))


def test_posterior_degenerate(ex1):
    with pytest.raises(DegenerateSignal) as info:
        posterior_from_structure(ex1, ((1, 0), (1, 0)))
    assert info.value.signal == 1


def test_structure_plausibility(ex1):
    with pytest.raises(PlausibilityViolation):
        structure_from_posterior(ex1, BeliefOutcome(I2, (F(1, 3), F(2, 3))))
    with pytest.raises(PlausibilityViolation):
        structure_from_posterior(ex1, BeliefOutcome(((1, 1), (0, 0)), (F(1, 2), F(1, 2))))
    with pytest.raises(PlausibilityViolation):
        structure_from_posterior(ex1, BeliefOutcome(((F(1, 2),), (F(1, 2),)), (0,)))


def test_structure_identity(ex1):
    assert structure_from_posterior(ex1, BeliefOutcome(I2, (F(1, 2), F(1, 2)))) == I2


@st.composite
def game_and_structure(draw):
    g = draw(games())
    n = draw(st.integers(1, 3))
    pi = []
    for _ in range(g.num_states):
        w = draw(st.lists(st.integers(1, 5), min_size=n, max_size=n))
        pi.append(tuple(F(x, sum(w)) for x in w))
    a = []
    for _ in range(n):
        w = draw(st.lists(st.integers(0, 5), min_size=g.num_actions, max_size=g.num_actions).filter(any))
        a.append(tuple(F(x, sum(w)) for x in w))
    return g, tuple(pi), tuple(a)


@given(game_and_structure())
def test_posterior_round_trip(data):
    g, pi, _ = data
    beliefs = posterior_from_structure(g, pi)
    assert beliefs.plausible_for(g.prior)
    assert all(sum(col) == 1 for col in nm.transpose(beliefs.lam))
    assert structure_from_posterior(g, beliefs) == pi


@given(game_and_structure())
def test_payoff_through_z_matrix(data):
    # Tr(P Π A U) = Tr(A U Z) with Z = Λ Γ
    g, pi, a = data
    beliefs = posterior_from_structure(g, pi)
    z = tuple(tuple(x * gm for x, gm in zip(row, beliefs.gamma)) for row in beliefs.lam)
    via_z = nm.trace(nm.matmul(nm.matmul(a, g.U), z))
    assert expected_sender_payoff(g, pi, a) == via_z
