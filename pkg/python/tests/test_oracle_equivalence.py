"""The solver and the criterion at χ = 0 against brute-force references written from the textbook definitions."""
import logging

from cursedsig import (FiniteActions, PriorDistribution, SignalingGame, enumerate_pure_cse, kmn_game,
                       survives_standard_intuitive, verify_cse)
from games import random_game, textbook_intuitive_criterion, textbook_pure_equilibria
import numpy as np
import pytest


def profile_indices(game, record):
    return tuple(game.message_index(m) for m in record.profile)


def tied_game():
    # Both actions are best replies to t1 at m1, but only a1 keeps t0 on m0.
    sender = [[[1, 1], [2, 0]],
              [[0, 0], [1, 1]]]
    receiver = [[[1, 0], [1, 0]],
                [[0, 1], [0, 0]]]
    return SignalingGame(PriorDistribution(('t0', 't1'), [0.5, 0.5]), ('m0', 'm1'), FiniteActions(('a0', 'a1')),
                         sender_payoff=np.array(sender, dtype=float), receiver_payoff=np.array(receiver, dtype=float))


def test_pure_enumeration_matches_textbook_equilibria():
    rng = np.random.default_rng(1729)
    for _ in range(200):
        game = random_game(rng)
        records = enumerate_pure_cse(game, 0)
        assert {profile_indices(game, r) for r in records} == textbook_pure_equilibria(game)
        assert all(verify_cse(game, r.assessment) for r in records)


def test_receiver_ties_are_broken_to_keep_senders_on_path(caplog):
    game = tied_game()
    assert textbook_pure_equilibria(game) == {(0, 1), (1, 1)}
    with caplog.at_level(logging.WARNING):
        records = enumerate_pure_cse(game, 0)
    assert not caplog.records
    assert {profile_indices(game, r) for r in records} == {(0, 1), (1, 1)}
    separating = next(r for r in records if profile_indices(game, r) == (0, 1))
    assert separating.receiver.matrix[1] == pytest.approx([0, 1])
    assert all(verify_cse(game, r.assessment) for r in records)


def test_pure_enumeration_matches_textbook_equilibria_with_many_ties():
    rng = np.random.default_rng(4242)
    for _ in range(200):
        game = random_game(rng, payoff_range=1)
        records = enumerate_pure_cse(game, 0)
        assert {profile_indices(game, r) for r in records} == textbook_pure_equilibria(game)
        assert all(verify_cse(game, r.assessment) for r in records)


def test_enumeration_logs_no_warnings(caplog):
    with caplog.at_level(logging.WARNING):
        assert enumerate_pure_cse(kmn_game(), 0.3)
    assert not caplog.records


def test_standard_criterion_matches_textbook_on_two_by_two_games():
    rng = np.random.default_rng(31)
    checked = 0
    for _ in range(300):
        game = random_game(rng, n_types=2, n_messages=2, n_actions=2)
        for record in enumerate_pure_cse(game, 0):
            expected = textbook_intuitive_criterion(game, profile_indices(game, record), record.sender_payoffs)
            assert survives_standard_intuitive(game, record).passed == expected
            checked += 1
    assert checked > 0
