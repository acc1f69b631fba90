from cursedsig import (BEER_QUICHE_SEMI_SEPARATING, InfeasiblePinError, KMN_HYBRID, PriorDistribution, SignalingGame, FiniteActions,
                       beer_quiche_game, br_over_all_beliefs, constrained_belief_set, enumerate_pure_cse,
                       equilibrium_dominated_types, kmn_game, refine_equilibrium_set, solve_support_cse,
                       survives_cursed_intuitive, survives_standard_intuitive)
from games import random_game
import numpy as np
import pytest


def pooling_on_quiche(game, chi):
    [record] = [r for r in enumerate_pure_cse(game, chi) if r.kind == 'pooling']
    return record


def test_br_over_all_beliefs():
    game = beer_quiche_game()
    assert br_over_all_beliefs(game, 'Beer') == ('Fight', 'NotFight')
    assert br_over_all_beliefs(kmn_game(), '1') == (10, 50)
    assert br_over_all_beliefs(kmn_game(), '1', 0.5) == (20, 40)


def test_br_with_a_dominant_action():
    game = SignalingGame(PriorDistribution(('a', 'b'), [0.5, 0.5]), ('m',), FiniteActions(('x', 'y')),
                         sender_payoff=np.zeros((2, 1, 2)), receiver_payoff=[[[1, 0]], [[2, 1]]])
    assert br_over_all_beliefs(game, 'm') == ('x',)


def test_dominated_types_in_beer_quiche():
    game = beer_quiche_game()
    eq = pooling_on_quiche(game, 0)
    assert equilibrium_dominated_types(game, eq, 'Beer') == ('weak',)
    with pytest.raises(ValueError) as e_info:
        equilibrium_dominated_types(game, eq, 'Quiche')
    assert e_info.match('on the equilibrium path')


def test_dominated_types_in_kmn_pooling():
    game = kmn_game()
    assert equilibrium_dominated_types(game, enumerate_pure_cse(game, 0.3)[-1], '1') == ('L',)
    assert equilibrium_dominated_types(game, enumerate_pure_cse(game, 0.9)[-1], '1') == ('H', 'L')


def test_no_dominated_types():
    game = beer_quiche_game()
    eq = pooling_on_quiche(game, 0)
    # Against a lower standard nobody is dominated.
    eq = eq.__class__(eq.kind, eq.assessment, np.array([-1.0, -1.0]), eq.onpath_messages, eq.offpath_beliefs)
    assert equilibrium_dominated_types(game, eq, 'Beer') == ()


def test_constrained_belief_set():
    prior = PriorDistribution(('H', 'L'), [0.5, 0.5])
    region = constrained_belief_set({'L'}, prior, 0)
    assert region.is_point
    assert np.allclose(region.vertices(), [[1, 0]])
    game = beer_quiche_game()
    region = constrained_belief_set({'weak'}, game.prior, 0.5)
    assert region.describe()['upper']['weak'] == pytest.approx(0.2)
    assert region.describe()['pinned'] == ['weak']
    free = constrained_belief_set((), game.prior, 0.5)
    assert not free.is_point
    assert np.allclose(free.lower, [0.2, 0.3])
    with pytest.raises(InfeasiblePinError):
        constrained_belief_set({'weak', 'strong'}, game.prior, 0.5)


@pytest.mark.parametrize('chi', [0.5, 0.6, 0.9, 1])
def test_beer_quiche_pooling_survives(chi):
    game = beer_quiche_game()
    report = survives_cursed_intuitive(game, pooling_on_quiche(game, chi))
    assert report.passed
    [check] = report.checks
    assert check.dominated_types == ('weak',)
    assert check.pinned['weak'] == pytest.approx(0.4 * chi)


@pytest.mark.parametrize('chi', [0, 0.3, 0.49])
def test_beer_quiche_pooling_fails(chi):
    game = beer_quiche_game()
    report = survives_cursed_intuitive(game, pooling_on_quiche(game, chi))
    assert not report
    assert report.failing_messages() == ('Beer',)


def test_standard_criterion_kills_beer_quiche_pooling():
    game = beer_quiche_game()
    assert not survives_standard_intuitive(game, pooling_on_quiche(game, 0.9))


def test_semi_separating_is_the_only_uncursed_survivor():
    game = beer_quiche_game()
    records = enumerate_pure_cse(game, 0) + solve_support_cse(game, 0, BEER_QUICHE_SEMI_SEPARATING)
    assert len(records) == 2
    survivors = [r for r in refine_equilibrium_set(game, 0, records) if r.refinement_verdicts['cursed_intuitive']]
    assert len(survivors) == 1
    [survivor] = survivors
    assert survivor.source == 'semi-separating'
    assert np.allclose(survivor.sender.matrix, [[3 / 8, 5 / 8], [1, 0]], atol=1e-9)
    assert np.allclose(survivor.receiver.matrix[0], [1 / 2, 1 / 2], atol=1e-9)


@pytest.mark.parametrize('chi, survives', [(0.3, False), (0.5, False), (0.55, True), (0.6, True), (0.9, True)])
def test_kmn_pooling_threshold(chi, survives):
    game = kmn_game()
    pooling = enumerate_pure_cse(game, chi)[-1]
    assert pooling.kind == 'pooling'
    assert survives_cursed_intuitive(game, pooling).passed == survives


def test_all_dominated_note():
    game = kmn_game()
    report = survives_cursed_intuitive(game, enumerate_pure_cse(game, 0.9)[-1])
    [check] = report.checks
    assert check.survives
    assert check.region is None
    assert check.note == 'all types dominated'


def verdicts(game, chi):
    records = enumerate_pure_cse(game, chi)
    if 0.55 < chi < 0.775:
        records += solve_support_cse(game, chi, KMN_HYBRID)
    return [(r.kind, r.refinement_verdicts['cursed_intuitive']) for r in refine_equilibrium_set(game, chi, records)]


def test_kmn_refinement_regimes():
    game = kmn_game()
    assert verdicts(game, 0.3) == [('separating', True), ('pooling', False)]
    assert verdicts(game, 0.65) == [('separating', True), ('pooling', True), ('hybrid', True)]
    assert verdicts(game, 0.8) == [('pooling', True)]


def test_refinement_keeps_every_record():
    game = kmn_game()
    records = enumerate_pure_cse(game, 0.65)
    refined = refine_equilibrium_set(game, 0.65, records)
    assert len(refined) == len(records)
    pooling = refined[-1]
    assert pooling.refinement_verdicts == {'standard_intuitive': False, 'cursed_intuitive': True}
    assert set(pooling.criterion_reports) == {'standard_intuitive', 'cursed_intuitive'}
    assert records[-1].refinement_verdicts == {}


def test_fully_cursed_equilibria_always_pass():
    rng = np.random.default_rng(99)
    for _ in range(100):
        game = random_game(rng)
        for record in enumerate_pure_cse(game, 1):
            assert survives_cursed_intuitive(game, record)


def test_pins_are_linear_in_chi():
    game = beer_quiche_game()
    for chi in np.linspace(0, 1, 11):
        region = constrained_belief_set({'weak'}, game.prior, chi)
        assert region.upper[0] == pytest.approx(0.4 * chi, abs=1e-15)
        assert region.lower[0] == region.upper[0]
