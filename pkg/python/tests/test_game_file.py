import json

from cursedsig import (GameFileError, beer_quiche_game, data_path, game_to_document, kmn_game, load_game,
                       parse_game)
import numpy as np
import pytest


def same_game(a, b):
    assert a.name == b.name
    assert a.types == b.types
    assert a.messages == b.messages
    assert np.array_equal(a.prior.weights, b.prior.weights)
    assert np.array_equal(a.sender_cost, b.sender_cost)
    assert a.is_wage == b.is_wage
    if a.is_wage:
        assert np.array_equal(a.productivity, b.productivity)
    else:
        assert a.actions == b.actions
        assert np.array_equal(a.sender_payoff, b.sender_payoff)
        assert np.array_equal(a.receiver_payoff, b.receiver_payoff)
    assert a.supports == b.supports


@pytest.mark.parametrize('name, builder', [('kmn.json', kmn_game), ('beerquiche.json', beer_quiche_game)])
def test_bundled_games_match_builders(name, builder):
    same_game(load_game(data_path(name)), builder())


@pytest.mark.parametrize('builder', [kmn_game, beer_quiche_game])
def test_document_round_trip(builder):
    game = builder()
    same_game(parse_game(json.loads(json.dumps(game_to_document(game)))), game)


def write(tmp_path, text):
    path = tmp_path / 'game.json'
    path.write_text(text)
    return path


def test_invalid_json_reports_line(tmp_path):
    path = write(tmp_path, '{\n  "types": [],\n  "messages": ["a",]\n}\n')
    with pytest.raises(GameFileError) as e_info:
        load_game(path)
    assert e_info.value.line == 3
    assert e_info.value.path == path
    assert e_info.match('invalid JSON')


def test_bad_receiver_mode_reports_line(tmp_path):
    text = '\n'.join([
        '{',
        '  "types": [{"id": "H", "prior": 0.5}, {"id": "L", "prior": 0.5}],',
        '  "messages": ["0", "1"],',
        '  "receiver_mode": "auction"',
        '}'])
    with pytest.raises(GameFileError) as e_info:
        load_game(write(tmp_path, text))
    assert e_info.value.line == 4
    assert e_info.match('receiver_mode')
    assert e_info.match(':4:')


def test_bad_prior_reports_line(tmp_path):
    text = '\n'.join([
        '{',
        '  "messages": ["0"],',
        '  "types": [{"id": "H", "prior": 0.7}, {"id": "L", "prior": 0.5}],',
        '  "receiver_mode": "wage_quadratic"',
        '}'])
    with pytest.raises(GameFileError) as e_info:
        load_game(write(tmp_path, text))
    assert e_info.value.line == 3
    assert e_info.match('sum to 1')


def test_missing_field():
    with pytest.raises(GameFileError) as e_info:
        parse_game({'types': [{'id': 'H', 'prior': 1}], 'receiver_mode': 'finite'})
    assert e_info.value.line is None
    assert e_info.match("'messages'")


def test_wage_game_needs_productivity():
    document = {'types': [{'id': 'H', 'prior': 0.5, 'productivity': 2}, {'id': 'L', 'prior': 0.5}],
                'messages': ['e'], 'receiver_mode': 'wage_quadratic'}
    with pytest.raises(GameFileError) as e_info:
        parse_game(document)
    assert e_info.match('productivity')


def test_finite_game_needs_full_tables():
    document = game_to_document(beer_quiche_game())
    del document['receiver_payoff']['strong']['Quiche']
    with pytest.raises(GameFileError) as e_info:
        parse_game(document)
    assert e_info.match("no entry for message 'Quiche'")


def test_support_must_name_game_ids():
    document = game_to_document(beer_quiche_game())
    document['supports'][0]['receiver'] = {'Beer': ['Retreat']}
    with pytest.raises(GameFileError) as e_info:
        parse_game(document)
    assert e_info.match('unknown action')


def test_error_is_a_value_error():
    with pytest.raises(ValueError):
        parse_game([])


def test_duplicate_key_reports_its_line(tmp_path):
    text = '\n'.join([
        '{',
        '  "types": [{"id": "H", "prior": 0.5}, {"id": "L", "prior": 0.5}],',
        '  "messages": ["0", "1"],',
        '  "receiver_mode": "wage_quadratic",',
        '  "sender_cost": {',
        '    "H": {"0": 0, "1": 1},',
        '    "L": {"0": 0, "1": 2},',
        '    "H": {"0": 0, "1": 3}',
        '  }',
        '}'])
    with pytest.raises(GameFileError) as e_info:
        load_game(write(tmp_path, text))
    assert e_info.value.line == 8
    assert e_info.match("duplicate key 'H'")


def test_bad_cost_entry_reports_the_cost_line(tmp_path):
    text = '\n'.join([
        '{',
        '  "types": [{"id": "H", "prior": 0.5, "productivity": 2}, {"id": "L", "prior": 0.5, "productivity": 1}],',
        '  "messages": ["0", "1"],',
        '  "receiver_mode": "wage_quadratic",',
        '  "sender_cost": {',
        '    "H": {"0": 0, "1": 1},',
        '    "L": {"0": 0, "1": true}',
        '  }',
        '}'])
    with pytest.raises(GameFileError) as e_info:
        load_game(write(tmp_path, text))
    assert e_info.value.line == 7
    assert e_info.match("sender_cost\\['L'\\] has a bad entry for '1'")


def test_boolean_productivity_is_rejected():
    document = {'types': [{'id': 'H', 'prior': 0.5, 'productivity': True},
                          {'id': 'L', 'prior': 0.5, 'productivity': 1}],
                'messages': ['e'], 'receiver_mode': 'wage_quadratic'}
    with pytest.raises(GameFileError) as e_info:
        parse_game(document)
    assert e_info.match('productivity')


def test_negative_productivity_is_rejected():
    document = {'types': [{'id': 'H', 'prior': 0.5, 'productivity': -1},
                          {'id': 'L', 'prior': 0.5, 'productivity': -2}],
                'messages': ['e'], 'receiver_mode': 'wage_quadratic'}
    with pytest.raises(GameFileError) as e_info:
        parse_game(document)
    assert e_info.match('nonnegative')
