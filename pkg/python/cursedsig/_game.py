from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._common import (GameFileError, _as_distribution, _as_stochastic_matrix, _check_chi, _frozen,
                      invoker)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PriorDistribution:
    """Common prior F over the sender's types, in declaration order."""
    types: tuple
    weights: np.ndarray

    def __post_init__(self):
        types = tuple(str(t) for t in self.types)
        if len(set(types)) != len(types) or not types:
            raise ValueError(f'{invoker}: type ids should be unique and nonempty.')
        weights = _as_distribution(self.weights, 'prior', size=len(types))
        if np.any(weights <= 0):
            raise ValueError(f'{invoker}: every prior weight should be strictly positive.')
        object.__setattr__(self, 'types', types)
        object.__setattr__(self, 'weights', weights)

    @classmethod
    def from_mapping(cls, mapping):
        return cls(tuple(mapping), [mapping[t] for t in mapping])

    def __getitem__(self, type_id):
        return float(self.weights[self.types.index(type_id)])

    def as_dict(self):
        return dict(zip(self.types, map(float, self.weights)))


@dataclass(frozen=True)
class FiniteActions:
    actions: tuple


@dataclass(frozen=True, eq=False)
class WageQuadratic:
    """The receiver offers a wage w and earns -(w - productivity)**2."""
    productivity: np.ndarray


@dataclass(frozen=True)
class SupportSpec:
    """Declared supports for the indifference solver.

    ``sender`` maps every type id to the messages it plays with positive
    probability. ``receiver`` maps message ids to the actions the receiver
    mixes over; messages that are not listed get a pure response, which the
    solver enumerates. Ignored in wage games.
    """
    sender: dict
    receiver: dict = field(default_factory=dict)
    name: str = ''

    def __post_init__(self):
        sender = {str(t): tuple(str(m) for m in ms) for t, ms in self.sender.items()}
        receiver = {str(m): tuple(str(a) for a in acts) for m, acts in self.receiver.items()}
        if any(len(ms) == 0 for ms in sender.values()) or any(len(a) == 0 for a in receiver.values()):
            raise ValueError(f'{invoker}: supports should be nonempty.')
        object.__setattr__(self, 'sender', sender)
        object.__setattr__(self, 'receiver', receiver)


@dataclass(frozen=True, eq=False)
class SignalingGame:
    """A finite signaling game.

    In FiniteActions mode ``sender_payoff`` and ``receiver_payoff`` are arrays
    of shape (types, messages, actions). In WageQuadratic mode the receiver's
    action is a wage, the receiver payoff is -(w - productivity)**2 and the
    sender earns the wage. In both modes ``sender_cost`` (types, messages) is
    subtracted from the sender's payoff.
    """
    prior: PriorDistribution
    messages: tuple
    receiver_mode: object
    sender_payoff: np.ndarray = None
    receiver_payoff: np.ndarray = None
    sender_cost: np.ndarray = None
    supports: tuple = ()
    name: str = ''

    def __post_init__(self):
        messages = tuple(str(m) for m in self.messages)
        if len(set(messages)) != len(messages) or not messages:
            raise ValueError(f'{invoker}: message ids should be unique and nonempty.')
        object.__setattr__(self, 'messages', messages)
        n_types, n_messages = len(self.prior.types), len(messages)
        cost = np.zeros((n_types, n_messages)) if self.sender_cost is None else np.array(self.sender_cost, dtype=np.float64)
        if cost.shape != (n_types, n_messages) or not np.all(np.isfinite(cost)):
            raise ValueError(f'{invoker}: sender_cost should be a finite table of shape {(n_types, n_messages)}.')
        object.__setattr__(self, 'sender_cost', _frozen(cost))
        if isinstance(self.receiver_mode, FiniteActions):
            actions = tuple(str(a) for a in self.receiver_mode.actions)
            if len(set(actions)) != len(actions) or not actions:
                raise ValueError(f'{invoker}: action ids should be unique and nonempty.')
            object.__setattr__(self, 'receiver_mode', FiniteActions(actions))
            shape = (n_types, n_messages, len(actions))
            for name in ('sender_payoff', 'receiver_payoff'):
                table = getattr(self, name)
                if table is None:
                    raise ValueError(f'{invoker}: {name} is required for a game with finite actions.')
                table = np.array(table, dtype=np.float64)
                if table.shape != shape or not np.all(np.isfinite(table)):
                    raise ValueError(f'{invoker}: {name} should be a finite table of shape {shape}.')
                object.__setattr__(self, name, _frozen(table))
        elif isinstance(self.receiver_mode, WageQuadratic):
            productivity = np.array(self.receiver_mode.productivity, dtype=np.float64)
            if productivity.shape != (n_types,) or not np.all(np.isfinite(productivity)) or np.any(productivity < 0):
                raise ValueError(f'{invoker}: every type needs a finite, nonnegative productivity.')
            object.__setattr__(self, 'receiver_mode', WageQuadratic(_frozen(productivity)))
        else:
            raise ValueError(f'{invoker}: receiver_mode should be FiniteActions or WageQuadratic.')
        for spec in self.supports:
            self.validate_support(spec)
        object.__setattr__(self, 'supports', tuple(self.supports))

    def validate_support(self, spec):
        if set(spec.sender) != set(self.types):
            raise ValueError(f'{invoker}: a support should list every type exactly once.')
        for messages in spec.sender.values():
            for m in messages:
                self.message_index(m)
        for m, actions in spec.receiver.items():
            self.message_index(m)
            for a in actions:
                self.action_index(a)

    @property
    def types(self):
        return self.prior.types

    @property
    def actions(self):
        return self.receiver_mode.actions if self.is_finite else ()

    @property
    def is_finite(self):
        return isinstance(self.receiver_mode, FiniteActions)

    @property
    def is_wage(self):
        return isinstance(self.receiver_mode, WageQuadratic)

    @property
    def productivity(self):
        return self.receiver_mode.productivity

    @property
    def n_types(self):
        return len(self.types)

    @property
    def n_messages(self):
        return len(self.messages)

    @property
    def n_actions(self):
        return len(self.actions)

    def type_index(self, type_id):
        try:
            return self.types.index(str(type_id))
        except ValueError:
            raise ValueError(f'{invoker}: unknown type {type_id!r}.') from None

    def message_index(self, message):
        try:
            return self.messages.index(str(message))
        except ValueError:
            raise ValueError(f'{invoker}: unknown message {message!r}.') from None

    def action_index(self, action):
        if not self.is_finite:
            raise ValueError(f'{invoker}: a wage game has no finite actions.')
        try:
            return self.actions.index(str(action))
        except ValueError:
            raise ValueError(f'{invoker}: unknown action {action!r}.') from None

    def sender_table(self, m):
        """Net sender payoff u1(θ, m, a) at message index ``m``, shape (types, actions)."""
        return self.sender_payoff[:, m, :] - self.sender_cost[:, m][:, None]

    def sender_utility(self, t, m, response):
        """Expected sender payoff of type index ``t`` at message index ``m``.

        ``response`` is a distribution over actions, or a wage in wage games.
        """
        if self.is_wage:
            return float(response) - self.sender_cost[t, m]
        return float(self.sender_table(m)[t] @ response)

    def receiver_values(self, belief, m):
        """Expected receiver payoff of every action at message index ``m``."""
        return np.asarray(belief, dtype=np.float64) @ self.receiver_payoff[:, m, :]


@dataclass(frozen=True, eq=False)
class SenderStrategy:
    types: tuple
    messages: tuple
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _as_stochastic_matrix(self.matrix, 'sender strategy', (len(self.types), len(self.messages)))
        object.__setattr__(self, 'types', tuple(self.types))
        object.__setattr__(self, 'messages', tuple(self.messages))
        object.__setattr__(self, 'matrix', matrix)

    @classmethod
    def pure(cls, game, choice):
        """``choice`` maps each type id (or index) to a message id."""
        matrix = np.zeros((game.n_types, game.n_messages))
        for t, type_id in enumerate(game.types):
            key = type_id if type_id in choice else t
            matrix[t, game.message_index(choice[key])] = 1.0
        return cls(game.types, game.messages, matrix)

    def row(self, type_id):
        return self.matrix[self.types.index(type_id)]

    def support(self, t):
        return tuple(np.flatnonzero(self.matrix[t] > 0))

    @property
    def is_pure(self):
        return bool(np.all((self.matrix == 0) | (self.matrix == 1)))

    def as_dict(self):
        return {t: dict(zip(self.messages, map(float, row))) for t, row in zip(self.types, self.matrix)}


@dataclass(frozen=True, eq=False)
class ReceiverStrategy:
    """Per message, a distribution over actions (``matrix``) or a wage (``wages``)."""
    messages: tuple
    actions: tuple = ()
    matrix: np.ndarray = None
    wages: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, 'messages', tuple(self.messages))
        object.__setattr__(self, 'actions', tuple(self.actions))
        if (self.matrix is None) == (self.wages is None):
            raise ValueError(f'{invoker}: a receiver strategy has either action probabilities or wages.')
        if self.matrix is not None:
            matrix = _as_stochastic_matrix(self.matrix, 'receiver strategy', (len(self.messages), len(self.actions)))
            object.__setattr__(self, 'matrix', matrix)
        else:
            wages = np.array(self.wages, dtype=np.float64)
            if wages.shape != (len(self.messages),) or not np.all(np.isfinite(wages)) or np.any(wages < 0):
                raise ValueError(f'{invoker}: wages should be finite, nonnegative and one per message.')
            object.__setattr__(self, 'wages', _frozen(wages))

    def response(self, m):
        return self.matrix[m] if self.matrix is not None else float(self.wages[m])

    def as_dict(self):
        if self.matrix is not None:
            return {m: dict(zip(self.actions, map(float, row))) for m, row in zip(self.messages, self.matrix)}
        return dict(zip(self.messages, map(float, self.wages)))


@dataclass(frozen=True, eq=False)
class BeliefSystem:
    messages: tuple
    types: tuple
    matrix: np.ndarray

    def __post_init__(self):
        matrix = _as_stochastic_matrix(self.matrix, 'belief system', (len(self.messages), len(self.types)))
        object.__setattr__(self, 'messages', tuple(self.messages))
        object.__setattr__(self, 'types', tuple(self.types))
        object.__setattr__(self, 'matrix', matrix)

    def __getitem__(self, message):
        return self.matrix[self.messages.index(message)]

    def as_dict(self):
        return {m: dict(zip(self.types, map(float, row))) for m, row in zip(self.messages, self.matrix)}


@dataclass(frozen=True, eq=False)
class Assessment:
    sender: SenderStrategy
    receiver: ReceiverStrategy
    beliefs: BeliefSystem
    chi: float

    def __post_init__(self):
        object.__setattr__(self, 'chi', _check_chi(self.chi))


# Game files ------------------------------------------------------------------

def _line_of(text, key, within=()):
    """1-based line of ``key``, searched after each enclosing key of ``within`` in turn.

    Falls back to the innermost enclosing key that was found.
    """
    lines = text.splitlines()
    found = start = None
    for name in (*within, key):
        needle = json.dumps(str(name))
        hit = next((i for i in range(start or 0, len(lines)) if needle in lines[i]), None)
        if hit is None:
            break
        found = start = hit
    return None if found is None else found + 1


_TOKENS = re.compile(r'("(?:[^"\\]|\\.)*")(\s*:)?|[{}]')


def _repeated_key_line(text, key):
    """1-based line where ``key`` appears a second time in the same object."""
    open_objects = []
    for match in _TOKENS.finditer(text):
        if match.group() == '{':
            open_objects.append(set())
        elif match.group() == '}':
            open_objects.pop()
        elif match.group(2) and open_objects:
            name = json.loads(match.group(1))
            if name == key and name in open_objects[-1]:
                return text.count('\n', 0, match.start()) + 1
            open_objects[-1].add(name)
    return None


class _DuplicateKeyError(ValueError):
    def __init__(self, key):
        super().__init__(key)
        self.key = key


def _unique_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise _DuplicateKeyError(key)
        seen[key] = value
    return seen


def _table(raw, types, messages, actions, name, fail):
    if not isinstance(raw, dict):
        fail(f'{name} should be an object keyed by type', name)
    out = np.empty((len(types), len(messages), len(actions)))
    for t, type_id in enumerate(types):
        rows = raw.get(type_id)
        if not isinstance(rows, dict):
            fail(f'{name} has no entry for type {type_id!r}', type_id, (name,))
        for m, message in enumerate(messages):
            cells = rows.get(message)
            if not isinstance(cells, dict):
                fail(f'{name}[{type_id!r}] has no entry for message {message!r}', type_id, (name,))
            for a, action in enumerate(actions):
                value = cells.get(action)
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    fail(f'{name}[{type_id!r}][{message!r}] needs a number for action {action!r}',
                         action, (name, type_id, message))
                out[t, m, a] = value
    return out


def parse_game(document, path=None, text=''):
    """Build a SignalingGame from a decoded game-file document."""

    def fail(message, key=None, within=()):
        raise GameFileError(message, path, _line_of(text, key, within) if key is not None else None)

    if not isinstance(document, dict):
        fail('the game file should contain a JSON object')
    for key in ('types', 'messages', 'receiver_mode'):
        if key not in document:
            fail(f'missing required field {key!r}')
    raw_types = document['types']
    if not isinstance(raw_types, list) or not raw_types:
        fail('"types" should be a nonempty list', 'types')
    types, weights, productivity = [], [], []
    for entry in raw_types:
        if not isinstance(entry, dict) or 'id' not in entry or 'prior' not in entry:
            fail('each type needs an "id" and a "prior"', 'types')
        types.append(str(entry['id']))
        weights.append(entry['prior'])
        productivity.append(entry.get('productivity'))
    messages = document['messages']
    if not isinstance(messages, list) or not messages:
        fail('"messages" should be a nonempty list', 'messages')
    messages = [str(m) for m in messages]
    try:
        prior = PriorDistribution(tuple(types), weights)
    except ValueError as e:
        fail(str(e), 'prior')

    cost = None
    if 'sender_cost' in document:
        raw = document['sender_cost']
        cost = np.zeros((len(types), len(messages)))
        if not isinstance(raw, dict):
            fail('"sender_cost" should be an object keyed by type', 'sender_cost')
        for type_id, row in raw.items():
            if type_id not in types or not isinstance(row, dict):
                fail(f'sender_cost has an unknown type {type_id!r}', type_id, ('sender_cost',))
            for message, value in row.items():
                if message not in messages or not isinstance(value, (int, float)) or isinstance(value, bool):
                    fail(f'sender_cost[{type_id!r}] has a bad entry for {message!r}', message,
                         ('sender_cost', type_id))
                cost[types.index(type_id), messages.index(message)] = value

    mode = document['receiver_mode']
    kwargs = {}
    if mode == 'finite':
        actions = document.get('actions')
        if not isinstance(actions, list) or not actions:
            fail('a finite game needs a nonempty "actions" list', 'receiver_mode')
        actions = [str(a) for a in actions]
        for name in ('sender_payoff', 'receiver_payoff'):
            if name not in document:
                fail(f'missing required field {name!r}')
            kwargs[name] = _table(document[name], types, messages, actions, name, fail)
        receiver_mode = FiniteActions(tuple(actions))
    elif mode == 'wage_quadratic':
        if any(not isinstance(v, (int, float)) or isinstance(v, bool) for v in productivity):
            fail('every type needs a numeric "productivity" in a wage_quadratic game', 'types')
        receiver_mode = WageQuadratic(np.array(productivity, dtype=np.float64))
    else:
        fail(f'"receiver_mode" should be "finite" or "wage_quadratic", not {mode!r}', 'receiver_mode')

    supports = []
    for entry in document.get('supports', []):
        if not isinstance(entry, dict) or 'sender' not in entry:
            fail('each support needs a "sender" object', 'supports')
        try:
            supports.append(SupportSpec(entry['sender'], entry.get('receiver', {}), entry.get('name', '')))
        except (ValueError, AttributeError, TypeError) as e:
            fail(f'bad support: {e}', 'supports')
    try:
        return SignalingGame(prior, tuple(messages), receiver_mode, sender_cost=cost, supports=tuple(supports),
                             name=str(document.get('name', '')), **kwargs)
    except ValueError as e:
        fail(str(e))


def load_game(path):
    """Read and validate a JSON game file."""
    path = Path(path)
    text = path.read_text()
    try:
        document = json.loads(text, object_pairs_hook=_unique_keys)
    except json.JSONDecodeError as e:
        raise GameFileError(f'invalid JSON: {e.msg}', path, e.lineno) from None
    except _DuplicateKeyError as e:
        raise GameFileError(f'duplicate key {e.key!r}', path, _repeated_key_line(text, e.key)) from None
    game = parse_game(document, path, text)
    logger.debug('loaded game %r from %s: %d types, %d messages', game.name, path, game.n_types, game.n_messages)
    return game


def game_to_document(game):
    """Inverse of ``parse_game``, used to write game files."""
    doc = {'name': game.name, 'types': [], 'messages': list(game.messages)}
    for t, type_id in enumerate(game.types):
        entry = {'id': type_id, 'prior': float(game.prior.weights[t])}
        if game.is_wage:
            entry['productivity'] = float(game.productivity[t])
        doc['types'].append(entry)
    if game.is_wage:
        doc['receiver_mode'] = 'wage_quadratic'
    else:
        doc['receiver_mode'] = 'finite'
        doc['actions'] = list(game.actions)
        for name in ('sender_payoff', 'receiver_payoff'):
            table = getattr(game, name)
            doc[name] = {
                type_id: {m: {a: float(table[t, j, k]) for k, a in enumerate(game.actions)}
                          for j, m in enumerate(game.messages)}
                for t, type_id in enumerate(game.types)}
    if np.any(game.sender_cost != 0):
        doc['sender_cost'] = {type_id: {m: float(game.sender_cost[t, j]) for j, m in enumerate(game.messages)}
                              for t, type_id in enumerate(game.types)}
    if game.supports:
        doc['supports'] = [{'name': s.name, 'sender': {t: list(ms) for t, ms in s.sender.items()},
                            'receiver': {m: list(a) for m, a in s.receiver.items()}} for s in game.supports]
    return doc


