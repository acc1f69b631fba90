"""Enumeration, support solving and verification of χ-cursed sequential equilibria."""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import least_squares, linprog

from ._beliefs import BeliefRegion, belief_floor, cursed_bayes_update
from ._common import ConvergenceError, EQ_TOL, OPT_TOL, SearchBudgetError, _check_chi, _frozen, invoker
from ._game import Assessment, BeliefSystem, ReceiverStrategy, SenderStrategy, SupportSpec

logger = logging.getLogger(__name__)

MAX_PROFILES = 10 ** 6
MAX_ACTIONS = 12
BOUNDARY_TOL = 1e-9
CLIP = 1e-12
START_VALUES = (0.25, 0.5, 0.75)
MAX_STARTS = 27
MAX_NFEV = 10 ** 5
DEDUPE_DIGITS = 8


class EquilibriumKind(str, Enum):
    SEPARATING = 'separating'
    POOLING = 'pooling'
    HYBRID = 'hybrid'
    OTHER = 'other'


KIND_ORDER = {kind.value: rank for rank, kind in enumerate(EquilibriumKind)}


@dataclass(frozen=True, eq=False)
class EquilibriumRecord:
    """One equilibrium together with what the reports need about it.

    ``offpath_beliefs`` maps each off-path message id to the supporting
    belief that was found. ``refinement_verdicts`` maps a criterion name to a
    pass/fail flag and ``criterion_reports`` keeps the matching reports; both
    are filled by ``refine_equilibrium_set``. ``source`` is ``'pure'`` for
    enumerated equilibria and the support name otherwise.
    """
    kind: str
    assessment: Assessment
    sender_payoffs: np.ndarray
    onpath_messages: tuple
    offpath_beliefs: dict
    refinement_verdicts: dict = field(default_factory=dict)
    criterion_reports: dict = field(default_factory=dict)
    source: str = 'pure'

    @property
    def chi(self):
        return self.assessment.chi

    @property
    def sender(self):
        return self.assessment.sender

    @property
    def receiver(self):
        return self.assessment.receiver

    @property
    def beliefs(self):
        return self.assessment.beliefs

    @property
    def profile(self):
        """Message id per type when the sender is pure, else None."""
        if not self.sender.is_pure:
            return None
        return tuple(self.sender.messages[int(np.argmax(row))] for row in self.sender.matrix)

    def payoff(self, type_id):
        return float(self.sender_payoffs[self.sender.types.index(type_id)])


@dataclass(frozen=True)
class CseVerdict:
    """Outcome of ``verify_cse``; ``condition`` names the first violated check."""
    passed: bool
    condition: str = None
    magnitude: float = 0.0
    detail: str = ''

    def __bool__(self):
        return self.passed


@dataclass(frozen=True, eq=False)
class OffPathResponse:
    """A supporting belief at an off-path message and a best response to it."""
    belief: np.ndarray
    response: object


def _message_index(game, m):
    return int(m) if isinstance(m, (int, np.integer)) else game.message_index(m)


def _best_actions(game, belief, j):
    values = game.receiver_values(belief, j)
    return tuple(int(a) for a in np.flatnonzero(values >= values.max() - OPT_TOL))


def receiver_best_response(game, belief, m):
    """All best-responding action ids at ``m``, or the posterior-mean wage."""
    j = _message_index(game, m)
    belief = np.asarray(belief, dtype=np.float64)
    if game.is_wage:
        return float(belief @ game.productivity)
    return tuple(game.actions[a] for a in _best_actions(game, belief, j))


def _sender_values(game, t, receiver):
    return np.array([game.sender_utility(t, j, receiver.response(j)) for j in range(game.n_messages)])


def sender_best_response(game, type_id, receiver):
    """All messages maximizing the expected payoff of ``type_id`` against ``receiver``."""
    t = game.type_index(type_id)
    values = _sender_values(game, t, receiver)
    return tuple(game.messages[j] for j in np.flatnonzero(values >= values.max() - OPT_TOL))


def equilibrium_payoffs(game, sender, receiver):
    """Expected payoff of every type under the profile."""
    return _frozen([sender.matrix[t] @ _sender_values(game, t, receiver) for t in range(game.n_types)])


def classify(sender):
    """Separating, pooling, hybrid (some type mixes) or other."""
    if not sender.is_pure:
        return EquilibriumKind.HYBRID
    choices = [int(np.argmax(row)) for row in sender.matrix]
    if len(set(choices)) == 1:
        return EquilibriumKind.POOLING
    if len(set(choices)) == len(choices):
        return EquilibriumKind.SEPARATING
    return EquilibriumKind.OTHER


# Off-path support ------------------------------------------------------------

def _subset_witness(game, j, region, subset, vertices):
    table = game.receiver_payoff[:, j, :]
    for vertex in vertices:
        values = vertex @ table
        if np.all(values[list(subset)] >= values.max() - OPT_TOL):
            return vertex
    lead = subset[0]
    n = game.n_types
    a_eq = [np.ones(n)] + [table[:, a] - table[:, lead] for a in subset[1:]]
    b_eq = [1.0] + [0.0] * (len(subset) - 1)
    rest = [b for b in range(game.n_actions) if b not in subset]
    a_ub = [table[:, b] - table[:, lead] for b in rest] or None
    b_ub = [0.0] * len(rest) or None
    result = linprog(np.zeros(n), A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                     bounds=list(zip(region.lower, region.upper)), method='highs')
    if result.status != 0:
        return None
    belief = np.clip(result.x, region.lower, region.upper)
    return _frozen(belief / belief.sum())


def attainable_responses(game, m, region):
    """Maximal action sets that are simultaneously best responses to some belief in ``region``.

    Returns a list of ``(action indices, witness belief)`` pairs. Any
    mixture over one of the sets is a best response to its witness.
    """
    if game.is_wage:
        raise ValueError(f'{invoker}: attainable action sets are only defined with finite actions.')
    if game.n_actions > MAX_ACTIONS:
        raise SearchBudgetError(f'{invoker}: {game.n_actions} actions exceed the subset search limit of {MAX_ACTIONS}.')
    j = _message_index(game, m)
    vertices = region.vertices()
    found = []
    for size in range(game.n_actions, 0, -1):
        for subset in itertools.combinations(range(game.n_actions), size):
            if any(set(subset) <= set(s) for s, _ in found):
                continue
            witness = _subset_witness(game, j, region, subset, vertices)
            if witness is not None:
                found.append((subset, witness))
    logger.debug('message %r: attainable action sets %s', game.messages[j], [s for s, _ in found])
    return found


def _mixture_lp(table, payoffs):
    """Mixture over the columns of ``table`` minimizing the worst gain over ``payoffs``."""
    n_types, k = table.shape
    c = np.zeros(k + 1)
    c[-1] = 1.0
    a_ub = np.hstack([table, -np.ones((n_types, 1))])
    a_eq = np.append(np.ones(k), 0.0)[None, :]
    result = linprog(c, A_ub=a_ub, b_ub=payoffs, A_eq=a_eq, b_eq=[1.0],
                     bounds=[(0, None)] * k + [(None, None)], method='highs')
    if result.status != 0 or result.fun > OPT_TOL / 2:
        return None
    weights = np.clip(result.x[:k], 0, None)
    return weights / weights.sum()


def _deter_finite(game, j, options, payoffs, allowed=None):
    table = game.sender_table(j)
    if allowed is not None:
        options = [(tuple(a for a in s if a in allowed), w) for s, w in options]
        options = [(s, w) for s, w in options if s]
    for subset, witness in options:
        for a in subset:
            if np.all(table[:, a] <= payoffs + OPT_TOL):
                row = np.zeros(game.n_actions)
                row[a] = 1.0
                return OffPathResponse(witness, _frozen(row))
    for subset, witness in options:
        if len(subset) < 2:
            continue
        weights = _mixture_lp(table[:, list(subset)], payoffs)
        if weights is not None:
            row = np.zeros(game.n_actions)
            row[list(subset)] = weights
            return OffPathResponse(witness, _frozen(row))
    return None


def deter_deviation(game, m, region, payoffs, allowed=None):
    """Find a belief in ``region`` and a best response at ``m`` that no type strictly prefers.

    ``payoffs`` are the equilibrium payoffs per type. ``allowed`` optionally
    restricts the receiver's action indices. Returns an OffPathResponse or
    None when every admissible belief lets some type gain by sending ``m``.
    """
    j = _message_index(game, m)
    payoffs = np.asarray(payoffs, dtype=np.float64)
    if game.is_wage:
        wage, belief = region.minimize(game.productivity)
        if np.any(wage - game.sender_cost[:, j] > payoffs + OPT_TOL):
            return None
        return OffPathResponse(belief, wage)
    return _deter_finite(game, j, attainable_responses(game, j, region), payoffs, allowed)


# Pure enumeration ------------------------------------------------------------

def _make_record(game, chi, sender, receiver, beliefs, source='pure'):
    assessment = Assessment(sender, receiver, BeliefSystem(game.messages, game.types, beliefs), chi)
    verdict = verify_cse(game, assessment)
    if not verdict:
        logger.debug('candidate fails verification: %s', verdict.detail)
        return None
    onpath = tuple(m for j, m in enumerate(game.messages) if np.any(sender.matrix[:, j] > 0))
    offpath = {m: assessment.beliefs[m] for m in game.messages if m not in onpath}
    return EquilibriumRecord(classify(sender).value, assessment, equilibrium_payoffs(game, sender, receiver),
                             onpath, offpath, source=source)


def record_from_assessment(game, assessment, source='input'):
    """Wrap a given assessment as an EquilibriumRecord after checking it is a χ-CSE."""
    verdict = verify_cse(game, assessment)
    if not verdict:
        raise ValueError(f'{invoker}: the assessment is not a χ-CSE: {verdict.detail}.')
    return _make_record(game, assessment.chi, assessment.sender, assessment.receiver, assessment.beliefs.matrix,
                        source=source)


def _record_order(record):
    receiver = record.receiver.matrix if record.receiver.matrix is not None else record.receiver.wages
    return (KIND_ORDER[record.kind], tuple(-np.round(record.sender.matrix, 12).ravel()),
            tuple(np.round(receiver, 12).ravel()))


def _joint_lp(game, profile, blocks):
    """Receiver mixtures over ``blocks`` (message index -> action indices) keeping the pure profile optimal."""
    offsets, start = {}, 0
    for j in range(game.n_messages):
        offsets[j] = start
        start += len(blocks[j])
    n = start + 1
    rows = []
    for t, own in enumerate(profile):
        for j in range(game.n_messages):
            if j == own:
                continue
            row = np.zeros(n)
            row[offsets[j]:offsets[j] + len(blocks[j])] += game.sender_table(j)[t, list(blocks[j])]
            row[offsets[own]:offsets[own] + len(blocks[own])] -= game.sender_table(own)[t, list(blocks[own])]
            row[-1] = -1.0
            rows.append(row)
    a_eq = np.zeros((game.n_messages, n))
    for j in range(game.n_messages):
        a_eq[j, offsets[j]:offsets[j] + len(blocks[j])] = 1.0
    c = np.zeros(n)
    c[-1] = 1.0
    result = linprog(c, A_ub=np.array(rows) if rows else None, b_ub=np.zeros(len(rows)) if rows else None,
                     A_eq=a_eq, b_eq=np.ones(game.n_messages),
                     bounds=[(0, None)] * (n - 1) + [(None, None)] if rows else [(0, None)] * (n - 1) + [(0, 0)],
                     method='highs')
    if result.status != 0 or result.fun > OPT_TOL / 2:
        return None
    matrix = np.zeros((game.n_messages, game.n_actions))
    for j in range(game.n_messages):
        weights = np.clip(result.x[offsets[j]:offsets[j] + len(blocks[j])], 0, None)
        matrix[j, list(blocks[j])] = weights / weights.sum()
    return matrix


def _onpath_deviation(onpath, values, payoffs):
    """True when some type strictly prefers another on-path message; ``values(j)`` gives every type's payoff there."""
    return any(np.any(values(j) > payoffs + OPT_TOL) for j in onpath)


def _finite_profile(game, profile, onpath, posteriors, options):
    supports = {j: _best_actions(game, posteriors[j], j) for j in onpath}
    offpath = [j for j in range(game.n_messages) if j not in onpath]
    for combo in itertools.product(*(supports[j] for j in onpath)):
        matrix = np.zeros((game.n_messages, game.n_actions))
        for j, a in zip(onpath, combo):
            matrix[j, a] = 1.0
        payoffs = np.array([game.sender_table(j)[t] @ matrix[j] for t, j in enumerate(profile)])
        if _onpath_deviation(onpath, lambda j: game.sender_table(j) @ matrix[j], payoffs):
            continue
        beliefs = {}
        for j in offpath:
            found = _deter_finite(game, j, options[j], payoffs)
            if found is None:
                break
            matrix[j] = found.response
            beliefs[j] = found.belief
        else:
            return matrix, beliefs
    if all(len(supports[j]) == 1 for j in onpath):
        return None
    for picks in itertools.product(*(options[j] for j in offpath)):
        blocks = dict(supports)
        blocks.update({j: subset for j, (subset, _) in zip(offpath, picks)})
        matrix = _joint_lp(game, profile, blocks)
        if matrix is not None:
            return matrix, {j: witness for j, (_, witness) in zip(offpath, picks)}
    return None


def _pure_profile(game, chi, region, profile, options):
    sender = SenderStrategy(game.types, game.messages, np.eye(game.n_messages)[list(profile)])
    onpath = sorted(set(profile))
    posteriors = {j: cursed_bayes_update(game, sender, chi, j) for j in onpath}
    beliefs = np.zeros((game.n_messages, game.n_types))
    for j in onpath:
        beliefs[j] = posteriors[j]
    if game.is_wage:
        wages = np.zeros(game.n_messages)
        for j in onpath:
            wages[j] = posteriors[j] @ game.productivity
        payoffs = np.array([wages[j] - game.sender_cost[t, j] for t, j in enumerate(profile)])
        if _onpath_deviation(onpath, lambda j: wages[j] - game.sender_cost[:, j], payoffs):
            return None
        for j in range(game.n_messages):
            if j in onpath:
                continue
            found = deter_deviation(game, j, region, payoffs)
            if found is None:
                return None
            wages[j], beliefs[j] = found.response, found.belief
        receiver = ReceiverStrategy(game.messages, wages=wages)
    else:
        for j in range(game.n_messages):
            if j not in onpath and j not in options:
                options[j] = attainable_responses(game, j, region)
        solved = _finite_profile(game, profile, onpath, posteriors, options)
        if solved is None:
            return None
        matrix, offpath_beliefs = solved
        for j, belief in offpath_beliefs.items():
            beliefs[j] = belief
        receiver = ReceiverStrategy(game.messages, game.actions, matrix=matrix)
    return _make_record(game, chi, sender, receiver, beliefs)


def enumerate_pure_cse(game, chi):
    """All χ-CSE in which every sender type plays a pure message.

    For each pure sender profile the on-path beliefs are the cursed
    posteriors and the off-path beliefs are searched exactly over the
    floor-constrained simplex. Receiver responses may mix over best
    responses. Records are sorted by (kind, sender profile).

    Raises
    ------
    SearchBudgetError
        If there are more than 10**6 sender profiles.
    """
    chi = _check_chi(chi)
    count = game.n_messages ** game.n_types
    if count > MAX_PROFILES:
        raise SearchBudgetError(f'{invoker}: {count} pure sender profiles exceed the budget of {MAX_PROFILES}.')
    region = BeliefRegion.floor(game.prior, chi)
    options = {}
    records = []
    for profile in itertools.product(range(game.n_messages), repeat=game.n_types):
        record = _pure_profile(game, chi, region, profile, options)
        if record is not None:
            logger.debug('chi=%g: profile %s is a %s equilibrium', chi, record.profile, record.kind)
            records.append(record)
    records.sort(key=_record_order)
    return records


# Support enumeration ---------------------------------------------------------

class _SupportSystem:
    """Indifference equations for one SupportSpec and one choice of pure on-path responses."""

    def __init__(self, game, chi, spec):
        self.game, self.chi = game, chi
        self.sender_supports = [tuple(sorted(game.message_index(m) for m in spec.sender[t])) for t in game.types]
        self.onpath = sorted(set(itertools.chain.from_iterable(self.sender_supports)))
        self.listed = {}
        self.allowed = {}
        if game.is_finite:
            for m, actions in spec.receiver.items():
                j = game.message_index(m)
                indices = tuple(sorted(game.action_index(a) for a in actions))
                if j in self.onpath:
                    self.listed[j] = indices
                elif len(indices) > 1:
                    raise ValueError(f'{invoker}: the receiver cannot mix at {m!r}, which no type sends.')
                else:
                    self.allowed[j] = set(indices)
        elif spec.receiver:
            logger.debug('receiver supports are ignored in a wage game')
        self.enumerated = [j for j in self.onpath if j not in self.listed] if game.is_finite else []
        self.n_free = sum(len(s) - 1 for s in self.sender_supports) + sum(len(a) - 1 for a in self.listed.values())

    def unpack(self, x, fixed):
        x = np.clip(np.asarray(x, dtype=np.float64), CLIP, 1 - CLIP)
        game, pos = self.game, 0
        sender = np.zeros((game.n_types, game.n_messages))
        for t, support in enumerate(self.sender_supports):
            k = len(support)
            sender[t, list(support[:-1])] = x[pos:pos + k - 1]
            sender[t, support[-1]] = 1 - x[pos:pos + k - 1].sum()
            pos += k - 1
        receiver = None
        if game.is_finite:
            receiver = np.zeros((game.n_messages, game.n_actions))
            for j, actions in self.listed.items():
                k = len(actions)
                receiver[j, list(actions[:-1])] = x[pos:pos + k - 1]
                receiver[j, actions[-1]] = 1 - x[pos:pos + k - 1].sum()
                pos += k - 1
            for j, a in zip(self.enumerated, fixed):
                receiver[j, a] = 1.0
        return sender, receiver

    def _posterior(self, sender, j):
        joint = self.game.prior.weights * np.maximum(sender[:, j], 0.0)
        return self.chi * self.game.prior.weights + (1 - self.chi) * joint / max(joint.sum(), CLIP)

    def residuals(self, x, fixed):
        game = self.game
        sender, receiver = self.unpack(x, fixed)
        posteriors = {j: self._posterior(sender, j) for j in self.onpath}
        if game.is_wage:
            values = {j: posteriors[j] @ game.productivity - game.sender_cost[:, j] for j in self.onpath}
        else:
            values = {j: game.sender_table(j) @ receiver[j] for j in self.onpath}
        out = []
        for t, support in enumerate(self.sender_supports):
            out.extend(values[j][t] - values[support[0]][t] for j in support[1:])
            out.append(min(0.0, sender[t, support[-1]]))
        for j, actions in self.listed.items():
            payoffs = game.receiver_values(posteriors[j], j)
            out.extend(payoffs[a] - payoffs[actions[0]] for a in actions[1:])
            out.append(min(0.0, receiver[j, actions[-1]]))
        return np.array(out)

    def on_boundary(self, sender, receiver):
        probs = [sender[t, list(s)] for t, s in enumerate(self.sender_supports) if len(s) > 1]
        if receiver is not None:
            probs += [receiver[j, list(a)] for j, a in self.listed.items() if len(a) > 1]
        return any(np.any((p < BOUNDARY_TOL) | (p > 1 - BOUNDARY_TOL)) for p in probs)


def solve_support_cse(game, chi, spec):
    """χ-CSE with the sender (and receiver) mixing on declared supports.

    Sender indifference across each type's support and receiver
    indifference across each listed action set are solved together with
    cursed-posterior consistency by ``scipy.optimize.least_squares`` from a
    grid of starting points. On-path messages without a listed receiver
    support get every pure action in turn. Off-path messages use the same
    exact deterrence search as pure enumeration and every returned record
    passes ``verify_cse``.

    Returns
    -------
    list of EquilibriumRecord
        Empty when no solution lies inside the supports.

    Raises
    ------
    ConvergenceError
        If every start exhausts its evaluation budget.
    """
    chi = _check_chi(chi)
    if not isinstance(spec, SupportSpec):
        raise ValueError(f'{invoker}: spec should be a SupportSpec.')
    game.validate_support(spec)
    system = _SupportSystem(game, chi, spec)
    region = BeliefRegion.floor(game.prior, chi)
    starts = list(itertools.islice(itertools.product(START_VALUES, repeat=system.n_free), MAX_STARTS))
    combos = itertools.product(*(range(game.n_actions) for _ in system.enumerated))
    records, seen = [], set()
    runs = exhausted = 0
    for fixed in combos:
        for x0 in starts:
            if system.n_free:
                result = least_squares(system.residuals, np.array(x0), args=(fixed,), bounds=(0.0, 1.0),
                                       ftol=1e-15, xtol=1e-15, gtol=1e-15, max_nfev=MAX_NFEV)
                runs += 1
                exhausted += result.status == 0
                x = result.x
            else:
                x = np.array(x0)
            if np.max(np.abs(system.residuals(x, fixed)), initial=0.0) > EQ_TOL:
                continue
            sender, receiver = system.unpack(x, fixed)
            if system.on_boundary(sender, receiver):
                logger.debug('dropping solution on the boundary of %r', spec.name)
                continue
            record = _complete_support_solution(game, chi, region, system, sender, receiver, spec.name or 'support')
            if record is None:
                continue
            key = _dedupe_key(record)
            if key not in seen:
                seen.add(key)
                records.append(record)
    if runs and exhausted == runs:
        raise ConvergenceError(f'{invoker}: every start for support {spec.name!r} hit {MAX_NFEV} evaluations.')
    records.sort(key=_record_order)
    logger.debug('chi=%g: support %r gives %d equilibria', chi, spec.name, len(records))
    return records


def _dedupe_key(record):
    receiver = record.receiver.matrix if record.receiver.matrix is not None else record.receiver.wages
    return (tuple(np.round(record.sender.matrix, DEDUPE_DIGITS).ravel()),
            tuple(np.round(receiver, DEDUPE_DIGITS).ravel()))


def _complete_support_solution(game, chi, region, system, sender_matrix, receiver_matrix, source):
    sender = SenderStrategy(game.types, game.messages, sender_matrix / sender_matrix.sum(axis=1, keepdims=True))
    beliefs = np.zeros((game.n_messages, game.n_types))
    for j in system.onpath:
        beliefs[j] = cursed_bayes_update(game, sender, chi, j)
    if game.is_wage:
        wages = np.zeros(game.n_messages)
        wages[system.onpath] = beliefs[system.onpath] @ game.productivity
        values = np.array([wages[j] - game.sender_cost[:, j] for j in range(game.n_messages)]).T
    else:
        receiver_matrix = receiver_matrix.copy()
        for j in system.onpath:
            receiver_matrix[j] /= receiver_matrix[j].sum()
        values = np.array([game.sender_table(j) @ receiver_matrix[j] for j in range(game.n_messages)]).T
    payoffs = np.array([values[t, list(s)].max() for t, s in enumerate(system.sender_supports)])
    for j in range(game.n_messages):
        if j in system.onpath:
            continue
        found = deter_deviation(game, j, region, payoffs, system.allowed.get(j))
        if found is None:
            return None
        beliefs[j] = found.belief
        if game.is_wage:
            wages[j] = found.response
        else:
            receiver_matrix[j] = found.response
    if game.is_wage:
        receiver = ReceiverStrategy(game.messages, wages=wages)
    else:
        receiver = ReceiverStrategy(game.messages, game.actions, matrix=receiver_matrix)
    return _make_record(game, chi, sender, receiver, beliefs, source=source)


# Verification ----------------------------------------------------------------

def verify_cse(game, assessment):
    """Check an assessment against the χ-CSE conditions in order.

    (a) on-path beliefs are cursed posteriors, (b) every belief dominates
    the floor χF, (c) every type only sends optimal messages and (d) the
    receiver best-responds at every message. All checks use a slack of
    1e-9. The verdict names the first violated condition and its size.
    """
    sender, receiver, beliefs, chi = assessment.sender, assessment.receiver, assessment.beliefs, assessment.chi
    if sender.types != game.types or sender.messages != game.messages or beliefs.messages != game.messages:
        raise ValueError(f'{invoker}: the assessment does not match the game.')
    if (receiver.wages is None) == game.is_wage:
        raise ValueError(f'{invoker}: the receiver strategy does not match the receiver mode of the game.')

    for j, m in enumerate(game.messages):
        posterior = cursed_bayes_update(game, sender, chi, j)
        if posterior is not None:
            gap = float(np.max(np.abs(beliefs.matrix[j] - posterior)))
            if gap > OPT_TOL:
                return CseVerdict(False, 'consistency', gap,
                                  f'belief at {m!r} is {gap:g} away from the cursed posterior')

    shortfall = belief_floor(game.prior, chi)[None, :] - beliefs.matrix
    gap = float(shortfall.max())
    if gap > OPT_TOL:
        j, t = np.unravel_index(int(np.argmax(shortfall)), shortfall.shape)
        return CseVerdict(False, 'floor', gap,
                          f'belief in {game.types[t]!r} at {game.messages[j]!r} is {gap:g} below the floor')

    for t, type_id in enumerate(game.types):
        values = _sender_values(game, t, receiver)
        for j in sender.support(t):
            gap = float(values.max() - values[j])
            if gap > OPT_TOL:
                return CseVerdict(False, 'sender', gap,
                                  f'type {type_id!r} gains {gap:g} by not sending {game.messages[j]!r}')

    for j, m in enumerate(game.messages):
        if game.is_wage:
            gap = abs(float(receiver.wages[j] - beliefs.matrix[j] @ game.productivity))
        else:
            values = game.receiver_values(beliefs.matrix[j], j)
            played = np.flatnonzero(receiver.matrix[j] > 0)
            gap = float(values.max() - values[played].min())
        if gap > OPT_TOL:
            return CseVerdict(False, 'receiver', gap, f'receiver response at {m!r} is {gap:g} short of optimal')
    return CseVerdict(True)
