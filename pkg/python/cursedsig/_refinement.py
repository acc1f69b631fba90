"""The cursed intuitive criterion and its χ = 0 special case, the standard intuitive criterion."""

import dataclasses
import logging
from dataclasses import dataclass

import numpy as np

from ._beliefs import BeliefRegion
from ._common import InfeasiblePinError, OPT_TOL, _check_chi, invoker
from ._solver import attainable_responses, deter_deviation

logger = logging.getLogger(__name__)

CURSED = 'cursed_intuitive'
STANDARD = 'standard_intuitive'
ALL_DOMINATED = 'all types dominated'


@dataclass(frozen=True)
class MessageCheck:
    """What the criterion found at one off-path message.

    ``pinned`` maps each equilibrium-dominated type to its pinned belief
    χF(θ); ``region`` describes the admissible belief set (None when the
    pins are infeasible). ``support`` is the belief and response that keep
    every type from deviating, when one exists.
    """
    message: str
    dominated_types: tuple
    pinned: dict
    region: dict
    survives: bool
    note: str = ''
    support: object = None


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    chi: float
    checks: tuple

    @property
    def passed(self):
        return all(check.survives for check in self.checks)

    def __bool__(self):
        return self.passed

    def failing_messages(self):
        return tuple(check.message for check in self.checks if not check.survives)


def _message_index(game, m):
    return int(m) if isinstance(m, (int, np.integer)) else game.message_index(m)


def br_over_all_beliefs(game, m, chi=0.0):
    """Receiver responses at ``m`` that are best responses to some admissible belief.

    With ``chi = 0`` the beliefs range over the whole simplex; otherwise
    over the χ-consistent beliefs above the floor χF. Returns action ids in
    a game with finite actions and the wage interval ``(lo, hi)`` in a wage
    game.
    """
    chi = _check_chi(chi)
    region = BeliefRegion.floor(game.prior, chi)
    if game.is_wage:
        return region.minimize(game.productivity)[0], region.maximize(game.productivity)[0]
    actions = sorted({a for subset, _ in attainable_responses(game, m, region) for a in subset})
    return tuple(game.actions[a] for a in actions)


def _best_deviation_payoffs(game, j, chi):
    """Per type, the largest payoff from sending ``j`` against any admissible best response."""
    if game.is_wage:
        _, hi = br_over_all_beliefs(game, j, chi)
        return hi - game.sender_cost[:, j]
    actions = [game.action_index(a) for a in br_over_all_beliefs(game, j, chi)]
    return game.sender_table(j)[:, actions].max(axis=1)


def equilibrium_dominated_types(game, eq, m, chi=None):
    """Types whose equilibrium payoff strictly beats anything ``m`` could bring them.

    The receiver replies considered are best responses to beliefs in the
    χ-floor set {μ : μ ≥ χ·prior}, not to the whole simplex; at χ = 0 the
    two coincide. ``chi`` defaults to the equilibrium's own χ.
    """
    chi = eq.chi if chi is None else _check_chi(chi)
    j = _message_index(game, m)
    if game.messages[j] in eq.onpath_messages:
        raise ValueError(f'{invoker}: {game.messages[j]!r} is on the equilibrium path.')
    best = _best_deviation_payoffs(game, j, chi)
    dominated = np.asarray(eq.sender_payoffs) > best + OPT_TOL
    return tuple(t for t, flag in zip(game.types, dominated) if flag)


def constrained_belief_set(T, prior, chi):
    """Beliefs pinned at χF(θ) on ``T`` and above the floor elsewhere.

    Raises
    ------
    InfeasiblePinError
        If ``T`` holds every type and χ < 1.
    """
    return BeliefRegion.pinned_at_floor(prior, _check_chi(chi), T)


def _criterion(game, eq, chi, name):
    checks = []
    for m in game.messages:
        if m in eq.onpath_messages:
            continue
        dominated = equilibrium_dominated_types(game, eq, m, chi)
        pinned = {t: chi * game.prior[t] for t in dominated}
        try:
            region = constrained_belief_set(dominated, game.prior, chi)
        except InfeasiblePinError:
            checks.append(MessageCheck(m, dominated, pinned, None, True, ALL_DOMINATED))
            continue
        support = deter_deviation(game, m, region, eq.sender_payoffs)
        checks.append(MessageCheck(m, dominated, pinned, region.describe(), support is not None, support=support))
        logger.debug('%s at chi=%g, message %r: T=%s, survives=%s', name, chi, m, dominated, support is not None)
    return CriterionReport(name, chi, tuple(checks))


def survives_cursed_intuitive(game, eq, chi=None):
    """Apply the χ-cursed intuitive criterion to a verified equilibrium.

    The equilibrium survives when every off-path message admits a belief in
    the pinned region and a best response to it under which no type strictly
    gains by deviating.
    """
    chi = eq.chi if chi is None else _check_chi(chi)
    return _criterion(game, eq, chi, CURSED)


def survives_standard_intuitive(game, eq):
    """The same test with χ = 0: BR over all of Δ(Θ) and dominated types pinned at zero."""
    return _criterion(game, eq, 0.0, STANDARD)


def refine_equilibrium_set(game, chi, eqs):
    """Annotate every record with both criterion verdicts; no record is dropped."""
    chi = _check_chi(chi)
    annotated = []
    for eq in eqs:
        cursed = survives_cursed_intuitive(game, eq, chi)
        standard = survives_standard_intuitive(game, eq)
        annotated.append(dataclasses.replace(
            eq,
            refinement_verdicts={**eq.refinement_verdicts, STANDARD: standard.passed, CURSED: cursed.passed},
            criterion_reports={**eq.criterion_reports, STANDARD: standard, CURSED: cursed}))
    return annotated
