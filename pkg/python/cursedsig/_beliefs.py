"""Cursed belief formation: perceived strategies, cursed Bayes updating and the belief floor."""

import itertools

import numpy as np

from ._common import InfeasiblePinError, PROB_TOL, _check_chi, _frozen, invoker
from ._game import SenderStrategy


def _check_dimensions(sender, prior):
    if tuple(sender.types) != tuple(prior.types):
        raise ValueError(f'{invoker}: the sender strategy and the prior list different types.')


def average_sender_strategy(sender, prior):
    """Return the type-averaged message distribution, sum over θ of F(θ)σ(m|θ)."""
    _check_dimensions(sender, prior)
    average = prior.weights @ sender.matrix
    return _frozen(average / average.sum())


def cursed_perception(sender, prior, chi):
    """Return the strategy a χ-cursed receiver believes each type plays.

    Each row is χ times the average strategy plus (1 - χ) times the true row.
    """
    chi = _check_chi(chi)
    average = average_sender_strategy(sender, prior)
    perceived = chi * average[None, :] + (1 - chi) * sender.matrix
    perceived /= perceived.sum(axis=1, keepdims=True)
    return SenderStrategy(sender.types, sender.messages, perceived)


def cursed_bayes_update(game, sender, chi, m):
    """Posterior over types after message ``m``, or None if ``m`` is off path.

    ``m`` is a message id or index. On path the posterior is
    χF(θ) + (1 - χ) times the Bayes posterior under the true strategy.
    """
    chi = _check_chi(chi)
    _check_dimensions(sender, game.prior)
    j = m if isinstance(m, (int, np.integer)) else game.message_index(m)
    joint = game.prior.weights * sender.matrix[:, j]
    total = joint.sum()
    if total <= 0:
        return None
    return _frozen(chi * game.prior.weights + (1 - chi) * (joint / total))


def belief_floor(prior, chi):
    """Componentwise lower bound χF(θ) on every χ-consistent belief."""
    chi = _check_chi(chi)
    return _frozen(chi * prior.weights)


def _target_mask(targets, types):
    mask = np.zeros(len(types), dtype=bool)
    for target in targets:
        if isinstance(target, (int, np.integer)):
            mask[target] = True
        else:
            if target not in types:
                raise ValueError(f'{invoker}: unknown type {target!r}.')
            mask[types.index(target)] = True
    return mask


def minimal_belief_on(targets, prior, chi):
    """The belief putting as little mass on ``targets`` as χ-consistency allows.

    Targets get exactly χF(θ); the residual is spread over the other types in
    proportion to the prior.
    """
    chi = _check_chi(chi)
    mask = _target_mask(targets, prior.types)
    floor = chi * prior.weights
    if mask.all():
        if chi < 1:
            raise InfeasiblePinError(f'{invoker}: pinning every type at its floor leaves mass {1 - chi:g} unassigned.')
        return _frozen(prior.weights)
    belief = np.where(mask, floor, 0.0)
    rest = prior.weights * ~mask
    belief += (1 - belief.sum()) * rest / rest.sum()
    return _frozen(belief)


class BeliefRegion:
    """Beliefs μ with lower ≤ μ ≤ upper componentwise and Σμ = 1.

    This covers the χ-consistent floor set (lower = χF), the criterion sets
    that pin some types at their floor (lower = upper = χF there) and, with
    χ = 0, the whole simplex.
    """

    def __init__(self, types, lower, upper=None, pinned=()):
        self.types = tuple(types)
        self.lower = _frozen(lower)
        self.upper = _frozen(np.ones(len(self.types)) if upper is None else upper)
        self.pinned = tuple(pinned)
        if self.lower.shape != (len(self.types),) or self.upper.shape != self.lower.shape:
            raise ValueError(f'{invoker}: region bounds should have one entry per type.')
        if np.any(self.lower > self.upper + PROB_TOL):
            raise ValueError(f'{invoker}: region lower bounds exceed upper bounds.')
        if self.lower.sum() > 1 + PROB_TOL or self.upper.sum() < 1 - PROB_TOL:
            raise InfeasiblePinError(f'{invoker}: no belief fits the bounds (lower mass {self.lower.sum():g}, '
                                     f'upper mass {self.upper.sum():g}).')

    @classmethod
    def floor(cls, prior, chi):
        return cls(prior.types, belief_floor(prior, chi))

    @classmethod
    def pinned_at_floor(cls, prior, chi, targets):
        """Floor set with the ``targets`` pinned exactly at χF(θ)."""
        floor = belief_floor(prior, chi)
        mask = _target_mask(targets, prior.types)
        upper = np.where(mask, floor, 1.0)
        pinned = tuple(t for t, pin in zip(prior.types, mask) if pin)
        return cls(prior.types, floor, upper, pinned)

    @property
    def residual(self):
        return max(0.0, 1.0 - float(self.lower.sum()))

    @property
    def is_point(self):
        slack = self.upper - self.lower
        return bool(self.residual <= PROB_TOL or np.sum(slack > PROB_TOL) <= 1
                    or abs(slack.sum() - self.residual) <= PROB_TOL)

    def contains(self, belief, tol=PROB_TOL):
        belief = np.asarray(belief, dtype=np.float64)
        return bool(abs(belief.sum() - 1) <= tol and np.all(belief >= self.lower - tol)
                    and np.all(belief <= self.upper + tol))

    def minimize(self, values):
        """Minimum of Σμ(θ)values(θ) over the region and a minimizer.

        Start from the lower bounds and hand the residual to the cheapest
        types first; for a box-constrained simplex this greedy fill is exact.
        """
        values = np.asarray(values, dtype=np.float64)
        belief = np.array(self.lower)
        residual = self.residual
        for i in np.argsort(values, kind='stable'):
            step = min(self.upper[i] - belief[i], residual)
            belief[i] += step
            residual -= step
            if residual <= 0:
                break
        return float(values @ belief), _frozen(belief)

    def maximize(self, values):
        value, belief = self.minimize(-np.asarray(values, dtype=np.float64))
        return -value, belief

    def vertices(self):
        """All vertices, in a deterministic order.

        A vertex has every coordinate but at most one at a bound.
        """
        n = len(self.types)
        found = []
        for free in range(n):
            others = [i for i in range(n) if i != free]
            choices = [(self.lower[i],) if self.upper[i] - self.lower[i] <= PROB_TOL else (self.lower[i], self.upper[i])
                       for i in others]
            for combo in itertools.product(*choices):
                belief = np.empty(n)
                belief[others] = combo
                belief[free] = 1 - sum(combo)
                if self.lower[free] - PROB_TOL <= belief[free] <= self.upper[free] + PROB_TOL:
                    belief[free] = min(max(belief[free], self.lower[free]), self.upper[free])
                    if not any(np.allclose(belief, v, atol=PROB_TOL, rtol=0) for v in found):
                        found.append(belief)
        return [_frozen(v) for v in found]

    def describe(self):
        return {
            'lower': dict(zip(self.types, map(float, self.lower))),
            'upper': dict(zip(self.types, map(float, self.upper))),
            'pinned': list(self.pinned),
            'is_point': self.is_point,
        }

    def __repr__(self):
        return f'BeliefRegion(types={self.types}, lower={self.lower.tolist()}, upper={self.upper.tolist()})'
