"""Closed-form equilibrium geometry of the two-type Spence job-market model."""

import ast
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from ._common import OPT_TOL, _check_chi, invoker
from ._game import PriorDistribution, SignalingGame, WageQuadratic

logger = logging.getLogger(__name__)

HIGH, LOW = 'H', 'L'
INVERSE_TOL = 1e-10
MONOTONE_STEP = 1e-6
CHECK_POINTS = 201


class CostFunction:
    """An education cost c(e|θ) with an optional closed-form inverse in e."""

    def __init__(self, name, cost, inverse=None):
        self.name = name
        self._cost = cost
        self._inverse = inverse

    def __call__(self, e, theta):
        return self._cost(e, theta)

    @property
    def has_inverse(self):
        return self._inverse is not None

    def inverse(self, value, theta):
        return self._inverse(value, theta)

    def __repr__(self):
        return f'CostFunction({self.name!r})'

    @classmethod
    def linear(cls):
        return cls('linear', lambda e, theta: e / theta, lambda v, theta: v * theta)

    @classmethod
    def quadratic(cls):
        return cls('quadratic', lambda e, theta: e ** 2 / theta, lambda v, theta: math.sqrt(v * theta))

    @classmethod
    def power(cls, k):
        k = float(k)
        if not np.isfinite(k) or k <= 0:
            raise ValueError(f'{invoker}: the exponent of a power cost should be positive, not {k}.')
        return cls(f'power:{k:g}', lambda e, theta: e ** k / theta, lambda v, theta: (v * theta) ** (1 / k))

    @classmethod
    def expression(cls, text):
        return cls(f'expr:{text}', _compile_expression(text))


_FUNCTIONS = {'sqrt': math.sqrt, 'exp': math.exp, 'log': math.log}
_NAMES = {'e', 'theta', 'pi'}
_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Load, ast.Call,
          ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd)


def _compile_expression(text):
    """Turn an arithmetic expression in ``e`` and ``theta`` into a function.

    Only numbers, the names e, theta and pi, the operators + - * / ** and
    the functions sqrt, exp and log are accepted.
    """
    try:
        tree = ast.parse(text, mode='eval')
    except SyntaxError as e:
        raise ValueError(f'{invoker}: cannot parse the cost expression {text!r}: {e.msg}.') from None
    for node in ast.walk(tree):
        if not isinstance(node, _NODES):
            raise ValueError(f'{invoker}: {type(node).__name__} is not allowed in a cost expression.')
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ValueError(f'{invoker}: only numeric constants are allowed in a cost expression.')
        if isinstance(node, ast.Name) and node.id not in _NAMES and node.id not in _FUNCTIONS:
            raise ValueError(f'{invoker}: unknown name {node.id!r} in a cost expression.')
        if isinstance(node, ast.Call) and (not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS
                                           or node.keywords or len(node.args) != 1):
            raise ValueError(f'{invoker}: only sqrt, exp and log of one argument may be called.')
    code = compile(tree, '<cost>', 'eval')
    namespace = {'__builtins__': {}, 'pi': math.pi, **_FUNCTIONS}

    def cost(e, theta):
        return float(eval(code, namespace, {'e': e, 'theta': theta}))

    return cost


def cost_from_spec(spec):
    """Build a cost from 'linear', 'quadratic', 'power:K' or 'expr:EXPRESSION'."""
    spec = spec.strip()
    if spec == 'linear':
        return CostFunction.linear()
    if spec == 'quadratic':
        return CostFunction.quadratic()
    if spec.startswith('power:'):
        try:
            return CostFunction.power(float(spec[len('power:'):]))
        except ValueError as e:
            raise ValueError(f'{invoker}: bad power cost {spec!r}: {e}') from None
    if spec.startswith('expr:'):
        return CostFunction.expression(spec[len('expr:'):])
    raise ValueError(f'{invoker}: unknown cost {spec!r}; use linear, quadratic, power:K or expr:EXPRESSION.')


@dataclass(frozen=True)
class Interval:
    lo: float = 0.0
    hi: float = 0.0
    empty: bool = False

    def __post_init__(self):
        if not self.empty and self.lo > self.hi:
            raise ValueError(f'{invoker}: interval bounds are reversed ({self.lo} > {self.hi}).')

    @classmethod
    def empty_set(cls):
        return cls(math.nan, math.nan, True)

    def contains(self, x, tol=OPT_TOL):
        return not self.empty and self.lo - tol <= x <= self.hi + tol


@dataclass(frozen=True)
class WagePair:
    w_L: float
    w_H: float


@dataclass(frozen=True)
class SpenceModel:
    """Two types θ_L < θ_H, prior p on θ_H and an education cost c(e|θ).

    Construction spot-checks that c(0|θ) = 0, that c rises in e and that
    the high type's cost lies below the low type's on the working range.
    A non-convex cost only triggers a warning.
    """
    theta_l: float
    theta_h: float
    p: float
    cost: CostFunction

    def __post_init__(self):
        for name in ('theta_l', 'theta_h', 'p'):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.generic)) or not np.isfinite(value):
                raise ValueError(f'{invoker}: {name} should be a finite number.')
            object.__setattr__(self, name, float(value))
        if not 0 < self.theta_l < self.theta_h:
            raise ValueError(f'{invoker}: the productivities should satisfy 0 < theta_l < theta_h.')
        if not 0 < self.p < 1:
            raise ValueError(f'{invoker}: p should lie in (0, 1).')
        self._validate_cost()

    @property
    def delta(self):
        return self.theta_h - self.theta_l

    @property
    def e_max(self):
        """Initial upper end of the working range."""
        return 10 * self.delta * self.theta_l

    def theta(self, type_id):
        if type_id == HIGH:
            return self.theta_h
        if type_id == LOW:
            return self.theta_l
        raise ValueError(f'{invoker}: the Spence types are {HIGH!r} and {LOW!r}, not {type_id!r}.')

    def c(self, e, type_id):
        return self.cost(e, self.theta(type_id))

    def _validate_cost(self):
        grid = np.linspace(0.0, self.e_max, CHECK_POINTS)
        try:
            low = np.array([self.c(e, LOW) for e in grid])
            high = np.array([self.c(e, HIGH) for e in grid])
            low_next = np.array([self.c(e + MONOTONE_STEP, LOW) for e in grid])
            high_next = np.array([self.c(e + MONOTONE_STEP, HIGH) for e in grid])
        except (ArithmeticError, ValueError) as e:
            raise ValueError(f'{invoker}: the cost {self.cost.name} fails on the working range: {e}') from None
        if not all(np.all(np.isfinite(a)) for a in (low, high, low_next, high_next)):
            raise ValueError(f'{invoker}: the cost {self.cost.name} is not finite on the working range.')
        if abs(low[0]) > 1e-12 or abs(high[0]) > 1e-12:
            raise ValueError(f'{invoker}: the cost {self.cost.name} should vanish at zero education.')
        if np.any(low_next <= low) or np.any(high_next <= high):
            raise ValueError(f'{invoker}: the cost {self.cost.name} should be strictly increasing in education.')
        if np.any(high[1:] >= low[1:]):
            raise ValueError(f'{invoker}: the high type should have the lower cost at every positive education.')
        curvature = np.concatenate([np.diff(low, 2), np.diff(high, 2)])
        if np.any(curvature < -1e-9 * max(1.0, float(np.abs(low).max()))):
            warnings.warn(f'{invoker}: the cost {self.cost.name} is not convex on [0, {self.e_max:g}].',
                          RuntimeWarning)

    def to_signaling_game(self, grid, name='spence'):
        """The model on a finite education grid, with a posterior-mean wage receiver."""
        grid = np.asarray(grid, dtype=np.float64)
        if grid.ndim != 1 or grid.size == 0 or np.any(grid < 0) or len(np.unique(grid)) != grid.size:
            raise ValueError(f'{invoker}: the education grid should hold distinct nonnegative values.')
        messages = tuple(format(float(e), '.12g') for e in grid)
        cost = np.array([[self.c(e, t) for e in grid] for t in (HIGH, LOW)])
        return SignalingGame(PriorDistribution((HIGH, LOW), [self.p, 1 - self.p]), messages,
                             WageQuadratic(np.array([self.theta_h, self.theta_l])), sender_cost=cost, name=name)


def cost_inverse(model, value, type_id):
    """Education e with c(e|θ) = value, closed form when available, else bisection."""
    if not np.isfinite(value) or value < 0:
        raise ValueError(f'{invoker}: the cost value should be finite and nonnegative, not {value}.')
    if value == 0:
        return 0.0
    theta = model.theta(type_id)
    if model.cost.has_inverse:
        return float(model.cost.inverse(value, theta))
    e_max = model.e_max
    while True:
        try:
            level = model.cost(e_max, theta)
        except ArithmeticError:
            level = math.inf
        if not np.isfinite(level):
            raise ValueError(f'{invoker}: the cost {model.cost.name} is not finite at e={e_max:g} while bracketing.')
        if level >= value:
            break
        e_max *= 2
    root = bisect(lambda e: model.cost(e, theta) - value, 0.0, e_max, xtol=1e-14, maxiter=400)
    if abs(model.cost(root, theta) - value) > INVERSE_TOL * max(1.0, value):
        logger.debug('inverse of %s at %g is only accurate to %g', model.cost.name, value,
                     abs(model.cost(root, theta) - value))
    return float(root)


def separating_region(model, chi):
    """Education levels of the high type that support a separating χ-CSE (empty at χ = 1)."""
    chi = _check_chi(chi)
    if chi == 1:
        return Interval.empty_set()
    target = (1 - chi) * model.delta
    return Interval(cost_inverse(model, target, LOW), cost_inverse(model, target, HIGH))


def pooling_region(model, chi):
    chi = _check_chi(chi)
    return Interval(0.0, cost_inverse(model, (1 - chi) * model.p * model.delta, LOW))


def hybrid_locus(model, chi, q):
    """High-type education when the low type pools on it with probability ``q``."""
    chi = _check_chi(chi)
    if not 0 <= q <= 1:
        raise ValueError(f'{invoker}: the mixing probability should lie in [0, 1], not {q}.')
    share = model.p / (model.p + (1 - model.p) * q)
    return cost_inverse(model, (1 - chi) * share * model.delta, LOW)


def riley_outcome(model, chi):
    """(e_H, e_L) of the least-cost separating χ-CSE; (0, 0) when fully cursed."""
    chi = _check_chi(chi)
    if chi == 1:
        return 0.0, 0.0
    return cost_inverse(model, (1 - chi) * model.delta, LOW), 0.0


def equilibrium_wages(model, chi):
    chi = _check_chi(chi)
    return WagePair(model.theta_l + model.p * chi * model.delta,
                    model.theta_h - (1 - model.p) * chi * model.delta)


def weak_set_dominates(a, b):
    """Weak set order on intervals: A dominates B iff both of A's endpoints are at least B's."""
    if a.empty or b.empty:
        raise ValueError(f'{invoker}: the weak set order is undefined for empty sets.')
    return a.lo >= b.lo and a.hi >= b.hi


# Criterion on the continuum of messages ----------------------------------------

@dataclass(frozen=True)
class SpenceCandidate:
    """A closed-form χ-CSE; ``q`` is the low type's probability of choosing e_H."""
    kind: str
    e_L: float
    e_H: float
    w_L: float
    w_H: float
    u_L: float
    u_H: float
    q: float = None


def spence_candidate(model, chi, kind, e=None, q=None):
    """Payoffs of a separating (at e_H = e), pooling (at e) or hybrid (at mixing ``q``) equilibrium."""
    chi = _check_chi(chi)
    if kind == 'separating':
        wages = equilibrium_wages(model, chi)
        return SpenceCandidate(kind, 0.0, e, wages.w_L, wages.w_H, wages.w_L, wages.w_H - model.c(e, HIGH))
    if kind == 'pooling':
        wage = model.p * model.theta_h + (1 - model.p) * model.theta_l
        return SpenceCandidate(kind, e, e, wage, wage, wage - model.c(e, LOW), wage - model.c(e, HIGH))
    if kind == 'hybrid':
        share = model.p / (model.p + (1 - model.p) * q)
        belief = chi * model.p + (1 - chi) * share
        w_high = model.theta_l + belief * model.delta
        w_low = model.theta_l + chi * model.p * model.delta
        e_high = hybrid_locus(model, chi, q)
        return SpenceCandidate(kind, 0.0, e_high, w_low, w_high, w_low, w_high - model.c(e_high, HIGH), q)
    raise ValueError(f'{invoker}: unknown candidate kind {kind!r}.')


def survives_spence_criterion(model, chi, candidate, tol=OPT_TOL):
    """Cursed intuitive criterion with every education level available as a message.

    The best χ-consistent wage is w_H^χ. A deviation to e kills the
    candidate only if the low type is equilibrium dominated there while the
    high type is not, and the pinned belief then pays exactly w_H^χ. So the
    candidate fails iff c_L⁻¹(w_H^χ - u_L) < c_H⁻¹(w_H^χ - u_H).
    """
    chi = _check_chi(chi)
    best = equilibrium_wages(model, chi).w_H
    high_room = best - candidate.u_H
    if high_room <= tol:
        return True
    upper = cost_inverse(model, high_room, HIGH)
    low_room = best - candidate.u_L
    lower = cost_inverse(model, low_room, LOW) if low_room > tol else 0.0
    return not lower < upper - tol


def riley_selection(model, chi, n=41):
    """Candidates on a grid over every equilibrium family that pass the criterion."""
    chi = _check_chi(chi)
    candidates = []
    separating = separating_region(model, chi)
    if not separating.empty:
        candidates += [spence_candidate(model, chi, 'separating', e)
                       for e in np.linspace(separating.lo, separating.hi, n)]
    pooling = pooling_region(model, chi)
    candidates += [spence_candidate(model, chi, 'pooling', e) for e in np.linspace(pooling.lo, pooling.hi, n)]
    if chi < 1:
        candidates += [spence_candidate(model, chi, 'hybrid', q=q) for q in np.linspace(0, 1, n + 2)[1:-1]]
    survivors = [c for c in candidates if survives_spence_criterion(model, chi, c)]
    logger.debug('chi=%g: %d of %d Spence candidates survive', chi, len(survivors), len(candidates))
    return survivors


REGION_COLUMNS = ('chi', 'sep_lo', 'sep_hi', 'pool_lo', 'pool_hi', 'riley_e', 'w_L', 'w_H')


def region_row(model, chi):
    """One row of the region sweep; an empty separating region has blank bounds."""
    separating = separating_region(model, chi)
    pooling = pooling_region(model, chi)
    wages = equilibrium_wages(model, chi)
    return {
        'chi': chi,
        'sep_lo': None if separating.empty else separating.lo,
        'sep_hi': None if separating.empty else separating.hi,
        'pool_lo': pooling.lo,
        'pool_hi': pooling.hi,
        'riley_e': riley_outcome(model, chi)[0],
        'w_L': wages.w_L,
        'w_H': wages.w_H,
    }
