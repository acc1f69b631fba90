"""Separating χ-CSE with a continuum of types and cost e²/θ."""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._common import _check_chi, invoker

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ('uniform', 'triangular', 'truncnorm')
SUPPORT_TOL = 1e-12
MEAN_TOL = 1e-9
DIFF_STEP = 1e-6


@dataclass(frozen=True)
class ContinuumModel:
    """Types on [theta_min, theta_max] with mean ``mean_theta``.

    When ``mean_theta`` is None it is the mean of ``distribution``;
    a given mean that disagrees with the distribution wins, with a warning.
    ``shape`` carries the triangular mode as a fraction of the support, or
    the truncated normal's (loc, scale).
    """
    theta_min: float
    theta_max: float
    mean_theta: float = None
    distribution: str = 'uniform'
    shape: tuple = ()

    def __post_init__(self):
        if not 0 < self.theta_min < self.theta_max or not np.isfinite(self.theta_max):
            raise ValueError(f'{invoker}: the support should satisfy 0 < theta_min < theta_max < inf.')
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f'{invoker}: unknown distribution {self.distribution!r}; use one of {DISTRIBUTIONS}.')
        object.__setattr__(self, 'shape', tuple(float(s) for s in self.shape))
        implied = float(self.density().mean())
        if self.mean_theta is None:
            object.__setattr__(self, 'mean_theta', implied)
        else:
            object.__setattr__(self, 'mean_theta', float(self.mean_theta))
            if abs(self.mean_theta - implied) > MEAN_TOL:
                warnings.warn(f'{invoker}: the given mean {self.mean_theta:g} differs from the {self.distribution} '
                              f'mean {implied:g}; using the given mean.', RuntimeWarning)
        if not self.theta_min < self.mean_theta < self.theta_max:
            raise ValueError(f'{invoker}: the mean should lie strictly inside the support.')

    @classmethod
    def from_mean(cls, theta_min, mean):
        """Uniform types on [theta_min, 2 * mean - theta_min]."""
        return cls(float(theta_min), 2.0 * mean - theta_min, float(mean))

    def density(self):
        """The type distribution as a frozen scipy.stats object."""
        width = self.theta_max - self.theta_min
        if self.distribution == 'uniform':
            return stats.uniform(loc=self.theta_min, scale=width)
        if self.distribution == 'triangular':
            mode = self.shape[0] if self.shape else 0.5
            return stats.triang(mode, loc=self.theta_min, scale=width)
        loc, scale = self.shape if self.shape else (self.theta_min + width / 2, width / 4)
        return stats.truncnorm((self.theta_min - loc) / scale, (self.theta_max - loc) / scale, loc=loc, scale=scale)

    def check_type(self, theta):
        if not self.theta_min - SUPPORT_TOL <= theta <= self.theta_max + SUPPORT_TOL:
            raise ValueError(f'{invoker}: type {theta} is outside [{self.theta_min}, {self.theta_max}].')


@dataclass(frozen=True)
class Schedule:
    """The separating education and wage schedules of one model at one χ."""
    model: ContinuumModel
    chi: float

    def education(self, theta):
        if self.chi == 1:
            return np.zeros_like(np.asarray(theta, dtype=np.float64))
        return np.sqrt(0.5 * (1 - self.chi) * (np.square(theta) - self.model.theta_min ** 2))

    def wage(self, theta):
        return self.chi * self.model.mean_theta + (1 - self.chi) * np.asarray(theta, dtype=np.float64)

    def __call__(self, theta):
        return self.education(theta), self.wage(theta)


def separating_schedule(model, chi):
    return Schedule(model, _check_chi(chi))


def separating_education(model, chi, theta):
    chi = _check_chi(chi)
    model.check_type(theta)
    return float(Schedule(model, chi).education(theta))


def separating_wage(model, chi, theta):
    return float(Schedule(model, _check_chi(chi)).wage(theta))


def pooling_education_bound(model, chi):
    """Largest pooled education the lowest type still accepts over separating at no cost."""
    chi = _check_chi(chi)
    return math.sqrt((1 - chi) * (model.theta_min * model.mean_theta - model.theta_min ** 2))


@dataclass(frozen=True)
class IncentiveCheck:
    best_type: float
    advantage: float
    step: float


def incentive_check(model, chi, theta, grid_size=10 ** 4):
    """Best type for ``theta`` to mimic on a support grid, and the gain over the truth.

    Truth-telling is optimal when the maximizer is within one ``step`` of
    ``theta`` and the gain is of the order of step².
    """
    chi = _check_chi(chi)
    if chi >= 1:
        raise ValueError(f'{invoker}: the incentive check needs chi < 1.')
    if grid_size < 100:
        raise ValueError(f'{invoker}: the incentive check needs a grid of at least 100 points.')
    model.check_type(theta)
    schedule = Schedule(model, chi)
    grid = np.linspace(model.theta_min, model.theta_max, int(grid_size))
    education, wage = schedule(grid)
    payoff = wage - education ** 2 / theta
    truthful = float(schedule.wage(theta) - schedule.education(theta) ** 2 / theta)
    best = int(np.argmax(payoff))
    return IncentiveCheck(float(grid[best]), float(payoff[best] - truthful), float(grid[1] - grid[0]))


def ode_residual(model, chi, theta_grid, schedule=None):
    """Largest violation of (w - χE[θ])·w'(e) = 2(1 - χ)e along a schedule.

    w'(e) is the ratio of central differences of wage and education in θ,
    with step 1e-6·θ; grid points within one step of the support ends are
    skipped. ``schedule`` maps θ to (education, wage) and defaults to the
    separating schedule; a flat education profile gives an infinite residual.
    """
    chi = _check_chi(chi)
    if chi >= 1:
        raise ValueError(f'{invoker}: the ODE check needs chi < 1.')
    schedule = separating_schedule(model, chi) if schedule is None else schedule
    worst = 0.0
    for theta in np.asarray(theta_grid, dtype=np.float64):
        h = DIFF_STEP * theta
        if theta - h <= model.theta_min or theta + h > model.theta_max:
            continue
        e_lo, w_lo = schedule(theta - h)
        e_hi, w_hi = schedule(theta + h)
        e_mid, w_mid = schedule(theta)
        if e_hi == e_lo:
            return math.inf
        slope = (w_hi - w_lo) / (e_hi - e_lo)
        residual = abs(float(w_mid * slope - chi * model.mean_theta * slope - 2 * (1 - chi) * e_mid))
        worst = max(worst, residual)
    return worst


COMPRESSION_COLUMNS = ('chi', 'slope', 'measured_slope', 'pivot_theta', 'pivot_wage')
SCHEDULE_COLUMNS = ('theta', 'chi', 'education', 'wage')


def wage_compression_report(model, chi_grid):
    """Per χ: the analytic wage slope 1 - χ, a measured slope and the pivot at θ = E[θ]."""
    rows = []
    for chi in chi_grid:
        chi = _check_chi(chi)
        schedule = Schedule(model, chi)
        measured = (schedule.wage(model.theta_max) - schedule.wage(model.theta_min)) / (model.theta_max - model.theta_min)
        rows.append({'chi': chi, 'slope': 1 - chi, 'measured_slope': float(measured),
                     'pivot_theta': model.mean_theta, 'pivot_wage': float(schedule.wage(model.mean_theta))})
    return rows


def schedule_table(model, chi_grid, n_theta=101):
    """Education and wage on an evenly spaced type grid for every χ."""
    thetas = np.linspace(model.theta_min, model.theta_max, n_theta)
    rows = []
    for chi in chi_grid:
        education, wage = separating_schedule(model, chi)(thetas)
        rows.extend({'theta': float(t), 'chi': float(chi), 'education': float(e), 'wage': float(w)}
                    for t, e, w in zip(thetas, education, wage))
    return rows
