"""Regimes of the binary-investment game and the statistics harness for the published block tables."""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import special, stats

from ._common import BlockStatsError, DegenerateSampleError, _check_chi, invoker
from ._fixtures import KMN_HYBRID, data_path, kmn_game
from ._refinement import CURSED, refine_equilibrium_set
from ._solver import enumerate_pure_cse, solve_support_cse

logger = logging.getLogger(__name__)

POOLING_THRESHOLD = 11 / 20
SEPARATING_THRESHOLD = 31 / 40
BLOCK_COLUMNS = ('treatment', 'block', 'worker_type', 'n', 'mean', 'sd')
TREATMENTS = ('SIG2', 'SIG3')
WORKER_TYPES = ('high', 'low')
ROUNDING = 0.0005
CI_LEVEL = 0.95
BUNDLED_TABLES = ('tables_sig2.csv', 'tables_sig3.csv')


@dataclass(frozen=True)
class RegimeVerdict:
    chi: float
    separating_survives: bool
    pooling_survives: bool
    hybrid_invest_prob: float = None


def hybrid_probability(chi):
    """Investment probability of the high type in the hybrid equilibrium."""
    return (40 * chi - 22) / 9


def regime(chi):
    """Which equilibria of the binary-investment game survive the cursed intuitive criterion."""
    chi = _check_chi(chi)
    hybrid = hybrid_probability(chi) if POOLING_THRESHOLD < chi < SEPARATING_THRESHOLD else None
    return RegimeVerdict(chi, chi <= SEPARATING_THRESHOLD, chi >= POOLING_THRESHOLD, hybrid)


def regime_prediction(chi, worker_type='high'):
    """Predicted investment rate.

    Low types never invest. High types invest surely while only separation
    survives, at the hybrid rate where all three survive and never once only
    pooling survives; the hybrid rate is continued to the closed boundaries.
    """
    chi = _check_chi(chi)
    if worker_type == 'low':
        return 0.0
    if chi < POOLING_THRESHOLD:
        return 1.0
    if chi <= SEPARATING_THRESHOLD:
        return min(1.0, max(0.0, hybrid_probability(chi)))
    return 0.0


def pipeline_regime(chi, game=None):
    """``regime`` recomputed by enumerating, solving and refining the game itself."""
    chi = _check_chi(chi)
    game = kmn_game() if game is None else game
    records = enumerate_pure_cse(game, chi) + solve_support_cse(game, chi, KMN_HYBRID)
    survivors = [r for r in refine_equilibrium_set(game, chi, records) if r.refinement_verdicts[CURSED]]
    hybrids = [r for r in survivors if r.kind == 'hybrid']
    invest = game.message_index('1')
    return RegimeVerdict(
        chi,
        any(r.kind == 'separating' for r in survivors),
        any(r.kind == 'pooling' for r in survivors),
        float(hybrids[0].sender.matrix[game.type_index('H'), invest]) if hybrids else None)


# Statistics ----------------------------------------------------------------------

@dataclass(frozen=True)
class BlockStats:
    """One table cell. ``block`` is None for the pooled 'All' row."""
    treatment: str
    block: int
    worker_type: str
    n: int
    mean: float
    sd: float

    def __post_init__(self):
        if self.treatment not in TREATMENTS:
            raise ValueError(f'{invoker}: unknown treatment {self.treatment!r}.')
        if self.worker_type not in WORKER_TYPES:
            raise ValueError(f'{invoker}: worker type should be high or low, not {self.worker_type!r}.')
        if self.n < 1:
            raise ValueError(f'{invoker}: a block needs at least one observation.')
        if not 0 <= self.mean <= 1:
            raise ValueError(f'{invoker}: an investment rate should lie in [0, 1], not {self.mean}.')
        if self.sd < 0:
            raise ValueError(f'{invoker}: a standard deviation cannot be negative.')

    @property
    def label(self):
        return f'{self.treatment} block {"All" if self.block is None else self.block} {self.worker_type}'


def load_block_stats(path):
    """Read block statistics from a CSV file with a treatment,block,worker_type,n,mean,sd header."""
    path = Path(path)
    records = []
    with path.open(newline='') as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            return records
        if tuple(name.strip() for name in reader.fieldnames) != BLOCK_COLUMNS:
            raise BlockStatsError(f'{path}:1: expected header {",".join(BLOCK_COLUMNS)}')
        for row in reader:
            line = reader.line_num
            if None in row or any(value is None for value in row.values()):
                raise BlockStatsError(f'{path}:{line}: expected {len(BLOCK_COLUMNS)} fields')
            try:
                block = row['block'].strip()
                record = BlockStats(row['treatment'].strip(), None if block.lower() == 'all' else int(block),
                                    row['worker_type'].strip(), int(row['n']), float(row['mean']), float(row['sd']))
            except ValueError as e:
                raise BlockStatsError(f'{path}:{line}: {e}') from None
            records.append(record)
    logger.debug('read %d block records from %s', len(records), path)
    return records


def load_bundled_block_stats():
    return [record for name in BUNDLED_TABLES for record in load_block_stats(data_path(name))]


@dataclass(frozen=True)
class TTest:
    t: float
    df: int
    p: float


def one_sample_t(mean, sd, n, mu0):
    """Two-tailed one-sample t-test from summary statistics.

    The tail probability is the regularized incomplete beta
    I_{df/(df+t²)}(df/2, 1/2).
    """
    if n < 2:
        raise ValueError(f'{invoker}: a t-test needs at least two observations.')
    if sd < 0 or not np.isfinite(sd):
        raise ValueError(f'{invoker}: the standard deviation should be finite and nonnegative.')
    if sd == 0:
        raise DegenerateSampleError(f'{invoker}: zero standard deviation; the sample either equals {mu0} or not.')
    df = n - 1
    t = (mean - mu0) / (sd / math.sqrt(n))
    p = float(special.betainc(df / 2, 0.5, df / (df + t * t)))
    return TTest(t, df, min(1.0, p))


def binary_moments(n, mean):
    """Count, mean and sample SD of binary data with ``n`` observations averaging about ``mean``."""
    k = int(round(n * mean))
    exact = k / n
    sd = math.sqrt(k * (n - k) / (n * (n - 1))) if n > 1 else 0.0
    return k, exact, sd


def confidence_interval(mean, sd, n, level=CI_LEVEL):
    half = stats.t.ppf(0.5 + level / 2, n - 1) * sd / math.sqrt(n)
    return mean - half, mean + half


@dataclass(frozen=True)
class PredictionRow:
    """One cell compared with a prediction.

    ``exact_moments`` tells whether the mean and SD were rebuilt from the
    binary count. A p-value is None for a zero-variance cell, in which case
    the matching ``*_equal`` flag says whether the cell equals the
    prediction exactly. The interval is raw; clip it only for display.
    """
    stats: BlockStats
    exact_moments: bool
    mean: float
    sd: float
    ci_lo: float
    ci_hi: float
    intuitive_prediction: float
    p_intuitive: float
    intuitive_equal: bool
    cursed_prediction: float = None
    p_cursed: float = None
    cursed_equal: bool = None


def _test(mean, sd, n, mu0):
    try:
        return one_sample_t(mean, sd, n, mu0).p, None
    except DegenerateSampleError:
        return None, bool(abs(mean - mu0) <= 1e-12)


def prediction_report(block_stats, chi=None):
    """Test every cell against the intuitive criterion and optionally the cursed prediction at ``chi``."""
    chi = None if chi is None else _check_chi(chi)
    rows = []
    for cell in block_stats:
        mean, sd = cell.mean, cell.sd
        exact = False
        if cell.n > 1:
            _, exact_mean, exact_sd = binary_moments(cell.n, cell.mean)
            if abs(exact_mean - cell.mean) <= ROUNDING and abs(exact_sd - cell.sd) <= ROUNDING:
                mean, sd, exact = exact_mean, exact_sd, True
        if cell.n > 1:
            ci_lo, ci_hi = confidence_interval(mean, sd, cell.n)
        else:
            ci_lo = ci_hi = mean
        target = 1.0 if cell.worker_type == 'high' else 0.0
        p_intuitive, intuitive_equal = _test(mean, sd, cell.n, target) if cell.n > 1 else (None, None)
        cursed = p_cursed = cursed_equal = None
        if chi is not None:
            cursed = regime_prediction(chi, cell.worker_type)
            p_cursed, cursed_equal = _test(mean, sd, cell.n, cursed) if cell.n > 1 else (None, None)
        rows.append(PredictionRow(cell, exact, mean, sd, float(ci_lo), float(ci_hi), target, p_intuitive,
                                  intuitive_equal, cursed, p_cursed, cursed_equal))
    return rows


def format_p(p):
    """Table style: '<0.001' below a thousandth, three decimals otherwise, '---' when undefined."""
    if p is None:
        return '---'
    return '<0.001' if p < 0.001 else f'{p:.3f}'
