import numpy as np

# All the accepted scalar types; np.generic correspond to all NumPy types.
scalar_types = (int, float, np.generic)
eps = np.finfo(np.float64).eps

invoker = 'cursedsig'

# Tolerance hierarchy. Probabilities are renormalized only when they are
# already within PROB_TOL of summing to one.
PROB_TOL = 1e-12
EQ_TOL = 1e-10
OPT_TOL = 1e-9
REPORT_DIGITS = 12


class GameFileError(ValueError):
    """A game file violates the schema. ``line`` is 1-based, or None if unknown."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ''
        if path is not None:
            where = f'{path}:{line}: ' if line is not None else f'{path}: '
        super().__init__(f'{where}{message}')


class InfeasiblePinError(ValueError):
    pass


class DegenerateSampleError(ValueError):
    pass


class BlockStatsError(ValueError):
    pass


class SearchBudgetError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    pass


def _check_chi(chi):
    if not isinstance(chi, scalar_types) or not np.isfinite(chi):
        raise ValueError(f'{invoker}: chi should be a finite scalar, not {chi!r}.')
    chi = float(chi)
    if chi < 0 or chi > 1:
        raise ValueError(f'{invoker}: chi should lie in [0, 1], not {chi}.')
    return chi


def _as_distribution(values, name, size=None):
    """Validate a probability vector.

    Parameters
    ----------
    values: array_like, shape (n,)
        Candidate probabilities.
    name: str
        What the vector is, for error messages.
    size: int, optional
        Expected length.

    Returns
    -------
    ndarray, shape (n,)
        A read-only copy, renormalized if the sum is within PROB_TOL of one.
    """
    try:
        dist = np.array(values, dtype=np.float64)
    except (TypeError, ValueError):
        raise ValueError(f'{invoker}: {name} should contain only scalars.')
    if dist.ndim != 1:
        raise ValueError(f'{invoker}: {name} should be a vector.')
    if size is not None and dist.size != size:
        raise ValueError(f'{invoker}: the size of {name} ({dist.size}) is inconsistent with {size} entries.')
    if not np.all(np.isfinite(dist)) or np.any(dist < 0) or np.any(dist > 1):
        raise ValueError(f'{invoker}: {name} should have entries in [0, 1].')
    total = dist.sum()
    if abs(total - 1) > PROB_TOL:
        raise ValueError(f'{invoker}: {name} should sum to 1, not {total!r}.')
    dist /= total
    dist.setflags(write=False)
    return dist


def _as_stochastic_matrix(rows, name, shape):
    matrix = np.array(rows, dtype=np.float64)
    if matrix.shape != shape:
        raise ValueError(f'{invoker}: {name} should have shape {shape}, not {matrix.shape}.')
    out = np.vstack([_as_distribution(row, f'{name} row {i}') for i, row in enumerate(matrix)])
    out.setflags(write=False)
    return out


def _frozen(array, dtype=np.float64):
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


def _fmt(x):
    """Locale-independent float formatting with REPORT_DIGITS significant digits."""
    if x is None:
        return ''
    x = float(x)
    if x == 0:
        return '0'
    return format(x, f'.{REPORT_DIGITS}g')
