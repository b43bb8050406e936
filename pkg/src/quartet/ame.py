"""Pair-versus-pair reshapes of four-party tensors and the distance of every
pair reduction from maximal mixing.

For a cut such as AC|BD the state tensor t[i,j,k,l] becomes the matrix
M[(i,k), (j,l)]; M M^dagger equals the reduction onto the row pair, so the
per-cut deviation ||d^2 M M^dagger - I||_F^2 vanishes exactly when that pair is
maximally mixed.  Three cuts cover all six pairs of a four-party pure state.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .ascent import ascend
from .core import DomainError, PureState, ShapeError, apply_kept_operator, reduced_matrix

CUTS = ("AB_CD", "AC_BD", "AD_BC")
_CUT_AXES = {
    "AB_CD": ((0, 1), (2, 3)),
    "AC_BD": ((0, 2), (1, 3)),
    "AD_BC": ((0, 3), (1, 2)),
}


@dataclass(frozen=True)
class ReshapeMatrix:
    """A four-party tensor flattened across one pair cut."""

    cut: str
    matrix: np.ndarray


def _check_equal_dims(dims, n_parties=None):
    dims = tuple(dims)
    if n_parties is not None and len(dims) != n_parties:
        raise DomainError(f"expected {n_parties} parties, got {len(dims)}")
    if len(set(dims)) != 1:
        raise DomainError(f"equal local dimensions required, got {dims}")
    return dims


def reshape(s: PureState, cut: str) -> ReshapeMatrix:
    """Flatten a four-party state across the named cut.

    Row index runs over the first pair of the cut label, column index over the
    second, each in row-major order.
    """
    _check_equal_dims(s.dims, 4)
    if cut not in _CUT_AXES:
        raise DomainError(f"unknown cut {cut!r}; expected one of {', '.join(CUTS)}")
    rows, cols = _CUT_AXES[cut]
    d = s.dims[0]
    m = np.transpose(s.tensor(), rows + cols).reshape(d * d, d * d)
    return ReshapeMatrix(cut, m)


def _per_cut_value(amps, dims, rows) -> float:
    d_rows = math.prod(dims[a] for a in rows)
    rho = reduced_matrix(amps, dims, rows)
    delta = d_rows * rho - np.eye(d_rows)
    return float(np.sum(np.abs(delta) ** 2))


@dataclass(frozen=True)
class AmeDeviation:
    per_cut: dict
    total: float


def ame_deviation(s: PureState) -> AmeDeviation:
    """Per-cut and total distance of the pair reductions from maximal mixing."""
    dims = _check_equal_dims(s.dims, 4)
    per_cut = {
        cut: _per_cut_value(s.amps, dims, _CUT_AXES[cut][0]) for cut in CUTS
    }
    return AmeDeviation(per_cut, math.fsum(per_cut.values()))


def _cut_rows(dims):
    if len(dims) == 2:
        return {"A_B": (0,)}
    if len(dims) == 4:
        return {cut: _CUT_AXES[cut][0] for cut in CUTS}
    raise DomainError("deviation minimization supports two or four parties")


def deviation_value_raw(amps, dims) -> float:
    """Total deviation of raw amplitudes, summed over the cuts for these dims."""
    return math.fsum(_per_cut_value(amps, dims, rows) for rows in _cut_rows(dims).values())


def deviation_value_and_gradient_raw(amps, dims):
    """Total deviation and its Euclidean gradient (Re <ds|g> is the derivative)."""
    dims = tuple(dims)
    t = np.asarray(amps, dtype=complex).reshape(dims)
    value = 0.0
    g = np.zeros(t.size, dtype=complex)
    for rows in _cut_rows(dims).values():
        d_rows = math.prod(dims[a] for a in rows)
        rho = reduced_matrix(amps, dims, rows)
        delta = d_rows * rho - np.eye(d_rows)
        value += float(np.sum(np.abs(delta) ** 2))
        g += 4.0 * d_rows * apply_kept_operator(t, delta, rows).reshape(-1)
    return value, g


@dataclass(frozen=True)
class RestartRecord:
    restart: int
    value: float
    grad_norm: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class DeviationReport:
    """Best deviation found by multi-start descent plus per-restart diagnostics."""

    floor: float
    state: PureState
    per_cut: dict
    grad_norm: float
    iterations: int
    converged: bool
    restarts: list = field(repr=False)


def minimize_deviation(dims, restarts: int = 50, seed: int = 0, max_iters: int = 5000,
                       grad_tol: float = 1e-8, start: PureState = None) -> DeviationReport:
    """Multi-start descent of the total deviation over normalized states.

    Supports two or four parties of equal local dimension.  Restart k draws a
    Haar-random start from a (seed, k) sub-seed; an optional explicit ``start``
    is prepended.  Returns the lowest total found (first restart wins ties).
    """
    dims = _check_equal_dims(dims)
    rows_by_cut = _cut_rows(dims)
    n_amps = math.prod(dims)
    if restarts < 1 and start is None:
        raise DomainError("restarts must be >= 1 when no explicit start is given")

    def value_fn(a):
        return -deviation_value_raw(a, dims)

    def value_grad_fn(a):
        v, g = deviation_value_and_gradient_raw(a, dims)
        return -v, -g

    starts = []
    if start is not None:
        if tuple(start.dims) != dims:
            raise ShapeError(f"start state has dims {start.dims}, expected {dims}")
        starts.append(start.amps)
    for r in range(max(restarts, 0)):
        rng = np.random.default_rng([seed, r])
        z = rng.standard_normal(n_amps) + 1j * rng.standard_normal(n_amps)
        starts.append(z / np.linalg.norm(z))

    records = []
    best = None
    for r, amps0 in enumerate(starts):
        outcome = ascend(value_fn, value_grad_fn, amps0,
                         grad_tol=grad_tol, max_iters=max_iters)
        value = -outcome.value
        records.append(RestartRecord(r, value, outcome.grad_norm,
                                     outcome.iterations, outcome.converged))
        if best is None or value < best[0]:
            best = (value, outcome, r)
    value, outcome, best_index = best
    state = PureState(dims, outcome.amps)
    per_cut = {cut: _per_cut_value(state.amps, dims, rows) for cut, rows in rows_by_cut.items()}
    return DeviationReport(
        floor=value,
        state=state,
        per_cut=per_cut,
        grad_norm=outcome.grad_norm,
        iterations=outcome.iterations,
        converged=outcome.converged,
        restarts=records,
    )
