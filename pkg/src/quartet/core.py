"""Complex amplitude tensors, reductions, and spectra for small multi-party systems.

Amplitudes are stored flat in row-major order with party 0 most significant:
for four parties the flat index of the multi-index (i, j, k, l) is
``((i*d1 + j)*d2 + k)*d3 + l``.  Containers are immutable after construction
and hold complex128 data throughout.
"""

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10
MAX_PARTIES = 8
PARTY_LETTERS = "ABCDEFGH"


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


class DomainError(ValueError):
    """Input lies outside an operation's domain."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Pure state of ``len(dims)`` parties with local dimensions ``dims``."""

    dims: tuple
    amps: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise DomainError(f"local dimensions must all be >= 2, got {dims}")
        if len(dims) > MAX_PARTIES:
            raise DomainError(f"at most {MAX_PARTIES} parties are supported")
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.size != math.prod(dims):
            raise ShapeError(
                f"dims {dims} require {math.prod(dims)} amplitudes, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per party."""
        return self.amps.reshape(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) < tol


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian reduced density matrix on a ``dim``-dimensional space."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        dim = int(self.dim)
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (dim, dim):
            raise ShapeError(f"expected a {dim}x{dim} matrix, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise DomainError("matrix entries must be finite")
        if np.max(np.abs(entries - entries.conj().T)) >= HERMITIAN_TOL:
            raise DomainError("matrix is not Hermitian within tolerance")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "entries", _frozen(entries))

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order with matching orthonormal eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(np.array(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _frozen(np.array(self.eigenvectors, dtype=complex)))


def basis_state(dims, occupation) -> PureState:
    """Computational basis state |occupation> for the given dims."""
    dims = tuple(int(d) for d in dims)
    amps = np.zeros(math.prod(dims), dtype=complex)
    amps[np.ravel_multi_index(tuple(occupation), dims)] = 1.0
    return PureState(dims, amps)


def from_terms(dims, terms) -> PureState:
    """Build a state from a mapping of multi-indices to amplitudes."""
    dims = tuple(int(d) for d in dims)
    amps = np.zeros(math.prod(dims), dtype=complex)
    for occ, coeff in terms.items():
        amps[np.ravel_multi_index(tuple(occ), dims)] += coeff
    return PureState(dims, amps)


def normalize(s: PureState) -> PureState:
    n = s.norm()
    if n == 0.0:
        raise DomainError("cannot normalize the zero vector")
    return PureState(s.dims, s.amps / n)


def inner(a: PureState, b: PureState) -> complex:
    """Inner product <a|b>, conjugate-linear in the first argument."""
    if a.dims != b.dims:
        raise ShapeError(f"dims mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amps, b.amps))


def conjugate(s: PureState) -> PureState:
    """Componentwise complex conjugate in the computational basis."""
    return PureState(s.dims, s.amps.conj())


def tensor_product(parts) -> PureState:
    """Combine states on disjoint party sets; norms multiply."""
    parts = list(parts)
    if not parts:
        raise DomainError("tensor_product needs at least one factor")
    amps = parts[0].amps
    dims = list(parts[0].dims)
    for p in parts[1:]:
        amps = np.kron(amps, p.amps)
        dims.extend(p.dims)
    return PureState(tuple(dims), amps)


def reduced_matrix(amps: np.ndarray, dims, keep) -> np.ndarray:
    """Raw reduced density matrix over the kept parties, no container validation."""
    dims = tuple(dims)
    keep = tuple(sorted(keep))
    t = np.asarray(amps, dtype=complex).reshape(dims)
    traced = tuple(i for i in range(len(dims)) if i not in keep)
    rho = np.tensordot(t, t.conj(), axes=(traced, traced))
    d = math.prod(dims[i] for i in keep)
    return rho.reshape(d, d)


def partial_trace(s: PureState, keep) -> DensityMatrix:
    """Trace out every party not listed in ``keep``.

    Kept parties retain their original relative order; ``keep`` must be a
    nonempty proper subset of the parties.
    """
    keep = sorted({party_index(p, s.n_parties) for p in keep})
    if not keep:
        raise DomainError("keep set must be nonempty")
    if len(keep) == s.n_parties:
        raise DomainError("keep set must be a proper subset of the parties")
    rho = reduced_matrix(s.amps, s.dims, keep)
    return DensityMatrix(rho.shape[0], rho)


def eigh(m: DensityMatrix) -> Spectrum:
    """Spectral decomposition with deterministic ordering and phases.

    Eigenvalues are returned in descending order (stable under ties); each
    eigenvector is rotated so its largest-magnitude component is real positive.
    """
    lam, vec = np.linalg.eigh(np.asarray(m.entries))
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    vec = vec[:, order].copy()
    for k in range(vec.shape[1]):
        j = int(np.argmax(np.abs(vec[:, k])))
        pivot = vec[j, k]
        if pivot != 0:
            vec[:, k] *= pivot.conjugate() / abs(pivot)
    return Spectrum(lam, vec)


def apply_local_unitary(s: PureState, party: int, u) -> PureState:
    """Apply a unitary to one party, leaving the others untouched."""
    if party < 0 or party >= s.n_parties:
        raise DomainError(f"party {party} out of range")
    d = s.dims[party]
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ShapeError(f"expected a {d}x{d} matrix for party {party}, got {u.shape}")
    if np.linalg.norm(u.conj().T @ u - np.eye(d)) >= UNITARY_TOL:
        raise DomainError("matrix is not unitary within tolerance")
    t = np.tensordot(u, s.tensor(), axes=([1], [party]))
    t = np.moveaxis(t, 0, party)
    return PureState(s.dims, t.reshape(-1))


def apply_kept_operator(t: np.ndarray, op: np.ndarray, keep) -> np.ndarray:
    """Apply ``op`` on the kept axes of tensor ``t`` (identity elsewhere)."""
    keep = tuple(keep)
    moved = np.moveaxis(t, keep, range(len(keep)))
    head = math.prod(moved.shape[: len(keep)])
    out = (op @ moved.reshape(head, -1)).reshape(moved.shape)
    return np.moveaxis(out, range(len(keep)), keep)


def random_state(dims, rng) -> PureState:
    """Haar-random pure state: normalized i.i.d. standard complex Gaussians."""
    n = math.prod(tuple(dims))
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(tuple(dims), z / np.linalg.norm(z))


def random_unitary(d: int, rng) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def party_index(party, n_parties: int) -> int:
    """Resolve a party given as an index or a letter A, B, C, ..."""
    if isinstance(party, str):
        label = party.strip().upper()
        if len(label) == 1 and label in PARTY_LETTERS[:n_parties]:
            return PARTY_LETTERS.index(label)
        if label.isdigit():
            party = int(label)
        else:
            raise DomainError(f"unknown party {party!r} for {n_parties} parties")
    party = int(party)
    if party < 0 or party >= n_parties:
        raise DomainError(f"party {party} out of range for {n_parties} parties")
    return party


def state_to_json(s: PureState) -> dict:
    """JSON form: {"dims": [...], "amps": [[re, im], ...]} in row-major order."""
    return {
        "dims": [int(d) for d in s.dims],
        "amps": [[float(z.real), float(z.imag)] for z in s.amps],
    }


def state_from_json(obj) -> PureState:
    """Parse the JSON state form, rejecting malformed or mismatched payloads."""
    if not isinstance(obj, dict):
        raise DomainError("state payload must be a JSON object")
    if "dims" not in obj or "amps" not in obj:
        raise DomainError('state payload needs "dims" and "amps" keys')
    dims = obj["dims"]
    amps = obj["amps"]
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise DomainError('"dims" must be a list of integers')
    if not isinstance(amps, list):
        raise DomainError('"amps" must be a list of [re, im] pairs')
    expected = math.prod(dims) if dims else 0
    if len(amps) != expected:
        raise DomainError(f'"amps" has {len(amps)} entries, dims {dims} require {expected}')
    flat = np.empty(expected, dtype=complex)
    for i, pair in enumerate(amps):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DomainError(f'"amps"[{i}] is not an [re, im] pair')
        try:
            flat[i] = complex(float(pair[0]), float(pair[1]))
        except (TypeError, ValueError) as exc:
            raise DomainError(f'"amps"[{i}] is not numeric') from exc
    return PureState(tuple(dims), flat)
