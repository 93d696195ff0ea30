"""Dense linear algebra on a truncated bosonic Fock space.

The one-body space is C^d with its standard orthonormal basis e_1..e_d.
States are stored as amplitude vectors over all occupation tuples
(n_1, ..., n_d) with n_1 + ... + n_d <= n_max, ordered by total particle
number first and lexicographically inside each particle-number sector.

Everything here is brute force on purpose: this module is the ground truth
that the closed-form expectation formulas in :mod:`chargedbose.bogolubov`
are checked against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.sparse as sp

__all__ = [
    "BasisSizeError",
    "TruncationError",
    "OccupationBasis",
    "FockVector",
    "FockOperator",
    "Coherent",
    "Squeezed",
    "Bogolubov",
    "build_basis",
    "ladder_matrix",
    "number_operator",
    "second_quantize_one_body",
    "second_quantize_two_body",
    "prepare_state",
    "displaced_state",
    "expectation",
    "sector_isometry",
]

#: Largest basis built by default; dense operators scale as size**2.
DEFAULT_MAX_BASIS = 4000
#: Default bound on the probability mass lost above ``n_max``.
DEFAULT_DEFECT_TOL = 1e-12

HERMITIAN_TOL = 1e-12


class BasisSizeError(ValueError):
    """Requested truncation exceeds the configured memory cap."""


class TruncationError(ValueError):
    """A state carries too much weight above the truncation level."""

    def __init__(self, message: str, required_n_max: int | None = None):
        super().__init__(message)
        self.required_n_max = required_n_max


def _compositions(total: int, parts: int):
    # ascending lexicographic order
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class OccupationBasis:
    """Graded-lexicographic occupation basis of the truncated Fock space."""

    d: int
    n_max: int
    states: tuple
    index: dict = field(repr=False)
    totals: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.states)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OccupationBasis):
            return NotImplemented
        return self.d == other.d and self.n_max == other.n_max

    def __hash__(self) -> int:
        return hash((self.d, self.n_max))

    @property
    def size(self) -> int:
        return len(self.states)

    def sector(self, n: int) -> np.ndarray:
        """Indices of the basis states with exactly ``n`` particles."""
        return np.flatnonzero(self.totals == n)

    def vacuum(self) -> "FockVector":
        amps = np.zeros(self.size, dtype=complex)
        amps[0] = 1.0
        return FockVector(self, amps, 0.0)


def build_basis(d: int, n_max: int, max_size: int = DEFAULT_MAX_BASIS) -> OccupationBasis:
    if d < 1:
        raise ValueError(f"one-body dimension must be >= 1, got d={d}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    size = math.comb(n_max + d, d)
    if size > max_size:
        raise BasisSizeError(
            f"basis size binomial({n_max}+{d}, {d}) = {size} exceeds the cap {max_size}"
        )
    states = tuple(s for n in range(n_max + 1) for s in _compositions(n, d))
    index = {s: i for i, s in enumerate(states)}
    totals = np.fromiter((sum(s) for s in states), dtype=int, count=len(states))
    totals.setflags(write=False)
    return OccupationBasis(d, n_max, states, index, totals)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Normalized amplitudes plus the mass dropped above ``basis.n_max``."""

    basis: OccupationBasis
    amplitudes: np.ndarray
    truncation_defect: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.size,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, basis size is {self.basis.size}"
            )
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def level_weights(self) -> np.ndarray:
        """Probability of finding exactly N particles, N = 0..n_max."""
        w = np.abs(self.amplitudes) ** 2
        return np.bincount(self.basis.totals, weights=w, minlength=self.basis.n_max + 1)


@dataclass(frozen=True, eq=False)
class FockOperator:
    basis: OccupationBasis
    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.basis.size
        if m.shape != (n, n):
            raise ValueError(f"operator shape {m.shape} does not match basis size {n}")
        if self.hermitian:
            err = np.max(np.abs(m - m.conj().T), initial=0.0)
            if err > HERMITIAN_TOL:
                raise ValueError(f"operator claimed Hermitian but max|A - A^H| = {err:.3e}")
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            _check_same_basis(self.basis, other.basis)
            return FockOperator(self.basis, self.matrix @ other.matrix)
        if isinstance(other, FockVector):
            _check_same_basis(self.basis, other.basis)
            return self.matrix @ other.amplitudes
        return NotImplemented

    def __add__(self, other: "FockOperator") -> "FockOperator":
        _check_same_basis(self.basis, other.basis)
        return FockOperator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        _check_same_basis(self.basis, other.basis)
        return FockOperator(self.basis, self.matrix - other.matrix)

    def scale(self, c: complex) -> "FockOperator":
        return FockOperator(self.basis, c * self.matrix)

    def adjoint(self) -> "FockOperator":
        return FockOperator(self.basis, self.matrix.conj().T, self.hermitian)


def _check_same_basis(a: OccupationBasis, b: OccupationBasis) -> None:
    if a != b:
        raise ValueError(
            f"basis mismatch: (d={a.d}, n_max={a.n_max}) vs (d={b.d}, n_max={b.n_max})"
        )


def _as_vector(basis: OccupationBasis, f) -> np.ndarray:
    f = np.atleast_1d(np.asarray(f, dtype=complex))
    if f.shape != (basis.d,):
        raise ValueError(f"one-body vector has length {f.shape[0]}, expected d={basis.d}")
    if not np.all(np.isfinite(f)):
        raise ValueError("one-body vector has non-finite entries")
    return f


def _mode_creators(basis: OccupationBasis, sparse: bool = False) -> list:
    """Real matrices of a*(e_i), i = 0..d-1 (CSR when ``sparse``)."""
    n = basis.size
    rows = [[] for _ in range(basis.d)]
    cols = [[] for _ in range(basis.d)]
    vals = [[] for _ in range(basis.d)]
    for j, s in enumerate(basis.states):
        if basis.totals[j] >= basis.n_max:
            continue
        for i in range(basis.d):
            t = s[:i] + (s[i] + 1,) + s[i + 1:]
            rows[i].append(basis.index[t])
            cols[i].append(j)
            vals[i].append(math.sqrt(s[i] + 1))
    out = [sp.csr_matrix((v, (r, c)), shape=(n, n)) for r, c, v in zip(rows, cols, vals)]
    return out if sparse else [m.toarray() for m in out]


def _sparse_ladder(basis: OccupationBasis, f, kind: str):
    f = _as_vector(basis, f)
    m = sp.csr_matrix((basis.size, basis.size), dtype=complex)
    for fi, ci in zip(f, _mode_creators(basis, sparse=True)):
        if fi != 0:
            m = m + fi * ci
    return m.conj().T.tocsr() if kind == "annihilation" else m


def ladder_matrix(basis: OccupationBasis, f, kind: str = "creation") -> FockOperator:
    """Matrix of a*(f) (``kind="creation"``) or a(f) (``kind="annihilation"``).

    a*(f) is linear in f and a(f) antilinear, so a(f) is the adjoint of a*(f).
    Transitions out of the top sector are dropped.
    """
    f = _as_vector(basis, f)
    if kind not in ("creation", "annihilation"):
        raise ValueError(f"kind must be 'creation' or 'annihilation', got {kind!r}")
    return FockOperator(basis, _sparse_ladder(basis, f, kind).toarray())


def number_operator(basis: OccupationBasis) -> FockOperator:
    return FockOperator(basis, np.diag(basis.totals.astype(complex)), hermitian=True)


def second_quantize_one_body(basis: OccupationBasis, T) -> FockOperator:
    """Lift a d x d Hermitian matrix T to sum_ab T_ab a*_a a_b."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (basis.d, basis.d):
        raise ValueError(f"one-body operator must be {basis.d}x{basis.d}, got {T.shape}")
    err = np.max(np.abs(T - T.conj().T))
    if err > HERMITIAN_TOL:
        raise ValueError(f"one-body operator is not Hermitian (max deviation {err:.3e})")
    cr = _mode_creators(basis)
    an = [c.T for c in cr]
    m = np.zeros((basis.size, basis.size), dtype=complex)
    for a in range(basis.d):
        for b in range(basis.d):
            if T[a, b] != 0:
                m += T[a, b] * (cr[a] @ an[b])
    m = 0.5 * (m + m.conj().T)
    return FockOperator(basis, m, hermitian=True)


def second_quantize_two_body(basis: OccupationBasis, W) -> FockOperator:
    """Lift a swap-symmetric d^2 x d^2 matrix W to a two-body Fock operator.

    Row index (a, b) -> a*d + b. The lift is
    1/2 sum W[(a,b),(m,n)] a*_a a*_b a_n a_m.
    """
    d = basis.d
    W = np.asarray(W, dtype=complex)
    if W.shape != (d * d, d * d):
        raise ValueError(f"two-body operator must be {d*d}x{d*d}, got {W.shape}")
    W4 = W.reshape(d, d, d, d)
    swap_err = np.max(np.abs(W4 - W4.transpose(1, 0, 3, 2)))
    if swap_err > HERMITIAN_TOL:
        raise ValueError(f"two-body operator is not swap-symmetric (max deviation {swap_err:.3e})")
    herm = bool(np.max(np.abs(W - W.conj().T)) <= HERMITIAN_TOL)
    cr = _mode_creators(basis)
    an = [c.T for c in cr]
    raise_pair = {(a, b): cr[a] @ cr[b] for a in range(d) for b in range(d)}
    lower_pair = {(m, n): an[n] @ an[m] for m in range(d) for n in range(d)}
    out = np.zeros((basis.size, basis.size), dtype=complex)
    for (a, b), up in raise_pair.items():
        for (m, n), down in lower_pair.items():
            w = W4[a, b, m, n]
            if w != 0:
                out += w * (up @ down)
    out *= 0.5
    if herm:
        out = 0.5 * (out + out.conj().T)
    return FockOperator(basis, out, hermitian=herm)


def sector_isometry(basis: OccupationBasis, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Embedding of the n-particle occupation states into (C^d)^{tensor n}.

    Returns ``(idx, S)`` where ``idx`` are the basis indices of the sector and
    ``S`` has orthonormal columns: column k is the symmetrized tensor of the
    occupation state ``basis.states[idx[k]]``.
    """
    from itertools import permutations

    d = basis.d
    idx = basis.sector(n)
    S = np.zeros((d**n, len(idx)))
    for k, j in enumerate(idx):
        occ = basis.states[j]
        modes = [i for i, c in enumerate(occ) for _ in range(c)]
        words = set(permutations(modes))
        for w in words:
            flat = 0
            for m in w:
                flat = flat * d + m
            S[flat, k] = 1.0
        S[:, k] /= math.sqrt(len(words))
    return idx, S


# --- state preparation -------------------------------------------------------


@dataclass(frozen=True)
class Coherent:
    phi: Sequence[complex]


@dataclass(frozen=True)
class Squeezed:
    lam: complex
    psi: Sequence[complex]


@dataclass(frozen=True)
class Bogolubov:
    data: "object"  # chargedbose.bogolubov.BogolubovData


StateSpec = Union[Coherent, Squeezed, Bogolubov]


def _nilpotent_exp(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """exp(A) v for an A that strictly raises particle number."""
    out = v.copy()
    term = v
    k = 0
    while True:
        k += 1
        term = (A @ term) / k
        if not np.any(term):
            return out
        out = out + term


def _kept_mass(amps: np.ndarray) -> float:
    return math.fsum((np.abs(amps) ** 2).tolist())


def _coherent_raw(basis: OccupationBasis, phi: np.ndarray) -> np.ndarray:
    v = basis.vacuum().amplitudes.copy()
    norm2 = float(np.vdot(phi, phi).real)
    return math.exp(-norm2 / 2) * _nilpotent_exp(_sparse_ladder(basis, phi, "creation"), v)


def _pair_exponential(basis, lam, psi, shift, v):
    # exp(-lam/2 (a*(psi) - shift)^2) v; the constant part is split off
    c = _sparse_ladder(basis, psi, "creation")
    A = -0.5 * lam * (c @ c - 2 * shift * c)
    return np.exp(-0.5 * lam * shift**2) * _nilpotent_exp(A, v)


def _check_pairs(psis: np.ndarray, lams: np.ndarray) -> None:
    lams = np.asarray(lams)
    bad = np.flatnonzero(np.abs(lams) >= 1)
    if bad.size:
        raise ValueError(f"|lambda| must be < 1; violated at index {bad[0]} ({lams[bad[0]]})")
    if psis.size:
        gram = psis.conj() @ psis.T
        err = np.max(np.abs(gram - np.eye(len(psis))))
        if err > 1e-12:
            raise ValueError(f"pair states are not orthonormal (Gram deviation {err:.3e})")


def _raw_state(basis: OccupationBasis, spec: StateSpec) -> np.ndarray:
    if isinstance(spec, Coherent):
        return _coherent_raw(basis, _as_vector(basis, spec.phi))
    if isinstance(spec, Squeezed):
        psi = _as_vector(basis, spec.psi)
        lam = complex(spec.lam)
        _check_pairs(psi[None, :], np.array([lam]))
        v = basis.vacuum().amplitudes.copy()
        return (1 - abs(lam) ** 2) ** 0.25 * _pair_exponential(basis, lam, psi, 0.0, v)
    if isinstance(spec, Bogolubov):
        data = spec.data
        phi = _as_vector(basis, data.phi)
        psis = np.atleast_2d(np.asarray(data.pairs.psi, dtype=complex))
        lams = np.asarray(data.pairs.lam, dtype=float)
        _check_pairs(psis, lams)
        v = _coherent_raw(basis, phi)
        for lam, psi in zip(lams, psis):
            if lam == 0:
                continue
            shift = np.vdot(phi, psi)  # (phi, psi)
            v = (1 - lam**2) ** 0.25 * _pair_exponential(basis, lam, psi, shift, v)
        return v
    raise TypeError(f"unknown state specification {spec!r}")


def _finish(basis, raw, tol, spec, max_size) -> FockVector:
    defect = max(0.0, 1.0 - _kept_mass(raw))
    if defect > tol:
        need = _required_n_max(basis, spec, tol, max_size)
        hint = f"n_max >= {need}" if need is not None else f"n_max beyond the basis cap {max_size}"
        raise TruncationError(
            f"truncation defect {defect:.3e} exceeds tolerance {tol:.1e} at n_max={basis.n_max}; "
            f"need {hint}",
            need,
        )
    return FockVector(basis, raw / np.linalg.norm(raw), defect)


def _required_n_max(basis, spec, tol, max_size):
    n = basis.n_max
    while True:
        n += 1
        try:
            b = build_basis(basis.d, n, max_size)
        except BasisSizeError:
            return None
        if 1.0 - _kept_mass(_raw_state(b, spec)) <= tol:
            return n


def prepare_state(
    basis: OccupationBasis,
    spec: StateSpec,
    tol: float = DEFAULT_DEFECT_TOL,
    max_size: int = DEFAULT_MAX_BASIS,
) -> FockVector:
    """Project a coherent, squeezed, or Bogolubov state onto the truncation.

    All three states are creation-only exponentials applied to the vacuum (or
    to a coherent vector), so their amplitudes below ``n_max`` are exact; the
    missing mass is recorded as ``truncation_defect`` and the stored vector is
    renormalized.
    """
    return _finish(basis, _raw_state(basis, spec), tol, spec, max_size)


def displaced_state(
    basis: OccupationBasis,
    data,
    margin: int = 30,
    tol: float = DEFAULT_DEFECT_TOL,
    max_size: int = 20000,
) -> FockVector:
    """Bogolubov state built as U_phi applied to the undisplaced quasi-free state.

    Independent of :func:`prepare_state`: the quasi-free vector is formed on a
    larger truncation, the Weyl operator exp(-|phi|^2/2) exp(a*(phi)) exp(-a(phi))
    is applied there, and the result is projected back onto ``basis``.
    """
    from .bogolubov import BogolubovData

    big = build_basis(basis.d, basis.n_max + margin, max_size)
    bare = BogolubovData.from_spectral(data.pairs, np.zeros(basis.d))
    psi0 = _raw_state(big, Bogolubov(bare))
    phi = _as_vector(big, data.phi)
    lower = -_sparse_ladder(big, phi, "annihilation")
    raise_ = _sparse_ladder(big, phi, "creation")
    v = psi0.copy()
    term = psi0
    for k in range(1, big.n_max + 1):
        term = (lower @ term) / k
        v = v + term
    v = math.exp(-float(np.vdot(phi, phi).real) / 2) * _nilpotent_exp(raise_, v)
    keep = np.array([big.index[s] for s in basis.states])
    return _finish(basis, v[keep], tol, Bogolubov(data), max_size)


def expectation(state: FockVector, op: FockOperator) -> complex:
    _check_same_basis(state.basis, op.basis)
    val = complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))
    if op.hermitian and abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"Hermitian expectation has imaginary part {val.imag:.3e}")
    return val
