"""Bogolubov states in closed form: (phi, gamma1, xi1) data and their moments.

Conventions
-----------
The inner product (x, y) = x^H y is antilinear in the first slot.  With a real
orthonormal family psi_alpha and parameters 0 <= lambda_alpha < 1:

    gamma1 = sum_alpha  lambda^2 / (1 - lambda^2) |psi><psi|
    xi1    = sum_alpha -lambda   / (1 - lambda^2) psi psi^T      (bilinear form)

so that <a*(f) a(g)> = (g, gamma1 f) and <a*(f) a*(g)> = f^T xi1 g in the
undisplaced (quasi-free) state.  Displacement by phi adds the c-number shift
a(v) -> a(v) + (v, phi).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "SpectralPairs",
    "BogolubovData",
    "PairReport",
    "Ladder",
    "WickResult",
    "validate_pair",
    "symplectic_block",
    "lambda_from_gamma",
    "one_pdm",
    "one_pdm_matrix",
    "two_pdm",
    "two_pdm_terms",
    "two_pdm_tensor",
    "pairings",
    "wick_expectation",
    "quasi_free_two_point",
    "quadratic_expectation",
    "number_mean",
    "number_variance",
]

PAIR_TOL = 1e-10
MAX_LAMBDA = 1 - 1e-9


@dataclass(frozen=True)
class SpectralPairs:
    """Real orthonormal pair states ``psi`` (rows) with parameters ``lam``."""

    psi: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        psi = np.atleast_2d(np.asarray(self.psi, dtype=float))
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        if psi.shape[0] != lam.shape[0]:
            raise ValueError(f"{psi.shape[0]} pair states but {lam.shape[0]} parameters")
        for a, l in enumerate(lam):
            if not (0 <= l < MAX_LAMBDA):
                raise ValueError(f"pair parameter lambda[{a}] = {l} outside [0, 1)")
        gram = psi @ psi.T
        dev = np.abs(gram - np.eye(len(lam)))
        if dev.size and dev.max() > 1e-12:
            a = int(np.unravel_index(np.argmax(dev), dev.shape)[0])
            raise ValueError(f"pair states not orthonormal at index {a} (deviation {dev.max():.3e})")
        psi.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "lam", lam)

    @property
    def occupations(self) -> np.ndarray:
        return self.lam**2 / (1 - self.lam**2)

    @property
    def pairing(self) -> np.ndarray:
        return -self.lam / (1 - self.lam**2)


def lambda_from_gamma(g):
    """Invert lambda^2 / (1 - lambda^2) = g."""
    g = np.asarray(g, dtype=float)
    return np.sqrt(g / (1 + g))


@dataclass(frozen=True)
class BogolubovData:
    phi: np.ndarray
    pairs: SpectralPairs
    gamma1: np.ndarray = field(repr=False)
    xi1: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.phi.shape[0]

    @classmethod
    def from_spectral(cls, pairs: SpectralPairs, phi) -> "BogolubovData":
        phi = np.atleast_1d(np.asarray(phi, dtype=complex))
        d = phi.shape[0]
        if pairs.psi.size and pairs.psi.shape[1] != d:
            raise ValueError(f"pair states live in dimension {pairs.psi.shape[1]}, phi in {d}")
        psi = pairs.psi.reshape(-1, d)
        gamma = (psi.T * pairs.occupations) @ psi
        xi = (psi.T * pairs.pairing) @ psi
        rep = validate_pair(gamma, xi)
        if not rep.ok:
            raise ValueError(f"pair data failed validation: {rep.residuals}")
        phi.setflags(write=False)
        return cls(phi, pairs, gamma.astype(complex), xi.astype(complex))

    @classmethod
    def from_gamma(cls, gamma, phi, degeneracy_tol: float = 1e-10) -> "BogolubovData":
        """Choose the real eigenbasis of ``gamma`` and the matching xi1.

        Inside a degenerate eigenspace the basis is obtained by orthonormalizing
        the projected standard basis vectors in index order.
        """
        gamma = np.asarray(gamma)
        if np.iscomplexobj(gamma):
            if np.max(np.abs(gamma.imag)) > 1e-12:
                raise ValueError("gamma must be real to fix a real eigenbasis")
            gamma = gamma.real
        vals, vecs = np.linalg.eigh(gamma)
        if vals.min(initial=0.0) < -1e-12:
            raise ValueError(f"gamma is not positive semi-definite (min eigenvalue {vals.min():.3e})")
        vals = np.clip(vals, 0, None)
        rows = []
        lams = []
        i = 0
        while i < len(vals):
            j = i + 1
            while j < len(vals) and vals[j] - vals[i] <= degeneracy_tol * max(1.0, vals[i]):
                j += 1
            block = vecs[:, i:j]
            proj = block @ block.T
            basis = _ordered_orthonormal(proj, j - i)
            lam = float(lambda_from_gamma(vals[i:j].mean()))
            for b in basis:
                if lam > 0:
                    rows.append(b)
                    lams.append(lam)
            i = j
        d = gamma.shape[0]
        psi = np.array(rows).reshape(-1, d)
        return cls.from_spectral(SpectralPairs(psi, np.array(lams)), phi)


def _ordered_orthonormal(proj: np.ndarray, rank: int) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for k in range(proj.shape[0]):
        v = proj[:, k].copy()
        for b in out:
            v -= (b @ v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            out.append(v / nv)
        if len(out) == rank:
            break
    return out


def symplectic_block(gamma, xi) -> np.ndarray:
    """Block operator [[gamma, xi^H], [xi, 1 + conj(gamma)]].

    For real data this is the familiar [[gamma, xi], [xi*, 1 + gamma]].
    """
    gamma = np.asarray(gamma, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    d = gamma.shape[0]
    return np.block([[gamma, xi.conj().T], [xi, np.eye(d) + gamma.conj()]])


@dataclass(frozen=True)
class PairReport:
    ok: bool
    residuals: dict


def validate_pair(gamma, xi, tol: float = PAIR_TOL) -> PairReport:
    gamma = np.asarray(gamma, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    if gamma.shape != xi.shape or gamma.shape[0] != gamma.shape[1]:
        raise ValueError(f"gamma {gamma.shape} and xi {xi.shape} must be equal square shapes")
    d = gamma.shape[0]
    eye = np.eye(d)
    G = symplectic_block(gamma, xi)
    S = np.diag(np.r_[-np.ones(d), np.ones(d)])
    min_eig = float(np.linalg.eigvalsh(0.5 * (gamma + gamma.conj().T)).min(initial=0.0))
    res = {
        "xi_star_xi": float(np.max(np.abs(xi.conj().T @ xi - gamma @ (gamma + eye)), initial=0.0)),
        "commutation": float(np.max(np.abs(xi @ gamma - gamma.conj() @ xi), initial=0.0)),
        "symplectic": float(np.max(np.abs(G @ S @ G - G), initial=0.0)),
        "xi_symmetry": float(np.max(np.abs(xi - xi.T), initial=0.0)),
        "gamma_negativity": max(0.0, -min_eig),
    }
    return PairReport(all(v <= tol for v in res.values()), res)


# --- density matrices ----------------------------------------------------------


def _ip(x, y) -> complex:
    return complex(np.vdot(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)))


def _check_dim(data: BogolubovData, *vecs) -> None:
    for v in vecs:
        if np.shape(v) != (data.dim,):
            raise ValueError(f"vector of shape {np.shape(v)} does not match dimension {data.dim}")


def one_pdm(data: BogolubovData, u, v) -> complex:
    """<a*(u) a(v)> = (v, gamma1 u) + (v, phi)(phi, u)."""
    _check_dim(data, u, v)
    u = np.asarray(u, dtype=complex)
    return _ip(v, data.gamma1 @ u) + _ip(v, data.phi) * _ip(data.phi, u)


def one_pdm_matrix(data: BogolubovData) -> np.ndarray:
    """G[a, b] = <a*_a a_b> in the standard basis."""
    phi = data.phi
    return data.gamma1.T + np.outer(phi.conj(), phi)


def _xi(data, f, g) -> complex:
    return complex(np.asarray(f) @ data.xi1 @ np.asarray(g))


def two_pdm_terms(data: BogolubovData, u1, u2, v2, v1) -> dict:
    """The ten contributions to <a*(u1) a*(u2) a(v2) a(v1)>, by name."""
    _check_dim(data, u1, u2, v2, v1)
    phi = data.phi
    pu1, pu2 = _ip(phi, u1), _ip(phi, u2)
    v1p, v2p = _ip(v1, phi), _ip(v2, phi)

    def gam(v, u):
        return _ip(v, data.gamma1 @ np.asarray(u, dtype=complex))

    xi_u = _xi(data, u1, u2)
    xi_v = np.conj(_xi(data, v1, v2))
    return {
        "condensate": v1p * v2p * pu1 * pu2,
        "pair_create": xi_u * v1p * v2p,
        "pair_annihilate": xi_v * pu1 * pu2,
        "exchange_21": gam(v2, u1) * v1p * pu2,
        "exchange_12": gam(v1, u2) * v2p * pu1,
        "direct_22": gam(v2, u2) * v1p * pu1,
        "direct_11": gam(v1, u1) * v2p * pu2,
        "gamma_direct": gam(v1, u1) * gam(v2, u2),
        "gamma_exchange": gam(v1, u2) * gam(v2, u1),
        "pairing": xi_v * xi_u,
    }


def two_pdm(data: BogolubovData, u1, u2, v2, v1) -> complex:
    return complex(sum(two_pdm_terms(data, u1, u2, v2, v1).values()))


def two_pdm_tensor(data: BogolubovData) -> np.ndarray:
    """D[a, b, m, n] = <a*_a a*_b a_n a_m> in the standard basis."""
    p = data.phi
    pc = p.conj()
    g = data.gamma1
    x = data.xi1
    xc = x.conj()
    e = np.einsum
    D = e("m,n,a,b->abmn", p, p, pc, pc)
    D = D + e("ab,m,n->abmn", x, p, p) + e("mn,a,b->abmn", xc, pc, pc)
    D = D + e("na,m,b->abmn", g, p, pc) + e("mb,n,a->abmn", g, p, pc)
    D = D + e("nb,m,a->abmn", g, p, pc) + e("ma,n,b->abmn", g, p, pc)
    D = D + e("ma,nb->abmn", g, g) + e("mb,na->abmn", g, g) + e("mn,ab->abmn", xc, x)
    return D


# --- Wick rule -----------------------------------------------------------------


def pairings(indices: Sequence[int]):
    """All perfect matchings of ``indices``, each pair kept in sequence order."""
    indices = list(indices)
    if not indices:
        yield []
        return
    first, rest = indices[0], indices[1:]
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in pairings(remaining):
            yield [(first, partner)] + tail


@dataclass(frozen=True)
class WickResult:
    value: complex
    n_pairings: int
    odd: bool = False


def wick_expectation(two_point: Callable[[int, int], complex], ops: Sequence) -> WickResult:
    """Sum over pairings of products of two-point values.

    ``ops`` is only used for its length; ``two_point(i, j)`` must return the
    expectation of ops[i] ops[j] (i < j).
    """
    n = len(ops)
    if n % 2:
        return WickResult(0j, 0, odd=True)
    if n > 8:
        raise ValueError(f"at most 8 operators are supported, got {n}")
    total = 0j
    count = 0
    for match in pairings(range(n)):
        prod = 1 + 0j
        for i, j in match:
            prod *= two_point(i, j)
        total += prod
        count += 1
    return WickResult(total, count)


@dataclass(frozen=True)
class Ladder:
    """a*(vec) when ``dagger`` else a(vec)."""

    dagger: bool
    vec: np.ndarray


def quasi_free_two_point(data: BogolubovData, ops: Sequence[Ladder]) -> Callable[[int, int], complex]:
    """Two-point function of the undisplaced state with data (gamma1, xi1)."""
    g, x = data.gamma1, data.xi1

    def tp(i: int, j: int) -> complex:
        A, B = ops[i], ops[j]
        f, h = np.asarray(A.vec, dtype=complex), np.asarray(B.vec, dtype=complex)
        if A.dagger and not B.dagger:
            return _ip(h, g @ f)
        if not A.dagger and B.dagger:
            return _ip(f, h) + _ip(f, g @ h)
        if A.dagger and B.dagger:
            return complex(f @ x @ h)
        return complex(np.conj(h @ x @ f))

    return tp


def quadratic_expectation(data: BogolubovData, T, W=None) -> float:
    """<sum_i T_i + sum_{i<j} W_ij> assembled from the density matrices."""
    d = data.dim
    T = np.asarray(T, dtype=complex)
    if T.shape != (d, d):
        raise ValueError(f"T must be {d}x{d}")
    if np.max(np.abs(T - T.conj().T)) > 1e-12:
        raise ValueError("T is not Hermitian")
    val = np.sum(T * one_pdm_matrix(data))
    if W is not None:
        W4 = np.asarray(W, dtype=complex).reshape(d, d, d, d)
        if np.max(np.abs(W4 - W4.transpose(1, 0, 3, 2))) > 1e-12:
            raise ValueError("W is not swap-symmetric")
        val += 0.5 * np.sum(W4 * two_pdm_tensor(data))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"energy has imaginary part {val.imag:.3e}")
    return float(val.real)


def number_mean(data: BogolubovData) -> float:
    return float(np.vdot(data.phi, data.phi).real + np.trace(data.gamma1).real)


def number_variance(data: BogolubovData) -> float:
    """<N^2> - <N>^2 from the two-body density matrix."""
    D = two_pdm_tensor(data)
    n2 = np.einsum("abab->", D).real + number_mean(data)
    return float(n2 - number_mean(data) ** 2)
