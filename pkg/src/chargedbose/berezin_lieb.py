"""Berezin-Lieb inequalities on finite weighted frames.

A frame is a family of vectors omega_i in C^d with weights mu_i >= 0 whose
frame operator S = sum mu_i |omega_i><omega_i| is dominated by the identity.
A nonnegative symbol f_i is quantized to Q(f) = sum f_i mu_i |omega_i><omega_i|.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import linalg

__all__ = [
    "Frame",
    "BLReport",
    "ConcavityReport",
    "DilationReport",
    "make_frame",
    "quantize_symbol",
    "apply_matrix_function",
    "check_berezin_lieb",
    "probe_operator_concavity",
    "analysis_operator",
    "check_dilation",
    "berezin_lieb_suite",
    "XI",
]

CLAMP = 1e-10
INEQ_TOL = 1e-10

#: Scalar functions used throughout: name -> callable on arrays of t >= 0.
XI: dict[str, Callable] = {
    "identity": lambda t: t,
    "sqrt": np.sqrt,
    "pair": lambda t: np.sqrt(t * (t + 1)),
    "pair_minus_t": lambda t: t / (np.sqrt(t * (t + 1)) + t + (t == 0)),
    "t_t1": lambda t: t * (t + 1),
    "square": lambda t: t * t,
}


@dataclass(frozen=True)
class Frame:
    vectors: np.ndarray  # (count, d) complex, rows are omega_i
    weights: np.ndarray  # (count,)

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vectors, dtype=complex))
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if v.shape[0] != w.shape[0]:
            raise ValueError(f"{v.shape[0]} vectors but {w.shape[0]} weights")
        if np.any(w < 0):
            raise ValueError("frame weights must be nonnegative")
        top = np.linalg.eigvalsh(_frame_operator(v, w)).max()
        if top > 1 + 1e-12:
            raise ValueError(f"frame operator exceeds the identity (max eigenvalue {top:.15g})")
        v.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "weights", w)

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def operator(self) -> np.ndarray:
        return _frame_operator(self.vectors, self.weights)

    @property
    def norms2(self) -> np.ndarray:
        return np.sum(np.abs(self.vectors) ** 2, axis=1)


def _frame_operator(v, w):
    return (v.T * w) @ v.conj()


def make_frame(d: int, count: int, seed: int, kind: str = "random") -> Frame:
    rng = np.random.default_rng(seed)
    if kind == "tight":
        if count < d:
            raise ValueError(f"a tight frame in C^{d} needs at least {d} vectors, got {count}")
        z = rng.normal(size=(count, d)) + 1j * rng.normal(size=(count, d))
        q, _ = np.linalg.qr(z)
        mu = rng.uniform(0.2, 2.0, size=count)
        return Frame(q.conj() / np.sqrt(mu)[:, None], mu)
    if kind != "random":
        raise ValueError(f"kind must be 'random' or 'tight', got {kind!r}")
    v = rng.normal(size=(count, d)) + 1j * rng.normal(size=(count, d))
    mu = rng.uniform(0.1, 1.0, size=count)
    top = np.linalg.eigvalsh(_frame_operator(v, mu)).max()
    shrink = rng.uniform(0.5, 1.0) / top
    return Frame(v * np.sqrt(shrink * (1 - 1e-14)), mu)


def quantize_symbol(frame: Frame, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (frame.count,):
        raise ValueError(f"symbol has {f.size} values, frame has {frame.count} elements")
    if np.any(f < 0):
        raise ValueError("symbol must be nonnegative")
    A = _frame_operator(frame.vectors, f * frame.weights)
    return 0.5 * (A + A.conj().T)


def apply_matrix_function(A, xi: Callable) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if np.max(np.abs(A - A.conj().T), initial=0.0) > 1e-12 * max(1.0, np.abs(A).max()):
        raise ValueError("matrix is not Hermitian")
    try:
        vals, vecs = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigendecomposition failed: {exc}") from exc
    if vals.min(initial=0.0) < -CLAMP:
        raise ValueError(f"eigenvalue {vals.min():.3e} below the clamp threshold -{CLAMP}")
    vals = np.clip(vals, 0.0, None)
    out = (vecs * xi(vals)) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)


@dataclass(frozen=True)
class BLReport:
    mode: str
    shape: str
    defect: float
    ok: bool
    hypothesis_ok: bool
    note: str = ""


def check_berezin_lieb(frame: Frame, f, xi: Callable, mode: str = "scalar", shape: str = "concave") -> BLReport:
    """Concave: Tr xi(Q f) >= sum mu xi(f) |omega|^2 (scalar) or xi(Q f) >= Q(xi o f).

    For ``shape="convex"`` both inequalities are reversed.  ``defect`` is the
    trace difference (scalar) or the extreme eigenvalue of the difference
    (operator); it is >= 0 when the inequality holds in the concave case and
    <= 0 in the convex case.
    """
    if mode not in ("scalar", "operator") or shape not in ("concave", "convex"):
        raise ValueError(f"bad mode/shape {mode!r}/{shape!r}")
    f = np.asarray(f, dtype=float)
    xi0 = float(xi(np.zeros(1))[0])
    hyp = xi0 >= 0 if shape == "concave" else xi0 <= 0
    note = "" if hyp else f"xi(0) = {xi0} violates the sign condition for the {shape} case"
    lhs = apply_matrix_function(quantize_symbol(frame, f), xi)
    if mode == "scalar":
        defect = float(np.trace(lhs).real - np.sum(frame.weights * xi(f) * frame.norms2))
    else:
        diff = lhs - quantize_symbol_signed(frame, xi(f))
        ev = np.linalg.eigvalsh(diff)
        defect = float(ev.min() if shape == "concave" else ev.max())
    ok = defect >= -INEQ_TOL if shape == "concave" else defect <= INEQ_TOL
    return BLReport(mode, shape, defect, bool(ok and hyp), hyp, note)


def quantize_symbol_signed(frame: Frame, f) -> np.ndarray:
    """Like :func:`quantize_symbol` but without the sign check (for xi o f)."""
    A = _frame_operator(frame.vectors, np.asarray(f, dtype=float) * frame.weights)
    return 0.5 * (A + A.conj().T)


__all__.append("quantize_symbol_signed")


@dataclass(frozen=True)
class ConcavityReport:
    trials: int
    min_eigenvalue: float
    violations: list = field(default_factory=list)  # (trial index, min eigenvalue)

    @property
    def concave_consistent(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> int | None:
        return self.violations[0][0] if self.violations else None


def _random_psd(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    a = g @ g.conj().T
    return a * rng.uniform(0.1, 5.0) / np.trace(a).real * d


def probe_operator_concavity(xi: Callable, d: int, trials: int, seed: int) -> ConcavityReport:
    """Random search for PSD pairs with xi((A+B)/2) - (xi(A)+xi(B))/2 not PSD."""
    children = np.random.SeedSequence(seed).spawn(trials)
    worst = np.inf
    bad = []
    for k, ss in enumerate(children):
        rng = np.random.default_rng(ss)
        A, B = _random_psd(rng, d), _random_psd(rng, d)
        mid = apply_matrix_function(0.5 * (A + B), xi)
        avg = 0.5 * (apply_matrix_function(A, xi) + apply_matrix_function(B, xi))
        m = float(np.linalg.eigvalsh(mid - avg).min())
        worst = min(worst, m)
        if m < -INEQ_TOL:
            bad.append((k, m))
    return ConcavityReport(trials, worst, bad)


# --- dilation ------------------------------------------------------------------


def analysis_operator(frame: Frame) -> np.ndarray:
    """U: C^d -> C^count, (U v)_i = sqrt(mu_i) <omega_i, v>, so U^H U = S."""
    return np.sqrt(frame.weights)[:, None] * frame.vectors.conj()


@dataclass(frozen=True)
class DilationReport:
    unitarity_U: float
    unitarity_V: float
    intertwining: float
    average_identity: float

    @property
    def max_residual(self) -> float:
        return max(self.unitarity_U, self.unitarity_V, self.intertwining, self.average_identity)


def _psd_sqrt(M):
    M = 0.5 * (M + M.conj().T)
    vals, vecs = np.linalg.eigh(M)
    return (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T


def check_dilation(frame: Frame, f=None) -> DilationReport:
    U = analysis_operator(frame)
    d, m = frame.d, frame.count
    Uh = U.conj().T
    P = _psd_sqrt(np.eye(d) - Uh @ U)
    Q = _psd_sqrt(np.eye(m) - U @ Uh)
    cU = np.block([[P, -Uh], [U, Q]])
    cV = np.block([[P, Uh], [U, -Q]])
    eye = np.eye(d + m)
    if f is None:
        f = np.linspace(0.0, 2.0, m)
    B = np.diag(np.asarray(f, dtype=complex))
    Z = np.zeros((d + m, d + m), dtype=complex)
    Z[d:, d:] = B
    avg = 0.5 * (cU.conj().T @ Z @ cU + cV.conj().T @ Z @ cV)
    target = linalg.block_diag(Uh @ B @ U, Q @ B @ Q)
    return DilationReport(
        float(np.abs(cU.conj().T @ cU - eye).max()),
        float(np.abs(cV.conj().T @ cV - eye).max()),
        float(np.abs(Q @ U - U @ P).max()),
        float(np.abs(avg - target).max()),
    )


def berezin_lieb_suite(seed: int, trials: int = 200, max_d: int = 8) -> dict:
    """Seeded battery: concave and convex inequalities plus dilation unitarity."""
    children = np.random.SeedSequence(seed).spawn(trials)
    worst_concave_op = worst_concave_sc = np.inf
    worst_convex_op = worst_convex_sc = -np.inf
    worst_dilation = 0.0
    failures = []
    for k, ss in enumerate(children):
        rng = np.random.default_rng(ss)
        d = int(rng.integers(1, max_d + 1))
        count = int(rng.integers(d, 3 * d + 1))
        frame = make_frame(d, count, int(rng.integers(2**31)), "random")
        f = rng.exponential(rng.uniform(0.05, 5.0), size=count)
        rows = [
            check_berezin_lieb(frame, f, XI["pair_minus_t"], "operator", "concave"),
            check_berezin_lieb(frame, f, XI["pair_minus_t"], "scalar", "concave"),
            check_berezin_lieb(frame, f, XI["t_t1"], "operator", "convex"),
            check_berezin_lieb(frame, f, XI["t_t1"], "scalar", "convex"),
        ]
        worst_concave_op = min(worst_concave_op, rows[0].defect)
        worst_concave_sc = min(worst_concave_sc, rows[1].defect)
        worst_convex_op = max(worst_convex_op, rows[2].defect)
        worst_convex_sc = max(worst_convex_sc, rows[3].defect)
        dil = check_dilation(frame, f).max_residual
        worst_dilation = max(worst_dilation, dil)
        if not all(r.ok for r in rows) or dil > INEQ_TOL:
            failures.append(k)
    return {
        "trials": trials,
        "concave_operator_min": worst_concave_op,
        "concave_scalar_min": worst_concave_sc,
        "convex_operator_max": worst_convex_op,
        "convex_scalar_max": worst_convex_sc,
        "dilation_max_residual": worst_dilation,
        "failed_trials": failures,
        "ok": not failures,
    }
