"""Dense real symmetric matrix kernel.

Eigendecomposition is a cyclic Jacobi method written in numpy. Each sweep
visits all index pairs in round-robin order: the ``n/2`` rotations of one
round touch disjoint rows and columns, so they commute and are applied
together. All functions accept a single ``(n, n)`` matrix or a stack
``(..., n, n)``; the leading axes are treated as a batch.

Matrices are plain ``ndarray`` values. Results of products are symmetrized
with :func:`sym` before any spectral test.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DimensionMismatch, DomainError, NotPositiveDefinite

OFF_DIAG_RTOL = 1e-13
MAX_SWEEPS = 100
PD_FLOOR_RTOL = 1e-12
PSD_RTOL = 1e-10

LEQ = "LEQ"
GEQ = "GEQ"
EQUAL = "EQUAL"
INCOMPARABLE = "INCOMPARABLE"


def sym(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def as_symmetric(S, name: str = "matrix") -> np.ndarray:
    """Validate a square symmetric array and return it as float, exactly symmetric."""
    S = np.asarray(S)
    if np.iscomplexobj(S):
        raise DomainError(f"{name} must be real; complex Hermitian input is not supported")
    S = S.astype(float)
    if S.ndim < 2 or S.shape[-1] != S.shape[-2] or S.shape[-1] == 0:
        raise DimensionMismatch(f"{name} must be square, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise ValueError(f"{name} has non-finite entries")
    scale = np.abs(S).max(initial=0.0)
    if np.abs(S - np.swapaxes(S, -1, -2)).max(initial=0.0) > 1e-12 * max(scale, 1.0):
        raise ValueError(f"{name} is not symmetric")
    return sym(S)


def _same_shape(A, B):
    if A.shape != B.shape:
        raise DimensionMismatch(f"shape mismatch: {A.shape} vs {B.shape}")


@lru_cache(maxsize=None)
def _schedule(m: int) -> tuple:
    """Round-robin tournament on ``m`` (even) indices.

    Returns the position permutations that carry round ``r``'s layout into
    round ``r+1``'s, where each layout places the round's pairs at positions
    ``(2i, 2i+1)``. The last permutation returns to round 0.
    """
    players = list(range(m))
    layouts = []
    for _ in range(m - 1):
        layout = []
        for i in range(m // 2):
            layout += [players[i], players[m - 1 - i]]
        layouts.append(np.array(layout))
        players = [players[0]] + [players[-1]] + players[1:-1]
    perms = []
    for cur, nxt in zip(layouts, layouts[1:] + layouts[:1]):
        position = np.empty(m, dtype=int)
        position[cur] = np.arange(m)
        perms.append(position[nxt])
    return layouts[0], tuple(perms)


def _off_norm(A):
    # batch axis last
    off = A * (1.0 - np.eye(A.shape[0]))[:, :, None]
    return np.sqrt(np.einsum("ijb,ijb->b", off, off))


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    basis: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues[..., None, :]) @ np.swapaxes(self.basis, -1, -2)

    def apply(self, fn) -> np.ndarray:
        """Spectral calculus: ``Q diag(fn(w)) Q^T``."""
        return sym((self.basis * fn(self.eigenvalues)[..., None, :])
                   @ np.swapaxes(self.basis, -1, -2))


def jacobi_eigh(S, vectors: bool = True, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition ``S = Q diag(w) Q^T`` with ascending ``w``.

    Stops once the off-diagonal Frobenius norm of every matrix in the batch
    is at most ``1e-13 * ||S||_F``. With ``vectors=False`` the basis is not
    accumulated and ``basis`` is ``None``.
    """
    S = as_symmetric(S)
    n = S.shape[-1]
    batch = S.shape[:-2]
    S = S.reshape((-1, n, n))
    nb = S.shape[0]
    threshold = OFF_DIAG_RTOL * np.sqrt(np.einsum("bij,bij->b", S, S))
    # work array is (m, m, batch) so every update runs over contiguous batch vectors;
    # odd sizes get an inert zero row/column that is never coupled to the rest
    m = n + n % 2
    layout, perms = _schedule(m)
    A = np.zeros((m, m, nb))
    A[:n, :n] = np.moveaxis(S, 0, -1)
    A = A[layout[:, None], layout]
    V = None
    if vectors:
        V = np.broadcast_to(np.eye(m)[:, :, None], (m, m, nb))[:, layout].copy()
    origin = layout.copy()
    sweeps = 0
    while not np.all(_off_norm(A) <= threshold):
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for perm in perms:
            _rotate_pairs(A, V)
            A = A[perm[:, None], perm]
            if V is not None:
                V = V[:, perm]
            origin = origin[perm]
    w = np.diagonal(A).copy()  # (batch, m)
    if V is not None:
        V = np.moveaxis(V, -1, 0)
    if m != n:
        keep = origin != n
        w = w[:, keep]
        if V is not None:
            V = V[:, :n, keep]
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1).reshape(batch + (n,))
    if V is not None:
        V = np.take_along_axis(V, order[:, None, :], axis=-1).reshape(batch + (n, n))
    return EigenDecomposition(w, V, sweeps)


def _rotate_pairs(A, V):
    """One parallel round: rotate every pair ``(2i, 2i+1)`` simultaneously.

    ``A`` and ``V`` are ``(m, m, batch)`` and updated in place.
    """
    m = A.shape[0]
    k = m // 2
    idx = np.arange(k)
    p, q = 2 * idx, 2 * idx + 1
    app = A[p, p]
    aqq = A[q, q]
    apq = A[p, q]
    nonzero = apq != 0.0
    # t = tan(theta), the smaller root of t^2 + 2 tau t - 1 = 0; huge tau gives t = 0
    with np.errstate(over="ignore"):
        tau = np.divide(aqq - app, 2.0 * apq, out=np.zeros_like(apq), where=nonzero)
        sign = np.where(tau >= 0.0, 1.0, -1.0)
        t = np.where(nonzero, sign / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # A <- J^T A J with J[p,p] = J[q,q] = c, J[p,q] = s, J[q,p] = -s
    rows = A.reshape(k, 2, m, -1)
    _mix(rows[:, 0], rows[:, 1], c[:, None, :], s[:, None, :])
    cols = A.reshape(m, k, 2, -1)
    _mix(cols[:, :, 0], cols[:, :, 1], c, s)
    if V is not None:
        cols = V.reshape(m, k, 2, -1)
        _mix(cols[:, :, 0], cols[:, :, 1], c, s)
    A[p, q] = 0.0
    A[q, p] = 0.0


def _mix(x, y, c, s):
    """In place: ``x, y <- c x - s y, s x + c y``."""
    x0 = x.copy()
    x *= c
    x -= s * y
    y *= c
    y += s * x0


def eigvalsh(S) -> np.ndarray:
    return jacobi_eigh(S, vectors=False).eigenvalues


def pd_floor(eigenvalues) -> np.ndarray:
    return PD_FLOOR_RTOL * (1.0 + np.abs(eigenvalues).max(axis=-1))


def _require_pd(eig: EigenDecomposition, name: str = "matrix"):
    if np.any(eig.eigenvalues[..., 0] <= pd_floor(eig.eigenvalues)):
        raise NotPositiveDefinite(f"{name} is not positive definite")


def spd_eig(S, name: str = "matrix") -> EigenDecomposition:
    eig = jacobi_eigh(S)
    _require_pd(eig, name)
    return eig


def spd_power(S, t: float) -> np.ndarray:
    """``S^t`` for symmetric positive definite ``S``.

    ``S`` may also be an :class:`EigenDecomposition` to reuse a spectrum.
    """
    if isinstance(S, EigenDecomposition):
        _require_pd(S)
        return S.apply(lambda w: w ** t)
    return spd_eig(S).apply(lambda w: w ** t)


def spd_inv(S) -> np.ndarray:
    return spd_power(S, -1.0)


def geometric_mean(A, B, lam: float) -> np.ndarray:
    """Weighted geometric mean ``A^(1/2) (A^(-1/2) B A^(-1/2))^lam A^(1/2)``.

    Evaluated literally through the congruence by ``A^(1/2)``.
    """
    A = as_symmetric(A, "A")
    B = as_symmetric(B, "B")
    _same_shape(A, B)
    _check_lambda(lam)
    eig_a = spd_eig(A, "A")
    inv_root = eig_a.apply(lambda w: 1.0 / np.sqrt(w))
    # A^(-1/2) B A^(-1/2) is positive definite iff B is
    inner = spd_eig(sym(inv_root @ B @ inv_root), "B")
    if lam == 0.0:
        return A
    if lam == 1.0:
        return B
    root = eig_a.apply(np.sqrt)
    return sym(root @ inner.apply(lambda w: w ** lam) @ root)


def harmonic_mean(A, B, lam: float) -> np.ndarray:
    """Weighted harmonic mean ``((1-lam) A^-1 + lam B^-1)^-1``."""
    A = as_symmetric(A, "A")
    B = as_symmetric(B, "B")
    _same_shape(A, B)
    _check_lambda(lam)
    inv_a = spd_inv(spd_eig(A, "A"))
    inv_b = spd_inv(spd_eig(B, "B"))
    if lam == 0.0:
        return A
    if lam == 1.0:
        return B
    return spd_inv((1.0 - lam) * inv_a + lam * inv_b)


def _check_lambda(lam):
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam!r}")


def spectral_radius(S) -> np.ndarray:
    w = eigvalsh(S)
    return np.maximum(np.abs(w[..., 0]), np.abs(w[..., -1]))


@dataclass(frozen=True)
class LoewnerVerdict:
    """Loewner comparison of ``A`` and ``B``.

    For stacked input every field is an array over the batch.
    """

    relation: object
    min_eig_B_minus_A: object
    min_eig_A_minus_B: object
    tol_used: object

    @property
    def leq(self):
        """``A <= B`` (including equality)."""
        return np.isin(self.relation, (LEQ, EQUAL))

    @property
    def geq(self):
        return np.isin(self.relation, (GEQ, EQUAL))

    def as_dict(self) -> dict:
        return {k: np.asarray(v).tolist() for k, v in self.__dict__.items()}


def _scalar_or_array(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


def loewner_cmp(A, B, tol: float | None = None) -> LoewnerVerdict:
    """Compare ``A`` and ``B`` in the Loewner order via the spectrum of ``B - A``.

    The default tolerance is ``1e-10 * (1 + max(rho(A), rho(B)))``.
    """
    A = as_symmetric(A, "A")
    B = as_symmetric(B, "B")
    _same_shape(A, B)
    if tol is None:
        # one batched call for the spectra of B - A, A and B
        w = eigvalsh(np.stack([B - A, A, B]))
        radius = np.maximum(np.abs(w[..., 0]), np.abs(w[..., -1]))
        tol = PSD_RTOL * (1.0 + np.maximum(radius[1], radius[2]))
        w = w[0]
    else:
        w = eigvalsh(B - A)
    lo = w[..., 0]
    hi = w[..., -1]
    tol = np.broadcast_to(np.asarray(tol, dtype=float), lo.shape)
    b_geq_a = lo >= -tol
    a_geq_b = -hi >= -tol
    relation = np.where(b_geq_a & a_geq_b, EQUAL,
                        np.where(b_geq_a, LEQ, np.where(a_geq_b, GEQ, INCOMPARABLE)))
    return LoewnerVerdict(_scalar_or_array(relation), _scalar_or_array(lo),
                          _scalar_or_array(-hi), _scalar_or_array(tol))
