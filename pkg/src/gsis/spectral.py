"""Joint spectral analysis of commuting shift families.

Commuting symmetric shifts share an orthonormal eigenbasis U.  The basis is
found by eigendecomposing one random linear combination of the shifts and
verifying that it diagonalizes every member; degenerate combinations are
redrawn.  U defines the graph Fourier transform x_hat = U.T x, under which
every shift acts as multiplication by its eigenvalue sequence.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import DiagonalizationError
from .graphs import Signal, ShiftMatrix, ShiftSet

__all__ = [
    "SpectralDecomposition",
    "diagonalize_simultaneously",
    "gft",
    "igft",
    "apply_polynomial_filter",
    "polynomial_filter_matrix",
    "is_polynomial_filter",
    "lagrange_projector",
    "graded_multi_indices",
]


def _signal_values(x) -> np.ndarray:
    if isinstance(x, Signal):
        return np.asarray(x.values, dtype=float)
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Common eigenstructure of a commuting shift family.

    Attributes
    ----------
    basis : (N, N) ndarray
        Orthogonal matrix whose columns are the common eigenvectors, ordered
        lexicographically by joint eigenvalue vector and sign-normalized so
        the first entry of each column with magnitude above 1e-8 is positive.
    eigenvalues : (L, N) ndarray
        ``eigenvalues[l, n]`` is the eigenvalue of shift l on column n.
    assumption1_holds : bool
        True when the N joint eigenvalue vectors are pairwise distinct
        (separation above ``1e-8 *`` their diameter).
    min_spectral_gap : float
        Smallest pairwise distance between joint eigenvalue vectors
        (``inf`` for N = 1).
    max_residual : float
        Largest relative off-diagonal residual
        ``||U.T S_l U - diag||_F / ||S_l||_F`` over the shifts.
    shifts : ShiftSet
        The family that was decomposed.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray
    assumption1_holds: bool
    min_spectral_gap: float
    max_residual: float
    shifts: ShiftSet

    @property
    def n_vertices(self) -> int:
        return self.basis.shape[0]

    @property
    def n_shifts(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def joint_spectrum(self) -> np.ndarray:
        """(N, L) array whose row n is the joint eigenvalue vector of column n."""
        return self.eigenvalues.T

    def gft(self, x) -> np.ndarray:
        return gft(self, x)

    def igft(self, x_hat) -> np.ndarray:
        return igft(self, x_hat)


def _sign_normalize(u: np.ndarray, threshold: float = 1e-8) -> np.ndarray:
    """Flip column signs so the first entry with magnitude > threshold is positive."""
    u = u.copy()
    big = np.abs(u) > threshold
    for n in range(u.shape[1]):
        idx = np.flatnonzero(big[:, n])
        if idx.size and u[idx[0], n] < 0:
            u[:, n] = -u[:, n]
    return u


def _pairwise_gap_and_diameter(points: np.ndarray) -> tuple[float, float]:
    """Min and max pairwise euclidean distance among rows (inf/0 for a single row)."""
    n = points.shape[0]
    if n < 2:
        return np.inf, 0.0
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    iu = np.triu_indices(n, k=1)
    vals = dist[iu]
    return float(vals.min()), float(vals.max())


def diagonalize_simultaneously(
    shifts: ShiftSet,
    *,
    tol: float = 1e-9,
    seed: int = 0,
    max_retries: int = 8,
) -> SpectralDecomposition:
    """Find one orthonormal basis diagonalizing every shift in the set.

    A random unit combination ``T = sum_l d_l S_l`` is eigendecomposed and
    the candidate basis accepted when every per-shift off-diagonal residual
    is at most ``tol * ||S_l||_F``. A draw of d that accidentally merges
    distinct joint eigenvalues fails that check and is redrawn, up to
    ``max_retries`` fresh draws.

    Raises
    ------
    ValueError
        If the shifts do not commute.
    DiagonalizationError
        If no draw passes the residual check.
    """
    if not isinstance(shifts, ShiftSet):
        shifts = ShiftSet(tuple(shifts))
    mats = shifts.matrices()
    n_shifts, n = mats.shape[0], mats.shape[1]
    norms = np.linalg.norm(mats, axis=(1, 2))
    rng = np.random.default_rng(seed)
    worst_seen = np.inf
    for attempt in range(max_retries):
        if n_shifts == 1:
            combo = mats[0]
        else:
            d = rng.standard_normal(n_shifts)
            d /= np.linalg.norm(d)
            combo = np.tensordot(d, mats, axes=1)
        _, u = np.linalg.eigh(combo)
        rotated = np.einsum("in,lij,jm->lnm", u, mats, u, optimize=True)
        lams = np.einsum("lnn->ln", rotated)
        off = rotated - lams[:, :, None] * np.eye(n)
        residuals = np.linalg.norm(off, axis=(1, 2))
        rel = residuals / np.where(norms > 0, norms, 1.0)
        worst_seen = min(worst_seen, float(rel.max()))
        if np.all(residuals <= tol * norms):
            order = np.lexsort(tuple(lams[l] for l in range(n_shifts - 1, -1, -1)))
            u = _sign_normalize(u[:, order])
            lams = np.ascontiguousarray(lams[:, order])
            gap, diameter = _pairwise_gap_and_diameter(lams.T)
            assumption1 = bool(gap > 1e-8 * diameter) and n >= 1 and gap > 0.0
            u.flags.writeable = False
            lams.flags.writeable = False
            return SpectralDecomposition(
                basis=u,
                eigenvalues=lams,
                assumption1_holds=assumption1,
                min_spectral_gap=gap,
                max_residual=float(rel.max()),
                shifts=shifts,
            )
        if n_shifts == 1:
            break
    raise DiagonalizationError(
        f"no common eigenbasis within tolerance {tol:.1e} after {max_retries} draws "
        f"(best relative residual {worst_seen:.3e})"
    )


def gft(decomp: SpectralDecomposition, x) -> np.ndarray:
    """Graph Fourier transform ``x_hat = U.T x`` (accepts (N,) or (N, K))."""
    return decomp.basis.T @ _signal_values(x)


def igft(decomp: SpectralDecomposition, x_hat) -> np.ndarray:
    """Inverse transform ``x = U x_hat``."""
    return decomp.basis @ np.asarray(x_hat, dtype=float)


def _normalize_coeffs(
    coeffs: Mapping, n_shifts: int
) -> dict[tuple[int, ...], float]:
    out: dict[tuple[int, ...], float] = {}
    for key, value in coeffs.items():
        if isinstance(key, (int, np.integer)):
            if n_shifts != 1:
                raise ValueError(
                    f"scalar exponent {key} is ambiguous with {n_shifts} shifts; "
                    "use a tuple of exponents"
                )
            key = (int(key),)
        else:
            key = tuple(int(a) for a in key)
        if len(key) != n_shifts:
            raise ValueError(f"exponent {key} has length {len(key)}, expected {n_shifts}")
        if any(a < 0 for a in key):
            raise ValueError(f"exponents must be nonnegative, got {key}")
        out[key] = out.get(key, 0.0) + float(value)
    return out


def _monomial_apply(
    mats: np.ndarray, alpha: tuple[int, ...], x: np.ndarray, cache: dict
) -> np.ndarray:
    """Apply S_1^a1 ... S_L^aL to x, memoizing partial products."""
    if alpha in cache:
        return cache[alpha]
    if all(a == 0 for a in alpha):
        cache[alpha] = x
        return x
    last = max(l for l, a in enumerate(alpha) if a > 0)
    prev = list(alpha)
    prev[last] -= 1
    v = mats[last] @ _monomial_apply(mats, tuple(prev), x, cache)
    cache[alpha] = v
    return v


def apply_polynomial_filter(
    shifts: ShiftSet,
    coeffs: Mapping,
    x,
    decomp: SpectralDecomposition | None = None,
) -> np.ndarray:
    """Apply ``H = sum_alpha h_alpha S_1^a1 ... S_L^aL`` to a signal.

    ``coeffs`` maps exponent tuples (or plain ints when there is a single
    shift) to real coefficients. Without ``decomp`` the filter is evaluated
    by repeated shift application (Horner's rule for one shift, memoized
    monomials otherwise); with ``decomp`` it is evaluated spectrally as a
    multiplier on the transform.
    """
    vals = _signal_values(x)
    cmap = _normalize_coeffs(coeffs, shifts.n_shifts)
    if decomp is not None:
        mult = np.zeros(decomp.n_vertices)
        for alpha, h in cmap.items():
            term = np.full(decomp.n_vertices, h)
            for l, a in enumerate(alpha):
                if a:
                    term = term * decomp.eigenvalues[l] ** a
            mult += term
        return decomp.basis @ (mult * (decomp.basis.T @ vals))
    mats = shifts.matrices()
    if shifts.n_shifts == 1:
        degree = max(a for (a,) in cmap)
        dense = np.zeros(degree + 1)
        for (a,), h in cmap.items():
            dense[a] = h
        out = dense[degree] * vals
        for a in range(degree - 1, -1, -1):
            out = mats[0] @ out + dense[a] * vals
        return out
    cache: dict = {}
    out = np.zeros_like(vals)
    for alpha, h in cmap.items():
        out = out + h * _monomial_apply(mats, alpha, vals, cache)
    return out


def polynomial_filter_matrix(
    shifts: ShiftSet,
    coeffs: Mapping,
    decomp: SpectralDecomposition | None = None,
) -> np.ndarray:
    """Dense matrix of the polynomial filter with the given coefficients."""
    eye = np.eye(shifts.n_vertices)
    return apply_polynomial_filter(shifts, coeffs, eye, decomp)


def is_polynomial_filter(
    h_matrix: np.ndarray,
    shifts: ShiftSet,
    tol: float | None = None,
    decomp: SpectralDecomposition | None = None,
) -> bool:
    """Test whether a matrix commutes with every shift in the set.

    When the joint eigenvalue vectors are pairwise distinct this is
    equivalent to H being a polynomial in the shifts; if ``decomp`` is
    supplied and that distinctness fails, a warning notes that commuting
    matrices may then fall outside the polynomial algebra.
    """
    h = np.asarray(h_matrix, dtype=float)
    n = shifts.n_vertices
    if h.shape != (n, n):
        raise ValueError(f"filter of shape {h.shape} on {n} vertices")
    if decomp is not None and not decomp.assumption1_holds:
        warnings.warn(
            "joint eigenvalues are not pairwise distinct: a commuting matrix "
            "need not be a polynomial in the shifts",
            stacklevel=2,
        )
    if tol is None:
        scale = max(float(np.linalg.norm(s.matrix)) for s in shifts)
        tol = 1e-10 * max(1.0, float(np.linalg.norm(h)) * max(1.0, scale))
    return all(
        np.linalg.norm(h @ s.matrix - s.matrix @ h) <= tol for s in shifts
    )


def lagrange_projector(decomp: SpectralDecomposition, n: int) -> np.ndarray:
    """Rank-one projector ``u_n u_n.T`` onto the n-th eigenvector.

    When the joint eigenvalues are pairwise distinct this equals the
    interpolating polynomial of the shifts that is 1 at eigenvalue n and 0
    elsewhere; without distinctness it is still a valid projector but has
    no polynomial representation.
    """
    if not 0 <= n < decomp.n_vertices:
        raise ValueError(f"eigenvector index {n} out of range")
    u = decomp.basis[:, n]
    return np.outer(u, u)


def graded_multi_indices(n_shifts: int, max_total: int) -> list[tuple[int, ...]]:
    """All exponent tuples with total degree <= max_total, graded then lexicographic."""

    def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    out: list[tuple[int, ...]] = []
    for total in range(max_total + 1):
        out.extend(compositions(total, n_shifts))
    return out
