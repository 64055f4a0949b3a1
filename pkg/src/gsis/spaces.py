"""Shift-invariant subspaces of signals on a graph.

A subspace is shift invariant when every shift maps it into itself.  Such
spaces are exactly the spans of eigenvector subsets (bandlimited spaces),
and equally the spans of shifted generator families; this module builds
them from either description, produces canonical single generators, and
computes the stability constants of the resulting generator systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DistinctnessError
from .graphs import Signal, ShiftSet, frobenius_tol
from .orthogonalize import ADDED, OrthogonalBasis
from .spectral import SpectralDecomposition, graded_multi_indices

__all__ = [
    "SignalSpace",
    "CanonicalGenerator",
    "UncertaintyReport",
    "bandlimited_space",
    "gsis_from_generators",
    "krylov_subspace",
    "canonical_generator",
    "riesz_bounds",
    "frame_bounds",
    "uniform_norm_star",
    "uncertainty_check",
    "is_shift_invariant",
    "joint_eigenvalue_clusters",
]


def _gen_values(g) -> np.ndarray:
    v = np.asarray(g.values if isinstance(g, Signal) else g, dtype=float).reshape(-1)
    return v


@dataclass(frozen=True)
class SignalSpace:
    """Shift-invariant subspace with an explicit orthonormal basis.

    Attributes
    ----------
    omega : tuple of int
        Sorted frequency indices spanning the space. When some joint
        eigenvalues repeat, the indices are representatives chosen inside
        each repeated group.
    basis : (N, dim) ndarray
        Orthonormal basis. Equals the eigenvector columns at ``omega``
        whenever the joint eigenvalues there are simple.
    decomp : SpectralDecomposition
    provenance : str
        ``"bandlimited"``, ``"gsis"`` (several generators) or ``"pgsis"``
        (single generator).
    generators : tuple of ndarray, optional
        The generator family the space was built from, if any.
    """

    omega: tuple[int, ...]
    basis: np.ndarray
    decomp: SpectralDecomposition
    provenance: str
    generators: tuple[np.ndarray, ...] | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.basis.shape[0]

    def project(self, x) -> np.ndarray:
        """Orthogonal projection onto the space."""
        v = _gen_values(x)
        return self.basis @ (self.basis.T @ v)

    def contains(self, x, tol: float = 1e-8) -> bool:
        """Membership test: projection residual at most ``tol * ||x||_2``."""
        v = _gen_values(x)
        scale = float(np.linalg.norm(v))
        if scale == 0.0:
            return True
        return float(np.linalg.norm(v - self.project(v))) <= tol * scale


def bandlimited_space(decomp: SpectralDecomposition, omega: Sequence[int]) -> SignalSpace:
    """Span of the eigenvector columns with indices in ``omega``."""
    n = decomp.n_vertices
    idx = sorted({int(k) for k in omega})
    if len(idx) != len(list(omega)):
        raise ValueError("omega contains repeated indices")
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"omega indices must lie in [0, {n})")
    basis = decomp.basis[:, idx].copy()
    return SignalSpace(tuple(idx), basis, decomp, "bandlimited")


def joint_eigenvalue_clusters(decomp: SpectralDecomposition, rel: float = 1e-8) -> list[list[int]]:
    """Group frequency indices whose joint eigenvalue vectors coincide.

    Vectors closer than ``rel`` times the spectrum diameter count as equal.
    Returns the groups sorted by smallest member; under pairwise-distinct
    joint eigenvalues every group is a singleton.
    """
    pts = decomp.joint_spectrum
    n = pts.shape[0]
    if n == 1:
        return [[0]]
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    threshold = rel * float(dist.max())
    close = dist <= threshold
    seen = np.zeros(n, dtype=bool)
    groups = []
    for start in range(n):
        if seen[start]:
            continue
        stack, members = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            members.append(i)
            for j in np.flatnonzero(close[i] & ~seen):
                seen[j] = True
                stack.append(int(j))
        groups.append(sorted(members))
    return groups


def gsis_from_generators(
    shifts: ShiftSet,
    decomp: SpectralDecomposition,
    generators: Sequence,
    support_tol: float = 1e-10,
) -> SignalSpace:
    """Smallest shift-invariant space containing the given generators.

    With pairwise-distinct joint eigenvalues the space is bandlimited to
    the union of the generators' spectral supports (entries above
    ``support_tol`` times each transform's norm). When joint eigenvalues
    repeat, the span inside each repeated eigenspace is the span of the
    generators' projections, so the basis is adapted eigenspace by
    eigenspace and ``omega`` holds representative indices.

    Raises
    ------
    ValueError
        If a generator is identically zero or has the wrong length.
    """
    n = decomp.n_vertices
    gens = [_gen_values(g) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    for g in gens:
        if g.shape[0] != n:
            raise ValueError(f"generator of length {g.shape[0]} on {n} vertices")
        if not np.any(g):
            raise ValueError("generator is identically zero")
    ghat = decomp.basis.T @ np.column_stack(gens)
    scales = np.linalg.norm(ghat, axis=0)
    provenance = "pgsis" if len(gens) == 1 else "gsis"
    stored = tuple(g.copy() for g in gens)

    if decomp.assumption1_holds:
        support = np.abs(ghat) > support_tol * scales[None, :]
        omega = np.flatnonzero(support.any(axis=1))
        basis = decomp.basis[:, omega].copy()
        return SignalSpace(tuple(int(k) for k in omega), basis, decomp, provenance, stored)

    # Repeated joint eigenvalues: the generators' projections pick out the
    # relevant directions inside each repeated eigenspace.
    max_scale = float(scales.max())
    omega: list[int] = []
    cols: list[np.ndarray] = []
    for group in joint_eigenvalue_clusters(decomp):
        sub = ghat[group, :]
        if len(group) == 1:
            if np.any(np.abs(sub[0]) > support_tol * scales):
                omega.append(group[0])
                cols.append(decomp.basis[:, group[0]])
            continue
        left, svals, _ = np.linalg.svd(sub, full_matrices=False)
        rank = int(np.sum(svals > support_tol * max_scale))
        for r in range(rank):
            omega.append(group[r])
            cols.append(decomp.basis[:, group] @ left[:, r])
    order = np.argsort(omega)
    basis = (
        np.column_stack([cols[k] for k in order]) if omega else np.zeros((n, 0))
    )
    return SignalSpace(
        tuple(int(omega[k]) for k in order), basis, decomp, provenance, stored
    )


def krylov_subspace(
    shifts: ShiftSet,
    generators: Sequence,
    level: int,
    weight: np.ndarray | None = None,
    drop_rel: float = 1e-10,
) -> tuple[np.ndarray, list[int]]:
    """Orthonormal basis of the shifted-generator span up to a given level.

    Level n spans all ``S_1^a1 ... S_L^aL phi`` with total degree at most n.
    Each level applies every shift (in index order) to the vectors newly
    added at the previous level and orthogonalizes, so the basis grows
    monotonically and stalls exactly when the span stops growing.

    Parameters
    ----------
    weight : (M, N) ndarray, optional
        Sampling matrix; when given, the dependence test uses the weighted
        form ``(W x) . (W y)``, so directions the weight cannot separate do
        not enlarge the span.

    Returns
    -------
    basis : (N, d) ndarray
        Euclidean-orthonormal columns spanning the accepted directions.
    dims : list of int
        ``dims[k]`` is the dimension after level k, for k = 0 .. level.
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    gens = [_gen_values(g) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    n = shifts.n_vertices
    basis = OrthogonalBasis(n, weight, drop_rel=drop_rel)
    new = []
    for g in gens:
        if g.shape[0] != n:
            raise ValueError(f"generator of length {g.shape[0]} on {n} vertices")
        before = basis.dim
        if basis.try_add(g) == ADDED:
            new.append(before)
    dims = [basis.dim]
    for _ in range(level):
        if not new:
            dims.append(basis.dim)
            continue
        added = []
        for s in shifts:
            for idx in new:
                before = basis.dim
                if basis.try_add(s.matrix @ basis.basis[:, idx]) == ADDED:
                    added.append(before)
        new = added
        dims.append(basis.dim)
    return basis.basis.copy(), dims


class CanonicalGenerator(NamedTuple):
    generator: np.ndarray
    combined_shift: np.ndarray
    direction: np.ndarray


def canonical_generator(
    decomp: SpectralDecomposition,
    omega: Sequence[int],
    *,
    seed: int = 0,
    max_retries: int = 32,
    gap_rel: float = 1e-8,
) -> CanonicalGenerator:
    """Single generator and scalarizing shift for a bandlimited space.

    The generator is the inverse transform of the indicator of ``omega``.
    A random unit direction d turns the shift family into the single
    matrix ``T = sum_l d_l S_l``; d is redrawn until the scalar
    eigenvalues ``d . lambda(n)`` are pairwise distinct over ``omega``,
    and the powers ``T^m generator`` for m < #omega are verified to span
    the space.

    Raises
    ------
    DistinctnessError
        If the joint eigenvalues repeat on ``omega``, or no accepted
        direction is found within ``max_retries`` draws.
    """
    idx = sorted({int(k) for k in omega})
    if not idx:
        raise ValueError("omega must be nonempty")
    n = decomp.n_vertices
    if idx[0] < 0 or idx[-1] >= n:
        raise ValueError(f"omega indices must lie in [0, {n})")
    points = decomp.joint_spectrum[idx]
    if len(idx) > 1:
        diff = points[:, None, :] - points[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=2))
        iu = np.triu_indices(len(idx), k=1)
        if dist[iu].min() <= gap_rel * max(dist[iu].max(), 1e-300):
            raise DistinctnessError(
                "joint eigenvalues repeat on omega; no single-generator description exists"
            )
    phi0 = decomp.basis[:, idx] @ np.ones(len(idx))
    mats = decomp.shifts.matrices()
    rng = np.random.default_rng(seed)
    m = len(idx)
    for _ in range(max_retries):
        d = rng.standard_normal(mats.shape[0])
        d /= np.linalg.norm(d)
        scal = points @ d
        if m > 1:
            gaps = np.abs(scal[:, None] - scal[None, :])[np.triu_indices(m, k=1)]
            if gaps.min() <= gap_rel * max(gaps.max(), 1e-300):
                continue
        t_mat = np.tensordot(d, mats, axes=1)
        # Stable rank check of {T^k phi0 : k < m} through an orthogonal chain.
        chain = OrthogonalBasis(n)
        chain.try_add(phi0)
        ok = chain.dim == 1
        for _ in range(m - 1):
            if not ok:
                break
            ok = chain.try_add(t_mat @ chain.basis[:, chain.dim - 1]) == ADDED
        if ok and chain.dim == m:
            return CanonicalGenerator(phi0, t_mat, d)
    raise DistinctnessError(
        f"no direction made the scalar eigenvalues distinct on omega "
        f"within {max_retries} draws"
    )


def riesz_bounds(
    decomp: SpectralDecomposition,
    combined_shift: np.ndarray,
    phi0,
    omega: Sequence[int],
) -> tuple[float, float]:
    """Extreme singular values of the shifted-generator system on a space.

    For the basis ``{T^m phi0 : 0 <= m < #omega}`` of the space spanned by
    the eigenvectors at ``omega``, returns ``(smallest, largest)`` singular
    value of the matrix ``[phi0_hat(n) * lambda_T(n)^m]``; these are the
    optimal constants c, C in
    ``c ||a||_2 <= || sum_m a_m T^m phi0 ||_2 <= C ||a||_2``.

    Raises
    ------
    ValueError
        If ``combined_shift`` is not diagonalized by the decomposition
        basis, or the generator's spectral support does not equal ``omega``.
    """
    idx = sorted({int(k) for k in omega})
    t_mat = np.asarray(combined_shift, dtype=float)
    rotated = decomp.basis.T @ t_mat @ decomp.basis
    lam_t = np.diag(rotated).copy()
    off = rotated - np.diag(lam_t)
    if np.linalg.norm(off) > frobenius_tol(t_mat, 1e-8):
        raise ValueError("combined shift is not diagonalized by the decomposition basis")
    phat = decomp.basis.T @ _gen_values(phi0)
    scale = float(np.linalg.norm(phat))
    if scale == 0.0:
        raise ValueError("generator is identically zero")
    inside = np.zeros(decomp.n_vertices, dtype=bool)
    inside[idx] = True
    if np.any(np.abs(phat[~inside]) > 1e-8 * scale):
        raise ValueError("generator has spectral content outside omega")
    if np.any(np.abs(phat[inside]) <= 1e-10 * scale):
        raise ValueError("generator vanishes on part of omega")
    v = phat[idx, None] * np.vander(lam_t[idx], len(idx), increasing=True)
    svals = np.linalg.svd(v, compute_uv=False)
    return float(svals[-1]), float(svals[0])


def frame_bounds(
    decomp: SpectralDecomposition,
    phi0,
    level: int,
) -> tuple[float, float]:
    """Frame constants of the family ``{S^alpha phi0 : |alpha| <= level - 1}``.

    Returns ``(smallest positive, largest)`` singular value of the matrix
    with rows indexed by frequency and one column
    ``lambda(n)^alpha * phi0_hat(n)`` per exponent tuple, in graded
    lexicographic order. For any x in the space generated by ``phi0``,
    ``smin * ||x|| <= sqrt(sum_alpha <x, S^alpha phi0>^2) <= smax * ||x||``
    once ``level`` is large enough for the family to span the space.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    phat = decomp.basis.T @ _gen_values(phi0)
    if not np.any(phat):
        raise ValueError("generator is identically zero")
    alphas = graded_multi_indices(decomp.n_shifts, level - 1)
    cols = np.empty((decomp.n_vertices, len(alphas)))
    for k, alpha in enumerate(alphas):
        col = phat.copy()
        for l, a in enumerate(alpha):
            if a:
                col = col * decomp.eigenvalues[l] ** a
        cols[:, k] = col
    svals = np.linalg.svd(cols, compute_uv=False)
    cutoff = svals[0] * max(cols.shape) * np.finfo(float).eps
    positive = svals[svals > cutoff]
    return float(positive[-1]), float(svals[0])


def uniform_norm_star(u: np.ndarray, mode: str = "exact") -> float:
    """Localization constant of an orthogonal basis.

    ``exact`` enumerates every pair of nonempty vertex and frequency
    subsets (W, Omega), keeps those whose basis energy
    ``sum_{i in W, n in Omega} u[i, n]^2`` reaches 1, and returns the
    largest ``(#W * #Omega)^{-1/2}``; limited to 12 columns. The energy
    test allows 1e-9 slack so exactly-attained thresholds survive
    rounding. ``infinity_bound`` returns ``max |u[i, n]|``, an upper bound
    for the exact value.

    Raises
    ------
    ValueError
        Non-orthogonal input, unknown mode, or ``exact`` beyond 12 columns.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    n = u.shape[0]
    if np.abs(u.T @ u - np.eye(n)).max() > 1e-8:
        raise ValueError("matrix columns are not orthonormal")
    if mode == "infinity_bound":
        return float(np.abs(u).max())
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}; expected 'exact' or 'infinity_bound'")
    if n > 12:
        raise ValueError(f"exact mode enumerates subsets and is limited to 12 columns, got {n}")
    energy = u * u
    n_subsets = (1 << n) - 1
    masks = np.zeros((n_subsets, n), dtype=bool)
    for s in range(1, n_subsets + 1):
        masks[s - 1] = [(s >> b) & 1 for b in range(n)]
    col_counts = masks.sum(axis=1)
    # rows_energy[k, i] = energy of row i against frequency subset k
    rows_energy = masks @ energy.T
    rows_sorted = np.sort(rows_energy, axis=1)[:, ::-1]
    best_by_rows = np.cumsum(rows_sorted, axis=1)
    best_product = None
    for w in range(1, n + 1):
        reaches = best_by_rows[:, w - 1] >= 1.0 - 1e-9
        if not np.any(reaches):
            continue
        product = w * int(col_counts[reaches].min())
        if best_product is None or product < best_product:
            best_product = product
    return float(best_product) ** -0.5


@dataclass(frozen=True)
class UncertaintyReport:
    """Outcome of the support-size uncertainty inequality for one generator."""

    support_size: int
    space_dim: int
    localization: float
    localization_mode: str
    lower_bound: float
    holds: bool


def uncertainty_check(
    decomp: SpectralDecomposition,
    phi0,
    support_tol: float = 1e-10,
) -> UncertaintyReport:
    """Check ``#support(phi0) * dim H(phi0) >= localization^{-2}``.

    The localization constant is computed exactly for up to 12 vertices
    and replaced by the (larger) max-entry bound otherwise, which only
    weakens the right-hand side.
    """
    v = _gen_values(phi0)
    scale = float(np.linalg.norm(v))
    if scale == 0.0:
        raise ValueError("generator is identically zero")
    support_size = int(np.sum(np.abs(v) > support_tol * scale))
    space = gsis_from_generators(decomp.shifts, decomp, [v], support_tol)
    mode = "exact" if decomp.n_vertices <= 12 else "infinity_bound"
    loc = uniform_norm_star(decomp.basis, mode)
    bound = loc**-2
    return UncertaintyReport(
        support_size=support_size,
        space_dim=space.dim,
        localization=loc,
        localization_mode=mode,
        lower_bound=bound,
        holds=bool(support_size * space.dim >= bound - 1e-9),
    )


def is_shift_invariant(
    space: SignalSpace, shifts: ShiftSet, tol: float | None = None
) -> bool:
    """True when every shift maps the space into itself.

    Each basis column b is shifted and projected back; the residual must
    stay within ``tol`` (default ``1e-10 * max(1, ||S_l||_F)`` per shift)
    times ``||b||_2 = 1``.
    """
    b = space.basis
    if b.shape[1] == 0:
        return True
    for s in shifts:
        shifted = s.matrix @ b
        residual = shifted - b @ (b.T @ shifted)
        bound = frobenius_tol(s.matrix) if tol is None else tol
        if np.linalg.norm(residual, axis=0).max() > bound:
            return False
    return True
