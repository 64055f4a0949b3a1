"""Sampling schemes, injectivity tests, and reconstruction in generated spaces.

Reconstruction comes in two forms: a closed-form least-squares solve on a
bandlimited space, and an iterative routine that grows the shifted-generator
span level by level, keeping the running estimate optimal over the current
level at every step.  The iterative routine terminates in finitely many
levels because the spans stop growing.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateInnerProductError, NonInjectiveSamplingError
from .graphs import Signal, ShiftSet, frobenius_tol
from .orthogonalize import ADDED, DEPENDENT, INVISIBLE, OrthogonalBasis
from .spaces import krylov_subspace
from .spectral import SpectralDecomposition

__all__ = [
    "SamplingScheme",
    "Observation",
    "ReconstructionResult",
    "DynamicInjectivity",
    "subset_sampler",
    "dynamic_sampler",
    "check_injective",
    "check_bandlimited_injective",
    "check_dynamic_injective",
    "reconstruct_direct",
    "reconstruct_krylov",
    "degenerate_dimension_check",
]


def _values(x) -> np.ndarray:
    if isinstance(x, Signal):
        return np.asarray(x.values, dtype=float)
    return np.asarray(x, dtype=float).reshape(-1)


@dataclass(frozen=True)
class SamplingScheme:
    """Linear observation map ``y = A x``.

    ``provenance`` records how the matrix was built: ``"subset"`` (rows
    are vertex indicators), ``"dynamic"`` (one vertex observed under
    repeated state evolution) or ``"custom"``.
    """

    matrix: np.ndarray
    provenance: str = "custom"
    vertices: tuple[int, ...] | None = None
    initial_vertex: int | None = None
    n_snapshots: int | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2:
            raise ValueError("sampling matrix must be two-dimensional")
        if not np.all(np.isfinite(m)):
            raise ValueError("sampling matrix entries must be finite")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_samples(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_vertices(self) -> int:
        return self.matrix.shape[1]

    def apply(self, x) -> np.ndarray:
        return self.matrix @ _values(x)


@dataclass(frozen=True)
class Observation:
    """Observed samples together with the scheme that produced them."""

    values: np.ndarray
    scheme: SamplingScheme
    noise: dict | None = None

    def __post_init__(self):
        v = np.array(_values(self.values))
        if v.shape[0] != self.scheme.n_samples:
            raise ValueError(
                f"{v.shape[0]} observed values for a scheme with "
                f"{self.scheme.n_samples} samples"
            )
        v.flags.writeable = False
        object.__setattr__(self, "values", v)


def _observed(y) -> np.ndarray:
    if isinstance(y, Observation):
        return np.asarray(y.values, dtype=float)
    return _values(y)


def subset_sampler(n_vertices: int, vertices: Sequence[int]) -> SamplingScheme:
    """Scheme that reads the signal at a sorted set of vertices."""
    idx = sorted({int(i) for i in vertices})
    if len(idx) != len(list(vertices)):
        raise ValueError("sampling vertices contain repeats")
    if not idx:
        raise ValueError("at least one sampling vertex is required")
    if idx[0] < 0 or idx[-1] >= n_vertices:
        raise ValueError(f"sampling vertices must lie in [0, {n_vertices})")
    a = np.zeros((len(idx), n_vertices))
    a[np.arange(len(idx)), idx] = 1.0
    return SamplingScheme(a, "subset", vertices=tuple(idx))


def dynamic_sampler(
    decomp: SpectralDecomposition,
    state_matrix: np.ndarray,
    initial_vertex: int,
    n_snapshots: int,
) -> SamplingScheme:
    """Scheme observing one vertex of ``D^m x`` for m = 0 .. n_snapshots - 1.

    The state matrix must be diagonalized by the decomposition basis (any
    polynomial in the shifts qualifies), so each row is
    ``sum_n lambda_D(n)^m u_n(i0) u_n`` on the transform side.
    """
    d_mat = np.asarray(state_matrix, dtype=float)
    n = decomp.n_vertices
    if d_mat.shape != (n, n):
        raise ValueError(f"state matrix of shape {d_mat.shape} on {n} vertices")
    rotated = decomp.basis.T @ d_mat @ decomp.basis
    if np.linalg.norm(rotated - np.diag(np.diag(rotated))) > frobenius_tol(d_mat, 1e-8):
        raise ValueError("state matrix is not diagonalized by the decomposition basis")
    if not 0 <= initial_vertex < n:
        raise ValueError(f"initial vertex {initial_vertex} out of range")
    if n_snapshots < 1:
        raise ValueError("at least one snapshot is required")
    rows = np.empty((n_snapshots, n))
    row = np.zeros(n)
    row[initial_vertex] = 1.0
    for m in range(n_snapshots):
        rows[m] = row
        row = d_mat.T @ row
    return SamplingScheme(
        rows, "dynamic", initial_vertex=int(initial_vertex), n_snapshots=int(n_snapshots)
    )


def check_injective(
    scheme: SamplingScheme, space_matrix: np.ndarray, tol: float | None = None
) -> bool:
    """Whether the scheme separates points of ``span(space_matrix)``.

    Tested as ``rank(F) == rank(A F)`` for a matrix F whose columns span
    the space; ``tol`` is passed to the rank computation.
    """
    f = np.asarray(space_matrix, dtype=float)
    if f.ndim != 2 or f.shape[0] != scheme.n_vertices:
        raise ValueError(f"space matrix of shape {f.shape} under a scheme on {scheme.n_vertices} vertices")
    return int(np.linalg.matrix_rank(f, tol=tol)) == int(
        np.linalg.matrix_rank(scheme.matrix @ f, tol=tol)
    )


def check_bandlimited_injective(
    decomp: SpectralDecomposition, omega: Sequence[int], vertices: Sequence[int]
) -> bool:
    """Subset-sampling injectivity on a bandlimited space.

    Reading vertices W determines signals bandlimited to omega exactly
    when the submatrix ``u_n(i)`` (rows W, columns omega) has full column
    rank.
    """
    idx = sorted({int(k) for k in omega})
    w = sorted({int(i) for i in vertices})
    if not idx:
        return True
    sub = decomp.basis[np.ix_(w, idx)]
    return int(np.linalg.matrix_rank(sub)) == len(idx)


class DynamicInjectivity(NamedTuple):
    ok: bool
    reason: str


def check_dynamic_injective(
    decomp: SpectralDecomposition,
    omega: Sequence[int],
    state_matrix: np.ndarray,
    initial_vertex: int,
    n_snapshots: int,
    *,
    gap_rel: float = 1e-10,
) -> DynamicInjectivity:
    """Dynamic-sampling injectivity on a bandlimited space, by criterion.

    Injective exactly when there are at least as many snapshots as
    frequencies, the state eigenvalues are pairwise distinct on omega,
    and the observed vertex has a nonzero entry in every eigenvector of
    omega. The returned reason names the first failed condition.
    """
    idx = sorted({int(k) for k in omega})
    if not idx:
        return DynamicInjectivity(True, "injective")
    lam = _dynamic_eigenvalues(decomp, state_matrix)
    if n_snapshots < len(idx):
        return DynamicInjectivity(
            False, f"insufficient snapshots ({n_snapshots} < {len(idx)})"
        )
    sub = lam[idx]
    scale = max(float(np.abs(lam).max()), 1e-300)
    gaps = np.abs(sub[:, None] - sub[None, :])[np.triu_indices(len(idx), k=1)]
    if len(idx) > 1 and gaps.min() <= gap_rel * scale:
        return DynamicInjectivity(False, "repeated state eigenvalues on omega")
    row = decomp.basis[initial_vertex, idx]
    if np.abs(row).min() <= gap_rel:
        return DynamicInjectivity(
            False, f"eigenvector entry vanishes at vertex {initial_vertex}"
        )
    return DynamicInjectivity(True, "injective")


def _dynamic_eigenvalues(decomp: SpectralDecomposition, state_matrix: np.ndarray) -> np.ndarray:
    d_mat = np.asarray(state_matrix, dtype=float)
    rotated = decomp.basis.T @ d_mat @ decomp.basis
    lam = np.diag(rotated).copy()
    if np.linalg.norm(rotated - np.diag(lam)) > frobenius_tol(d_mat, 1e-8):
        raise ValueError("state matrix is not diagonalized by the decomposition basis")
    return lam


def reconstruct_direct(
    decomp: SpectralDecomposition,
    omega: Sequence[int],
    scheme: SamplingScheme,
    y,
) -> np.ndarray:
    """Least-squares reconstruction on a bandlimited space.

    Solves ``min ||y - A x||_2`` over signals spanned by the eigenvectors
    at ``omega`` through the normal equations on the coefficient side.

    Raises
    ------
    NonInjectiveSamplingError
        When the sampled basis loses column rank (smallest singular
        value below 1e-12 times the scheme's operator norm) or its Gram
        matrix is singular beyond condition number 1e12, i.e. the scheme
        does not determine the space.
    """
    idx = sorted({int(k) for k in omega})
    obs = _observed(y)
    if obs.shape[0] != scheme.n_samples:
        raise ValueError(f"{obs.shape[0]} observations for {scheme.n_samples} samples")
    if not idx:
        return np.zeros(decomp.n_vertices)
    sampled = scheme.matrix @ decomp.basis[:, idx]
    sv = np.linalg.svd(sampled, compute_uv=False)
    smin = float(sv[len(idx) - 1]) if sv.size >= len(idx) else 0.0
    scale = max(float(np.linalg.norm(scheme.matrix, 2)), 1.0)
    gram = sampled.T @ sampled
    cond = np.linalg.cond(gram)
    if smin <= 1e-12 * scale or not np.isfinite(cond) or cond > 1e12:
        raise NonInjectiveSamplingError(
            f"sampling scheme does not determine the space (condition {cond:.3e})"
        )
    coeffs = np.linalg.solve(gram, sampled.T @ obs)
    return decomp.basis[:, idx] @ coeffs


@dataclass(frozen=True)
class ReconstructionResult:
    """Output of the level-by-level reconstruction.

    Attributes
    ----------
    signal : (N,) ndarray
        The reconstruction; at each level it minimizes ``||y - A x||_2``
        over the span reached so far.
    residual : (M,) ndarray
        Final observation residual ``y - A signal``.
    depth : int
        Last level that added directions (level 0 is the generators).
    dims_trace : tuple of int
        Span dimension after each level, starting at level 0.
    residual_trace : tuple of float
        ``||y - A x||_2`` after each level.
    signal_trace : tuple of ndarray, optional
        Per-level reconstructions, recorded when requested.
    """

    signal: np.ndarray
    residual: np.ndarray
    depth: int
    dims_trace: tuple[int, ...]
    residual_trace: tuple[float, ...]
    signal_trace: tuple[np.ndarray, ...] | None = None


def reconstruct_krylov(
    shifts: ShiftSet,
    generators: Sequence,
    scheme: SamplingScheme,
    y,
    delta: float = 0.0,
    *,
    max_level: int | None = None,
    require_injective: bool = True,
    keep_iterates: bool = False,
    drop_rel: float = 1e-10,
) -> ReconstructionResult:
    """Reconstruct a signal from samples by growing the generated span.

    Level 0 orthonormalizes the generators under the sampling-weighted
    form ``<x1, x2> = (A x1).(A x2)`` and projects the observations.
    Each later level applies every shift to the directions added at the
    previous level, orthonormalizes the candidates in shift-then-vector
    order, and adds the projection of the current residual onto the new
    directions. The loop stops when no candidate survives, when the
    residual norm reaches ``delta``, or at ``max_level``.

    Parameters
    ----------
    require_injective : bool
        When True (default), a candidate whose weighted norm collapses
        while its euclidean norm stays large raises
        :class:`DegenerateInnerProductError`, since it witnesses a
        direction of the span invisible to the scheme. When False such
        candidates are dropped, which keeps the estimate optimal over the
        visible part of the span.

    Notes
    -----
    Shift-monomial chains condition exponentially in depth, so with
    ``delta=0`` on a chain that is deep relative to double precision the
    last dimensions sit below roundoff: they may be dropped, or roundoff
    debris may be picked up as spurious directions. When the chain built
    by :func:`krylov_subspace` under the same weight stalls before the
    expected dimension, prefer a positive ``delta`` or a ``max_level``
    cap over trusting the saturated tail.

    Raises
    ------
    DegenerateInnerProductError
        See ``require_injective``.
    """
    obs = _observed(y)
    if obs.shape[0] != scheme.n_samples:
        raise ValueError(f"{obs.shape[0]} observations for {scheme.n_samples} samples")
    if scheme.n_vertices != shifts.n_vertices:
        raise ValueError("sampling scheme and shifts disagree on the vertex count")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    n = shifts.n_vertices
    top_level = n - 1 if max_level is None else int(max_level)
    if top_level < 0:
        raise ValueError("max_level must be nonnegative")
    basis = OrthogonalBasis(n, scheme.matrix, drop_rel=drop_rel)

    def handle_drop(status: str, what: str) -> None:
        if status == INVISIBLE:
            if require_injective:
                raise DegenerateInnerProductError(
                    f"{what} is invisible to the sampling scheme; "
                    "sampling is not injective on the generated space"
                )
            return
        if status == DEPENDENT and what.startswith("generator"):
            warnings.warn(f"dependent {what} dropped", stacklevel=3)

    gens = [_values(g) for g in generators]
    if not gens:
        raise ValueError("at least one generator is required")
    new = []
    for k, g in enumerate(gens):
        if g.shape[0] != n:
            raise ValueError(f"generator of length {g.shape[0]} on {n} vertices")
        before = basis.dim
        status = basis.try_add(g)
        if status == ADDED:
            new.append(before)
        else:
            handle_drop(status, f"generator {k}")

    fit = basis.expansion_coefficients(obs)
    x = basis.evaluate(fit)
    e = obs - basis.images @ fit
    depth = 0
    dims_trace = [basis.dim]
    residual_trace = [float(np.linalg.norm(e))]
    signal_trace = [x.copy()] if keep_iterates else None

    for level in range(1, top_level + 1):
        if not new or residual_trace[-1] <= delta:
            break
        added = []
        for s in shifts:
            for idx in new:
                before = basis.dim
                status = basis.try_add(s.matrix @ basis.basis[:, idx])
                if status == ADDED:
                    added.append(before)
                else:
                    handle_drop(status, "shifted candidate")
        if not added:
            new = []
            break
        first = added[0]
        coeffs = basis.expansion_coefficients(e, start=first)
        fit = np.concatenate([fit, coeffs])
        e = e - basis.images[:, first:] @ coeffs
        x = basis.evaluate(fit)
        new = added
        depth = level
        dims_trace.append(basis.dim)
        residual_trace.append(float(np.linalg.norm(e)))
        if keep_iterates:
            signal_trace.append(x.copy())

    return ReconstructionResult(
        signal=x,
        residual=e,
        depth=depth,
        dims_trace=tuple(dims_trace),
        residual_trace=tuple(residual_trace),
        signal_trace=None if signal_trace is None else tuple(signal_trace),
    )


def degenerate_dimension_check(
    shifts: ShiftSet,
    phi0,
    scheme: SamplingScheme | None = None,
) -> bool:
    """Single-shift spans grow by exactly one dimension per level.

    For one shift and one generator the level-n span is a polynomial
    space in the shift, so its dimension walks 1, 2, 3, ... until it
    saturates. This verifies that staircase under the (optionally
    sampling-weighted) inner product; the weighted form must come from a
    scheme whose normal matrix ``A.T A`` commutes with the shift.

    Raises
    ------
    ValueError
        More than one shift, or a scheme whose normal matrix does not
        commute with it.
    """
    if shifts.n_shifts != 1:
        raise ValueError(
            f"the one-dimension-per-level law needs a single shift, got {shifts.n_shifts}"
        )
    weight = None
    if scheme is not None:
        weight = scheme.matrix
        normal = weight.T @ weight
        s = shifts[0].matrix
        if np.linalg.norm(normal @ s - s @ normal) > frobenius_tol(s, 1e-8) * max(
            1.0, float(np.linalg.norm(normal))
        ):
            raise ValueError("the scheme's normal matrix does not commute with the shift")
    _, dims = krylov_subspace(shifts, [phi0], shifts.n_vertices, weight=weight)
    steps = np.diff(dims)
    if np.any((steps != 0) & (steps != 1)):
        return False
    nonzero = np.flatnonzero(steps == 0)
    if nonzero.size == 0:
        return True
    first_stall = int(nonzero[0])
    return bool(np.all(steps[first_stall:] == 0))
