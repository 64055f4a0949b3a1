"""Reproducing kernels whose matrices commute with the graph shifts.

Every such kernel is diagonalized by the common eigenbasis, so a kernel is
described by one nonnegative value per frequency.  Classical families
(diffusion, random walk, regularization, spline) are built by applying a
scalar profile to the eigenvalues of a base shift.  The reproducing-kernel
geometry on the kernel's range is a diagonal quadratic form on the
transform side; the canonical choice is the pseudo-inverse of the kernel's
spectral values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Signal, ShiftMatrix, ShiftSet, frobenius_tol
from .spaces import SignalSpace
from .spectral import SpectralDecomposition


def _signal_values(x) -> np.ndarray:
    if isinstance(x, Signal):
        return np.asarray(x.values, dtype=float)
    return np.asarray(x, dtype=float)

__all__ = [
    "ShiftInvariantKernel",
    "RkhsMetric",
    "KERNEL_FAMILIES",
    "make_kernel",
    "is_shift_invariant_kernel",
    "gsis_to_rkhs_kernel",
    "kernel_for_metric",
    "metric_for_kernel",
    "is_reproducing_metric",
    "rkhs_inner_product",
    "evaluation_bound",
]

KERNEL_FAMILIES = ("diffusion", "random_walk", "regularization", "spline")

_RANK_CUTOFF = 1e-12


@dataclass(frozen=True)
class ShiftInvariantKernel:
    """Positive semidefinite kernel diagonalized by the common eigenbasis.

    Attributes
    ----------
    matrix : (N, N) ndarray
        The kernel matrix ``U diag(spectral_values) U.T``.
    spectral_values : (N,) ndarray
        Nonnegative eigenvalue of the kernel at each frequency.
    omega : tuple of int
        Frequencies where the spectral value exceeds ``1e-12`` times the
        largest one; the kernel's range is bandlimited to these.
    decomp : SpectralDecomposition
    family : str
        Name of the spectral profile, or "custom".
    params : dict, optional
        Parameters the profile was built with.
    """

    matrix: np.ndarray
    spectral_values: np.ndarray
    omega: tuple[int, ...]
    decomp: SpectralDecomposition
    family: str = "custom"
    params: dict | None = None


def _kernel_from_spectrum(
    decomp: SpectralDecomposition,
    values: np.ndarray,
    family: str = "custom",
    params: dict | None = None,
) -> ShiftInvariantKernel:
    values = np.asarray(values, dtype=float)
    top = float(values.max(initial=0.0))
    if values.min(initial=0.0) < -_RANK_CUTOFF * max(top, 1.0):
        raise ValueError("kernel spectral values must be nonnegative")
    values = np.maximum(values, 0.0)
    omega = tuple(int(k) for k in np.flatnonzero(values > _RANK_CUTOFF * max(top, 1e-300)))
    mat = (decomp.basis * values) @ decomp.basis.T
    mat = (mat + mat.T) / 2.0
    return ShiftInvariantKernel(mat, values, omega, decomp, family, params)


def _base_eigenvalues(decomp: SpectralDecomposition, base_shift: ShiftMatrix | np.ndarray) -> np.ndarray:
    mat = base_shift.matrix if isinstance(base_shift, ShiftMatrix) else np.asarray(base_shift, dtype=float)
    rotated = decomp.basis.T @ mat @ decomp.basis
    lam = np.diag(rotated).copy()
    if np.linalg.norm(rotated - np.diag(lam)) > frobenius_tol(mat, 1e-8):
        raise ValueError("base shift is not diagonalized by the decomposition basis")
    return lam


def make_kernel(
    decomp: SpectralDecomposition,
    base_shift: ShiftMatrix | np.ndarray,
    family: str,
    **params,
) -> ShiftInvariantKernel:
    """Build a kernel by applying a spectral profile to a base shift.

    Families and parameters (lambda denotes a base-shift eigenvalue):

    - ``diffusion``: ``exp(sigma^2 * lambda / 2)`` with ``sigma > 0``.
    - ``random_walk``: ``(a - lambda)^(-p)`` with ``a > 2`` and integer
      ``p >= 1``; every ``a - lambda`` must be positive.
    - ``regularization``: ``1 + sigma^2 * lambda`` with ``sigma > 0``.
      Note this grows with lambda, so it rewards rather than penalizes
      high frequencies; it is kept in this direct form deliberately.
    - ``spline``: ``lambda^(-alpha)`` on nonzero eigenvalues, 0 on the
      kernel of the base shift, with ``alpha > 0``.

    Raises
    ------
    ValueError
        Unknown family, parameters out of range, a base shift the
        decomposition does not diagonalize, or a profile that turns
        negative on the base spectrum.
    """
    lam = _base_eigenvalues(decomp, base_shift)
    unknown = set(params) - {"sigma", "a", "p", "alpha"}
    if unknown:
        raise TypeError(f"unknown kernel parameters {sorted(unknown)}")
    given = dict(params)
    if family == "diffusion":
        sigma = float(_take(params, "sigma", family))
        if sigma <= 0:
            raise ValueError("diffusion takes a single parameter sigma > 0")
        values = np.exp(sigma**2 * lam / 2.0)
    elif family == "random_walk":
        a = float(_take(params, "a", family))
        p = int(_take(params, "p", family))
        if a <= 2 or p < 1:
            raise ValueError("random_walk takes parameters a > 2 and integer p >= 1")
        shifted = a - lam
        if np.any(shifted <= 0):
            raise ValueError(f"a = {a} does not dominate the base spectrum (max {lam.max():.6g})")
        values = shifted ** (-p)
    elif family == "regularization":
        sigma = float(_take(params, "sigma", family))
        if sigma <= 0:
            raise ValueError("regularization takes a single parameter sigma > 0")
        values = 1.0 + sigma**2 * lam
        if np.any(values < 0):
            raise ValueError("regularization profile is negative on the base spectrum")
    elif family == "spline":
        alpha = float(_take(params, "alpha", family))
        if alpha <= 0:
            raise ValueError("spline takes a single parameter alpha > 0")
        top = float(np.abs(lam).max())
        positive = lam > _RANK_CUTOFF * max(top, 1e-300)
        if np.any(lam < -_RANK_CUTOFF * max(top, 1.0)):
            raise ValueError("spline needs a positive semidefinite base shift")
        values = np.zeros_like(lam)
        values[positive] = lam[positive] ** (-alpha)
    else:
        raise ValueError(f"unknown kernel family {family!r}; expected one of {KERNEL_FAMILIES}")
    if params:
        raise TypeError(f"{family} kernel got unexpected parameters {sorted(params)}")
    return _kernel_from_spectrum(decomp, values, family, given)


def _take(params: dict, name: str, family: str):
    try:
        return params.pop(name)
    except KeyError:
        raise TypeError(f"{family} kernel requires parameter {name!r}") from None


def is_shift_invariant_kernel(
    k_matrix: np.ndarray, shifts: ShiftSet, tol: float | None = None
) -> bool:
    """Symmetric, positive semidefinite, and commuting with every shift."""
    k = np.asarray(k_matrix, dtype=float)
    n = shifts.n_vertices
    if k.shape != (n, n):
        raise ValueError(f"kernel of shape {k.shape} on {n} vertices")
    if tol is None:
        tol = frobenius_tol(k, 1e-8)
    if np.abs(k - k.T).max() > tol:
        return False
    if np.linalg.eigvalsh((k + k.T) / 2.0).min() < -tol:
        return False
    return all(np.linalg.norm(k @ s.matrix - s.matrix @ k) <= tol for s in shifts)


def gsis_to_rkhs_kernel(space: SignalSpace) -> ShiftInvariantKernel:
    """Kernel of a shift-invariant space under the euclidean inner product.

    This is the orthogonal projector onto the space: spectral value 1 on
    the space's frequencies and 0 elsewhere.

    Raises
    ------
    ValueError
        If the space's basis is not made of decomposition columns (which
        happens when repeated joint eigenvalues forced an adapted basis).
    """
    decomp = space.decomp
    aligned = decomp.basis[:, list(space.omega)]
    if space.basis.shape != aligned.shape or np.abs(space.basis - aligned).max() > 1e-10:
        raise ValueError(
            "space basis is adapted inside repeated eigenspaces; its projector "
            "is not diagonal in the decomposition basis"
        )
    values = np.zeros(decomp.n_vertices)
    values[list(space.omega)] = 1.0
    return _kernel_from_spectrum(decomp, values)


@dataclass(frozen=True)
class RkhsMetric:
    """Diagonal quadratic form ``<x, y> = x_hat.T diag(values) y_hat``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if np.any(v < 0):
            raise ValueError("metric values must be nonnegative")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_kernel(cls, kernel: ShiftInvariantKernel) -> "RkhsMetric":
        """Canonical metric: pseudo-inverse of the kernel's spectral values."""
        lam = kernel.spectral_values
        values = np.zeros_like(lam)
        idx = list(kernel.omega)
        values[idx] = 1.0 / lam[idx]
        return cls(values)


def metric_for_kernel(kernel: ShiftInvariantKernel) -> RkhsMetric:
    return RkhsMetric.from_kernel(kernel)


def kernel_for_metric(decomp: SpectralDecomposition, metric: RkhsMetric) -> ShiftInvariantKernel:
    """Kernel reproducing a diagonal metric: pseudo-inverse spectral values."""
    b = metric.values
    if b.shape[0] != decomp.n_vertices:
        raise ValueError("metric length does not match the decomposition")
    top = float(b.max(initial=0.0))
    values = np.zeros_like(b)
    positive = b > _RANK_CUTOFF * max(top, 1e-300)
    values[positive] = 1.0 / b[positive]
    return _kernel_from_spectrum(decomp, values)


def is_reproducing_metric(
    kernel: ShiftInvariantKernel, metric: RkhsMetric, tol: float = 1e-10
) -> bool:
    """Whether the metric reproduces the kernel on the kernel's range.

    True exactly when the metric agrees with the pseudo-inverse of the
    kernel's spectral values on the kernel's frequencies; off those
    frequencies the metric is unconstrained.
    """
    b = metric.values
    if b.shape[0] != kernel.spectral_values.shape[0]:
        raise ValueError("metric length does not match the kernel")
    idx = list(kernel.omega)
    if not idx:
        return True
    want = 1.0 / kernel.spectral_values[idx]
    scale = max(1.0, float(np.abs(want).max()))
    return bool(np.abs(b[idx] - want).max() <= tol * scale)


def rkhs_inner_product(decomp: SpectralDecomposition, metric: RkhsMetric, x, y) -> float:
    """Evaluate ``x_hat.T diag(metric) y_hat``."""
    xh = decomp.basis.T @ _signal_values(x)
    yh = decomp.basis.T @ _signal_values(y)
    return float(np.sum(xh * metric.values * yh))


def evaluation_bound(metric: RkhsMetric) -> float:
    """Uniform bound on point evaluations: ``(min positive metric value)^(-1/2)``.

    For any x in the space carried by the metric,
    ``max_i |x(i)| <= evaluation_bound(metric) * ||x||_metric``.

    Raises
    ------
    ValueError
        If the metric has no positive entries.
    """
    positive = metric.values[metric.values > 0]
    if positive.size == 0:
        raise ValueError("metric has no positive entries")
    return float(positive.min() ** -0.5)
