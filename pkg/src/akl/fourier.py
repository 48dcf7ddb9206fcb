"""Coefficient transform against the eigenbasis and the associated norms.

``forward`` maps a grid function to its coefficient sequence over the trusted
modes via the quadrature inner product; ``inverse`` synthesizes the expansion.
The weighted sequence norms carry the grid sup-norms ``s_j`` of the modes with
exponent ``2 - p`` (and weight ``1/s_j`` inside the sup for p = infinity,
which follows the definition verbatim even though it breaks the p -> infinity
limit pattern).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from akl.spectral import SpectralBasis


class BasisMismatchError(ValueError):
    """Operands built on different bases (or different trusted windows)."""


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples over the full grid of a basis."""

    basis: SpectralBasis
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.basis.grid.size,):
            raise ValueError(f"expected {self.basis.grid.size} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function has non-finite entries")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Coefficient sequence over the trusted modes j = 1..J_ok of a basis."""

    basis: SpectralBasis
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.basis.trusted,):
            raise ValueError(f"expected {self.basis.trusted} coefficients, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("coefficient vector has non-finite entries")
        object.__setattr__(self, "values", v)


def _require_same_basis(a, b) -> None:
    if a.basis is not b.basis:
        raise BasisMismatchError("operands use different bases")


# raw-array kernels shared with the verification harness

def forward_values(basis: SpectralBasis, values: np.ndarray) -> np.ndarray:
    return basis.trusted_functions() @ (basis.grid.weights * values)


def inverse_values(basis: SpectralBasis, coeffs: np.ndarray) -> np.ndarray:
    return basis.trusted_functions().T @ coeffs


def lp_norm_values(basis: SpectralBasis, values: np.ndarray, p: float) -> float:
    if p < 1:
        raise ValueError(f"exponent p must be >= 1, got {p}")
    a = np.abs(values)
    if np.isinf(p):
        return float(a.max())
    return float((basis.grid.weights @ a**p) ** (1.0 / p))


def forward(f: GridFunction) -> CoefficientVector:
    """Coefficients ``a(j) = sum_i w_i f(x_i) conj(u_j(x_i))``, j = 1..J_ok."""
    return CoefficientVector(f.basis, forward_values(f.basis, f.values))


def inverse(a: CoefficientVector) -> GridFunction:
    """Synthesis ``f(x_i) = sum_j a(j) u_j(x_i)`` over the trusted modes."""
    return GridFunction(a.basis, inverse_values(a.basis, a.values))


def lp_norm(f: GridFunction, p: float) -> float:
    """Quadrature realization of the continuum p-norm; ``p=inf`` is the grid max."""
    return lp_norm_values(f.basis, f.values, p)


def weighted_seq_norm(a: CoefficientVector, p: float) -> float:
    """Sequence norm ``(sum_j |a(j)|^p s_j^(2-p))^(1/p)``; for p=inf,
    ``sup_j |a(j)| / s_j``."""
    if p < 1:
        raise ValueError(f"exponent p must be >= 1, got {p}")
    s = a.basis.trusted_sup_norms()
    mag = np.abs(a.values)
    if np.isinf(p):
        return float((mag / s).max())
    return float(np.sum(mag**p * s ** (2.0 - p)) ** (1.0 / p))


def l2_inner(f: GridFunction, g: GridFunction) -> complex:
    """Quadrature inner product ``sum_i w_i f(x_i) conj(g(x_i))``."""
    _require_same_basis(f, g)
    return complex(np.sum(f.basis.grid.weights * f.values * np.conj(g.values)))


def plancherel_check(f: GridFunction, g: GridFunction) -> tuple[complex, complex]:
    """Return the pair ``(<f, g>_quad, <forward f, forward g>_l2)``."""
    _require_same_basis(f, g)
    lhs = l2_inner(f, g)
    rhs = complex(np.vdot(forward(g).values, forward(f).values))
    return lhs, rhs


def mode(basis: SpectralBasis, j: int) -> GridFunction:
    """The j-th eigenfunction (1-based) as a grid function."""
    if not 1 <= j <= basis.trusted:
        raise ValueError(f"mode index must be in 1..{basis.trusted}, got {j}")
    return GridFunction(basis, basis.eigenfunctions[j - 1].astype(complex))


def probe_rng(seed: int, trial: int) -> np.random.Generator:
    """Per-trial stream derived from (seed, trial); order-independent."""
    return np.random.default_rng([seed, trial])


def band_limited_probe(basis: SpectralBasis, seed: int, trial: int) -> GridFunction:
    """Random test function inside the trusted span.

    Coefficients are i.i.d. complex Gaussian on modes ``j <= J_ok/2`` (at
    least one), then synthesized; this keeps probes well clear of the trust
    boundary.
    """
    rng = probe_rng(seed, trial)
    a = rng.standard_normal(basis.trusted) + 1j * rng.standard_normal(basis.trusted)
    a[max(1, basis.trusted // 2):] = 0.0
    return inverse(CoefficientVector(basis, a))
