"""Discrete short-time Fourier transform, modulation norms and trace checks.

The STFT uses the angular-frequency kernel ``exp(-i y xi)`` with the unit
Gaussian window ``2^(n/4) exp(-pi x^2)``; with that kernel the phase-space
orthogonality relation carries a ``(2 pi)^n`` factor, so the frequency
measure is normalized by ``1/(2 pi)^n`` throughout.  Shift nodes subsample
the basis grid by 4 and the frequency axis runs to the grid Nyquist limit,
which covers every trusted mode.

Mixed norms follow the standard convention: inner x-integral with exponent p,
outer xi-integral with exponent q, outer root 1/q.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from threadpoolctl import threadpool_limits

from akl.fourier import GridFunction, lp_norm_values
from akl.spectral import SpectralBasis


@dataclass(frozen=True)
class WeightSpec:
    """Polynomial phase-space weight ``(1 + |x|^2 + |xi|^2)^(s/2)``."""

    s: float

    def __call__(self, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        return (1.0 + np.asarray(x) ** 2 + np.asarray(xi) ** 2) ** (self.s / 2.0)

    def inverse(self) -> "WeightSpec":
        return WeightSpec(-self.s)


@dataclass(frozen=True, eq=False)
class StftGrid:
    """Shift/frequency nodes, window samples and integration cell."""

    basis: SpectralBasis
    shifts: np.ndarray   # (Mx,) spatial shift nodes
    freqs: np.ndarray    # (Mxi,) frequency nodes
    window: np.ndarray   # (P,) Gaussian window on the basis grid
    dx: float
    dxi: float

    @classmethod
    def for_basis(cls, basis: SpectralBasis, subsample: int = 4) -> "StftGrid":
        if basis.spec.n != 1:
            raise NotImplementedError("STFT grid construction supports n=1 only")
        axis = basis.grid.axis
        shifts = axis[::subsample]
        xi_max = np.pi / basis.grid.h
        freqs = np.linspace(-xi_max, xi_max, shifts.size)
        window = 2.0**0.25 * np.exp(-np.pi * axis**2)
        return cls(
            basis=basis,
            shifts=shifts,
            freqs=freqs,
            window=window,
            dx=float(shifts[1] - shifts[0]),
            dxi=float(freqs[1] - freqs[0]),
        )

    @property
    def cell(self) -> float:
        """Phase-space cell measure ``dx * dxi / (2 pi)^n``."""
        return self.dx * self.dxi / (2.0 * np.pi) ** self.basis.spec.n

    @cached_property
    def window_norm(self) -> float:
        return lp_norm_values(self.basis, self.window, 2.0)

    @cached_property
    def _shifted_windows(self) -> np.ndarray:
        # (Mx, P): window translated to each shift node
        axis = self.basis.grid.axis
        return 2.0**0.25 * np.exp(-np.pi * (axis[None, :] - self.shifts[:, None]) ** 2)

    @cached_property
    def _phase(self) -> np.ndarray:
        # (P, Mxi): exp(-i y xi) evaluated on grid nodes x frequency nodes
        return np.exp(-1j * np.outer(self.basis.grid.axis, self.freqs))


def stft(f: GridFunction, grid: StftGrid) -> np.ndarray:
    """Windowed transform ``V(x_m, xi_r) = sum_i w_i f(y_i) g(y_i - x_m)
    exp(-i y_i xi_r)``, returned as an (Mx, Mxi) array."""
    if f.basis is not grid.basis:
        raise ValueError("grid function and STFT grid use different bases")
    weighted = grid.basis.grid.weights * f.values
    with threadpool_limits(limits=1):
        return (grid._shifted_windows * weighted[None, :]) @ grid._phase


def phase_space_inner(V1: np.ndarray, V2: np.ndarray, grid: StftGrid) -> complex:
    """Discrete pairing ``cell * sum V1 conj(V2)`` over the phase plane."""
    return complex(grid.cell * np.sum(V1 * np.conj(V2)))


def mod_norm_values(V: np.ndarray, p: float, q: float, weight: np.ndarray, grid: StftGrid) -> float:
    """Mixed norm of weighted STFT samples: p over x (axis 0), q over xi."""
    for e in (p, q):
        if e < 1:
            raise ValueError(f"mixed-norm exponents must be >= 1, got {e}")
    a = np.abs(V) * weight
    if np.isinf(p):
        inner = a.max(axis=0)
    else:
        inner = (np.sum(a**p, axis=0) * grid.dx) ** (1.0 / p)
    if np.isinf(q):
        return float(inner.max())
    scale = grid.dxi / (2.0 * np.pi) ** grid.basis.spec.n
    return float((np.sum(inner**q) * scale) ** (1.0 / q))


def weight_samples(w: WeightSpec, grid: StftGrid) -> np.ndarray:
    return w(grid.shifts[:, None], grid.freqs[None, :])


def mod_norm(f: GridFunction, p: float, q: float, w: WeightSpec, grid: StftGrid) -> float:
    """Modulation norm of f measured through the STFT with weight w."""
    return mod_norm_values(stft(f, grid), p, q, weight_samples(w, grid), grid)


def _dual(e: float) -> float:
    return e / (e - 1.0) if e > 1.0 else np.inf


def nuclearity_condition(
    F: Callable[[np.ndarray], np.ndarray],
    r: float,
    p: float,
    q: float,
    s: float,
    basis: SpectralBasis,
    grid: StftGrid,
    Jmax: int = 20,
) -> dict:
    """Partial sums of the r-summability condition for F of the operator.

    ``S_J = sum_{j<=J} |F(lam_j)|^r n_j^r m_j^r`` where ``n_j`` is the mode's
    modulation norm with weight ``v_s`` and ``m_j`` the dual-exponent norm
    with weight ``v_s^{-1}``.  The tail ratio ``(S_J - S_{J/2}) / S_{J/2}``
    is reported as convergence evidence; below 0.5 counts as converged.
    """
    if not 0 < r <= 1:
        raise ValueError(f"summability order r must be in (0, 1], got {r}")
    J = min(Jmax, basis.trusted)
    w = WeightSpec(s)
    wv, wvi = weight_samples(w, grid), weight_samples(w.inverse(), grid)
    pd, qd = _dual(p), _dual(q)
    terms = np.empty(J)
    Fvals = np.abs(np.asarray(F(basis.trusted_eigenvalues()[:J]), dtype=complex))
    for j in range(J):
        V = stft(GridFunction(basis, basis.eigenfunctions[j].astype(complex)), grid)
        n_j = mod_norm_values(V, p, q, wv, grid)
        m_j = mod_norm_values(V, pd, qd, wvi, grid)
        terms[j] = Fvals[j] ** r * n_j**r * m_j**r
    partial = np.cumsum(terms)
    half = partial[J // 2 - 1] if J >= 2 else partial[0]
    tail_ratio = float((partial[-1] - half) / half) if half > 0 else np.inf
    return {
        "terms": terms,
        "partial_sums": partial,
        "tail_ratio": tail_ratio,
        "converged": bool(tail_ratio < 0.5),
        "modes_used": J,
    }


def trace_formula_check(F: Callable[[np.ndarray], np.ndarray], basis: SpectralBasis) -> tuple[float, float]:
    """Return ``(sum_j F(lam_j), integral of the kernel diagonal)``.

    The kernel diagonal is ``k(x, x) = sum_j F(lam_j) u_j(x)^2`` integrated by
    the basis quadrature; only the diagonal is ever formed.
    """
    lam = basis.trusted_eigenvalues()
    Fv = np.asarray(F(lam), dtype=float)
    spectral_sum = float(Fv.sum())
    U = basis.trusted_functions()
    diag = (Fv[:, None] * U**2).sum(axis=0)
    kernel_trace = float(basis.grid.weights @ diag)
    return spectral_sum, kernel_trace
