"""Diagonal multiplier operators and their theoretical norm bounds.

A multiplier acts coefficient-wise, ``a(j) -> sigma(j) a(j)``; spectral
multipliers are the special case ``sigma(j) = phi(lambda_j)``.  The sup-type
bookkeeping quantities (the Paley constant and the multiplier-theorem right
hand side) are step functions of the scan variable, so both suprema are
evaluated exactly at the finitely many jump points; brute-force scans are
kept in the test suite as oracles.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from akl.fourier import (
    CoefficientVector,
    GridFunction,
    BasisMismatchError,
    forward,
    inverse,
)
from akl.spectral import SpectralBasis

DISCRETE = "discrete"
SPECTRAL = "spectral"


@dataclass(frozen=True, eq=False)
class MultiplierSymbol:
    """A symbol materialized over the trusted modes j = 1..J_ok."""

    basis: SpectralBasis
    values: np.ndarray
    kind: str = DISCRETE

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.basis.trusted,):
            raise ValueError(f"expected {self.basis.trusted} symbol values, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("symbol has non-finite values")
        object.__setattr__(self, "values", v)

    @classmethod
    def discrete(cls, basis: SpectralBasis, values) -> "MultiplierSymbol":
        return cls(basis, np.asarray(values, dtype=complex), DISCRETE)

    @classmethod
    def spectral(cls, basis: SpectralBasis, phi: Callable[[np.ndarray], np.ndarray]) -> "MultiplierSymbol":
        """Symbol ``phi(lambda_j)`` for phi defined on [1, inf)."""
        vals = np.asarray(phi(basis.trusted_eigenvalues()), dtype=complex)
        return cls(basis, vals, SPECTRAL)


def apply(sym: MultiplierSymbol, f: GridFunction) -> GridFunction:
    """Synthesize ``sigma(j) * forward(f)(j)`` back to the grid."""
    if sym.basis is not f.basis:
        raise BasisMismatchError("symbol and function use different bases")
    a = forward(f)
    return inverse(CoefficientVector(f.basis, sym.values * a.values))


def heat(t: float, f: GridFunction) -> GridFunction:
    """Heat flow ``exp(-t A)`` applied to f; t = 0 is the identity on the span."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return apply(MultiplierSymbol.spectral(f.basis, lambda lam: np.exp(-t * lam)), f)


def power(m: float, f: GridFunction) -> GridFunction:
    """Functional-calculus power ``A^m``; negative m is safe since every
    trusted eigenvalue exceeds 1."""
    lam = f.basis.trusted_eigenvalues()
    if lam[0] <= 1.0:
        raise ValueError("trusted spectrum not bounded below by 1; power is ill-posed")
    return apply(MultiplierSymbol.spectral(f.basis, lambda u: u**m), f)


def _phi_array(basis: SpectralBasis, phi) -> np.ndarray:
    if callable(phi):
        vals = np.asarray(phi(basis.trusted_eigenvalues()), dtype=float)
    else:
        vals = np.asarray(phi, dtype=float)
    if vals.shape != (basis.trusted,):
        raise ValueError(f"expected {basis.trusted} weight values, got {vals.shape}")
    return vals


def paley_constant(basis: SpectralBasis, phi) -> float:
    """``M = sup_{t>0} t * sum_{phi(j) >= t} s_j^2`` for a positive sequence.

    The sum is a right-continuous step function of t jumping at the values
    phi(j), so the sup is attained at one of them; the maximum over those
    candidates is exact for finite sequences.
    """
    vals = _phi_array(basis, phi)
    if np.any(vals <= 0):
        raise ValueError("paley weight sequence must be strictly positive")
    s2 = basis.trusted_sup_norms() ** 2
    order = np.argsort(-vals, kind="stable")
    return float(np.max(vals[order] * np.cumsum(s2[order])))


def multiplier_bound(sym: MultiplierSymbol, p: float, q: float) -> float:
    """Right-hand side of the p->q multiplier estimate,
    ``sup_{s>0} s * (sum_{|sigma(j)| >= s} s_j^2)^(1/p - 1/q)``,
    evaluated exactly at the jump points s = |sigma(j)|."""
    _check_pq(p, q)
    mag = np.abs(sym.values)
    s2 = sym.basis.trusted_sup_norms() ** 2
    keep = mag > 0
    if not keep.any():
        return 0.0
    mag, s2 = mag[keep], s2[keep]
    gamma = 1.0 / p - 1.0 / q
    order = np.argsort(-mag, kind="stable")
    return float(np.max(mag[order] * np.cumsum(s2[order]) ** gamma))


def multiplier_exponent(n: int, k: int, l: int) -> float:
    """The constant ``2 + (k + l) n / (2 k l)`` governing the spectral
    multiplier, inverse-power, Sobolev and heat bounds."""
    return 2.0 + (k + l) * n / (2.0 * k * l)


def maximize_log_grid(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    coarse: int = 512,
    iters: int = 80,
) -> tuple[float, float]:
    """Maximize fn over [lo, hi] by a log-spaced scan refined with
    golden-section search around the best coarse node.  Returns (u*, fn(u*))."""
    if not (0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    t = np.linspace(np.log(lo), np.log(hi), coarse)
    vals = np.array([fn(float(np.exp(ti))) for ti in t])
    i = int(np.argmax(vals))
    a, b = t[max(i - 1, 0)], t[min(i + 1, coarse - 1)]
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = fn(float(np.exp(c))), fn(float(np.exp(d)))
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(float(np.exp(c)))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(float(np.exp(d)))
    cands = [(float(np.exp(x)), f) for x, f in ((t[i], vals[i]), (c, fc), (d, fd))]
    return max(cands, key=lambda uf: uf[1])


def spectral_bound_rhs(phi: Callable[[np.ndarray], np.ndarray], p: float, q: float, basis: SpectralBasis) -> float:
    """``sup_{u>1} phi(u) * u^(C (1/p - 1/q))`` with C = multiplier_exponent,
    maximized over [1, lambda_{J_ok}] on a refined log grid."""
    _check_pq(p, q)
    spec = basis.spec
    gamma = multiplier_exponent(spec.n, spec.k, spec.l) * (1.0 / p - 1.0 / q)

    def objective(u: float) -> float:
        return float(np.asarray(phi(np.asarray(u))) * u**gamma)

    hi = float(basis.trusted_eigenvalues()[-1])
    _, value = maximize_log_grid(objective, 1.0, hi)
    return value


def _check_pq(p: float, q: float) -> None:
    if not (1 < p <= 2 <= q < np.inf):
        raise ValueError(f"need 1 < p <= 2 <= q < inf, got p={p}, q={q}")
