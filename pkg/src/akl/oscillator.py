"""Continuous problem definition and finite-difference assembly.

The operator under study is ``(-Lap)^l + |x|^(2k) + 1`` on R^n, truncated to
the box ``[-L, L]^n`` with homogeneous Dirichlet boundary conditions and
discretized by second-order central differences on a uniform grid.  The
distributed Laplacian power is realized as the l-th matrix power of the
one-Laplacian difference matrix, which keeps the assembled operator exactly
symmetric for every l.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Dense Kronecker assembly cap per axis for n=2.
MAX_AXIS_POINTS_2D = 96


class ResolutionWarning(UserWarning):
    """Grid spacing too coarse for the eigenvalues the caller trusts."""


@dataclass(frozen=True)
class OscillatorSpec:
    """Parameters of the continuous problem plus discretization controls.

    Parameters
    ----------
    k : int
        Half-power of the confining potential ``|x|^(2k)``, k >= 1.
    l : int
        Power of the negative Laplacian, l >= 1.
    half_width : float
        Box half-width L; the grid covers ``[-L, L]`` per axis.
    grid_points : int
        Grid points N per axis, endpoints included, N >= 16.
    modes : int
        Number of eigenpairs J to compute, ``1 <= J <= N - 2``.
    n : int
        Spatial dimension, 1 or 2.
    """

    k: int
    l: int
    half_width: float
    grid_points: int
    modes: int
    n: int = 1

    def __post_init__(self) -> None:
        if self.n not in (1, 2):
            raise ValueError(f"spatial dimension must be 1 or 2, got {self.n}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"potential half-power k must be an integer >= 1, got {self.k}")
        if int(self.l) != self.l or self.l < 1:
            raise ValueError(f"Laplacian power l must be an integer >= 1, got {self.l}")
        if not (np.isfinite(self.half_width) and self.half_width > 0):
            raise ValueError(f"half_width must be positive and finite, got {self.half_width}")
        if self.grid_points < 16:
            raise ValueError(f"grid_points must be >= 16, got {self.grid_points}")
        if not 1 <= self.modes <= self.grid_points - 2:
            raise ValueError(
                f"modes must satisfy 1 <= J <= N-2, got J={self.modes}, N={self.grid_points}"
            )


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform tensor grid on ``[-L, L]^n`` with composite trapezoid weights."""

    n: int
    axis: np.ndarray  # (N,) axis nodes, symmetric about 0, endpoints +-L
    h: float

    @classmethod
    def for_spec(cls, spec: OscillatorSpec) -> "Grid":
        L, N = spec.half_width, spec.grid_points
        axis = np.linspace(-L, L, N)
        # enforce exact symmetry x_i = -x_{N+1-i}
        axis = (axis - axis[::-1]) / 2.0
        return cls(n=spec.n, axis=axis, h=2.0 * L / (N - 1))

    @property
    def axis_points(self) -> int:
        return self.axis.size

    @property
    def size(self) -> int:
        """Total number of grid nodes, N^n."""
        return self.axis.size**self.n

    @cached_property
    def axis_weights(self) -> np.ndarray:
        w = np.full(self.axis.size, self.h)
        w[0] = w[-1] = self.h / 2.0
        return w

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weights over the flattened full grid."""
        if self.n == 1:
            return self.axis_weights
        return np.multiply.outer(self.axis_weights, self.axis_weights).ravel()

    @cached_property
    def points(self) -> np.ndarray:
        """Flattened node coordinates: shape (P,) for n=1, (P, 2) for n=2."""
        if self.n == 1:
            return self.axis
        X, Y = np.meshgrid(self.axis, self.axis, indexing="ij")
        return np.column_stack([X.ravel(), Y.ravel()])

    @cached_property
    def interior_indices(self) -> np.ndarray:
        """Flattened indices of nodes strictly inside the box."""
        N = self.axis.size
        if self.n == 1:
            return np.arange(1, N - 1)
        ii, jj = np.meshgrid(np.arange(1, N - 1), np.arange(1, N - 1), indexing="ij")
        return (ii * N + jj).ravel()

    @cached_property
    def near_boundary_indices(self) -> np.ndarray:
        """Flattened indices of interior nodes adjacent to the boundary."""
        N = self.axis.size
        if self.n == 1:
            return np.array([1, N - 2])
        ii, jj = np.meshgrid(np.arange(1, N - 1), np.arange(1, N - 1), indexing="ij")
        ring = (ii == 1) | (ii == N - 2) | (jj == 1) | (jj == N - 2)
        return (ii * N + jj)[ring].ravel()


def potential_at(spec: OscillatorSpec, x) -> np.ndarray | float:
    """Evaluate ``|x|^(2k) + 1`` at a point or an array of points.

    For n=2 the last axis of ``x`` holds the coordinates and ``|x|`` is the
    Euclidean norm.
    """
    x = np.asarray(x, dtype=float)
    if spec.n == 2 and x.ndim >= 1 and x.shape[-1] == 2:
        r2 = np.sum(x**2, axis=-1)
    else:
        r2 = x**2
    out = r2**spec.k + 1.0
    return float(out) if np.ndim(out) == 0 else out


def second_difference_matrix(m: int, h: float) -> np.ndarray:
    """Dirichlet negative-Laplacian stencil on m interior points with step h."""
    D = np.diag(np.full(m, 2.0)) + np.diag(np.full(m - 1, -1.0), 1) + np.diag(np.full(m - 1, -1.0), -1)
    return D / h**2


def assemble_operator(spec: OscillatorSpec, max_axis_2d: int = MAX_AXIS_POINTS_2D) -> np.ndarray:
    """Assemble the symmetric interior-point matrix of the discrete operator.

    Returns the ``(N-2)^n x (N-2)^n`` matrix ``D^l + diag(|x_i|^(2k) + 1)``
    where D is the Dirichlet second-difference negative Laplacian (the
    Kronecker sum of the per-axis stencils for n=2).
    """
    if spec.n == 2 and spec.grid_points > max_axis_2d:
        raise ValueError(
            f"n=2 dense assembly capped at {max_axis_2d} points per axis, got N={spec.grid_points}"
        )
    grid = Grid.for_spec(spec)
    m = spec.grid_points - 2
    D1 = second_difference_matrix(m, grid.h)
    if spec.n == 1:
        lap = D1
        xi = grid.points[grid.interior_indices]
    else:
        eye = np.eye(m)
        lap = np.kron(D1, eye) + np.kron(eye, D1)
        xi = grid.points[grid.interior_indices]
    A = np.linalg.matrix_power(lap, spec.l)
    # mirror the lower triangle: repeated gemms can drift by an ulp off
    # symmetric, and downstream checks rely on ||A - A^T||_max == 0 exactly
    lower = np.tril(A, -1)
    A = lower + lower.T + np.diag(np.diagonal(A))
    A[np.diag_indices_from(A)] += potential_at(spec, xi)
    return A


def default_half_width(k: int, lam_target: float) -> float:
    """Box half-width containing the classical turning point of ``lam_target``
    with a factor-4 energy margin: ``L = (4 * lam_target)^(1/(2k))``."""
    if lam_target <= 0:
        raise ValueError("lam_target must be positive")
    return float((4.0 * lam_target) ** (1.0 / (2 * k)))


def max_resolved_step(l: int, lam_target: float) -> float:
    """Largest grid step resolving modes up to ``lam_target``:
    ten points per shortest local wavelength, ``h <= 0.1 * lam^(-1/(2l))``."""
    if lam_target <= 0:
        raise ValueError("lam_target must be positive")
    return float(0.1 * lam_target ** (-1.0 / (2 * l)))


def warn_if_underresolved(spec: OscillatorSpec, lam_trusted: float) -> None:
    h_max = max_resolved_step(spec.l, lam_trusted)
    grid_h = 2.0 * spec.half_width / (spec.grid_points - 1)
    if grid_h > h_max:
        warnings.warn(
            f"grid step h={grid_h:.4g} exceeds {h_max:.4g} needed for ten points per "
            f"wavelength at lambda={lam_trusted:.4g}; trusted eigenpairs may be coarse",
            ResolutionWarning,
            stacklevel=3,
        )
