"""Dense eigendecomposition, trusted-mode bookkeeping and basis caching.

The eigenbasis is stored in ascending eigenvalue order with 1-based mode
index j.  Eigenfunctions are sampled on the full grid (zeros on the Dirichlet
boundary) and normalized against the trapezoid quadrature inner product, so
orthonormality holds to roundoff by construction.  The sign of each mode is
fixed by making its first component of largest absolute value positive, which
keeps caches reproducible across platforms.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
from threadpoolctl import threadpool_limits

from akl.oscillator import (
    Grid,
    OscillatorSpec,
    assemble_operator,
    potential_at,
    warn_if_underresolved,
)

RESIDUAL_TOL = 1e-8      # ||M u - lam u||_2 <= RESIDUAL_TOL * lam
BOUNDARY_TOL = 1e-8      # near-boundary samples <= BOUNDARY_TOL * sup|u|

CACHE_MAGIC = b"AKLB"
CACHE_VERSION = 1


class BasisCacheError(Exception):
    """Base error for basis cache files."""


class CacheMagicError(BasisCacheError):
    pass


class CacheVersionError(BasisCacheError):
    pass


class CacheTruncatedError(BasisCacheError):
    pass


class CacheChecksumError(BasisCacheError):
    pass


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Eigenpairs of the discretized operator, ascending eigenvalues.

    Attributes
    ----------
    spec : OscillatorSpec
    grid : Grid
    eigenvalues : (J,) ascending
    eigenfunctions : (J, P) full-grid samples, quadrature-normalized
    sup_norms : (J,) grid sup-norms max_i |u_j(x_i)|
    trusted : number J_ok <= J of modes passing the trust rules
    """

    spec: OscillatorSpec
    grid: Grid
    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    sup_norms: np.ndarray
    trusted: int

    @property
    def modes(self) -> int:
        return self.eigenvalues.size

    def trusted_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[: self.trusted]

    def trusted_functions(self) -> np.ndarray:
        return self.eigenfunctions[: self.trusted]

    def trusted_sup_norms(self) -> np.ndarray:
        return self.sup_norms[: self.trusted]

    def truncated(self, m: int) -> "SpectralBasis":
        """View of the same basis with the trusted window narrowed to m modes."""
        if not 1 <= m <= self.trusted:
            raise ValueError(f"need 1 <= m <= trusted={self.trusted}, got {m}")
        return replace(self, trusted=m)


def _fix_signs(U: np.ndarray) -> None:
    # first component of largest absolute value made positive, in place
    for row in U:
        i = int(np.argmax(np.abs(row)))
        if row[i] < 0:
            row *= -1.0


def solve(spec: OscillatorSpec) -> SpectralBasis:
    """Diagonalize the assembled operator and mark the trusted modes.

    A mode j is trusted when every mode up to j satisfies all of:
    ``lam_j <= potential_at(L)/2`` (turning-point containment inside the box),
    eigen residual ``||M u - lam u||_2 <= 1e-8 lam``, and near-boundary decay
    ``|u| <= 1e-8 sup|u|``.  ``trusted == 0`` signals an unusable
    configuration.

    BLAS is pinned to one thread so results are bitwise reproducible
    regardless of the ambient thread count.
    """
    grid = Grid.for_spec(spec)
    J = spec.modes
    with threadpool_limits(limits=1):
        M = assemble_operator(spec)
        lam, V = scipy.linalg.eigh(M, subset_by_index=(0, J - 1), driver="evr")
        resid = np.linalg.norm(M @ V - V * lam[None, :], axis=0)

    # quadrature-normalize: interior trapezoid weight is h^n
    scale = grid.h ** (-spec.n / 2.0)
    U = np.zeros((J, grid.size))
    U[:, grid.interior_indices] = V.T * scale
    _fix_signs(U)
    sup = np.abs(U).max(axis=1)
    resid = resid * scale

    near = np.abs(U[:, grid.near_boundary_indices]).max(axis=1)
    lam_cut = potential_at(spec, spec.half_width) / 2.0
    ok = (lam <= lam_cut) & (resid <= RESIDUAL_TOL * lam) & (near <= BOUNDARY_TOL * sup)
    trusted = int(np.argmin(ok)) if not ok.all() else J

    if trusted > 0:
        warn_if_underresolved(spec, float(lam[trusted - 1]))
    return SpectralBasis(
        spec=spec,
        grid=grid,
        eigenvalues=lam,
        eigenfunctions=U,
        sup_norms=sup,
        trusted=trusted,
    )


def counting_function(basis: SpectralBasis, u: float) -> int:
    """Number of trusted eigenvalues <= u, ties counted inclusively."""
    if basis.trusted == 0:
        raise ValueError("basis has no trusted modes")
    lam = basis.trusted_eigenvalues()
    if u > lam[-1]:
        raise ValueError(f"threshold u={u} beyond trusted spectrum (lam_max={lam[-1]})")
    return int(np.searchsorted(lam, u, side="right"))


# --- cache file format ------------------------------------------------------
#
# little-endian:
#   magic "AKLB" | version u32 | n,k,l u32 | N u32 | J u32 | J_ok u32
#   | L f64 | h f64 | lam[J] f64 | u[J x P] f64 row-major | s[J] f64
#   | CRC32(all preceding bytes) u32
# P = N^n grid nodes per eigenfunction.

_HEADER = struct.Struct("<4sIIIIIIIdd")


def save_basis(basis: SpectralBasis, path) -> None:
    """Write the basis to ``path``; the round trip is bit-exact."""
    spec = basis.spec
    payload = _HEADER.pack(
        CACHE_MAGIC,
        CACHE_VERSION,
        spec.n,
        spec.k,
        spec.l,
        spec.grid_points,
        basis.modes,
        basis.trusted,
        spec.half_width,
        basis.grid.h,
    )
    payload += basis.eigenvalues.astype("<f8", copy=False).tobytes()
    payload += np.ascontiguousarray(basis.eigenfunctions, dtype="<f8").tobytes()
    payload += basis.sup_norms.astype("<f8", copy=False).tobytes()
    crc = zlib.crc32(payload) & 0xFFFFFFFF
    with open(path, "wb") as fh:
        fh.write(payload)
        fh.write(struct.pack("<I", crc))


def load_basis(path) -> SpectralBasis:
    """Read a basis written by :func:`save_basis`.

    Raises a structured :class:`BasisCacheError` subclass on bad magic,
    unsupported version, truncation, or checksum mismatch; never returns a
    partially read basis.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size + 4:
        raise CacheTruncatedError(f"{path}: file shorter than header")
    magic, version, n, k, l, N, J, J_ok, L, h = _HEADER.unpack_from(data, 0)
    if magic != CACHE_MAGIC:
        raise CacheMagicError(f"{path}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheVersionError(f"{path}: unsupported version {version}")
    P = N**n
    expected = _HEADER.size + 8 * (J + J * P + J) + 4
    if len(data) != expected:
        raise CacheTruncatedError(f"{path}: expected {expected} bytes, found {len(data)}")
    stored_crc = struct.unpack_from("<I", data, expected - 4)[0]
    if zlib.crc32(data[: expected - 4]) & 0xFFFFFFFF != stored_crc:
        raise CacheChecksumError(f"{path}: checksum mismatch")

    off = _HEADER.size
    lam = np.frombuffer(data, dtype="<f8", count=J, offset=off).copy()
    off += 8 * J
    U = np.frombuffer(data, dtype="<f8", count=J * P, offset=off).reshape(J, P).copy()
    off += 8 * J * P
    sup = np.frombuffer(data, dtype="<f8", count=J, offset=off).copy()

    spec = OscillatorSpec(k=k, l=l, half_width=L, grid_points=N, modes=J, n=n)
    grid = Grid.for_spec(spec)
    if grid.h != h:
        raise BasisCacheError(f"{path}: stored step {h} inconsistent with geometry")
    return SpectralBasis(
        spec=spec,
        grid=grid,
        eigenvalues=lam,
        eigenfunctions=U,
        sup_norms=sup,
        trusted=J_ok,
    )
