"""Eigenfunction-expansion analysis for the oscillator ``(-Lap)^l + |x|^(2k) + 1``.

The package builds a trusted finite eigenbasis of the operator on a truncated
grid, implements the associated coefficient transform and diagonal multiplier
operators, and verifies the operator-norm inequalities, asymptotic exponents
and trace identities they satisfy at desk scale.
"""
from akl.oscillator import (
    Grid,
    OscillatorSpec,
    ResolutionWarning,
    assemble_operator,
    default_half_width,
    max_resolved_step,
    potential_at,
)
from akl.spectral import (
    BasisCacheError,
    SpectralBasis,
    counting_function,
    load_basis,
    save_basis,
    solve,
)
from akl.fourier import (
    BasisMismatchError,
    CoefficientVector,
    GridFunction,
    band_limited_probe,
    forward,
    inverse,
    l2_inner,
    lp_norm,
    mode,
    plancherel_check,
    weighted_seq_norm,
)
from akl.multiplier import (
    MultiplierSymbol,
    apply,
    heat,
    multiplier_bound,
    multiplier_exponent,
    paley_constant,
    power,
    spectral_bound_rhs,
)

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "OscillatorSpec",
    "ResolutionWarning",
    "assemble_operator",
    "default_half_width",
    "max_resolved_step",
    "potential_at",
    "BasisCacheError",
    "SpectralBasis",
    "counting_function",
    "load_basis",
    "save_basis",
    "solve",
    "BasisMismatchError",
    "CoefficientVector",
    "GridFunction",
    "band_limited_probe",
    "forward",
    "inverse",
    "l2_inner",
    "lp_norm",
    "mode",
    "plancherel_check",
    "weighted_seq_norm",
    "MultiplierSymbol",
    "apply",
    "heat",
    "multiplier_bound",
    "multiplier_exponent",
    "paley_constant",
    "power",
    "spectral_bound_rhs",
    "__version__",
]
