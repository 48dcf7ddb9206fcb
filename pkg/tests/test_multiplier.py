import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from akl import (
    MultiplierSymbol,
    apply,
    band_limited_probe,
    forward,
    heat,
    l2_inner,
    mode,
    multiplier_bound,
    multiplier_exponent,
    paley_constant,
    power,
    spectral_bound_rhs,
)
from akl.fourier import BasisMismatchError
from akl.multiplier import maximize_log_grid


def brute_force_paley(phi, sup_norms, extra_points=10_000):
    """Independent scan of t * sum_{phi >= t} s^2 over a dense t-grid joined
    with the jump values, re-evaluating the sum by masking at each t."""
    ts = np.concatenate([np.geomspace(phi.min() / 2, phi.max(), extra_points), phi])
    return max(float(t * np.sum(sup_norms[phi >= t] ** 2)) for t in ts)


def brute_force_mult_bound(sigma, sup_norms, p, q, extra_points=10_000):
    mag = np.abs(sigma)
    gamma = 1.0 / p - 1.0 / q
    ss = np.concatenate([np.geomspace(mag[mag > 0].min() / 2, mag.max(), extra_points), mag[mag > 0]])
    best = 0.0
    for s in ss:
        tail = np.sum(sup_norms[mag >= s] ** 2)
        if tail > 0:
            best = max(best, float(s * tail**gamma))
    return best


class TestApply:
    def test_unit_symbol_is_identity_on_span(self, harmonic_small):
        f = band_limited_probe(harmonic_small, 3, 0)
        g = apply(MultiplierSymbol.discrete(harmonic_small, np.ones(harmonic_small.trusted)), f)
        assert np.abs(g.values - f.values).max() < 1e-10

    def test_eigenvalue_symbol_scales_mode(self, harmonic_small):
        sym = MultiplierSymbol.spectral(harmonic_small, lambda lam: lam)
        u2 = mode(harmonic_small, 2)
        g = apply(sym, u2)
        lam2 = harmonic_small.eigenvalues[1]
        assert np.abs(g.values - lam2 * u2.values).max() < 1e-10
        assert abs(lam2 - 4.0) < 4.0 * 1e-3  # harmonic closed form

    def test_indicator_symbol_projects(self, harmonic_small):
        sigma = np.zeros(harmonic_small.trusted)
        sigma[2] = 1.0
        sym = MultiplierSymbol.discrete(harmonic_small, sigma)
        f = band_limited_probe(harmonic_small, 4, 1)
        g = apply(sym, f)
        a = forward(f).values
        expected = a[2] * harmonic_small.eigenfunctions[2]
        assert np.abs(g.values - expected).max() < 1e-10 * max(1.0, abs(a[2]))

    def test_composition(self, harmonic_small, rng):
        sig = rng.standard_normal(harmonic_small.trusted)
        tau = rng.standard_normal(harmonic_small.trusted)
        f = band_limited_probe(harmonic_small, 5, 2)
        one_shot = apply(MultiplierSymbol.discrete(harmonic_small, sig * tau), f)
        two_step = apply(
            MultiplierSymbol.discrete(harmonic_small, sig),
            apply(MultiplierSymbol.discrete(harmonic_small, tau), f),
        )
        assert np.abs(one_shot.values - two_step.values).max() < 1e-10

    def test_real_symbols_self_adjoint(self, harmonic_small, rng):
        sig = MultiplierSymbol.discrete(harmonic_small, rng.standard_normal(harmonic_small.trusted))
        f = band_limited_probe(harmonic_small, 6, 0)
        g = band_limited_probe(harmonic_small, 6, 1)
        assert abs(l2_inner(apply(sig, f), g) - l2_inner(f, apply(sig, g))) < 1e-10

    def test_diagonal_action_exact_in_coefficient_space(self, harmonic_small):
        sym = MultiplierSymbol.spectral(harmonic_small, lambda lam: np.cos(lam))
        for j in (1, 3, harmonic_small.trusted):
            out = forward(apply(sym, mode(harmonic_small, j))).values
            expected = np.zeros(harmonic_small.trusted, dtype=complex)
            expected[j - 1] = sym.values[j - 1]
            assert np.abs(out - expected).max() < 1e-12

    def test_basis_mismatch(self, harmonic_small, harmonic_tiny):
        sym = MultiplierSymbol.discrete(harmonic_small, np.ones(harmonic_small.trusted))
        with pytest.raises(BasisMismatchError):
            apply(sym, mode(harmonic_tiny, 1))


class TestHeatAndPower:
    def test_zero_time_is_identity(self, harmonic_small):
        f = band_limited_probe(harmonic_small, 8, 0)
        assert np.abs(heat(0.0, f).values - f.values).max() < 1e-12

    def test_ground_state_decay(self, harmonic_small):
        u1 = mode(harmonic_small, 1)
        g = heat(1.0, u1)
        lam1 = harmonic_small.eigenvalues[0]
        assert np.abs(g.values - np.exp(-lam1) * u1.values).max() < 1e-12
        assert abs(np.exp(-lam1) - np.exp(-2.0)) < 1e-4

    def test_semigroup_property(self, harmonic_small):
        f = band_limited_probe(harmonic_small, 8, 1)
        lhs = heat(0.3, heat(0.7, f))
        rhs = heat(1.0, f)
        assert np.abs(lhs.values - rhs.values).max() < 1e-10

    def test_negative_time_rejected(self, harmonic_small):
        with pytest.raises(ValueError):
            heat(-0.1, mode(harmonic_small, 1))

    def test_zero_power_is_identity(self, harmonic_small):
        f = band_limited_probe(harmonic_small, 9, 0)
        assert np.abs(power(0.0, f).values - f.values).max() < 1e-10

    def test_power_inverse_pair(self, harmonic_small):
        f = band_limited_probe(harmonic_small, 9, 1)
        back = power(-1.0, power(1.0, f))
        assert np.abs(back.values - f.values).max() < 1e-9 * np.abs(f.values).max()

    def test_inverse_scales_ground_state(self, harmonic_small):
        u1 = mode(harmonic_small, 1)
        g = power(-1.0, u1)
        assert np.abs(g.values - u1.values / harmonic_small.eigenvalues[0]).max() < 1e-12


class TestPaleyConstant:
    def test_single_mode(self, harmonic_small):
        view = harmonic_small.truncated(1)
        c = 0.37
        assert paley_constant(view, np.array([c])) == pytest.approx(
            c * view.sup_norms[0] ** 2, rel=1e-14
        )

    def test_constant_sequence(self, harmonic_small):
        s2 = np.sum(harmonic_small.trusted_sup_norms() ** 2)
        phi = np.full(harmonic_small.trusted, 2.5)
        assert paley_constant(harmonic_small, phi) == pytest.approx(2.5 * s2, rel=1e-13)

    def test_matches_brute_force_scan(self, harmonic_small):
        phi = 1.0 / harmonic_small.trusted_eigenvalues()
        exact = paley_constant(harmonic_small, phi)
        brute = brute_force_paley(phi, harmonic_small.trusted_sup_norms())
        assert abs(exact - brute) <= 1e-12 * exact

    def test_rejects_nonpositive_weights(self, harmonic_small):
        phi = np.ones(harmonic_small.trusted)
        phi[3] = 0.0
        with pytest.raises(ValueError):
            paley_constant(harmonic_small, phi)


class TestMultiplierBound:
    def test_single_term(self, harmonic_small):
        sigma = np.zeros(harmonic_small.trusted)
        sigma[0] = 0.8
        sym = MultiplierSymbol.discrete(harmonic_small, sigma)
        p, q = 1.5, 3.0
        expected = 0.8 * (harmonic_small.sup_norms[0] ** 2) ** (1.0 / p - 1.0 / q)
        assert multiplier_bound(sym, p, q) == pytest.approx(expected, rel=1e-14)

    def test_p_equals_q_collapses_to_sup(self, harmonic_small, rng):
        sigma = rng.standard_normal(harmonic_small.trusted)
        sym = MultiplierSymbol.discrete(harmonic_small, sigma)
        assert multiplier_bound(sym, 2.0, 2.0) == pytest.approx(
            float(np.abs(sigma).max()), rel=1e-14
        )

    def test_matches_brute_force_scan(self, harmonic_small):
        sigma = 1.0 / harmonic_small.trusted_eigenvalues()
        sym = MultiplierSymbol.discrete(harmonic_small, sigma)
        exact = multiplier_bound(sym, 1.5, 3.0)
        brute = brute_force_mult_bound(sigma, harmonic_small.trusted_sup_norms(), 1.5, 3.0)
        assert abs(exact - brute) <= 1e-12 * exact

    @settings(max_examples=25, deadline=None)
    @given(c=st.floats(min_value=1e-3, max_value=1e3, allow_nan=False))
    def test_homogeneous_in_symbol(self, harmonic_tiny, c):
        sigma = 1.0 / harmonic_tiny.trusted_eigenvalues()
        base = multiplier_bound(MultiplierSymbol.discrete(harmonic_tiny, sigma), 1.5, 3.0)
        scaled = multiplier_bound(MultiplierSymbol.discrete(harmonic_tiny, c * sigma), 1.5, 3.0)
        assert scaled == pytest.approx(c * base, rel=1e-12)

    def test_zero_symbol(self, harmonic_small):
        sym = MultiplierSymbol.discrete(harmonic_small, np.zeros(harmonic_small.trusted))
        assert multiplier_bound(sym, 1.5, 3.0) == 0.0

    @pytest.mark.parametrize("pq", [(1.0, 3.0), (2.5, 3.0), (1.5, 1.9), (1.5, np.inf)])
    def test_rejects_exponents_outside_range(self, harmonic_small, pq):
        sym = MultiplierSymbol.discrete(harmonic_small, np.ones(harmonic_small.trusted))
        with pytest.raises(ValueError):
            multiplier_bound(sym, *pq)


class TestSpectralBoundRhs:
    def test_decreasing_power_peaks_at_left_edge(self, harmonic_small):
        p, q = 1.5, 3.0
        gamma = multiplier_exponent(1, 1, 1) * (1.0 / p - 1.0 / q)
        m = gamma + 0.75
        value = spectral_bound_rhs(lambda u: u**-m, p, q, harmonic_small)
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_heat_weight_closed_form(self, harmonic_small):
        p, q, t = 1.5, 3.0, 0.1
        gamma = multiplier_exponent(1, 1, 1) * (1.0 / p - 1.0 / q)
        u0 = gamma / t
        expected = (gamma / t) ** gamma * np.exp(-gamma)
        value = spectral_bound_rhs(lambda u: np.exp(-t * u), p, q, harmonic_small)
        assert value == pytest.approx(expected, rel=1e-10)
        u_star, _ = maximize_log_grid(lambda u: np.exp(-t * u) * u**gamma, 1.0,
                                       float(harmonic_small.trusted_eigenvalues()[-1]))
        assert abs(u_star - u0) < 1e-6

    def test_exponent_constant_for_harmonic_case(self):
        assert multiplier_exponent(1, 1, 1) == 3.0
        assert multiplier_exponent(1, 2, 1) == pytest.approx(2.75)
        assert multiplier_exponent(2, 1, 1) == 4.0


class TestSymbolValidation:
    def test_wrong_length_rejected(self, harmonic_small):
        with pytest.raises(ValueError):
            MultiplierSymbol.discrete(harmonic_small, np.ones(harmonic_small.trusted + 1))

    def test_nonfinite_rejected(self, harmonic_small):
        vals = np.ones(harmonic_small.trusted)
        vals[0] = np.nan
        with pytest.raises(ValueError):
            MultiplierSymbol.discrete(harmonic_small, vals)
