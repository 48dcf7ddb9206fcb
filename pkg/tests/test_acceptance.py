"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one ``CRITERION nn [PASS|FAIL]`` line (run with ``-s`` to see
them live).  Desk scale throughout: n=1, N <= 4097, trusted modes <= 80.
"""
import os
import subprocess
import sys

import numpy as np
import pytest

from akl import (
    OscillatorSpec,
    band_limited_probe,
    forward,
    inverse,
    lp_norm,
    solve,
    weighted_seq_norm,
)
from akl.fourier import CoefficientVector, probe_rng
from akl.verify import (
    hyp_ratio,
    paley_ratio,
    verify_growth,
    verify_heat,
    verify_hyp,
    verify_modulation,
    verify_multiplier,
    verify_paley,
    verify_trace,
    verify_weyl,
)

SEED = 42
P_HYP = 1.5


def crit(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"CRITERION {num:02d} [{'PASS' if ok else 'FAIL'}] {name}: {detail}")


# one basis per operator family, resolved for ~1 percent eigenvalue accuracy
WEYL_CONFIGS = {
    (1, 1): dict(half_width=10.0, grid_points=2001, modes=40),
    (2, 1): dict(half_width=6.5, grid_points=1025, modes=48),
    (1, 2): dict(half_width=28.5, grid_points=1025, modes=36),
    (2, 2): dict(half_width=12.0, grid_points=641, modes=32),
}


@pytest.fixture(scope="module")
def family_bases(harmonic_base):
    bases = {(1, 1): harmonic_base}
    for (k, l), cfg in WEYL_CONFIGS.items():
        if (k, l) not in bases:
            bases[(k, l)] = solve(OscillatorSpec(k=k, l=l, **cfg))
    return bases


@pytest.fixture(scope="module")
def wide_pair():
    base = solve(OscillatorSpec(k=1, l=1, half_width=15.0, grid_points=1537, modes=60))
    fine = solve(OscillatorSpec(k=1, l=1, half_width=15.0, grid_points=3073, modes=60))
    return base, fine


@pytest.fixture(scope="module")
def trace_basis():
    return solve(OscillatorSpec(k=1, l=1, half_width=10.0, grid_points=4097, modes=12))


class TestCriterion1HarmonicCrossCheck:
    def test_eigenvalues_match_closed_form(self, harmonic_base):
        j = np.arange(1, 21)
        rel = np.abs(harmonic_base.eigenvalues[:20] / (2.0 * j) - 1.0)
        ok = bool(rel.max() <= 1e-5)
        crit(1, "harmonic eigenvalues lam_j = 2j (j <= 20, rel 1e-5)", ok,
             f"max rel err {rel.max():.3e} at N=2001")
        assert ok

    def test_ground_state_sup_norm(self, harmonic_base):
        err = abs(harmonic_base.sup_norms[0] - np.pi**-0.25)
        ok = bool(err <= 1e-4)
        crit(1, "harmonic ground-state sup norm pi^(-1/4) (1e-4)", ok, f"err {err:.3e}")
        assert ok


class TestCriterion2WeylExponent:
    @pytest.mark.parametrize("kl", [(1, 1), (2, 1), (1, 2), (2, 2)])
    def test_counting_slope(self, family_bases, kl):
        rep = verify_weyl(family_bases[kl])
        slope, target = rep.measurements["slope"], rep.measurements["target"]
        crit(2, f"counting-function slope (k,l)={kl}", rep.passed,
             f"slope {slope:.4f} vs target {target:.4f} (+-10%)")
        assert rep.passed


class TestCriterion3EigenvalueGrowth:
    @pytest.mark.parametrize("kl", [(1, 1), (2, 1), (1, 2), (2, 2)])
    def test_growth_slope(self, family_bases, kl):
        rep = verify_growth(family_bases[kl])
        slope, target = rep.measurements["slope"], rep.measurements["target"]
        crit(3, f"eigenvalue growth slope (k,l)={kl}", rep.passed,
             f"slope {slope:.4f} vs target {target:.4f} (+-10%)")
        assert rep.passed


class TestCriterion4PlancherelRoundTripHY:
    def test_plancherel_and_round_trip(self, harmonic_base):
        from akl.fourier import plancherel_check

        worst_rt, worst_pl = 0.0, 0.0
        for t in range(100):
            rng = probe_rng(SEED, t)
            a = rng.standard_normal(harmonic_base.trusted) + 1j * rng.standard_normal(
                harmonic_base.trusted
            )
            avec = CoefficientVector(harmonic_base, a)
            back = forward(inverse(avec)).values
            worst_rt = max(worst_rt, float(np.abs(back - a).max() / np.abs(a).max()))
            f = band_limited_probe(harmonic_base, SEED, t)
            g = band_limited_probe(harmonic_base, SEED + 1, t)
            lhs, rhs = plancherel_check(f, g)
            worst_pl = max(worst_pl, abs(lhs - rhs) / (lp_norm(f, 2.0) * lp_norm(g, 2.0)))
        ok = worst_rt <= 1e-10 and worst_pl <= 1e-10
        crit(4, "round trip + energy identity (100 trials, 1e-10)", ok,
             f"roundtrip {worst_rt:.2e}, pairing gap {worst_pl:.2e}")
        assert ok

    @pytest.mark.parametrize("p", [1.0, 1.25, 1.5, 2.0])
    def test_hausdorff_young_ratio(self, harmonic_base, p):
        pp = np.inf if p == 1.0 else p / (p - 1.0)
        worst = 0.0
        for t in range(200):
            f = band_limited_probe(harmonic_base, SEED, t)
            worst = max(worst, weighted_seq_norm(forward(f), pp) / lp_norm(f, p))
        ok = worst <= 1.0 + 1e-6
        crit(4, f"coefficient-norm ratio p={p:g} (200 trials)", ok, f"max ratio {worst:.12f}")
        assert ok


class TestCriterion5PaleyHypStability:
    def test_paley_stability(self, wide_pair):
        base, fine = wide_pair
        rep = verify_paley(base, fine, p=P_HYP, trials=200, seed=SEED)
        crit(5, "coefficient-growth ratio stability", rep.passed,
             f"R={rep.measurements['ratio']:.4f}, fine x{rep.measurements['growth_fine']:.4f}, "
             f"wide x{rep.measurements['growth_wide']:.4f} (cap 1.1)")
        assert rep.passed

    @pytest.mark.parametrize("which", ["p", "mid", "pprime"])
    def test_hyp_stability(self, wide_pair, which):
        base, fine = wide_pair
        pp = P_HYP / (P_HYP - 1.0)
        b = {"p": P_HYP, "mid": 0.5 * (P_HYP + pp), "pprime": pp}[which]
        rep = verify_hyp(base, fine, p=P_HYP, b=b, trials=200, seed=SEED)
        crit(5, f"interpolated ratio stability b={b:g}", rep.passed,
             f"R={rep.measurements['ratio']:.4f}, fine x{rep.measurements['growth_fine']:.4f}, "
             f"wide x{rep.measurements['growth_wide']:.4f}")
        assert rep.passed

    def test_hyp_endpoints_reduce_exactly(self, wide_pair):
        base, _ = wide_pair
        window = base.truncated(max(1, base.trusted // 2))
        pp = P_HYP / (P_HYP - 1.0)
        phi = lambda lam: 1.0 / lam  # noqa: E731

        r_hyp_pp = hyp_ratio(window, P_HYP, pp, phi, trials=200, seed=SEED)
        worst_hy = 0.0
        for t in range(200):
            f = band_limited_probe(window, SEED, t)
            worst_hy = max(worst_hy, weighted_seq_norm(forward(f), pp) / lp_norm(f, P_HYP))
        gap_hy = abs(r_hyp_pp - worst_hy)

        r_hyp_p = hyp_ratio(window, P_HYP, P_HYP, phi, trials=200, seed=SEED)
        r_paley = paley_ratio(window, P_HYP, phi, trials=200, seed=SEED)
        gap_paley = abs(r_hyp_p - r_paley)

        ok = gap_hy <= 1e-12 * worst_hy and gap_paley <= 1e-12 * r_paley
        crit(5, "endpoint reductions (1e-12)", ok,
             f"b=p' gap {gap_hy:.2e}, b=p gap {gap_paley:.2e}")
        assert ok


class TestCriterion6MultiplierTheorem:
    def test_p_q_two_collapse(self, wide_pair):
        base, fine = wide_pair
        rep = verify_multiplier(base, fine, p=2.0, q=2.0, trials=100, seed=SEED)
        gap = abs(rep.measurements["k_emp"] - 1.0)
        ok = rep.passed and gap <= 1e-8
        crit(6, "exact collapse at p=q=2 (K=1, 1e-8)", ok, f"|K-1| = {gap:.2e}")
        assert ok

    def test_power_symbol_stable(self, wide_pair):
        base, fine = wide_pair
        rep = verify_multiplier(base, fine, p=1.5, q=3.0, trials=100, seed=SEED)
        ok = rep.passed
        crit(6, "empirical/theoretical ratio stability (1.5 -> 3)", ok,
             f"K={rep.measurements['k_emp']:.5f}, fine x{rep.measurements['growth_fine']:.5f}, "
             f"wide x{rep.measurements['growth_wide']:.5f}")
        assert ok


class TestCriterion7HeatDecay:
    def test_two_to_sup_slope_bounded(self, harmonic_base):
        rep = verify_heat(harmonic_base, p=2.0, q=np.inf, trials=64, seed=SEED)
        slope = rep.measurements["slope"]
        ok = rep.passed and slope >= -1.65
        crit(7, "heat-flow 2 -> sup small-t slope >= -1.65", ok, f"slope {slope:.4f}")
        assert ok

    def test_p_equals_q_slope_flat(self, harmonic_base):
        rep = verify_heat(harmonic_base, p=2.0, q=2.0, trials=64, seed=SEED)
        slope = rep.measurements["slope"]
        ok = rep.passed and abs(slope) <= 0.05
        crit(7, "heat-flow 2 -> 2 slope within +-0.05 of 0", ok, f"slope {slope:.4f}")
        assert ok


class TestCriterion8TraceFormula:
    def test_heat_trace_against_geometric_series(self, trace_basis):
        rep = verify_trace(trace_basis, t=1.0)
        closed = 1.0 / (np.e**2 - 1.0)
        sum_err = abs(rep.measurements["spectral_sum"] - closed)
        ok = rep.passed and sum_err <= 1e-6 and rep.measurements["rel_gap"] <= 1e-8
        crit(8, "trace of heat flow vs geometric series", ok,
             f"sum err {sum_err:.2e} (cap 1e-6), kernel gap {rep.measurements['rel_gap']:.2e}")
        assert ok


class TestCriterion9Modulation:
    def test_energy_identity_and_summability(self, harmonic_small):
        rep = verify_modulation(harmonic_small, p=2.0, q=2.0, s=0.0, r=1.0,
                                trials=50, seed=SEED)
        ok = rep.passed
        crit(9, "phase-space identity (1e-3) + summability flags", ok,
             f"moyal {rep.measurements['moyal_err']:.2e}, "
             f"tails {rep.measurements['tail_ratio_decaying']:.2e} / "
             f"{rep.measurements['tail_ratio_constant']:.2f}")
        assert ok
        assert rep.measurements["tail_ratio_decaying"] < 0.5
        assert rep.measurements["constant_flagged_divergent"]


class TestCriterion10Determinism:
    def test_verify_all_byte_identical_across_runs_and_threads(self, tmp_path):
        outs = []
        for name, threads in (("r1", "1"), ("r2", "4")):
            out = tmp_path / name
            env = dict(os.environ)
            env.update(
                OPENBLAS_NUM_THREADS=threads,
                OMP_NUM_THREADS=threads,
                MKL_NUM_THREADS=threads,
            )
            proc = subprocess.run(
                [sys.executable, "-m", "akl", "verify", "all", "--seed", "7",
                 "--out", str(out)],
                env=env,
                capture_output=True,
                text=True,
                timeout=600,
            )
            assert proc.returncode == 0, proc.stdout + proc.stderr
            outs.append(out)
        pairs = [
            ("verify_all.json", True),
            ("verify_all.series.csv", True),
            ("verify_all.heat_decay.heat_norms.png", True),
        ]
        same = all(
            (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()
            for fname, _ in pairs
        )
        crit(10, "verify all --seed 7 byte-identical across runs/threads", same,
             f"{len(pairs)} artifacts compared")
        assert same
