import math

import numpy as np
import pytest
from conftest import random_bloch, random_physical_params
from hypothesis import given
from hypothesis import strategies as st

from optbloch.analytic import (
    DampingRegime,
    OffResonanceError,
    classify_regime,
    damped_cosh_sinhc,
    derivative_at_zero,
    equilibrium_coherence,
    equilibrium_relation_residual,
    equilibrium_state,
    evaluate,
    evaluate_array,
    optimal_rabi,
    purity_excited_initial,
    purity_strong_field,
    solve,
    solve_coefficients,
)
from optbloch.core import GROUND, BlochVector, DomainError, SystemParams, purity
from optbloch.numeric import bloch_rhs, steady_state


def fig(omega, r3t=0.0, **kw):
    return SystemParams.make(1.5, 0.5, omega, R3_tilde=r3t, **kw)


class TestRegime:
    @pytest.mark.parametrize(
        "omega,regime",
        [
            (0.2, DampingRegime.OVERDAMPED),
            (2 / 3, DampingRegime.CRITICAL),
            (5.0, DampingRegime.UNDERDAMPED),
        ],
    )
    def test_examples(self, omega, regime):
        assert classify_regime(fig(omega)) is regime

    def test_detuning_rejected(self):
        with pytest.raises(OffResonanceError):
            solve_coefficients(fig(1.0, Delta=0.5), GROUND)


class TestCoefficients:
    def test_equilibrium_amplitudes(self):
        c = solve_coefficients(fig(1.0, 1.0), GROUND)
        assert c.D3 == pytest.approx(4 / 7, abs=1e-15)
        assert c.D1 == pytest.approx(-2 / 7, abs=1e-15)

    def test_field_free(self):
        c = solve_coefficients(fig(0.0, 0.3), BlochVector(0.2, -0.1, 0.4))
        assert (c.D1, c.D3) == (0.0, 0.3)

    def test_beta(self):
        c = solve_coefficients(fig(1.0), GROUND)
        assert c.beta_sq == pytest.approx(-5 / 9, abs=1e-15)
        assert abs(c.beta) == pytest.approx(0.745356, abs=1e-6)

    def test_partial_fractions_match_pole_residues(self, rng):
        # B3, C3 from the residues of the Laplace-domain R3 at s-, s+
        for p in random_physical_params(rng, 50):
            if classify_regime(p) is DampingRegime.CRITICAL or p.Omega == 0:
                continue
            R0 = random_bloch(rng)
            c = solve_coefficients(p, R0)
            g1, g2, w, r3t = p.Gamma1, p.Gamma2, p.Omega, p.R3_tilde
            sm, sp = c.s_minus, c.s_plus
            lam = c.Lambda
            B3 = (R0.R3 * sm**2 + lam * sm + g1 * g2 * r3t) / (sm * (sm - sp))
            C3 = (R0.R3 * sp**2 + lam * sp + g1 * g2 * r3t) / (sp * (sp - sm))
            pf = c.partial_fractions()
            scale = 1.0 + abs(B3) + abs(C3)
            assert abs(pf["B3"] - B3) <= 1e-9 * scale
            assert abs(pf["C3"] - C3) <= 1e-9 * scale
            # R1 amplitudes follow from the R3 equation: B1 = (s- + Gamma1) B3 / Omega
            assert abs(pf["B1"] - (sm + g1) * B3 / w) <= 1e-8 * scale * (1 + abs(sm + g1) / w)
            assert abs(pf["C1"] - (sp + g1) * C3 / w) <= 1e-8 * scale * (1 + abs(sp + g1) / w)

    def test_partial_fractions_undefined_at_critical(self):
        with pytest.raises(ZeroDivisionError):
            solve_coefficients(fig(2 / 3), GROUND).partial_fractions()


class TestEvaluate:
    def test_initial_condition_exact(self, rng):
        for p in random_physical_params(rng, 100):
            R0 = random_bloch(rng)
            assert evaluate(solve_coefficients(p, R0), p, R0, 0.0) == R0

    def test_transverse_decay(self):
        p = SystemParams.make(2.0, 0.5, 0.0)
        R0 = BlochVector(0, 1, 0)
        R = evaluate(solve_coefficients(p, R0), p, R0, 0.5)
        assert R.R2 == pytest.approx(math.exp(-1), abs=1e-15)
        assert R.R2 == pytest.approx(0.367879, abs=1e-6)

    def test_infinite_temperature_decays_to_zero(self):
        p = fig(1.0)
        R = evaluate(solve_coefficients(p, GROUND), p, GROUND, 75.0)
        assert max(abs(x) for x in R) < 1e-12
        assert purity(R) == pytest.approx(0.5, abs=1e-15)

    def test_negative_time_rejected(self):
        p = fig(1.0)
        with pytest.raises(DomainError):
            evaluate(solve_coefficients(p, GROUND), p, GROUND, -1.0)

    def test_scalar_matches_array(self, rng):
        for p in random_physical_params(rng, 20):
            R0 = random_bloch(rng)
            c = solve_coefficients(p, R0)
            t = np.linspace(0, 5, 11)
            arr = evaluate_array(c, p, R0, t)
            for ti, row in zip(t, arr):
                assert np.array_equal(evaluate(c, p, R0, ti).as_array(), row)

    def test_derivative_at_zero_is_rhs(self, rng):
        for p in random_physical_params(rng, 1000):
            R0 = random_bloch(rng)
            d = derivative_at_zero(solve_coefficients(p, R0), p, R0).as_array()
            f = bloch_rhs(p, R0).as_array()
            assert np.max(np.abs(d - f)) <= 1e-9 * max(1.0, np.max(np.abs(f)))

    def test_finite_difference_satisfies_ode(self, rng):
        for p in random_physical_params(rng, 50):
            R0 = random_bloch(rng)
            c = solve_coefficients(p, R0)
            rate = max(p.Gamma1, p.Gamma2, p.Omega)
            t, h = 0.7 / rate, 1e-4 / rate
            lo, mid, hi = evaluate_array(c, p, R0, [t - h, t, t + h])
            fd = (hi - lo) / (2 * h)
            f = bloch_rhs(p, BlochVector.from_array(mid)).as_array()
            assert np.max(np.abs(fd - f)) <= 1e-5 * rate

    def test_fixed_point(self, rng):
        for p in random_physical_params(rng, 200):
            R0 = random_bloch(rng)
            t = 50.0 * max(p.T1, p.T2)
            R = evaluate(solve_coefficients(p, R0), p, R0, t)
            eq, _ = equilibrium_state(p)
            assert np.max(np.abs(R.as_array() - eq.as_array())) <= 1e-10

    def test_linear_in_thermal_drive(self, rng):
        # R(t; R0, r) = R(t; R0, 0) + r * [R(t; 0, 1) - R(t; 0, 0)]
        zero = BlochVector(0, 0, 0)
        t = np.linspace(0, 6, 31)
        for p in random_physical_params(rng, 30):
            R0 = random_bloch(rng)
            r = p.R3_tilde
            full = solve(p, R0, t)
            base = solve(p.with_(R3_tilde=0.0), R0, t)
            one = solve(p.with_(R3_tilde=1.0), zero, t)
            none = solve(p.with_(R3_tilde=0.0), zero, t)
            assert np.max(np.abs(full - (base + r * (one - none)))) <= 1e-12

    def test_large_beta_t_does_not_overflow(self):
        # strongly overdamped with a long horizon
        p = SystemParams.make(1e4, 1e-3, 1e-2)
        with np.errstate(over="raise", invalid="raise"):
            R = solve(p, GROUND, [0.0, 1e3, 1e5])
        assert np.all(np.isfinite(R))

    @given(st.floats(0.01, 10.0), st.floats(-5.0, 5.0), st.floats(0.0, 20.0))
    def test_damped_cosh_sinhc_against_direct(self, alpha, bsq, t):
        C, S = damped_cosh_sinhc(alpha, bsq, np.array([t]))
        b = complex(bsq) ** 0.5
        if abs(b * t) < 1e-3:
            return
        C_ref = (np.exp(-alpha * t) * np.cosh(b * t)).real
        S_ref = (np.exp(-alpha * t) * np.sinh(b * t) / b).real
        assert C[0] == pytest.approx(C_ref, rel=1e-9, abs=1e-12)
        assert S[0] == pytest.approx(S_ref, rel=1e-9, abs=1e-12)

    def test_series_branch_continuity(self):
        alpha = 0.5
        for bsq in (1e-10, -1e-10):
            edge = 1e-4 / math.sqrt(1e-10)
            Cs, Ss = damped_cosh_sinhc(alpha, bsq, np.array([edge * (1 - 1e-9)]))
            Cd, Sd = damped_cosh_sinhc(alpha, bsq, np.array([edge * (1 + 1e-9)]))
            assert Cs[0] == pytest.approx(Cd[0], rel=1e-8)
            assert Ss[0] == pytest.approx(Sd[0], rel=1e-8)


class TestEquilibrium:
    def test_no_field(self):
        R, rho = equilibrium_state(fig(0.0, 0.7))
        assert rho.rho12 == 0
        assert R.R3 == 0.7

    def test_example(self):
        _, rho = equilibrium_state(fig(1.0, 1.0))
        assert rho.rho12 == pytest.approx(-1j / 7, abs=1e-15)
        assert rho.rho11 == pytest.approx(11 / 14, abs=1e-15)

    def test_matches_linear_solve(self, rng):
        for p in random_physical_params(rng, 200):
            R, _ = equilibrium_state(p)
            assert np.max(np.abs(R.as_array() - steady_state(p).as_array())) <= 1e-12

    def test_phase_only_on_coherence(self):
        R0, rho0 = equilibrium_state(fig(1.0, 1.0))
        R1, rho1 = equilibrium_state(fig(1.0, 1.0, phi=0.4))
        assert R0 == R1
        assert rho0.rho11 == rho1.rho11
        assert abs(rho0.rho12) == pytest.approx(abs(rho1.rho12), rel=1e-15)
        assert rho1.rho12 == pytest.approx(rho0.rho12 * np.exp(0.8j), abs=1e-15)

    def test_infinite_T1_loses_coherence(self):
        for T1 in (1e6, 1e9, math.inf):
            _, rho = equilibrium_state(SystemParams.make(T1, 0.5, 1.0, 1.0))
            assert abs(rho.rho12) < 1e-5
        assert equilibrium_state(SystemParams.make(math.inf, 0.5, 1.0, 1.0))[1].rho12 == 0

    def test_relation_residual(self, rng):
        assert equilibrium_relation_residual(fig(0.0, 1.0)) == 0.0
        assert equilibrium_relation_residual(fig(1.0, 1.0)) <= 1e-12

    def test_state_is_physical(self, rng):
        for p in random_physical_params(rng, 200):
            _, rho = equilibrium_state(p)
            assert rho.is_valid()


class TestOptimalRabi:
    def test_constants(self):
        w, m = optimal_rabi(1.5, 0.5)
        assert w == pytest.approx(1.1547, abs=1e-4)
        assert m == pytest.approx(math.sqrt(1 / 3) / 4, abs=1e-15)
        assert m == pytest.approx(0.144338, abs=1e-6)

    def test_symmetric_rates(self):
        assert optimal_rabi(2.0, 2.0, 0.6)[1] == pytest.approx(0.15)

    def test_is_the_argmax(self, rng):
        for _ in range(20):
            T1 = 10 ** rng.uniform(-1, 1.5)
            T2 = 2 * T1 * rng.uniform(0.01, 1)
            w, m = optimal_rabi(T1, T2)
            grid = w * np.linspace(0.2, 5, 200001)
            vals = equilibrium_coherence(T1, T2, grid)
            k = int(np.argmax(vals))
            assert abs(grid[k] - w) <= grid[1] - grid[0]
            assert vals[k] <= m * (1 + 1e-15)
            assert vals[k] == pytest.approx(m, rel=1e-9)

    def test_coherence_agrees_with_state(self):
        p = fig(0.8, 1.0)
        assert equilibrium_coherence(1.5, 0.5, 0.8) == pytest.approx(abs(equilibrium_state(p)[1].rho12), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            optimal_rabi(0.0, 1.0)


class TestExcitedPurity:
    def test_start_is_pure(self):
        for w in (0.2, 2 / 3, 1.0, 5.0):
            assert purity_excited_initial(fig(w), 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_long_time(self):
        assert purity_excited_initial(fig(1.0), 80.0) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("omega", [0.1, 0.3, 2 / 3, 1.0, 5.0, 30.0])
    def test_matches_pipeline_all_regimes(self, omega):
        p = fig(omega)
        t = np.linspace(0, 5, 501)
        ref = purity(solve(p, GROUND, t))
        assert np.max(np.abs(purity_excited_initial(p, t) - ref)) <= 1e-12

    def test_thermal_drive_rejected(self):
        with pytest.raises(DomainError):
            purity_excited_initial(fig(1.0, 0.5), 1.0)

    def test_strong_field_limit_first_order(self):
        # the oscillating correction is O(k) with k = (Gamma2 - Gamma1)/(2 beta)
        for omega in (20.0, 100.0, 500.0):
            p = fig(omega)
            t = np.linspace(0, 5, 20001)
            beta = math.sqrt(omega**2 - (2 / 3) ** 2)
            k = (2 - 2 / 3) / (2 * beta)
            dev = np.max(np.abs(purity_excited_initial(p, t) - purity_strong_field(p, t)))
            assert dev <= abs(k) / 2 + 2 * k * k
            assert dev >= abs(k) / 4
