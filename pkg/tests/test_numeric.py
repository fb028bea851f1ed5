import cmath
import math

import numpy as np
import pytest

from ptomech import (
    CoherentInit,
    ConvergenceError,
    DriveParams,
    displacement,
    drift_eigenvalues,
    integrate_first_moments,
    integrate_second_moments,
    make_params,
    solve_working_point,
    steady_numbers,
    stimulated_spontaneous_split,
)
from ptomech.numeric import default_dt, moment_state

from conftest import KAPPA, MASS, OMEGA1, params_at


class TestWorkingPoint:
    def drive(self, **kwargs):
        base = dict(
            omega_c=2.0 * math.pi * 200e12,
            omega_L=2.0 * math.pi * 200e12 - OMEGA1,
            omega_m=OMEGA1,
            g_single=2.0 * math.pi * 100.0,
            drive_amp=1e9,
        )
        base.update(kwargs)
        return DriveParams(**base)

    def test_decoupled_fixed_point(self):
        d = self.drive(g_single=0.0)
        wp = solve_working_point(d, KAPPA, 0.3 * KAPPA)
        assert wp.alpha_s == pytest.approx(d.drive_amp / (1j * d.detuning + KAPPA), rel=1e-14)
        assert wp.beta_s == 0.0
        assert wp.delta_eff == d.detuning
        assert wp.iterations <= 1

    def test_no_drive_gives_vacuum(self):
        wp = solve_working_point(self.drive(drive_amp=0.0), KAPPA, 0.3 * KAPPA)
        assert wp.alpha_s == 0.0
        assert wp.beta_s == 0.0

    def test_weak_drive_defect_below_tolerance(self):
        d = self.drive()
        wp = solve_working_point(d, KAPPA, 0.3 * KAPPA)
        # Direct substitution of the converged point into the steady equations.
        delta = d.detuning - d.g_single * (2.0 * wp.beta_s.real)
        assert abs(wp.alpha_s - d.drive_amp / (1j * delta + KAPPA)) <= 1e-12 * max(1.0, abs(wp.alpha_s))
        beta_rhs = 1j * d.g_single * abs(wp.alpha_s) ** 2 / (1j * d.omega_m - 0.3 * KAPPA)
        assert abs(wp.beta_s - beta_rhs) <= 1e-12 * max(1.0, abs(wp.beta_s))
        assert wp.residual <= 1e-12
        assert wp.G_eff == d.g_single * wp.alpha_s

    def test_nonconvergence_raises(self):
        # Strong single-photon coupling and drive push the iteration out of the
        # contraction basin.
        d = self.drive(g_single=0.4 * OMEGA1, drive_amp=1e12)
        with pytest.raises(ConvergenceError):
            solve_working_point(d, KAPPA, 0.3 * KAPPA, max_iter=60)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            solve_working_point(self.drive(), -1.0, 0.0)
        with pytest.raises(ValueError):
            solve_working_point(self.drive(), KAPPA, 0.0, max_iter=0)
        with pytest.raises(ValueError):
            solve_working_point(self.drive(omega_m=0.0), KAPPA, 0.0)


class TestFirstMoments:
    def test_decoupled_decay(self):
        p = make_params(KAPPA, 0.0, 0.0, OMEGA1, MASS)
        init = CoherentInit(alpha=1.0 + 0j)
        series = integrate_first_moments(p, init, 5.0 / KAPPA, n_samples=50)
        expected = np.exp(-(1j * OMEGA1 + KAPPA) * series.t)
        assert np.max(np.abs(series.a_mean - expected)) < 1e-10
        assert np.max(np.abs(series.b_mean)) == 0.0

    def test_eigenvector_initialization_evolves_as_pure_mode(self):
        p = params_at(0.6, 1.2)
        # (a, b) block eigenvalue: tau = +1, s = -1 branch of the closed form.
        lam = drift_eigenvalues(p).lambdas[1]
        v = np.array([1j * p.coupling_G, lam + 1j * p.omega1 + p.kappa])
        v = v / np.max(np.abs(v))
        init = CoherentInit(alpha=complex(v[0]), beta=complex(v[1]))
        series = integrate_first_moments(p, init, 5.0 / KAPPA, n_samples=40)
        phase = np.exp(lam * series.t)
        expected_a = v[0] * phase
        expected_b = v[1] * phase
        scale = np.max(np.abs(expected_b))
        assert np.max(np.abs(series.a_mean - expected_a)) <= 1e-8 * scale
        assert np.max(np.abs(series.b_mean - expected_b)) <= 1e-8 * scale

    def test_envelope_beat_period_matches_supermode_splitting(self, coherent_init):
        # Finite-time stable point: |<b>| envelope repeats with period 2*pi/|Omega|.
        p = params_at(1.0, 1.5)
        series = integrate_first_moments(p, coherent_init, 12.0 / KAPPA, n_samples=4000)
        env = np.abs(series.b_mean)
        peaks = [
            i for i in range(1, len(env) - 1) if env[i] >= env[i - 1] and env[i] >= env[i + 1]
        ]
        spacings = np.diff(series.t[peaks])
        expected = 2.0 * math.pi / abs(p.Omega)
        assert np.mean(spacings) == pytest.approx(expected, rel=0.02)

    def test_rk4_fourth_order_convergence(self, coherent_init):
        # Halving dt must reduce the max error vs the closed form by >= 12x.
        # Steps sit just under the precondition ceiling so truncation error
        # dominates floating-point noise.
        p = params_at(0.6, 1.2)
        t_end = 2.0 / KAPPA
        errors = []
        for dt in (0.009 / OMEGA1, 0.0045 / OMEGA1):
            series = integrate_first_moments(p, coherent_init, t_end, dt=dt, n_samples=40)
            x_num = 2.0 * series.b_mean.real
            x_ref = np.asarray(displacement(p, coherent_init, series.t)) / p.x_zpf
            errors.append(np.max(np.abs(x_num - x_ref)))
        assert errors[0] / errors[1] >= 12.0

    def test_linearity_superposition(self):
        p = params_at(0.6, 1.2)
        a = CoherentInit(alpha=1.0 + 0.5j, beta=-0.25 + 1j)
        b = CoherentInit(alpha=-0.75 + 0.1j, beta=0.5 - 0.3j)
        both = CoherentInit(alpha=a.alpha + b.alpha, beta=a.beta + b.beta)
        kw = dict(t_end=5.0 / KAPPA, n_samples=60)
        s_a = integrate_first_moments(p, a, **kw)
        s_b = integrate_first_moments(p, b, **kw)
        s_ab = integrate_first_moments(p, both, **kw)
        assert np.max(np.abs(s_ab.a_mean - (s_a.a_mean + s_b.a_mean))) < 1e-10
        assert np.max(np.abs(s_ab.b_mean - (s_a.b_mean + s_b.b_mean))) < 1e-10

    def test_step_size_precondition(self, coherent_init):
        p = params_at(0.6, 1.2)
        with pytest.raises(ValueError):
            integrate_first_moments(p, coherent_init, 1.0 / KAPPA, dt=0.5 / OMEGA1)
        with pytest.raises(ValueError):
            integrate_first_moments(p, coherent_init, -1.0)


class TestSecondMoments:
    def test_decoupled_loss_no_gain(self, coherent_init):
        p = make_params(KAPPA, 0.0, 0.0, OMEGA1, MASS)
        series = integrate_second_moments(p, coherent_init, 5.0 / KAPPA, n_samples=50)
        expected_a = abs(coherent_init.alpha) ** 2 * np.exp(-2.0 * KAPPA * series.t)
        assert np.max(np.abs(series.n_a - expected_a)) < 1e-10
        assert np.max(np.abs(series.n_b - abs(coherent_init.beta) ** 2)) < 1e-12

    def test_vacuum_gain_slopes(self):
        p = params_at(0.5, 0.9)
        series = integrate_second_moments(p, CoherentInit(), 0.01 / KAPPA, n_samples=10)
        dt = series.t[1] - series.t[0]
        # n_b grows from zero with initial slope 2*gamma; n_a stays second order.
        assert series.n_b[1] / dt == pytest.approx(2.0 * p.gamma, rel=1e-3)
        assert series.n_a[0] == 0.0
        assert series.n_a[1] / dt < 1e-3 * p.gamma

    def test_long_time_matches_steady_formula(self, coherent_init):
        p = params_at(0.6, 1.2)
        series = integrate_second_moments(p, coherent_init, 50.0 / KAPPA, n_samples=20)
        n_a_s, n_b_s = steady_numbers(p)
        assert series.n_a[-1] == pytest.approx(n_a_s, rel=1e-4)
        assert series.n_b[-1] == pytest.approx(n_b_s, rel=1e-4)

    def test_homogeneous_spectrum_is_pairwise_sums(self):
        # Eigenvalues of the closed second-moment system must be pairwise sums
        # lambda_i + lambda_j* of first-moment (a, b)-block eigenvalues.
        rng = np.random.default_rng(31)
        for _ in range(50):
            g, G = rng.uniform(0.0, 2.0, size=2)
            p = make_params(1.0, g, G, 10.0, 1.0)
            A = np.array(
                [
                    [-2.0, 0.0, 0.0, -2.0 * G],
                    [0.0, 2.0 * g, 0.0, 2.0 * G],
                    [0.0, 0.0, g - 1.0, 0.0],
                    [G, -G, 0.0, g - 1.0],
                ]
            )
            second_eigs = np.linalg.eigvals(A)
            lam_p, lam_m = drift_eigenvalues(p).lambdas[1], drift_eigenvalues(p).lambdas[3]
            expected = np.array(
                [
                    lam_p + lam_p.conjugate(),
                    lam_m + lam_m.conjugate(),
                    lam_p + lam_m.conjugate(),
                    lam_m + lam_p.conjugate(),
                ]
            )
            d = np.abs(second_eigs[:, None] - expected[None, :])
            assert max(np.max(np.min(d, axis=0)), np.max(np.min(d, axis=1))) < 1e-9

    def test_region4_number_beat_period(self, coherent_init):
        # Beat period of n_a equals 2*pi / (2 * Im sqrt(G^2 - (kappa+gamma)^2/4)).
        p = params_at(0.6, 1.2)
        series = integrate_second_moments(p, coherent_init, 15.0 / KAPPA, n_samples=3000)
        n = series.n_a
        peaks = [i for i in range(1, len(n) - 1) if n[i] >= n[i - 1] and n[i] >= n[i + 1]]
        spacings = np.diff(series.t[peaks])
        expected = 2.0 * math.pi / abs(p.Omega)  # |Omega| = 2 Im sqrt(G^2 - (k+g)^2/4)
        assert np.mean(spacings) == pytest.approx(expected, rel=0.02)

    def test_overflow_truncation_in_unstable_regime(self, coherent_init):
        p = params_at(1.8, 1.2)
        series = integrate_second_moments(p, coherent_init, 40.0 / KAPPA, n_samples=400)
        assert series.truncated
        assert series.blowup_time is not None
        assert series.t[-1] < 40.0 / KAPPA
        assert np.max(series.n_b) > 1e12


class TestSplit:
    def test_initial_spontaneous_exactly_zero(self, coherent_init):
        p = params_at(1.0, 1.5)
        first = integrate_first_moments(p, coherent_init, 1.0 / KAPPA, n_samples=10)
        second = integrate_second_moments(p, coherent_init, 1.0 / KAPPA, n_samples=10)
        split = stimulated_spontaneous_split(first, second)
        assert split.n_a_sp[0] == 0.0
        assert split.n_b_sp[0] == 0.0

    def test_vacuum_run_is_all_spontaneous(self):
        p = params_at(1.0, 1.5)
        first = integrate_first_moments(p, CoherentInit(), 5.0 / KAPPA, n_samples=50)
        second = integrate_second_moments(p, CoherentInit(), 5.0 / KAPPA, n_samples=50)
        split = stimulated_spontaneous_split(first, second)
        assert np.all(split.n_a_st == 0.0)
        assert np.all(split.n_b_st == 0.0)
        assert np.array_equal(split.n_a_sp, second.n_a)

    def test_spontaneous_dominates_at_late_times_for_equal_gain(self, coherent_init):
        p = params_at(1.0, 1.5)
        first = integrate_first_moments(p, coherent_init, 30.0 / KAPPA, n_samples=300)
        second = integrate_second_moments(p, coherent_init, 30.0 / KAPPA, n_samples=300)
        split = stimulated_spontaneous_split(first, second)
        late = split.t * KAPPA >= 25.0
        assert np.mean(split.n_a_sp[late]) > np.mean(split.n_a_st[late])
        assert np.mean(split.n_b_sp[late]) > np.mean(split.n_b_st[late])

    def test_grid_mismatch_rejected(self, coherent_init):
        p = params_at(1.0, 1.5)
        first = integrate_first_moments(p, coherent_init, 1.0 / KAPPA, n_samples=10)
        second = integrate_second_moments(p, coherent_init, 1.0 / KAPPA, n_samples=11)
        with pytest.raises(ValueError):
            stimulated_spontaneous_split(first, second)

    def test_moment_state_accessor(self, coherent_init):
        p = params_at(0.6, 1.2)
        first = integrate_first_moments(p, coherent_init, 1.0 / KAPPA, n_samples=10)
        second = integrate_second_moments(p, coherent_init, 1.0 / KAPPA, n_samples=10)
        state = moment_state(first, second, 0)
        assert state.t == 0.0
        assert state.a_mean == coherent_init.alpha
        assert state.n_a == abs(coherent_init.alpha) ** 2
        assert state.ab_corr == coherent_init.alpha.conjugate() * coherent_init.beta
        # Total number dominates the stimulated part along the trajectory.
        for i in range(10):
            s = moment_state(first, second, i)
            assert s.n_a >= abs(s.a_mean) ** 2 - 1e-9
            assert s.n_b >= abs(s.b_mean) ** 2 - 1e-9

    def test_default_dt_resolves_fast_scale(self):
        p = params_at(0.6, 1.2)
        assert default_dt(p) == pytest.approx(1e-3 / OMEGA1)
