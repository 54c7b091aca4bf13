"""Numeric integrators against the closed form and against each other."""

import math

import numpy as np
import pytest

from zeno_ent import (
    CouplingSpec,
    InitialState,
    KernelSpec,
    SolverConfig,
    closed_form_series,
    resonant_system,
    sample_lorentzian_modes,
    solve_aux_ode,
    solve_discretized_bath,
    solve_volterra,
)
from zeno_ent.solvers import METHOD_AUX_ODE, METHOD_BATH, METHOD_VOLTERRA


def max_gap(series, res, coup, init):
    ref = closed_form_series(res, coup, init, series.tau)
    return max(float(np.max(np.abs(series.c1 - ref.c1))),
               float(np.max(np.abs(series.c2 - ref.c2))))


def volterra_cfg(dt, t_max):
    return SolverConfig(dt=dt, t_max=t_max, method=METHOD_VOLTERRA)


def ode_cfg(dt, t_max):
    return SolverConfig(dt=dt, t_max=t_max, method=METHOD_AUX_ODE)


def bath_cfg(dt, t_max, n_modes=2000, freq_window=20.0):
    return SolverConfig(dt=dt, t_max=t_max, method=METHOD_BATH,
                        n_modes=n_modes, freq_window=freq_window)


class TestSolverConfig:
    def test_rejects_nonpositive_steps(self):
        with pytest.raises(ValueError):
            SolverConfig(dt=0.0, t_max=1.0)
        with pytest.raises(ValueError):
            SolverConfig(dt=0.1, t_max=-1.0)

    def test_rejects_step_too_coarse_for_dynamics(self):
        # dt = 0.5 cannot resolve a decade-fast coupling
        res, coup = resonant_system(10.0, 0.5)
        init = InitialState.from_separability(0.0)
        with pytest.raises(ValueError):
            solve_volterra(KernelSpec.from_reservoir(res), coup, init,
                           volterra_cfg(0.5, 5.0))
        with pytest.raises(ValueError):
            solve_aux_ode(KernelSpec.from_reservoir(res), coup, init,
                          ode_cfg(0.5, 5.0))
        with pytest.raises(ValueError):
            solve_discretized_bath(res, coup, init, bath_cfg(0.5, 5.0))

    def test_method_mismatch_rejected(self):
        res, coup = resonant_system(0.5, 0.5)
        init = InitialState.from_separability(0.0)
        with pytest.raises(ValueError):
            solve_volterra(KernelSpec.from_reservoir(res), coup, init,
                           ode_cfg(1e-3, 1.0))


class TestVolterra:
    def test_reference_accuracy_weak_coupling(self):
        res, coup = resonant_system(0.1, 0.87)
        init = InitialState.from_separability(1.0)
        series = solve_volterra(KernelSpec.from_reservoir(res), coup, init,
                                volterra_cfg(1e-3, 10.0))
        assert max_gap(series, res, coup, init) < 1e-5

    def test_reference_accuracy_strong_coupling(self):
        res, coup = resonant_system(10.0, 0.87)
        init = InitialState.from_separability(0.0)
        series = solve_volterra(KernelSpec.from_reservoir(res), coup, init,
                                volterra_cfg(1e-4, 10.0))
        assert max_gap(series, res, coup, init) < 1e-5

    def test_second_order_convergence(self):
        # halving dt divides the error by ~4
        res, coup = resonant_system(10.0, 0.87)
        init = InitialState.from_separability(0.0)
        k = KernelSpec.from_reservoir(res)
        gaps = [max_gap(solve_volterra(k, coup, init, volterra_cfg(dt, 2.0)),
                        res, coup, init)
                for dt in (1.6e-2, 8e-3, 4e-3)]
        assert 3.6 < gaps[0] / gaps[1] < 4.4
        assert 3.6 < gaps[1] / gaps[2] < 4.4

    def test_subradiant_state_exactly_constant(self):
        res, coup = resonant_system(2.0, 0.7)
        init = coup.psi_minus()
        series = solve_volterra(KernelSpec.from_reservoir(res), coup, init,
                                volterra_cfg(1e-3, 5.0))
        np.testing.assert_allclose(series.c1, init.c01, atol=1e-12)
        np.testing.assert_allclose(series.c2, init.c02, atol=1e-12)

    def test_tabulated_kernel_matches_exponential_path(self):
        # feeding the same exponential as a table must reproduce the
        # recursion-based fast path to rounding accuracy
        res, coup = resonant_system(0.5, 0.3)
        init = InitialState.from_separability(-0.5, 1.0)
        dt, t_max = 1e-3, 2.0
        n = int(round(t_max / dt))
        tau = np.arange(n + 1) * dt
        k_exp = KernelSpec.from_reservoir(res)
        k_tab = KernelSpec.tabulated(res.memory_kernel(tau), dt)
        fast = solve_volterra(k_exp, coup, init, volterra_cfg(dt, t_max))
        slow = solve_volterra(k_tab, coup, init, volterra_cfg(dt, t_max))
        np.testing.assert_allclose(slow.c1, fast.c1, atol=1e-10)
        np.testing.assert_allclose(slow.c2, fast.c2, atol=1e-10)

    def test_tabulated_kernel_requires_matching_grid(self):
        res, coup = resonant_system(0.5, 0.3)
        init = InitialState.from_separability(0.0)
        k_tab = KernelSpec.tabulated(np.ones(10), 2e-3)
        with pytest.raises(ValueError):
            solve_volterra(k_tab, coup, init, volterra_cfg(1e-3, 5e-3))


class TestAuxOde:
    def test_reference_accuracy(self):
        res, coup = resonant_system(0.1, 0.87)
        init = InitialState.from_separability(1.0)
        series = solve_aux_ode(KernelSpec.from_reservoir(res), coup, init,
                               ode_cfg(1e-3, 10.0))
        assert max_gap(series, res, coup, init) < 1e-6

    def test_reference_accuracy_strong_coupling(self):
        res, coup = resonant_system(10.0, 0.87)
        init = InitialState.from_separability(0.0)
        series = solve_aux_ode(KernelSpec.from_reservoir(res), coup, init,
                               ode_cfg(1e-3, 10.0))
        assert max_gap(series, res, coup, init) < 1e-6

    def test_fourth_order_convergence(self):
        res, coup = resonant_system(10.0, 0.87)
        init = InitialState.from_separability(0.0)
        k = KernelSpec.from_reservoir(res)
        gaps = [max_gap(solve_aux_ode(k, coup, init, ode_cfg(dt, 2.0)),
                        res, coup, init)
                for dt in (1.6e-2, 8e-3, 4e-3)]
        assert 14.0 < gaps[0] / gaps[1] < 18.0
        assert 14.0 < gaps[1] / gaps[2] < 18.0

    def test_agreement_with_volterra_at_shared_step(self):
        res, coup = resonant_system(0.1, 0.87)
        init = InitialState.from_separability(1.0)
        k = KernelSpec.from_reservoir(res)
        sv = solve_volterra(k, coup, init, volterra_cfg(1e-3, 10.0))
        sa = solve_aux_ode(k, coup, init, ode_cfg(1e-3, 10.0))
        gap = max(float(np.max(np.abs(sv.c1 - sa.c1))),
                  float(np.max(np.abs(sv.c2 - sa.c2))))
        assert gap < 1e-4

    def test_requires_exponential_kernel(self):
        res, coup = resonant_system(0.5, 0.5)
        init = InitialState.from_separability(0.0)
        k_tab = KernelSpec.tabulated(np.ones(5001), 1e-3)
        with pytest.raises(ValueError):
            solve_aux_ode(k_tab, coup, init, ode_cfg(1e-3, 5.0))


class TestDiscretizedBath:
    def test_mode_comb_weights_match_spectral_density(self):
        res = resonant_system(0.5, 0.5)[0]
        modes = sample_lorentzian_modes(res, n_modes=200, freq_window=10.0)
        assert len(modes) == 200
        d_omega = 2.0 * 10.0 * res.lam / 200
        for m in (modes[0], modes[57], modes[-1]):
            assert m.g ** 2 == pytest.approx(res.spectral_density(m.omega) * d_omega,
                                             rel=1e-12)
            assert m.delta == pytest.approx(res.omega0 - m.omega, abs=1e-12)
        # comb is symmetric around resonance
        assert modes[0].delta == pytest.approx(-modes[-1].delta, abs=1e-12)

    def test_reference_accuracy_weak_coupling(self):
        res, coup = resonant_system(0.1, 0.87)
        init = InitialState.from_separability(0.0)
        series = solve_discretized_bath(res, coup, init, bath_cfg(1e-3, 10.0))
        assert max_gap(series, res, coup, init) < 1e-3

    def test_error_settles_with_mode_count(self):
        # coarse combs are visibly off; from 250 modes on the error is
        # pinned by the frozen frequency window, not the mode count
        res, coup = resonant_system(0.1, 0.87)
        init = InitialState.from_separability(0.0)
        gaps = {n: max_gap(solve_discretized_bath(res, coup, init,
                                                  bath_cfg(1e-3, 10.0, n_modes=n)),
                           res, coup, init)
                for n in (100, 250, 500, 1000, 2000)}
        assert gaps[250] < gaps[100] / 10.0
        for n in (250, 500, 1000):
            assert gaps[2000] == pytest.approx(gaps[n], rel=0.01)
        assert gaps[2000] < 1e-3

    def test_subradiant_state_exactly_constant(self):
        res, coup = resonant_system(0.5, 0.7)
        init = coup.psi_minus()
        series = solve_discretized_bath(res, coup, init, bath_cfg(1e-3, 3.0,
                                                                  n_modes=400))
        np.testing.assert_allclose(series.c1, init.c01, atol=1e-12)
        np.testing.assert_allclose(series.c2, init.c02, atol=1e-12)

    def test_total_excitation_conserved(self):
        res, coup = resonant_system(0.5, 0.87)
        init = InitialState.from_separability(0.0)
        series = solve_discretized_bath(res, coup, init, bath_cfg(1e-3, 10.0))
        norms = series.meta["norm_total"]
        assert float(np.max(np.abs(norms - norms[0]))) < 1e-8

    def test_recurrence_warning(self):
        res, coup = resonant_system(0.1, 0.5)
        init = InitialState.from_separability(0.0)
        # 100 modes over [-20, 20]: recurrence at 2 pi / 0.4 ~ 15.7
        short = solve_discretized_bath(res, coup, init, bath_cfg(1e-3, 10.0,
                                                                 n_modes=100))
        long = solve_discretized_bath(res, coup, init, bath_cfg(1e-3, 20.0,
                                                                n_modes=100))
        assert short.meta["recurrence_warning"] is False
        assert long.meta["recurrence_warning"] is True
        assert long.meta["recurrence_time"] == pytest.approx(2.0 * math.pi / 0.4,
                                                             rel=1e-12)


class TestTimeSeries:
    def test_grid_and_table_shape(self):
        res, coup = resonant_system(0.5, 0.5)
        init = InitialState.from_separability(0.0)
        series = solve_aux_ode(KernelSpec.from_reservoir(res), coup, init,
                               ode_cfg(1e-2, 1.0))
        assert series.tau.size == 101
        assert series.tau[0] == 0.0
        assert series.tau[-1] == pytest.approx(1.0, abs=1e-12)
        table = series.as_table()
        assert table.shape == (101, 5)
        np.testing.assert_allclose(table[:, 1] + 1j * table[:, 2], series.c1,
                                   atol=1e-15)
        np.testing.assert_allclose(table[:, 3] + 1j * table[:, 4], series.c2,
                                   atol=1e-15)

    def test_initial_point_is_exact(self):
        res, coup = resonant_system(0.5, 0.5)
        init = InitialState.from_separability(0.3, 0.8)
        for solver, k in ((solve_volterra, KernelSpec.from_reservoir(res)),
                          (solve_aux_ode, KernelSpec.from_reservoir(res))):
            series = solver(k, coup, init, SolverConfig(dt=1e-2, t_max=0.5,
                                                        method=None))
            assert series.c1[0] == init.c01
            assert series.c2[0] == init.c02
