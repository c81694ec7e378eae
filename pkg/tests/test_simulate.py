"""Leapfrog simulator: stability, accuracy, energy, reversibility, kernels."""

import numpy as np
import pytest

from locpv._kernels import numba_enabled
from locpv.errors import CFLViolation, NonfiniteBlowup
from locpv.field import Grid1x1
from locpv.phasevel import pv_field
from locpv.simulate import SimSpec, discrete_energy, run, run_from_levels

W = 0.7          # pulse width
X_C = -2.5       # pulse center


def gauss_pulse(x):
    return np.exp(-(((x - X_C) / W) ** 2))


def gauss_pulse_dx(x):
    return -2.0 * (x - X_C) / W ** 2 * gauss_pulse(x)


def right_mover_spec(grid, a=1.0, gamma=0.0, boundary="Periodic"):
    # psi(x - a t) exactly solves the undamped equation; for gamma != 0 the
    # damped translational mode has rate -gamma*psi - a*psi_x
    return SimSpec(
        domain=grid,
        speed=a,
        gamma=gamma,
        initial_profile=gauss_pulse,
        initial_rate=lambda x: -gamma * gauss_pulse(x) - a * gauss_pulse_dx(x),
        boundary=boundary,
    )


def dalembert_periodic(grid, a, x, t):
    # rigid right translation with periodic wrap
    length = grid.nx * grid.dx
    arg = np.mod(x - a * t - grid.x0, length) + grid.x0
    return gauss_pulse(arg)


class TestContracts:
    def test_cfl_violation(self):
        g = Grid1x1(-5.0, 0.02, 100, 0.0, 0.03, 10)
        with pytest.raises(CFLViolation):
            run(right_mover_spec(g))

    def test_bad_boundary_rejected(self):
        g = Grid1x1(-5.0, 0.05, 100, 0.0, 0.04, 10)
        with pytest.raises(ValueError):
            SimSpec(g, 1.0, 0.0, gauss_pulse, gauss_pulse_dx, boundary="Absorbing")

    def test_nonfinite_initial_rejected(self):
        g = Grid1x1(-5.0, 0.05, 100, 0.0, 0.04, 10)
        spec = SimSpec(g, 1.0, 0.0, lambda x: np.full_like(x, np.nan), gauss_pulse_dx)
        with pytest.raises(ValueError):
            run(spec)

    def test_gain_runaway_guarded(self):
        g = Grid1x1(0.0, 0.05, 64, 0.0, 0.04, 900)
        spec = SimSpec(g, 1.0, -2.0, gauss_pulse, gauss_pulse_dx)
        with pytest.raises(NonfiniteBlowup):
            run(spec)


class TestAccuracy:
    def test_rigid_translation_matches_dalembert(self):
        g = Grid1x1(-5.0, 0.025, 400, 0.0, 0.02, 400)
        s = run(right_mover_spec(g))
        tt, xx = np.meshgrid(g.ts, g.xs, indexing="ij")
        exact = dalembert_periodic(g, 1.0, xx, tt)
        assert np.max(np.abs(s.values - exact)) < 5e-3

    def test_pv_on_simulated_rigid_translation(self):
        g = Grid1x1(-5.0, 0.025, 400, 0.0, 0.02, 400)
        s = run(right_mover_spec(g))
        pvf = pv_field(s, g, 0)
        # judge only where the pulse carries signal
        strong = np.abs(s.derivative_grid(0, 1)) > 0.05 * np.max(
            np.abs(s.derivative_grid(0, 1))
        )
        sel = pvf.mask & strong
        assert sel.sum() > 1000
        assert np.max(np.abs(pvf.values[sel] - 1.0)) < 2e-2

    def test_damped_amplitude_decay(self):
        gamma = 0.1
        g = Grid1x1(-5.0, 0.025, 400, 0.0, 0.02, 400)
        s = run(right_mover_spec(g, gamma=gamma))
        T = g.ts[-1]
        ratio = np.max(np.abs(s.values[-1])) / np.max(np.abs(s.values[0]))
        assert ratio == pytest.approx(np.exp(-gamma * T), rel=5e-2)

    def test_second_order_convergence(self):
        errs = []
        for n in (200, 400, 800):
            g = Grid1x1(-5.0, 10.0 / n, n, 0.0, 8.0 / n, n)
            s = run(right_mover_spec(g))
            tt, xx = np.meshgrid(g.ts, g.xs, indexing="ij")
            errs.append(np.max(np.abs(s.values - dalembert_periodic(g, 1.0, xx, tt))))
        assert errs[0] / errs[1] >= 3.5
        assert errs[1] / errs[2] >= 3.5


class TestEnergyAndReversibility:
    def test_undamped_energy_conserved(self):
        g = Grid1x1(-5.0, 0.025, 400, 0.0, 0.02, 200)
        s = run(right_mover_spec(g, boundary="Reflecting"))
        e = discrete_energy(s, 1.0)
        assert np.max(np.abs(e - e[0])) <= 1e-10 * e[0]

    def test_damped_energy_monotone(self):
        g = Grid1x1(-5.0, 0.025, 400, 0.0, 0.02, 200)
        s = run(right_mover_spec(g, gamma=0.2, boundary="Reflecting"))
        e = discrete_energy(s, 1.0)
        assert np.all(np.diff(e) <= 1e-10 * e[0])

    def test_undamped_run_is_time_reversible(self):
        g = Grid1x1(-5.0, 0.025, 400, 0.0, 0.02, 300)
        spec = right_mover_spec(g)
        fwd = run(spec)
        # restart from the last two levels in reverse order
        back = run_from_levels(spec, fwd.values[-1], fwd.values[-2])
        scale = np.max(np.abs(fwd.values[0]))
        assert np.max(np.abs(back.values[-1] - fwd.values[0])) <= 1e-8 * scale
        assert np.max(np.abs(back.values[-2] - fwd.values[1])) <= 1e-8 * scale


class TestVariableSpeed:
    def test_callable_speed_accepted_and_cfl_uses_max(self):
        g = Grid1x1(-5.0, 0.025, 400, 0.0, 0.02, 50)
        spec = SimSpec(
            g, lambda x: 1.0 + 0.2 * np.tanh(x), 0.0, gauss_pulse,
            lambda x: -gauss_pulse_dx(x),
        )
        assert spec.check_cfl() == pytest.approx(1.2 * 0.02 / 0.025, rel=1e-3)
        s = run(spec)
        assert np.all(np.isfinite(s.values))


class TestKernels:
    def test_numpy_and_numba_agree_bitwise(self):
        if not numba_enabled():
            pytest.skip("numba unavailable or disabled")
        g = Grid1x1(-5.0, 0.05, 200, 0.0, 0.04, 150)
        spec = right_mover_spec(g, gamma=0.05)
        a = run(spec, force_kernel="numpy")
        b = run(spec, force_kernel="numba")
        assert np.array_equal(a.values, b.values)

    def test_env_flag_disables_numba(self, monkeypatch):
        monkeypatch.setenv("LOCPV_NUMBA", "off")
        assert not numba_enabled()
        monkeypatch.setenv("LOCPV_NUMBA", "1")
