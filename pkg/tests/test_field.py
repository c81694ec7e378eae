"""Field construction, evaluation, sampling, FD stencils, and CSV round trips."""

import numpy as np
import pytest

from locpv.errors import OutOfDomain, StencilClipped
from locpv.field import (
    DampedTranslational,
    Grid1x1,
    Harmonic,
    KinkDamped,
    SampledField,
    Translational,
    load_grid_csv,
    sample,
    save_grid_csv,
)
from locpv.field import _diff_axis


class TestGrid:
    def test_point_mapping_exact(self):
        g = Grid1x1(-1.0, 0.25, 9, 2.0, 0.5, 5)
        assert g.xs[3] == -1.0 + 3 * 0.25
        assert g.ts[4] == 2.0 + 4 * 0.5
        assert g.contains(-1.0, 4.0)
        assert not g.contains(1.1, 2.0)

    @pytest.mark.parametrize(
        "kw",
        [
            dict(x0=0, dx=0.1, nx=1, t0=0, dt=0.1, nt=5),
            dict(x0=0, dx=-0.1, nx=5, t0=0, dt=0.1, nt=5),
            dict(x0=0, dx=0.1, nx=5, t0=0, dt=0.0, nt=5),
        ],
    )
    def test_invalid_grids_rejected(self, kw):
        with pytest.raises(ValueError):
            Grid1x1(**kw)


class TestAnalyticEval:
    def test_unit_gaussian_peak(self):
        assert Translational(1.0).eval(0.0, 0.0) == pytest.approx(1.0)

    def test_kink_zero_at_front(self):
        assert KinkDamped(1.0, 0.3).eval(0.0, 0.0) == pytest.approx(0.0)

    def test_translational_derivative_ratio(self):
        fld = Translational(2.0)
        jet = fld.jet(0.7, 0.3, 1)
        assert -jet.deriv(1, 0) / jet.deriv(0, 1) == pytest.approx(2.0)

    def test_harmonic_first_derivatives(self):
        jet = Harmonic(3.0, 1.5).jet(0.0, 0.0, 1)
        assert jet.deriv(1, 0) == pytest.approx(3.0)
        assert jet.deriv(0, 1) == pytest.approx(-1.5)


class TestSampling:
    def test_sample_matches_direct_eval(self):
        g = Grid1x1(0.0, 0.1, 11, 0.0, 0.1, 11)
        fld = Harmonic(3.0, 1.5)
        s = sample(fld, g)
        assert s.values.shape == (11, 11)
        for j, i in [(0, 0), (0, 10), (10, 0), (10, 10)]:
            assert s.values[j, i] == pytest.approx(fld.eval(g.xs[i], g.ts[j]))

    def test_shape_mismatch_rejected(self):
        g = Grid1x1(0.0, 0.1, 4, 0.0, 0.1, 4)
        with pytest.raises(ValueError):
            SampledField(g, np.zeros((4, 5)))

    def test_nonfinite_rejected(self):
        g = Grid1x1(0.0, 0.1, 3, 0.0, 0.1, 3)
        vals = np.zeros((3, 3))
        vals[1, 1] = np.nan
        with pytest.raises(ValueError):
            SampledField(g, vals)


class TestFiniteDifferences:
    def test_first_derivatives_within_1e4(self):
        g = Grid1x1(-2.0, 0.01, 401, -1.0, 0.01, 201)
        fld = Translational(1.0)
        s = sample(fld, g)
        jf = s.jet(0.25, 0.1, 1)
        ja = fld.jet(0.25, 0.1, 1)
        assert abs(jf.deriv(1, 0) - ja.deriv(1, 0)) < 1e-4
        assert abs(jf.deriv(0, 1) - ja.deriv(0, 1)) < 1e-4

    @pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (1, 1), (0, 2), (2, 0), (0, 3)])
    def test_richardson_convergence_order(self, p, q):
        fld = Translational(1.0)
        exact = fld.jet(0.15, 0.05, 3).deriv(p, q)
        errs = []
        for h in (0.04, 0.02, 0.01):
            n = int(round(2.0 / h)) + 1
            g = Grid1x1(-1.0, h, n, -1.0, h, n)
            s = sample(fld, g)
            errs.append(abs(s.jet(0.15, 0.05, 3).deriv(p, q) - exact))
        order1 = np.log2(errs[0] / errs[1])
        order2 = np.log2(errs[1] / errs[2])
        assert min(order1, order2) >= 1.8

    def test_mixed_orderings_commute_within_truncation(self):
        g = Grid1x1(-2.0, 0.02, 201, -2.0, 0.02, 201)
        s = sample(DampedTranslational(1.0, 0.2), g)
        tx = _diff_axis(_diff_axis(s.values, g.dt, 1, 0, 2, True), g.dx, 1, 1, 2, True)
        xt = _diff_axis(_diff_axis(s.values, g.dx, 1, 1, 2, True), g.dt, 1, 0, 2, True)
        assert np.max(np.abs(tx - xt)) < 1e-10

    def test_fourth_order_stencils_more_accurate(self):
        fld = Translational(1.0)
        g = Grid1x1(-2.0, 0.05, 81, -2.0, 0.05, 81)
        exact = fld.jet(0.1, 0.0, 1).deriv(0, 1)
        e2 = abs(sample(fld, g, acc=2).jet(0.1, 0.0, 1).deriv(0, 1) - exact)
        e4 = abs(sample(fld, g, acc=4).jet(0.1, 0.0, 1).deriv(0, 1) - exact)
        assert e4 < e2 / 10

    def test_out_of_domain_and_clipped(self):
        g = Grid1x1(0.0, 0.1, 21, 0.0, 0.1, 21)
        s = sample(Translational(1.0), g)
        with pytest.raises(OutOfDomain):
            s.eval(5.0, 0.5)
        with pytest.raises(OutOfDomain):
            s.jet(-0.5, 0.5, 1)
        clipped = sample(Translational(1.0), g, one_sided=False)
        with pytest.raises(StencilClipped):
            clipped.jet(0.05, 1.0, 2)
        # interior still fine
        clipped.jet(1.0, 1.0, 2)


class TestCsv:
    def test_round_trip(self, tmp_path):
        g = Grid1x1(-1.0, 0.125, 9, 0.5, 0.25, 7)
        s = sample(Harmonic(2.0, 1.0), g)
        path = tmp_path / "field.csv"
        save_grid_csv(path, g, s.values)
        g2, vals, name = load_grid_csv(path)
        assert g2 == g
        assert name == "psi"
        np.testing.assert_allclose(vals, s.values, rtol=1e-12)

    def test_emission_is_deterministic(self, tmp_path):
        g = Grid1x1(0.0, 0.1, 5, 0.0, 0.1, 5)
        s = sample(Translational(1.5), g)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        save_grid_csv(p1, g, s.values)
        save_grid_csv(p2, g, s.values)
        assert p1.read_bytes() == p2.read_bytes()

    def test_header_format(self, tmp_path):
        g = Grid1x1(0.0, 0.1, 3, 0.0, 0.2, 2)
        path = tmp_path / "f.csv"
        save_grid_csv(path, g, np.zeros((2, 3)))
        lines = path.read_text().splitlines()
        assert lines[0].startswith("# x0=") and "nx=3" in lines[0]
        assert lines[1].startswith("# t0=") and "nt=2" in lines[1]
        assert lines[2] == "# field=psi"
        assert lines[3] == "# layout=row-per-time"
        assert len(lines) == 4 + 2
