"""Jet arithmetic against closed-form and numerical derivatives."""

import numpy as np
import pytest

from locpv.field import CustomField, Harmonic, Translational, envelope_derivs
from locpv.taylor import (
    Taylor2,
    atan_series,
    exp_series,
    log_series,
    pow_series,
    sin_series,
)


def numdiff(f, x, k, h=1e-2):
    """k-th derivative by central differences with Richardson refinement."""
    if k == 0:
        return f(x)
    offs = np.arange(-k, k + 1)
    from locpv.field import fd_weights

    w = fd_weights(0.0, offs, k)
    d1 = sum(wi * f(x + o * h) for wi, o in zip(w, offs)) / h ** k
    d2 = sum(wi * f(x + o * h / 2) for wi, o in zip(w, offs)) / (h / 2) ** k
    return (4 * d2 - d1) / 3


@pytest.mark.parametrize(
    "series_fn,f,x0",
    [
        (exp_series, np.exp, 0.3),
        (sin_series, np.sin, 1.1),
        (atan_series, np.arctan, 0.7),
        (log_series, np.log, 2.3),
        (lambda u, m: pow_series(1.5, u, m), lambda x: x ** 1.5, 1.7),
    ],
)
def test_univariate_series_match_numeric_derivatives(series_fn, f, x0):
    from math import factorial

    cs = series_fn(x0, 5)
    for k in range(5):
        expected = numdiff(f, x0, k) / factorial(k)
        assert cs[k] == pytest.approx(expected, rel=1e-4, abs=1e-6)


def test_harmonic_jet_matches_closed_form():
    omega, k = 3.0, 1.5
    fld = Harmonic(omega, k)
    x, t = 0.4, 0.2
    jet = fld.jet(x, t, 3)
    phase = omega * t - k * x
    # d^{p+q} sin(phase) / dt^p dx^q = omega^p * (-k)^q * sin^{(p+q)}(phase)
    ders = [np.sin(phase), np.cos(phase), -np.sin(phase), -np.cos(phase)]
    for p in range(4):
        for q in range(4 - p):
            expected = omega ** p * (-k) ** q * ders[(p + q) % 4]
            assert jet.deriv(p, q) == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("a", [2.0, -0.7, 5.0])
@pytest.mark.parametrize("envelope", ["gauss", "sin", "arctan"])
def test_translational_identity(a, envelope):
    # d^{p+q} psi / dt^p dx^q = (-1/a)^q * psi^(p+q)(phi)
    fld = Translational(a, envelope)
    x, t = 0.3, -0.1
    phi = t - x / a
    jet = fld.jet(x, t, 4)
    env = envelope_derivs(envelope, phi, 4)
    for p in range(5):
        for q in range(5 - p):
            expected = (-1.0 / a) ** q * env[p + q]
            assert jet.deriv(p, q) == pytest.approx(expected, rel=1e-12, abs=1e-13)


def test_custom_field_matches_builtin_harmonic():
    fld = CustomField("sin(3*t - 1.5*x)")
    ref = Harmonic(3.0, 1.5)
    j1 = fld.jet(0.2, 0.5, 3)
    j2 = ref.jet(0.2, 0.5, 3)
    np.testing.assert_allclose(j1.table, j2.table, atol=1e-13)


def test_custom_field_grammar_rejections():
    with pytest.raises(ValueError):
        CustomField("__import__('os')")
    with pytest.raises(ValueError):
        CustomField("y + 1")
    with pytest.raises(ValueError):
        CustomField("sin(x, t)")


def test_taylor_division_and_pow():
    xs, ts = Taylor2.variables(0.5, 0.25, 4)
    u = (1.0 + xs * ts) / (2.0 - xs)
    # value check
    assert u.value == pytest.approx((1 + 0.5 * 0.25) / 1.5)
    v = (xs ** 3) * (xs ** -2)
    assert v.value == pytest.approx(0.5)
    assert v.deriv(0, 1) == pytest.approx(1.0, abs=1e-12)


def test_batch_matches_scalar():
    fld = Harmonic(2.0, 0.8)
    xv = np.array([0.0, 0.3, -1.2])
    tv = np.array([0.5, 0.5, 0.5])
    batch = fld.jet_batch(xv, tv, 2)
    for i in range(3):
        single = fld.jet(xv[i], tv[i], 2)
        for p in range(3):
            for q in range(3 - p):
                assert batch[p, q, i] == pytest.approx(single.table[p, q], abs=1e-14)
