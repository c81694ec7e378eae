"""Local N-th order phase velocities and the classical comparison diagnostics.

The core quantity is the ratio -(d^{N+1}psi/dt dx^N) / (d^{N+1}psi/dx^{N+1}).
Points where the denominator (nearly) vanishes are genuine poles of the
definition, not numerical accidents, so they are reported as ``None`` from
point queries and as masked entries from grid sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotOscillatory, OrderTooHigh
from .field import (
    AnalyticField,
    Grid1x1,
    Harmonic,
    SampledField,
    envelope_derivs,
    sample,
    save_grid_csv,
)

__all__ = [
    "PhaseVelocityField",
    "ClassicalDiagnostics",
    "pv_point",
    "pv_from_jet",
    "pv_field",
    "kink_spectrum",
    "damped_spectrum",
    "classical_diagnostics",
]

# relative denominator tolerance; poles are flagged, never extrapolated over
EPS_DEN_REL = 1e-9
EPS_DEN_FLOOR = 1e-300
# minimum relative wavelength change across a stencil for the transport
# velocity U to count as defined
WAVELENGTH_GRAD_REL = 1e-4


@dataclass(frozen=True)
class PhaseVelocityField:
    order: int
    grid: Grid1x1
    values: np.ndarray      # (nt, nx); nan where masked
    mask: np.ndarray        # True = valid
    eps_den: float

    def save_csv(self, path):
        out = np.where(self.mask, self.values, np.nan)
        save_grid_csv(path, self.grid, out, field_name=f"v{self.order}")


@dataclass(frozen=True)
class ClassicalDiagnostics:
    grid: Grid1x1
    local_wavelength: np.ndarray          # (nt, nx); nan where undefined
    classical_group_velocity: np.ndarray  # (nt, nx); nan where undefined
    omega_over_k: float | None


def _point_eps(num, den):
    return max(EPS_DEN_FLOOR, 1e-12 * max(abs(num), abs(den)))


def pv_from_jet(jet, order, eps_den=None):
    """Phase velocity of the given order from a precomputed jet, or None."""
    num = jet.deriv(1, order)
    den = jet.deriv(0, order + 1)
    eps = _point_eps(num, den) if eps_den is None else eps_den
    if abs(den) < eps:
        return None
    return -num / den


def pv_point(field, x, t, order, eps_den=None):
    """Local N-th order phase velocity at one point; None at a pole."""
    if order < 0:
        raise OrderTooHigh("phase velocity order must be >= 0")
    if order > field.nmax:
        raise OrderTooHigh(f"field supports phase velocities up to order {field.nmax}")
    jet = field.jet(x, t, order + 1)
    return pv_from_jet(jet, order, eps_den)


def _deriv_arrays(field, grid, order):
    """(num, den) arrays of the two mixed partials over the grid."""
    if isinstance(field, SampledField):
        g = field.grid
        same = (
            abs(g.x0 - grid.x0) < 1e-12
            and abs(g.t0 - grid.t0) < 1e-12
            and abs(g.dx - grid.dx) < 1e-15
            and abs(g.dt - grid.dt) < 1e-15
            and g.nx == grid.nx
            and g.nt == grid.nt
        )
        if same:
            num = field.derivative_grid(1, order)
            den = field.derivative_grid(0, order + 1)
        else:
            num = field._spline(1, order)(grid.ts, grid.xs)
            den = field._spline(0, order + 1)(grid.ts, grid.xs)
        return num, den
    tt, xx = np.meshgrid(grid.ts, grid.xs, indexing="ij")
    table = field.jet_batch(xx, tt, order + 1)
    return table[1, order], table[0, order + 1]


def pv_field(field, grid: Grid1x1, order: int, eps_den=None) -> PhaseVelocityField:
    """Map pv_point over a grid, recording poles and clipped stencils in the mask."""
    if order < 0 or order > field.nmax:
        raise OrderTooHigh(f"field supports phase velocities up to order {field.nmax}")
    num, den = _deriv_arrays(field, grid, order)
    if eps_den is None:
        finite = np.abs(den[np.isfinite(den)])
        scale = finite.max() if finite.size else 0.0
        eps_den = max(EPS_DEN_FLOOR, EPS_DEN_REL * scale)
    with np.errstate(invalid="ignore"):
        mask = np.isfinite(num) & np.isfinite(den) & (np.abs(den) >= eps_den)
    values = np.full(num.shape, np.nan)
    values[mask] = -num[mask] / den[mask]
    return PhaseVelocityField(order, grid, values, mask, float(eps_den))


# ---------------------------------------------------------------------------
# closed-form spectra for the damped families
# ---------------------------------------------------------------------------


def damped_spectrum(a, lam, envelope, phi, order):
    """v_N = a*(1 - lam * env^(N)(phi) / env^(N+1)(phi)); None at a pole."""
    d = envelope_derivs(envelope, phi, order + 1)
    num, den = d[order], d[order + 1]
    if abs(den) < _point_eps(num, den):
        return None
    return a * (1.0 - lam * num / den)


def kink_spectrum(a, lam, phi):
    """(v0, vI, vII) for the damped arctan kink; None entries at the poles."""
    v0 = a * (1.0 + lam * (1.0 + phi * phi) * np.arctan(phi))
    if abs(phi) < 1e-15:
        vI = None
    else:
        vI = a * (1.0 - lam * (1.0 + phi * phi) / (2.0 * phi))
    den = 3.0 * phi * phi - 1.0
    if abs(den) < 1e-14 * (1.0 + 3.0 * phi * phi):
        vII = None
    else:
        vII = a * (1.0 - lam * (phi ** 3 + phi) / den)
    return float(v0), vI, vII


# ---------------------------------------------------------------------------
# classical (wavelength-based) diagnostics
# ---------------------------------------------------------------------------


def _zero_crossings(xs, row):
    """Linearly interpolated zero crossings of one time slice."""
    s = np.sign(row)
    idx = np.nonzero((s[:-1] * s[1:]) < 0)[0]
    crossings = xs[idx] - row[idx] * (xs[idx + 1] - xs[idx]) / (row[idx + 1] - row[idx])
    exact = np.nonzero(row == 0.0)[0]
    if exact.size:
        crossings = np.sort(np.concatenate([crossings, xs[exact]]))
    return crossings


def classical_diagnostics(field, grid: Grid1x1) -> ClassicalDiagnostics:
    """Local wavelength field and the historical transport-equation velocity.

    lambda_w(x, t) is twice the distance between the adjacent zero crossings
    bracketing x at fixed t; U = -(d lambda/dt)/(d lambda/dx) wherever both
    derivatives exist and the spatial one is not degenerate.
    """
    if isinstance(field, SampledField):
        values = field._spline(0, 0)(grid.ts, grid.xs)
    else:
        values = sample(field, grid).values
    xs = grid.xs
    lam = np.full((grid.nt, grid.nx), np.nan)
    for j in range(grid.nt):
        z = _zero_crossings(xs, values[j])
        if z.size < 3:
            raise NotOscillatory(
                f"time slice {j} has {z.size} zero crossings (need >= 3)"
            )
        k = np.searchsorted(z, xs)
        ok = (k >= 1) & (k < z.size)
        kk = np.clip(k, 1, z.size - 1)
        lam[j, ok] = 2.0 * (z[kk] - z[kk - 1])[ok]
    dldt = np.full_like(lam, np.nan)
    dldx = np.full_like(lam, np.nan)
    dldt[1:-1] = (lam[2:] - lam[:-2]) / (2.0 * grid.dt)
    dldx[:, 1:-1] = (lam[:, 2:] - lam[:, :-2]) / (2.0 * grid.dx)
    with np.errstate(invalid="ignore", divide="ignore"):
        finite = np.isfinite(dldt) & np.isfinite(dldx)
        # degenerate denominator: the wavelength change across the stencil is
        # negligible compared with the wavelength itself (0/0 for a uniform
        # field; also swallows zero-crossing interpolation noise)
        significant = np.abs(dldx) * (2.0 * grid.dx) > WAVELENGTH_GRAD_REL * np.abs(lam)
        good = finite & significant
        U = np.where(good, -dldt / np.where(good, dldx, 1.0), np.nan)
    omega_over_k = None
    if isinstance(field, Harmonic):
        omega_over_k = field.omega / field.k
    return ClassicalDiagnostics(grid, lam, U, omega_over_k)
