"""Hot numeric kernels with numba-compiled and pure-numpy variants.

The leapfrog time loop dominates simulator runtime, so it gets an @njit
version.  Selection: numba is used when importable unless the environment
variable LOCPV_NUMBA is set to 0/false/off, in which case the numpy fallback
runs.  Both paths produce bitwise-comparable results (same arithmetic order
per grid point).
"""

from __future__ import annotations

import os

import numpy as np

BOUNDARY_REFLECTING = 0
BOUNDARY_PERIODIC = 1


def numba_enabled() -> bool:
    flag = os.environ.get("LOCPV_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def _leapfrog_numpy(psi, a2, dt, dx, gamma, boundary, blowup):
    """Fill rows 2..nt-1 of psi in place from rows 0 and 1.

    Update: (1+g*dt)*psi^{n+1} = 2*psi^n - (1-g*dt)*psi^{n-1} + dt^2*a^2*lap.
    Returns the index of the first blown-up row, or -1.
    """
    nt, nx = psi.shape
    r = (dt * dt) / (dx * dx)
    cp = 1.0 + gamma * dt
    cm = 1.0 - gamma * dt
    lap = np.empty(nx)
    for n in range(1, nt - 1):
        cur = psi[n]
        lap[1:-1] = cur[2:] - 2.0 * cur[1:-1] + cur[:-2]
        if boundary == BOUNDARY_PERIODIC:
            lap[0] = cur[1] - 2.0 * cur[0] + cur[-1]
            lap[-1] = cur[0] - 2.0 * cur[-1] + cur[-2]
        else:
            lap[0] = 0.0
            lap[-1] = 0.0
        psi[n + 1] = (2.0 * cur - cm * psi[n - 1] + r * a2 * lap) / cp
        if boundary == BOUNDARY_REFLECTING:
            psi[n + 1, 0] = 0.0
            psi[n + 1, -1] = 0.0
        if np.max(np.abs(psi[n + 1])) > blowup:
            return n + 1
    return -1


try:
    from numba import njit

    @njit(cache=True)
    def _leapfrog_numba(psi, a2, dt, dx, gamma, boundary, blowup):  # pragma: no cover
        nt, nx = psi.shape
        r = (dt * dt) / (dx * dx)
        cp = 1.0 + gamma * dt
        cm = 1.0 - gamma * dt
        for n in range(1, nt - 1):
            peak = 0.0
            for i in range(nx):
                if i == 0:
                    if boundary == BOUNDARY_PERIODIC:
                        lap = psi[n, 1] - 2.0 * psi[n, 0] + psi[n, nx - 1]
                    else:
                        lap = 0.0
                elif i == nx - 1:
                    if boundary == BOUNDARY_PERIODIC:
                        lap = psi[n, 0] - 2.0 * psi[n, nx - 1] + psi[n, nx - 2]
                    else:
                        lap = 0.0
                else:
                    lap = psi[n, i + 1] - 2.0 * psi[n, i] + psi[n, i - 1]
                val = (2.0 * psi[n, i] - cm * psi[n - 1, i] + r * a2[i] * lap) / cp
                if boundary == BOUNDARY_REFLECTING and (i == 0 or i == nx - 1):
                    val = 0.0
                psi[n + 1, i] = val
                if abs(val) > peak:
                    peak = abs(val)
            if peak > blowup:
                return n + 1
        return -1

except ImportError:  # pragma: no cover
    _leapfrog_numba = None


def leapfrog_fill(psi, a2, dt, dx, gamma, boundary, blowup=1e12, force=None):
    """Run the selected leapfrog kernel; force in {"numba", "numpy"} overrides."""
    use_numba = numba_enabled() if force is None else (force == "numba")
    if use_numba and _leapfrog_numba is not None:
        return _leapfrog_numba(psi, np.asarray(a2, float), float(dt), float(dx),
                               float(gamma), int(boundary), float(blowup))
    return _leapfrog_numpy(psi, np.asarray(a2, float), float(dt), float(dx),
                           float(gamma), int(boundary), float(blowup))
