"""Wave fields on the 1+1 dimensional (x, t) plane.

Two kinds of field are supported: closed-form analytic families evaluated by
jet (truncated-Taylor) arithmetic, and uniformly sampled grids differentiated
by central finite-difference stencils with bicubic interpolation for off-grid
queries.  Both expose the same ``eval`` / ``jet`` surface so the analysis
modules do not care which one they are handed.
"""

from __future__ import annotations

import ast
import io
from dataclasses import dataclass, field as dc_field
from math import factorial

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .errors import OrderTooHigh, OutOfDomain, StencilClipped
from .taylor import (
    Taylor2,
    t2_atan,
    t2_cos,
    t2_exp,
    t2_log,
    t2_pow,
    t2_sin,
    t2_sqrt,
)

__all__ = [
    "Grid1x1",
    "Jet",
    "AnalyticField",
    "Harmonic",
    "Translational",
    "DampedTranslational",
    "KinkDamped",
    "InhomogeneousMode",
    "CustomField",
    "SampledField",
    "sample",
    "ENVELOPES",
    "envelope_derivs",
    "fd_weights",
    "save_grid_csv",
    "load_grid_csv",
]

ANALYTIC_NMAX = 4   # highest PV order for closed-form fields
SAMPLED_NMAX = 2    # FD noise makes mixed partials beyond 3rd order unreliable


# ---------------------------------------------------------------------------
# grids and jets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid1x1:
    """Uniform space-time grid; node (i, j) sits at (x0 + i*dx, t0 + j*dt)."""

    x0: float
    dx: float
    nx: int
    t0: float
    dt: float
    nt: int

    def __post_init__(self):
        if not (self.dx > 0 and self.dt > 0):
            raise ValueError("grid spacings must be positive")
        if self.nx < 2 or self.nt < 2:
            raise ValueError("grid needs at least 2 points per axis")

    @property
    def xs(self):
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def ts(self):
        return self.t0 + self.dt * np.arange(self.nt)

    @property
    def x_max(self):
        return self.x0 + self.dx * (self.nx - 1)

    @property
    def t_max(self):
        return self.t0 + self.dt * (self.nt - 1)

    def contains(self, x, t):
        return (self.x0 <= x <= self.x_max) and (self.t0 <= t <= self.t_max)


@dataclass(frozen=True)
class Jet:
    """All mixed partials of a field at one point, up to a total order.

    ``table[p, q]`` is d^{p+q} psi / dt^p dx^q; entries with p+q > order are
    meaningless.
    """

    x: float
    t: float
    order: int
    table: np.ndarray

    def deriv(self, p, q):
        if p + q > self.order:
            raise OrderTooHigh(f"jet holds orders <= {self.order}")
        return self.table[p, q]

    @property
    def value(self):
        return self.table[0, 0]


# ---------------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------------

ENVELOPES = {
    "gauss": lambda u: t2_exp(-(u * u)),
    "arctan": t2_atan,
    "sin": t2_sin,
    "exp": t2_exp,
}


def envelope_derivs(envelope, phi, order):
    """Derivatives d^k env / d phi^k, k = 0..order, at the scalar argument phi."""
    fn = ENVELOPES[envelope] if isinstance(envelope, str) else envelope
    u = Taylor2.constant(phi, order, np.shape(phi))
    if order >= 1:
        u.coef[1, 0] = 1.0
    jet = fn(u)
    return np.array([jet.coef[k, 0] * factorial(k) for k in range(order + 1)])


# ---------------------------------------------------------------------------
# analytic families
# ---------------------------------------------------------------------------


class AnalyticField:
    """Base class: subclasses define expr() over Taylor2 coordinate jets."""

    nmax = ANALYTIC_NMAX

    def expr(self, xs: Taylor2, ts: Taylor2) -> Taylor2:
        raise NotImplementedError

    def eval(self, x, t):
        xs, ts = Taylor2.variables(np.asarray(x, float), np.asarray(t, float), 0)
        out = self.expr(xs, ts).value
        return out if np.ndim(out) else float(out)

    def jet(self, x, t, order) -> Jet:
        if order > self.nmax + 1:
            raise OrderTooHigh(f"analytic fields support jets up to order {self.nmax + 1}")
        xs, ts = Taylor2.variables(float(x), float(t), order)
        return Jet(float(x), float(t), order, self.expr(xs, ts).deriv_table())

    def jet_batch(self, x, t, order):
        """Vectorized deriv_table over broadcast arrays of points."""
        if order > self.nmax + 1:
            raise OrderTooHigh(f"analytic fields support jets up to order {self.nmax + 1}")
        xs, ts = Taylor2.variables(np.asarray(x, float), np.asarray(t, float), order)
        return self.expr(xs, ts).deriv_table()


@dataclass(frozen=True)
class Harmonic(AnalyticField):
    """psi = sin(omega*t - k*x)."""

    omega: float
    k: float

    def expr(self, xs, ts):
        return t2_sin(self.omega * ts - self.k * xs)


def _check_a(a):
    if a == 0:
        raise ValueError("propagation constant a must be nonzero")


@dataclass(frozen=True)
class Translational(AnalyticField):
    """Rigidly moving profile psi(t - x/a)."""

    a: float
    envelope: str = "gauss"

    def __post_init__(self):
        _check_a(self.a)

    def expr(self, xs, ts):
        return ENVELOPES[self.envelope](ts - xs * (1.0 / self.a))


@dataclass(frozen=True)
class DampedTranslational(AnalyticField):
    """psi(t - x/a) * exp(-lam*t); negative lam models an amplified signal."""

    a: float
    lam: float
    envelope: str = "gauss"

    def __post_init__(self):
        _check_a(self.a)

    def expr(self, xs, ts):
        phi = ts - xs * (1.0 / self.a)
        return ENVELOPES[self.envelope](phi) * t2_exp(-self.lam * ts)


@dataclass(frozen=True)
class KinkDamped(AnalyticField):
    """Growing arctan front ("tsunami"): arctan(t - x/a) * exp(+lam*t).

    The amplified orientation (positive exponent) is the one whose phase
    velocities match the closed forms returned by ``kink_spectrum``.
    """

    a: float
    lam: float

    def __post_init__(self):
        _check_a(self.a)

    def expr(self, xs, ts):
        phi = ts - xs * (1.0 / self.a)
        return t2_atan(phi) * t2_exp(self.lam * ts)


@dataclass(frozen=True)
class InhomogeneousMode(AnalyticField):
    """psi(xi*t - k(x)*x) with k(x) = xi*n(x)/c, for a medium profile n."""

    xi: float
    medium: object  # media.MediumProfile
    envelope: str = "gauss"

    def __post_init__(self):
        if self.xi == 0:
            raise ValueError("xi must be nonzero")

    def expr(self, xs, ts):
        n = self.medium.taylor2(xs)
        phi = self.xi * (ts - n * xs * (1.0 / self.medium.c))
        return ENVELOPES[self.envelope](phi)


# -- custom expression fields ------------------------------------------------

_CUSTOM_FUNCS = {
    "sin": t2_sin,
    "cos": t2_cos,
    "exp": t2_exp,
    "atan": t2_atan,
    "arctan": t2_atan,
    "log": t2_log,
    "sqrt": t2_sqrt,
}

_CUSTOM_CONSTS = {"pi": np.pi, "e": np.e}


class CustomField(AnalyticField):
    """Analytic field from an elementary-expression string in x and t.

    Grammar: numbers, names x/t/pi/e, + - * / ** and unary minus, parentheses,
    calls to sin, cos, exp, atan/arctan, log, sqrt.  Evaluated under jet
    arithmetic, so all derivatives are machine precision.
    """

    def __init__(self, expression: str):
        self.expression = expression
        tree = ast.parse(expression, mode="eval")
        self._validate(tree.body)
        self._tree = tree.body

    def __repr__(self):
        return f"CustomField({self.expression!r})"

    @classmethod
    def _validate(cls, node):
        if isinstance(node, ast.BinOp) and isinstance(
            node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
        ):
            cls._validate(node.left)
            cls._validate(node.right)
        elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            cls._validate(node.operand)
        elif isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id in _CUSTOM_FUNCS):
                raise ValueError(f"unknown function in expression: {ast.dump(node.func)}")
            if len(node.args) != 1 or node.keywords:
                raise ValueError("expression functions take exactly one argument")
            cls._validate(node.args[0])
        elif isinstance(node, ast.Name):
            if node.id not in ("x", "t") and node.id not in _CUSTOM_CONSTS:
                raise ValueError(f"unknown name in expression: {node.id}")
        elif isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise ValueError("only numeric constants allowed")
        else:
            raise ValueError(f"unsupported syntax: {type(node).__name__}")

    def expr(self, xs, ts):
        env = {"x": xs, "t": ts}

        def ev(node):
            if isinstance(node, ast.BinOp):
                a, b = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return a + b
                if isinstance(node.op, ast.Sub):
                    return a - b
                if isinstance(node.op, ast.Mult):
                    return a * b
                if isinstance(node.op, ast.Div):
                    return a / b
                if not isinstance(b, Taylor2):
                    return t2_pow(a, b)
                raise ValueError("exponent must be a constant")
            if isinstance(node, ast.UnaryOp):
                v = ev(node.operand)
                return -v if isinstance(node.op, ast.USub) else v
            if isinstance(node, ast.Call):
                return _CUSTOM_FUNCS[node.func.id](ev(node.args[0]))
            if isinstance(node, ast.Name):
                if node.id in env:
                    return env[node.id]
                return _CUSTOM_CONSTS[node.id]
            return float(node.value)

        out = ev(self._tree)
        if not isinstance(out, Taylor2):
            out = Taylor2.constant(out, xs.order, xs.coef.shape[2:])
        return out


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------


def fd_weights(z, nodes, m):
    """Fornberg weights for the m-th derivative at z from the given nodes."""
    nodes = np.asarray(nodes, float)
    n = len(nodes)
    w = np.zeros((m + 1, n))
    w[0, 0] = 1.0
    c1, c4 = 1.0, nodes[0] - z
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, nodes[i] - z
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    w[k, i] = c1 * (k * w[k - 1, i - 1] - c5 * w[k, i - 1]) / c2
                w[0, i] = -c1 * c5 * w[0, i - 1] / c2
            for k in range(mn, 0, -1):
                w[k, j] = ((nodes[i] - z) * w[k, j] - k * w[k - 1, j]) / c3
            w[0, j] = (nodes[i] - z) * w[0, j] / c3
        c1 = c2
    return w[m]


def _central_offsets(m, acc):
    half = (m + 1) // 2 + acc // 2 - 1
    return np.arange(-half, half + 1)


def stencil_half_width(m, acc):
    return (m + 1) // 2 + acc // 2 - 1


def _diff_axis(values, h, m, axis, acc, one_sided):
    """m-th derivative along axis, central interior, one-sided near edges."""
    if m == 0:
        return values
    v = np.moveaxis(values, axis, 0)
    n = v.shape[0]
    offs = _central_offsets(m, acc)
    half = offs[-1]
    width = m + acc  # one-sided stencil size
    if n < max(2 * half + 1, width):
        raise StencilClipped(f"axis too short for order-{m} stencil")
    out = np.empty_like(v, dtype=float)
    wc = fd_weights(0.0, offs, m) / h ** m
    core = sum(w * v[half + o : n - half + o] for w, o in zip(wc, offs))
    out[half : n - half] = core
    # one-sided edges (order-acc accurate)
    for i in range(half):
        wf = fd_weights(float(i), np.arange(width), m) / h ** m
        out[i] = np.tensordot(wf, v[:width], axes=(0, 0))
        wb = fd_weights(float(n - 1 - i), np.arange(n - width, n), m) / h ** m
        out[n - 1 - i] = np.tensordot(wb, v[n - width :], axes=(0, 0))
    if not one_sided:
        out[:half] = np.nan
        out[n - half :] = np.nan
    return np.moveaxis(out, 0, axis)


# ---------------------------------------------------------------------------
# sampled fields
# ---------------------------------------------------------------------------


class SampledField:
    """Uniformly sampled field; values[j, i] = psi(x_i, t_j), shape (nt, nx)."""

    nmax = SAMPLED_NMAX

    def __init__(self, grid: Grid1x1, values, acc: int = 2, one_sided: bool = True):
        values = np.asarray(values, float)
        if values.shape != (grid.nt, grid.nx):
            raise ValueError(
                f"values shape {values.shape} does not match grid ({grid.nt}, {grid.nx})"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled field contains non-finite values")
        if acc not in (2, 4):
            raise ValueError("stencil accuracy must be 2 or 4")
        self.grid = grid
        self.values = values
        self.acc = acc
        self.one_sided = one_sided
        self._deriv_grids = {}
        self._splines = {}

    # -- derivative grids ----------------------------------------------------

    def derivative_grid(self, p, q):
        """FD grid of d^{p+q} psi / dt^p dx^q over the whole sampling grid."""
        if p + q > self.nmax + 1:
            raise OrderTooHigh(f"sampled fields support derivatives up to order {self.nmax + 1}")
        key = (p, q)
        if key not in self._deriv_grids:
            g = _diff_axis(self.values, self.grid.dt, p, 0, self.acc, self.one_sided)
            g = _diff_axis(g, self.grid.dx, q, 1, self.acc, self.one_sided)
            self._deriv_grids[key] = g
        return self._deriv_grids[key]

    def _spline(self, p, q):
        key = (p, q)
        if key not in self._splines:
            g = self.derivative_grid(p, q)
            g = np.nan_to_num(g) if not self.one_sided else g
            kx = min(3, self.grid.nt - 1)
            ky = min(3, self.grid.nx - 1)
            self._splines[key] = RectBivariateSpline(
                self.grid.ts, self.grid.xs, g, kx=kx, ky=ky
            )
        return self._splines[key]

    # -- queries -------------------------------------------------------------

    def _check_domain(self, x, t):
        if not self.grid.contains(x, t):
            raise OutOfDomain(f"point ({x}, {t}) outside sampled grid")

    def _check_margin(self, x, t, order):
        if self.one_sided:
            return
        half = stencil_half_width(order, self.acc)
        g = self.grid
        if (
            x - g.x0 < half * g.dx
            or g.x_max - x < half * g.dx
            or t - g.t0 < half * g.dt
            or g.t_max - t < half * g.dt
        ):
            raise StencilClipped(
                f"point ({x}, {t}) within stencil half-width of the boundary"
            )

    def eval(self, x, t):
        self._check_domain(x, t)
        return float(self._spline(0, 0)(t, x)[0, 0])

    def jet(self, x, t, order) -> Jet:
        if order > self.nmax + 1:
            raise OrderTooHigh(f"sampled fields support jets up to order {self.nmax + 1}")
        self._check_domain(x, t)
        self._check_margin(x, t, order)
        table = np.zeros((order + 1, order + 1))
        for p in range(order + 1):
            for q in range(order + 1 - p):
                table[p, q] = self._spline(p, q)(t, x)[0, 0]
        return Jet(float(x), float(t), order, table)


def sample(field: AnalyticField, grid: Grid1x1, **kwargs) -> SampledField:
    """Evaluate an analytic field exactly on every grid node."""
    tt, xx = np.meshgrid(grid.ts, grid.xs, indexing="ij")
    xs, ts = Taylor2.variables(xx, tt, 0)
    return SampledField(grid, field.expr(xs, ts).value, **kwargs)


# ---------------------------------------------------------------------------
# CSV grid format (shared by sampled fields and PV fields)
# ---------------------------------------------------------------------------


def save_grid_csv(path, grid: Grid1x1, values, field_name="psi"):
    values = np.asarray(values, float)
    buf = io.StringIO()
    buf.write(f"# x0={grid.x0!r} dx={grid.dx!r} nx={grid.nx}\n")
    buf.write(f"# t0={grid.t0!r} dt={grid.dt!r} nt={grid.nt}\n")
    buf.write(f"# field={field_name}\n")
    buf.write("# layout=row-per-time\n")
    for row in values:
        buf.write(",".join(f"{v:.15g}" for v in row))
        buf.write("\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def load_grid_csv(path):
    """Returns (grid, values, field_name)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    header = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body_start = i
            break
        for tokenpair in line[1:].split():
            if "=" in tokenpair:
                k, v = tokenpair.split("=", 1)
                header[k] = v
    try:
        grid = Grid1x1(
            x0=float(header["x0"]),
            dx=float(header["dx"]),
            nx=int(header["nx"]),
            t0=float(header["t0"]),
            dt=float(header["dt"]),
            nt=int(header["nt"]),
        )
    except KeyError as exc:
        raise ValueError(f"grid CSV header missing key: {exc}") from exc
    rows = [
        [float(tok) for tok in line.split(",")]
        for line in lines[body_start:]
        if line.strip()
    ]
    values = np.array(rows, float)
    if values.shape != (grid.nt, grid.nx):
        raise ValueError("CSV body shape does not match header grid")
    return grid, values, header.get("field", "psi")
