"""Truncated bivariate Taylor (jet) arithmetic.

A ``Taylor2`` holds the coefficients of a polynomial in the two displacement
variables (dt, dx), truncated at a fixed total degree.  Propagating these
objects through the closed-form expression of a wave family yields every mixed
partial derivative at the expansion point to machine precision, with no
symbolic algebra involved.

Coefficients may be plain floats or numpy arrays of identical shape, in which
case the whole jet is evaluated at a batch of expansion points at once.
"""

from __future__ import annotations

from math import factorial

import numpy as np

__all__ = [
    "Taylor2",
    "t2_exp",
    "t2_sin",
    "t2_cos",
    "t2_atan",
    "t2_log",
    "t2_sqrt",
    "t2_pow",
    "t2_compose",
]


def _batch_shape(*arrays):
    return np.broadcast_shapes(*(np.shape(a) for a in arrays))


class Taylor2:
    """Polynomial sum_{p+q<=order} coef[p,q] * dt^p * dx^q."""

    __slots__ = ("coef", "order")

    def __init__(self, coef):
        self.coef = np.asarray(coef, dtype=float)
        self.order = self.coef.shape[0] - 1

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, value, order, batch_shape=()):
        shape = _batch_shape(value, np.zeros(batch_shape))
        coef = np.zeros((order + 1, order + 1) + shape)
        coef[0, 0] = value
        return cls(coef)

    @classmethod
    def variables(cls, x, t, order):
        """Jets of the coordinate functions x and t at the point (x, t)."""
        shape = _batch_shape(x, t)
        cx = np.zeros((order + 1, order + 1) + shape)
        ct = np.zeros((order + 1, order + 1) + shape)
        cx[0, 0] = x
        ct[0, 0] = t
        if order >= 1:
            cx[0, 1] = 1.0
            ct[1, 0] = 1.0
        return cls(cx), cls(ct)

    # -- inspection ---------------------------------------------------------

    @property
    def value(self):
        return self.coef[0, 0]

    def deriv(self, p, q):
        """Mixed partial d^{p+q} f / dt^p dx^q at the expansion point."""
        if p + q > self.order:
            raise ValueError(f"derivative order {p}+{q} exceeds jet order {self.order}")
        return self.coef[p, q] * (factorial(p) * factorial(q))

    def deriv_table(self):
        """Array D with D[p, q] = d^{p+q} f / dt^p dx^q (entries p+q<=order)."""
        m = self.order
        out = np.array(self.coef, copy=True)
        for p in range(m + 1):
            for q in range(m + 1 - p):
                out[p, q] *= factorial(p) * factorial(q)
        return out

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Taylor2):
            if other.order != self.order:
                raise ValueError("mixed jet orders")
            return other
        return Taylor2.constant(other, self.order)

    @staticmethod
    def _aligned(a, b):
        # pad trailing batch dims so (m+1, m+1, *batch) arrays broadcast
        if a.ndim < b.ndim:
            a = a.reshape(a.shape + (1,) * (b.ndim - a.ndim))
        elif b.ndim < a.ndim:
            b = b.reshape(b.shape + (1,) * (a.ndim - b.ndim))
        return a, b

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self._aligned(self.coef, other.coef)
        return Taylor2(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Taylor2(-self.coef)

    def __sub__(self, other):
        other = self._coerce(other)
        a, b = self._aligned(self.coef, other.coef)
        return Taylor2(a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Taylor2):
            return Taylor2(self.coef * other)
        if other.order != self.order:
            raise ValueError("mixed jet orders")
        m = self.order
        a, b = self.coef, other.coef
        out = np.zeros(
            (m + 1, m + 1) + np.broadcast_shapes(a.shape[2:], b.shape[2:])
        )
        for p1 in range(m + 1):
            for q1 in range(m + 1 - p1):
                apq = a[p1, q1]
                if np.all(apq == 0.0):
                    continue
                for p2 in range(m + 1 - p1 - q1):
                    for q2 in range(m + 1 - p1 - q1 - p2):
                        out[p1 + p2, q1 + q2] += apq * b[p2, q2]
        return Taylor2(out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if not isinstance(other, Taylor2):
            return Taylor2(self.coef / other)
        return self * t2_pow(other, -1)

    def __rtruediv__(self, other):
        return t2_pow(self, -1) * other

    def __pow__(self, p):
        return t2_pow(self, p)


# -- composition with elementary functions ---------------------------------


def t2_compose(u, series_fn):
    """f(u) for a Taylor2 u, where series_fn(u0, m) returns the univariate
    Taylor coefficients c_k of f at u0 (f(u0+s) = sum c_k s^k, k<=m)."""
    m = u.order
    c = series_fn(u.value, m)
    uhat = Taylor2(np.array(u.coef, copy=True))
    uhat.coef[0, 0] = 0.0
    out = Taylor2.constant(c[m], m, np.shape(c[m]))
    for k in range(m - 1, -1, -1):
        out = out * uhat + Taylor2.constant(c[k], m, np.shape(c[k]))
    return out


def exp_series(u0, m):
    e = np.exp(u0)
    return [e / factorial(k) for k in range(m + 1)]


def sin_series(u0, m):
    s, c = np.sin(u0), np.cos(u0)
    cycle = [s, c, -s, -c]
    return [cycle[k % 4] / factorial(k) for k in range(m + 1)]


def cos_series(u0, m):
    s, c = np.sin(u0), np.cos(u0)
    cycle = [c, -s, -c, s]
    return [cycle[k % 4] / factorial(k) for k in range(m + 1)]


def _recip_series(q, m):
    """Coefficients of 1/q(s) for a univariate polynomial series q, up to s^m."""
    r = [1.0 / q[0]]
    for k in range(1, m + 1):
        acc = 0.0
        for j in range(1, min(k, len(q) - 1) + 1):
            acc = acc + q[j] * r[k - j]
        r.append(-acc / q[0])
    return r


def atan_series(u0, m):
    c0 = np.arctan(u0)
    if m == 0:
        return [c0]
    # d/ds atan(u0+s) = 1 / (1 + u0^2 + 2*u0*s + s^2); integrate term-wise
    q = [1.0 + u0 * u0, 2.0 * u0, np.broadcast_to(1.0, np.shape(u0))]
    d = _recip_series(q, m - 1)
    return [c0] + [d[k - 1] / k for k in range(1, m + 1)]


def log_series(u0, m):
    c = [np.log(u0)]
    for k in range(1, m + 1):
        c.append(((-1.0) ** (k + 1)) / (k * u0 ** k))
    return c


def pow_series(p, u0, m):
    # generalized binomial: c_k = C(p, k) * u0^(p-k)
    c = []
    binom = 1.0
    for k in range(m + 1):
        c.append(binom * u0 ** (p - k))
        binom = binom * (p - k) / (k + 1)
    return c


def t2_exp(u):
    return t2_compose(u, exp_series)


def t2_sin(u):
    return t2_compose(u, sin_series)


def t2_cos(u):
    return t2_compose(u, cos_series)


def t2_atan(u):
    return t2_compose(u, atan_series)


def t2_log(u):
    return t2_compose(u, log_series)


def t2_sqrt(u):
    return t2_compose(u, lambda u0, m: pow_series(0.5, u0, m))


def t2_pow(u, p):
    if isinstance(p, (int, np.integer)) and p >= 0:
        out = Taylor2.constant(1.0, u.order)
        base = u
        k = int(p)
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out
    return t2_compose(u, lambda u0, m: pow_series(float(p), u0, m))
