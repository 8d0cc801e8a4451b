"""Truncated Taylor arithmetic (jets).

A :class:`Jet` of order ``K`` holds the Taylor coefficients
``f(x0), f'(x0), f''(x0)/2!, ..., f^(K)(x0)/K!`` of a scalar function at an
expansion point. Coefficients are stored in a numpy array of shape
``(K + 1, *batch)`` so that one jet can carry the expansions at many points
at once (and, with a trailing axis of length 3, a vector-valued curve).

Propagating jets through arithmetic and elementary functions yields exact
higher derivatives of compositions, up to floating point rounding.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["Jet", "DualJet", "JetDomainError"]


class JetDomainError(ArithmeticError):
    """An elementary function was applied outside its real domain."""


def _factorials(order):
    return np.array([math.factorial(k) for k in range(order + 1)], dtype=float)


def _conv(a, b, order):
    """Cauchy product of two coefficient arrays, truncated at ``order``."""
    out = np.empty((order + 1,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]))
    for k in range(order + 1):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc = acc + a[j] * b[k - j]
        out[k] = acc
    return out


def _check_finite(values, what):
    if not np.all(np.isfinite(values)):
        raise JetDomainError(f"{what} produced a non-finite value")


class Jet:
    """Truncated Taylor polynomial, possibly batched over trailing axes."""

    __slots__ = ("c",)
    __array_priority__ = 100  # make ndarray <op> Jet defer to Jet

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 0:
            c = c.reshape(1)
        self.c = c

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, value, order):
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value, order):
        """Jet of the identity map expanded at ``value``."""
        value = np.asarray(value, dtype=float)
        c = np.zeros((order + 1,) + value.shape)
        c[0] = value
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs):
        derivs = np.asarray(derivs, dtype=float)
        fact = _factorials(derivs.shape[0] - 1)
        return cls(derivs / fact.reshape((-1,) + (1,) * (derivs.ndim - 1)))

    @staticmethod
    def stack(jets, axis=-1):
        order = min(j.order for j in jets)
        arrays = [j.c[: order + 1] for j in jets]
        if axis < 0:
            axis = arrays[0].ndim + axis + 1
        return Jet(np.stack(arrays, axis=axis))

    # accessors --------------------------------------------------------
    @property
    def order(self):
        return self.c.shape[0] - 1

    @property
    def value(self):
        return self.c[0]

    @property
    def coefficients(self):
        return self.c

    def derivatives(self):
        """Derivative values ``f^(k)(x0)`` for ``k = 0..order``."""
        fact = _factorials(self.order)
        return self.c * fact.reshape((-1,) + (1,) * (self.c.ndim - 1))

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.c[: order + 1])

    def deriv(self):
        """Jet of the first derivative; the order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1, dtype=float)
        return Jet(self.c[1:] * k.reshape((-1,) + (1,) * (self.c.ndim - 1)))

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.c[(slice(None),) + idx])

    def sum(self, axis=-1):
        if axis < 0:
            axis = self.c.ndim + axis
        else:
            axis += 1
        return Jet(self.c.sum(axis=axis))

    def __repr__(self):
        return f"Jet(order={self.order}, coefficients={self.c.tolist()!r})"

    # arithmetic -------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        if isinstance(other, DualJet):
            return NotImplemented
        batch = self.c.shape[1:]
        value = np.asarray(other, dtype=float)
        if value.ndim > len(batch):
            raise ValueError(f"cannot lift shape {value.shape} onto a jet with batch shape {batch}")
        return Jet.constant(np.broadcast_to(value, np.broadcast_shapes(batch, value.shape)), self.order)

    def __neg__(self):
        return Jet(-self.c)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        k = min(self.order, other.order)
        return Jet(self.c[: k + 1] + other.c[: k + 1])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        k = min(self.order, other.order)
        return Jet(self.c[: k + 1] - other.c[: k + 1])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, (Jet, DualJet)):
            return Jet(self.c * np.asarray(other, dtype=float))
        if isinstance(other, DualJet):
            return NotImplemented
        k = min(self.order, other.order)
        return Jet(_conv(self.c, other.c, k))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (Jet, DualJet)):
            other = np.asarray(other, dtype=float)
            if np.any(other == 0):
                raise JetDomainError("division by zero")
            return Jet(self.c / other)
        if isinstance(other, DualJet):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self):
        a = self.c
        if np.any(a[0] == 0):
            raise JetDomainError("division by zero")
        out = np.empty_like(a)
        out[0] = 1.0 / a[0]
        for k in range(1, self.order + 1):
            acc = a[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + a[j] * out[k - j]
            out[k] = -acc / a[0]
        return Jet(out)

    def __pow__(self, exponent):
        if isinstance(exponent, (Jet, DualJet)):
            raise TypeError("jet exponents must be constants")
        p = float(exponent)
        if p.is_integer() and abs(p) <= 64:
            n = int(abs(p))
            result = Jet.constant(np.ones(self.c.shape[1:]), self.order)
            base = self
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result.reciprocal() if p < 0 else result
        a = self.c
        if np.any(a[0] <= 0):
            raise JetDomainError("non-integer power of a non-positive value")
        out = np.empty_like(a)
        out[0] = a[0] ** p
        for k in range(1, self.order + 1):
            acc = 0.0
            for j in range(1, k + 1):
                acc = acc + (p * j - (k - j)) * a[j] * out[k - j]
            out[k] = acc / (k * a[0])
        return Jet(out)

    # elementary functions ---------------------------------------------
    def _integrate(self, f0, fprime):
        """Coefficients of ``f(self)`` given ``f(a0)`` and the jet of ``f'(self)``.

        Uses ``k f_k = sum_{j=1..k} j a_j (f')_{k-j}``.
        """
        a, d = self.c, fprime.c
        out = np.empty_like(a)
        out[0] = f0
        for k in range(1, self.order + 1):
            acc = a[1] * d[k - 1]
            for j in range(2, k + 1):
                acc = acc + j * a[j] * d[k - j]
            out[k] = acc / k
        return Jet(out)

    def exp(self):
        a = self.c
        out = np.empty_like(a)
        out[0] = np.exp(a[0])
        _check_finite(out[0], "exp")
        for k in range(1, self.order + 1):
            acc = a[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + j * a[j] * out[k - j]
            out[k] = acc / k
        return Jet(out)

    def log(self):
        a = self.c
        if np.any(a[0] <= 0):
            raise JetDomainError("log of a non-positive value")
        out = np.empty_like(a)
        out[0] = np.log(a[0])
        for k in range(1, self.order + 1):
            acc = a[k] * k
            for j in range(1, k):
                acc = acc - j * out[j] * a[k - j]
            out[k] = acc / (k * a[0])
        return Jet(out)

    def _sincos(self, hyperbolic=False):
        a = self.c
        s = np.empty_like(a)
        c = np.empty_like(a)
        if hyperbolic:
            s[0], c[0] = np.sinh(a[0]), np.cosh(a[0])
            _check_finite(c[0], "sinh/cosh")
        else:
            s[0], c[0] = np.sin(a[0]), np.cos(a[0])
        sign = 1.0 if hyperbolic else -1.0
        for k in range(1, self.order + 1):
            acc_s = a[1] * c[k - 1]
            acc_c = a[1] * s[k - 1]
            for j in range(2, k + 1):
                acc_s = acc_s + j * a[j] * c[k - j]
                acc_c = acc_c + j * a[j] * s[k - j]
            s[k] = acc_s / k
            c[k] = sign * acc_c / k
        return Jet(s), Jet(c)

    def sin(self):
        return self._sincos()[0]

    def cos(self):
        return self._sincos()[1]

    def tan(self):
        s, c = self._sincos()
        if np.any(c.c[0] == 0):
            raise JetDomainError("tan at a pole")
        return s / c

    def sinh(self):
        return self._sincos(hyperbolic=True)[0]

    def cosh(self):
        return self._sincos(hyperbolic=True)[1]

    def tanh(self):
        s, c = self._sincos(hyperbolic=True)
        return s / c

    def sqrt(self):
        a = self.c
        if np.any(a[0] < 0) or (self.order > 0 and np.any(a[0] == 0)):
            raise JetDomainError("sqrt of a negative value (or of zero with derivatives)")
        out = np.empty_like(a)
        out[0] = np.sqrt(a[0])
        for k in range(1, self.order + 1):
            acc = a[k]
            for j in range(1, k):
                acc = acc - out[j] * out[k - j]
            out[k] = acc / (2.0 * out[0])
        return Jet(out)

    def atan(self):
        if self.order == 0:
            return Jet(np.arctan(self.c))
        low = self.truncate(self.order - 1)
        return self._integrate(np.arctan(self.c[0]), (1.0 + low * low).reciprocal())


class DualJet:
    """``a + eps*b`` with ``eps**2 = 0``, where ``a`` and ``b`` are jets.

    Evaluating an expression on dual jets gives, alongside the Taylor
    expansion of ``f`` along a path, the expansion of a directional partial
    derivative of ``f`` along the same path. Used for surface tangents
    ``X_u(u(t), v(t))``.
    """

    __slots__ = ("a", "b")
    __array_priority__ = 101

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def _lift(self, other):
        if isinstance(other, DualJet):
            return other
        if isinstance(other, Jet):
            return DualJet(other, other * 0.0)
        return DualJet(self.a * 0.0 + other, self.a * 0.0)

    def __neg__(self):
        return DualJet(-self.a, -self.b)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._lift(other)
        return DualJet(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return DualJet(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return DualJet(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        inv = o.a.reciprocal()
        q = self.a * inv
        return DualJet(q, (self.b - q * o.b) * inv)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, exponent):
        p = float(exponent)
        if p == 0:
            return DualJet(self.a ** 0, self.b * 0.0)
        return DualJet(self.a ** p, p * self.a ** (p - 1) * self.b)

    def _chain(self, value, slope):
        return DualJet(value, slope * self.b)

    def exp(self):
        e = self.a.exp()
        return self._chain(e, e)

    def log(self):
        return self._chain(self.a.log(), self.a.reciprocal())

    def sin(self):
        s, c = self.a._sincos()
        return self._chain(s, c)

    def cos(self):
        s, c = self.a._sincos()
        return self._chain(c, -s)

    def tan(self):
        t = self.a.tan()
        return self._chain(t, 1.0 + t * t)

    def sinh(self):
        s, c = self.a._sincos(hyperbolic=True)
        return self._chain(s, c)

    def cosh(self):
        s, c = self.a._sincos(hyperbolic=True)
        return self._chain(c, s)

    def tanh(self):
        t = self.a.tanh()
        return self._chain(t, 1.0 - t * t)

    def sqrt(self):
        r = self.a.sqrt()
        return self._chain(r, 0.5 * r.reciprocal())

    def atan(self):
        return self._chain(self.a.atan(), (1.0 + self.a * self.a).reciprocal())
