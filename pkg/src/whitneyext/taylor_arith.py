"""Truncated multivariate Taylor arithmetic.

A TaylorValue carries the normalized Taylor coefficients (derivative / k!)
of a function at a point, up to a fixed total order.  Sums, truncated
products, reciprocals and univariate composition propagate derivatives
forward exactly (to roundoff), which is how the partition-of-unity bumps
expose their derivatives.
"""

import math

from .multiindex import multi_indices, mi_add, mi_order, mi_factorial


class TaylorValue:
    """Value plus partial derivatives at a point, as normalized coefficients."""

    __slots__ = ("n", "order", "coeffs")

    def __init__(self, n, order, coeffs=None):
        self.n = n
        self.order = order
        self.coeffs = dict(coeffs) if coeffs else {}

    @classmethod
    def constant(cls, c, n, order):
        tv = cls(n, order)
        if c:
            tv.coeffs[(0,) * n] = float(c)
        return tv

    @classmethod
    def variable(cls, i, value, n, order):
        """The coordinate function x_i evaluated at `value`."""
        tv = cls.constant(value, n, order)
        if order >= 1:
            e = tuple(1 if j == i else 0 for j in range(n))
            tv.coeffs[e] = 1.0
        return tv

    @property
    def value(self):
        return self.coeffs.get((0,) * self.n, 0.0)

    def derivative(self, k):
        """The raw derivative value d^k f."""
        k = tuple(k)
        return self.coeffs.get(k, 0.0) * mi_factorial(k)

    def __add__(self, other):
        other = self._coerce(other)
        out = TaylorValue(self.n, self.order, self.coeffs)
        for k, c in other.coeffs.items():
            out.coeffs[k] = out.coeffs.get(k, 0.0) + c
        return out

    __radd__ = __add__

    def __neg__(self):
        return TaylorValue(self.n, self.order,
                           {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return TaylorValue(self.n, self.order,
                               {k: c * other for k, c in self.coeffs.items()})
        out = TaylorValue(self.n, self.order)
        for k1, c1 in self.coeffs.items():
            o1 = mi_order(k1)
            for k2, c2 in other.coeffs.items():
                if o1 + mi_order(k2) > self.order:
                    continue
                k = mi_add(k1, k2)
                out.coeffs[k] = out.coeffs.get(k, 0.0) + c1 * c2
        return out

    __rmul__ = __mul__

    def reciprocal(self):
        """1 / f by power-series inversion; requires nonzero value."""
        a0 = self.value
        if a0 == 0.0:
            raise ZeroDivisionError("reciprocal of zero-valued TaylorValue")
        # 1/f = (1/a0) * 1/(1 + u), u = f/a0 - 1, alternating geometric series
        u = self * (1.0 / a0) - 1.0
        out = TaylorValue.constant(1.0, self.n, self.order)
        term = TaylorValue.constant(1.0, self.n, self.order)
        sign = 1.0
        for _ in range(self.order):
            term = term * u
            sign = -sign
            out = out + term * sign
        return out * (1.0 / a0)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return self * other.reciprocal()

    def _coerce(self, other):
        if isinstance(other, TaylorValue):
            return other
        return TaylorValue.constant(other, self.n, self.order)

    def compose_univariate(self, outer_derivs):
        """g(f) where outer_derivs[j] = g^{(j)} evaluated at self.value."""
        u = TaylorValue(self.n, self.order,
                        {k: c for k, c in self.coeffs.items()
                         if mi_order(k) > 0})
        out = TaylorValue.constant(outer_derivs[0], self.n, self.order)
        term = TaylorValue.constant(1.0, self.n, self.order)
        for j in range(1, min(len(outer_derivs), self.order + 1)):
            term = term * u
            out = out + term * (outer_derivs[j] / math.factorial(j))
        return out

    def lift(self, n, axis):
        """Embed a 1-D TaylorValue as a function of coordinate `axis` in R^n."""
        assert self.n == 1
        out = TaylorValue(n, self.order)
        for (j,), c in self.coeffs.items():
            k = tuple(j if i == axis else 0 for i in range(n))
            out.coeffs[k] = c
        return out

    def as_dict(self):
        """Raw derivatives for every |k| <= order (zeros included)."""
        return {k: self.derivative(k) for k in multi_indices(self.n, self.order)}


def exp_neg_inv_derivs(u, order):
    """[g(u), g'(u), ..., g^(order)(u)] for g(u) = exp(-1/u) (u > 0), 0 else.

    Uses g^{(k)}(u) = exp(-1/u) q_k(1/u) with
    q_0 = 1,  q_{k+1}(v) = v^2 (q_k(v) - q_k'(v)).
    """
    if u <= 0:
        return [0.0] * (order + 1)
    v = 1.0 / u
    g = math.exp(-v)
    q = [1.0]                      # coefficients of q_k in powers of v
    out = [g]
    for _ in range(order):
        # multiply (q - q') by v^2
        dq = [q[i] * i for i in range(1, len(q))]
        diff = [q[i] - (dq[i] if i < len(dq) else 0.0) for i in range(len(q))]
        q = [0.0, 0.0] + diff
        out.append(g * sum(c * v ** i for i, c in enumerate(q)))
    return out
