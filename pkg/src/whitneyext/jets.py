"""Taylor jets and the mean-value remainder witness."""

import numpy as np
from dataclasses import dataclass, field

from .multiindex import (mi_order, mi_factorial, mi_add, mi_power,
                         multi_indices, indices_of_order, mi_to_key, mi_from_key)
from .geometry import float_point


@dataclass(frozen=True)
class Jet:
    """Taylor data of a function at a point: coeffs[k] stores the raw
    derivative value of order k at the anchor."""

    anchor: tuple
    order: int
    coeffs: dict = field(compare=False)

    def __post_init__(self):
        n = len(self.anchor)
        want = set(multi_indices(n, self.order))
        have = set(self.coeffs)
        if have != want:
            missing = want - have
            extra = have - want
            raise ValueError(f"jet coefficient keys wrong: missing {sorted(missing)}, "
                             f"extra {sorted(extra)}")

    @property
    def n(self):
        return len(self.anchor)

    def coeff(self, k):
        return self.coeffs[tuple(k)]

    def to_json(self):
        return {"anchor": [float(c) for c in self.anchor],
                "order": self.order,
                "coeffs": {mi_to_key(k): v for k, v in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, obj):
        return cls(anchor=tuple(obj["anchor"]), order=obj["order"],
                   coeffs={mi_from_key(k): v for k, v in obj["coeffs"].items()})


def constant_jet(anchor, order, value):
    n = len(anchor)
    coeffs = {k: 0.0 for k in multi_indices(n, order)}
    coeffs[(0,) * n] = float(value)
    return Jet(tuple(anchor), order, coeffs)


def jet_eval(jet, t):
    """Value of the Taylor polynomial sum_{|k|<=m} coeff(k)/k! (t-anchor)^k."""
    t = float_point(t)
    d = tuple(ti - float(ai) for ti, ai in zip(t, jet.anchor))
    out = 0.0
    for k, c in jet.coeffs.items():
        if c != 0.0:
            out += c / mi_factorial(k) * mi_power(d, k)
    return out


def jet_derivative(jet, i):
    """The jet of the i-th partial derivative: order drops by |i| and the
    coefficient at k becomes the input coefficient at k+i."""
    i = tuple(i)
    if mi_order(i) > jet.order:
        raise ValueError("order exceeded")
    new_order = jet.order - mi_order(i)
    coeffs = {k: jet.coeffs[mi_add(k, i)]
              for k in multi_indices(jet.n, new_order)}
    return Jet(jet.anchor, new_order, coeffs)


def taylor_remainder_witness(F, x, x0, m, grid=10_000, tol=1e-10):
    """Find t in (0,1) realizing the mean-value form of the Taylor remainder:

        F(x) - J^m_{x0}F(x)
          = sum_{|k|=m} (1/k!) (d^k F(t x + (1-t) x0) - d^k F(x0)) (x-x0)^k

    Located by scanning for a sign change of the residual and bisecting
    (brentq).  For polynomial F of degree <= m any t works; t = 0.5 is
    returned.  Returns (t, residual_at_t).
    """
    from scipy.optimize import brentq

    x = float_point(x)
    x0 = float_point(x0)
    if x == x0:
        raise ValueError("x must differ from x0")
    n = len(x)
    d = tuple(a - b for a, b in zip(x, x0))
    tops = indices_of_order(n, m)
    jet0 = F.jet_at(x0, m)
    lhs = F.value_at(x) - jet_eval(jet0, x)
    base = {k: F.partial_at(k, x0) for k in tops}
    scale = abs(F.value_at(x)) + abs(jet_eval(jet0, x)) + 1.0

    def residual(t):
        pt = tuple(t * a + (1 - t) * b for a, b in zip(x, x0))
        rhs = 0.0
        for k in tops:
            rhs += (F.partial_at(k, pt) - base[k]) / mi_factorial(k) * mi_power(d, k)
        return lhs - rhs

    ts = np.linspace(0.0, 1.0, grid + 1)[1:-1]
    vals = np.array([residual(t) for t in ts])
    if np.max(np.abs(vals)) <= tol * scale:
        return 0.5, residual(0.5)
    # exact zero hit on the grid
    zero = np.flatnonzero(vals == 0.0)
    if zero.size:
        t = float(ts[zero[0]])
        return t, residual(t)
    sign_change = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if not sign_change.size:
        profile = {"t": ts[:: max(1, grid // 20)].tolist(),
                   "residual": vals[:: max(1, grid // 20)].tolist()}
        raise ValueError(f"witness not bracketed; residual profile: {profile}")
    i = sign_change[0]
    t = brentq(residual, ts[i], ts[i + 1], xtol=1e-14)
    r = residual(t)
    if abs(r) > tol * scale:
        raise ValueError(f"witness residual {r} exceeds tolerance")
    return float(t), r
