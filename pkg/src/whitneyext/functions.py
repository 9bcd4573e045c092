"""Library of named analytic test functions with exact partial derivatives.

Each function is backed by a sympy expression; partial derivatives of any
requested order are computed symbolically once and lambdified to vectorized
numpy callables.  These provide the known-regularity inputs for all
numerical experiments.
"""

import numpy as np
import sympy as sp

from .jets import Jet
from .multiindex import multi_indices
from .geometry import float_point


class AnalyticFunction:
    """A named smooth (or piecewise-smooth) function on R^n with exact
    symbolic partial derivatives."""

    def __init__(self, name, expr, syms):
        self.name = name
        self.expr = expr
        self.syms = tuple(syms)
        self.n = len(self.syms)
        self._cache = {}

    def __repr__(self):
        return f"AnalyticFunction({self.name!r}, n={self.n})"

    def _fn(self, k):
        k = tuple(k)
        if k not in self._cache:
            e = self.expr
            for sym, ki in zip(self.syms, k):
                if ki:
                    e = sp.diff(e, sym, ki)
            self._cache[k] = sp.lambdify(self.syms, e, modules="numpy")
        return self._cache[k]

    def partial(self, k, X):
        """d^k of the function at the rows of X (shape (N, n)); returns (N,)."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        fn = self._fn(k)
        with np.errstate(all="ignore"):
            out = fn(*(X[:, i] for i in range(self.n)))
        return np.broadcast_to(np.asarray(out, dtype=float), (X.shape[0],)).copy()

    def value(self, X):
        return self.partial((0,) * self.n, X)

    def partial_at(self, k, x):
        return float(self.partial(k, np.asarray(float_point(x))[None, :])[0])

    def value_at(self, x):
        return self.partial_at((0,) * self.n, x)

    def jet_at(self, x, order):
        """The order-m jet of the function at x."""
        x = float_point(x)
        coeffs = {k: self.partial_at(k, x) for k in multi_indices(self.n, order)}
        return Jet(x, order, coeffs)


def _symbols(n):
    return sp.symbols(f"x0:{n}", real=True)


def polynomial(n, coeffs, name=None):
    """sum_k coeffs[k] * x^k for multi-index keys k."""
    syms = _symbols(n)
    expr = sp.Integer(0)
    for k, c in coeffs.items():
        term = sp.Float(c, 17)
        for sym, ki in zip(syms, k):
            term *= sym ** ki
        expr += term
    return AnalyticFunction(name or f"poly{dict(coeffs)}", expr, syms)


def gaussian_bump(n, center=None, width=1.0, name=None):
    """exp(-|x - c|^2 / width^2): smooth, all derivatives decaying."""
    syms = _symbols(n)
    center = center or (0.0,) * n
    r2 = sum((sym - sp.Float(c, 17)) ** 2 for sym, c in zip(syms, center))
    expr = sp.exp(-r2 / sp.Float(width, 17) ** 2)
    return AnalyticFunction(name or f"gaussian(c={tuple(center)},w={width})", expr, syms)


def bump_product(n, center=None, radius=1.0, name=None):
    """Product over axes of the compactly supported 1-D bump
    exp(-1 / (1 - t^2)) with t = (x_i - c_i)/radius."""
    syms = _symbols(n)
    center = center or (0.0,) * n
    expr = sp.Integer(1)
    for sym, c in zip(syms, center):
        t = (sym - sp.Float(c, 17)) / sp.Float(radius, 17)
        expr *= sp.Piecewise((sp.exp(-1 / (1 - t ** 2)), t ** 2 < 1), (0, True))
    return AnalyticFunction(name or f"bump(c={tuple(center)},r={radius})", expr, syms)


def radial_power(n, beta, center=None, name=None):
    """|x - c|^beta.  Lies in C^{floor(s)} near c exactly when beta > s."""
    syms = _symbols(n)
    center = center or (0.0,) * n
    if n == 1:
        expr = sp.Abs(syms[0] - sp.Float(center[0], 17)) ** sp.Float(beta, 17)
    else:
        r2 = sum((sym - sp.Float(c, 17)) ** 2 for sym, c in zip(syms, center))
        expr = r2 ** (sp.Float(beta, 17) / 2)
    return AnalyticFunction(name or f"radpow(beta={beta},c={tuple(center)})", expr, syms)


_FACTORIES = {
    "gaussian": gaussian_bump,
    "bump": bump_product,
}


def by_name(name, n, **kwargs):
    """Resolve a scenario-file function spec to an AnalyticFunction.

    Known names: "gaussian" (center, width), "bump" (center, radius),
    "radial_power" (beta, center), "polynomial" (coeffs with string keys).
    """
    if name == "polynomial":
        coeffs = {tuple(int(c) for c in k.split(",")): v
                  for k, v in kwargs["coeffs"].items()}
        return polynomial(n, coeffs)
    if name == "radial_power":
        return radial_power(n, kwargs["beta"], center=kwargs.get("center"))
    if name in _FACTORIES:
        return _FACTORIES[name](n, **kwargs)
    raise ValueError(f"unknown test function {name!r}")
