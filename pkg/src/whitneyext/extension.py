"""The extension operator: assemble sum_P theta_P(x) J_{x_P}(x) from a jet
field over the sites, evaluate its partial derivatives, and check the
extension property numerically."""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import to_frac_point, float_point, pow2
from .jets import Jet, jet_eval, jet_derivative
from .multiindex import multi_indices, mi_order, mi_factorial
from .partition import theta_all
from .taylor_arith import TaylorValue


@dataclass
class JetField:
    """One jet of order floor(s) per site."""

    params: object
    entries: dict     # site (Fraction tuple) -> Jet

    def __post_init__(self):
        order = self.params.s_floor
        self.entries = {to_frac_point(k): v for k, v in self.entries.items()}
        for site, jet in self.entries.items():
            if jet.order != order:
                raise ValueError(f"jet at {site} has order {jet.order}, "
                                 f"expected floor(s) = {order}")

    def jet(self, site):
        return self.entries[to_frac_point(site)]

    def scaled(self, alpha):
        out = {}
        for site, jet in self.entries.items():
            out[site] = Jet(jet.anchor, jet.order,
                            {k: alpha * v for k, v in jet.coeffs.items()})
        return JetField(self.params, out)

    def plus(self, other):
        out = {}
        for site, jet in self.entries.items():
            oj = other.entries[site]
            out[site] = Jet(jet.anchor, jet.order,
                            {k: v + oj.coeffs[k] for k, v in jet.coeffs.items()})
        return JetField(self.params, out)

    def to_json(self):
        from .multiindex import mi_to_key
        return {"params": self.params.to_json(),
                "jets": [j.to_json() for _, j in sorted(self.entries.items())]}


def jets_from_function(F, sites, params):
    """Sample the order-floor(s) jets of an analytic function at the sites."""
    order = params.s_floor
    entries = {}
    for site in sites:
        entries[to_frac_point(site)] = F.jet_at(site, order)
    return JetField(params, entries)


class ExtensionField:
    """Tf: the Whitney extension of a jet field over a decomposition."""

    def __init__(self, decomposition, jets):
        self.W = decomposition
        self.jets = jets
        sites = set(self.W.sites)
        if set(jets.entries) != sites:
            raise ValueError("jet field sites do not match decomposition sites")
        self.fallback_count = 0
        self.eval_count = 0
        self._memo = {}

    @property
    def params(self):
        return self.jets.params

    @property
    def n(self):
        return self.W.n

    def _jet_taylor(self, jet, x, order):
        """TaylorValue of the jet polynomial at x up to `order`."""
        tv = TaylorValue(self.n, order)
        for k in multi_indices(self.n, min(order, jet.order)):
            d = jet_eval(jet_derivative(jet, k), x)
            if d:
                tv.coeffs[k] = d / mi_factorial(k)
        return tv

    def eval_all(self, x, order):
        """All partials d^i Tf(x) for |i| <= order, in one pass.

        At a site the jet coefficients are returned directly.
        """
        self.eval_count += 1
        memo_key = (tuple(x), order)
        if memo_key in self._memo:
            return self._memo[memo_key]
        xf = to_frac_point(x)
        if xf in self.jets.entries:
            jet = self.jets.entries[xf]
            return {k: (jet.coeffs[k] if mi_order(k) <= jet.order else 0.0)
                    for k in multi_indices(self.n, order)}
        thetas = theta_all(self.W, xf, order)
        acc = TaylorValue(self.n, order)
        xflt = float_point(xf)
        for cube, tv in thetas.items():
            jet = self.jets.jet(self.W.anchor(cube))
            acc = acc + tv * self._jet_taylor(jet, xflt, order)
        out = {k: acc.derivative(k) for k in multi_indices(self.n, order)}
        if len(self._memo) < 200000:
            self._memo[memo_key] = out
        return out

    def eval(self, x, i=None):
        """d^i Tf(x) (i defaults to the zero multi-index)."""
        i = tuple(i) if i is not None else (0,) * self.n
        if mi_order(i) > self.params.s_floor:
            raise ValueError("derivative order exceeds floor(s)")
        return self.eval_all(x, mi_order(i))[i]

    # -- vectorized-interface adapter (seminorm estimators) ---------------

    def _fast_tables(self):
        """Flat per-cube arrays for the batched evaluator: half-sides,
        centers, anchor points, jet monomial coefficients, and a per-level
        coordinate hash for covering-cube lookup."""
        if getattr(self, "_ft", None) is not None:
            return self._ft
        cubes = sorted(self.W.cubes(), key=lambda c: (c.level, c.coords))
        n = self.n
        order = self.jets.params.s_floor
        kset = multi_indices(n, order)
        half = np.empty(len(cubes))
        center = np.empty((len(cubes), n))
        anchor = np.empty((len(cubes), n))
        coeff = np.zeros((len(cubes), len(kset)))
        level_index = {}
        level_side = {}
        lo = np.empty((len(cubes), n))
        hi = np.empty((len(cubes), n))
        for i, c in enumerate(cubes):
            side = float(c.side)
            half[i] = side / 2.0
            lo[i] = [float(a) * side for a in c.coords]
            hi[i] = lo[i] + side
            center[i] = lo[i] + side / 2.0
            level_index.setdefault(c.level, {})[c.coords] = i
            level_side[c.level] = side
        # anchor sites by vectorized box-to-site distance; exact tie-break
        # (lexicographically smallest site) only where floats are ambiguous
        sites_sorted = sorted(self.W.sites)
        SA = np.array([[float(v) for v in s] for s in sites_sorted])
        gap = np.maximum(lo[:, None, :] - SA[None], 0.0) + \
            np.maximum(SA[None] - hi[:, None, :], 0.0)
        d2 = (gap ** 2).sum(axis=2)
        pick = d2.argmin(axis=1)
        best = d2[np.arange(len(cubes)), pick]
        close = (d2 <= best[:, None] + 1e-12 * (1.0 + best[:, None])).sum(axis=1)
        for i, c in enumerate(cubes):
            if close[i] > 1:
                site = self.W.anchor(c)
            else:
                site = sites_sorted[pick[i]]
            jet = self.jets.jet(site)
            anchor[i] = [float(v) for v in jet.anchor]
            for j, k in enumerate(kset):
                v = jet.coeffs.get(k, 0.0)
                if v:
                    coeff[i, j] = float(v) / mi_factorial(k)
        offsets = np.array(np.meshgrid(*([[-1, 0, 1]] * n),
                                       indexing="ij")).reshape(n, -1).T
        self._ft = (half, center, anchor, coeff, kset,
                    level_index, level_side, offsets)
        return self._ft

    @staticmethod
    def _psi_batch(t):
        """Axis cutoff psi and dpsi/dt, elementwise over an array of scaled
        coordinates t = (x_i - c_i) / (side/2)."""
        a = np.abs(t)
        psi = np.where(a <= 1.0, 1.0, 0.0)
        dpsi = np.zeros_like(t)
        band = (a > 1.0) & (a < 1.1)
        if band.any():
            u = (1.1 - a[band]) / 0.1
            g = np.exp(-1.0 / u)
            gb = np.exp(-1.0 / (1.0 - u))
            tot = g + gb
            psi[band] = g / tot
            hp = (g / u ** 2 * gb + g * gb / (1.0 - u) ** 2) / tot ** 2
            dpsi[band] = hp * (-np.sign(t[band]) / 0.1)
        return psi, dpsi

    def _batch_value_grad(self, X):
        """Tf and grad Tf over an (N, n) batch in one vectorized pass.

        Returns (values, grads, covered) where covered marks rows with at
        least one covering cube; uncovered rows are left at zero for the
        caller to handle.
        """
        (half, center, anchor, coeff, kset,
         level_index, level_side, offsets) = self._fast_tables()
        n = self.n
        N = len(X)
        S = np.zeros(N)
        dS = np.zeros((N, n))
        num = np.zeros(N)
        dnum = np.zeros((N, n))
        for level, table in level_index.items():
            side = level_side[level]
            base = np.floor(X / side).astype(np.int64)
            for off in offsets:
                cand = base + off[None, :]
                idx = np.fromiter(
                    (table.get(tuple(row), -1) for row in map(tuple, cand)),
                    dtype=np.int64, count=N)
                rows = np.nonzero(idx >= 0)[0]
                if rows.size == 0:
                    continue
                ci = idx[rows]
                r = half[ci][:, None]
                t = (X[rows] - center[ci]) / r
                inb = np.abs(t).max(axis=1) < 1.1
                rows, ci, t, r = rows[inb], ci[inb], t[inb], r[inb]
                if rows.size == 0:
                    continue
                psi, dpsi = self._psi_batch(t)
                phi = psi.prod(axis=1)
                excl = np.ones_like(psi)
                if n > 1:
                    left = np.cumprod(psi, axis=1)
                    right = np.cumprod(psi[:, ::-1], axis=1)[:, ::-1]
                    excl[:, 1:] = left[:, :-1]
                    excl[:, :-1] *= right[:, 1:]
                dphi = dpsi * excl / r
                dx = X[rows] - anchor[ci]
                P = np.zeros(rows.size)
                dP = np.zeros((rows.size, n))
                for j, k in enumerate(kset):
                    cj = coeff[ci, j]
                    mono = np.prod(dx ** np.array(k), axis=1)
                    P += cj * mono
                    for ax in range(n):
                        if k[ax] > 0:
                            k2 = np.array(k)
                            k2[ax] -= 1
                            dP[:, ax] += cj * k[ax] * np.prod(dx ** k2, axis=1)
                np.add.at(S, rows, phi)
                np.add.at(dS, rows, dphi)
                np.add.at(num, rows, phi * P)
                np.add.at(dnum, rows, dphi * P[:, None] + phi[:, None] * dP)
        covered = S > 0.0
        safe = np.where(covered, S, 1.0)
        values = num / safe
        grads = dnum / safe[:, None] - (num / safe ** 2)[:, None] * dS
        values[~covered] = 0.0
        grads[~covered] = 0.0
        return values, grads, covered

    def partial(self, k, X):
        """Row-wise d^k Tf over an (N, n) array, with a jet-value fallback
        inside the guard radius 2^-max_level of the sites."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        k = tuple(k)
        guard = float(pow2(-self.W.max_level))
        sites = np.array([[float(c) for c in s] for s in self.W.sites])
        dists = np.linalg.norm(sites[None, :, :] - X[:, None, :], axis=2)
        near = dists.min(axis=1) < guard
        nearest = dists.argmin(axis=1)
        out = np.empty(len(X))
        if mi_order(k) <= 1:
            cached = getattr(self, "_bvg_cache", None)
            if cached is not None and cached[0] is X:
                vals, grads, covered = cached[1]
            else:
                vals, grads, covered = self._batch_value_grad(X)
                self._bvg_cache = (X, (vals, grads, covered))
            if mi_order(k) == 0:
                out[:] = vals
            else:
                out[:] = grads[:, k.index(1)]
            slow = near | ~covered
        else:
            slow = np.ones(len(X), dtype=bool)
        for r in np.nonzero(slow)[0]:
            row = X[r]
            if near[r]:
                self.fallback_count += 1
                jet = self.jets.jet(tuple(self.W.sites[nearest[r]]))
                out[r] = jet_eval(jet_derivative(jet, k), tuple(row))
            else:
                out[r] = self.eval(tuple(row), k)
        return out

    def value(self, X):
        return self.partial((0,) * self.n, X)


def extend_eval(field, x, i=None):
    """Module-level convenience wrapper around ExtensionField.eval."""
    return field.eval(x, i)


def jet_agreement_check(field, x0, i, radii, n_directions=8, seed=0,
                        reference=None):
    """Convergence of d^i Tf toward the input jet (or a reference function)
    along shrinking radii around the site x0.

    Returns a report with per-radius worst errors and the fitted order of
    e(r); e identically zero (polynomial jets) reports order = inf.
    """
    i = tuple(i)
    x0f = float_point(to_frac_point(x0))
    jet = field.jets.jet(x0)
    djet = jet_derivative(jet, i)
    rng = np.random.default_rng(seed)
    dirs = []
    for axis in range(field.n):
        e = np.zeros(field.n)
        e[axis] = 1.0
        dirs += [e, -e]
    for _ in range(max(0, n_directions - len(dirs))):
        v = rng.normal(size=field.n)
        dirs.append(v / np.linalg.norm(v))
    errors = []
    for r in radii:
        worst = 0.0
        for u in dirs:
            pt = tuple(np.asarray(x0f) + r * u)
            val = field.eval(pt, i)
            if reference is not None:
                ref = reference.partial_at(i, pt)
            else:
                ref = jet_eval(djet, pt)
            worst = max(worst, abs(val - ref))
        errors.append(worst)
    errors = np.asarray(errors)
    radii = np.asarray(radii, dtype=float)
    mask = errors > 0
    if mask.sum() < 2:
        order = math.inf
    else:
        order = float(np.polyfit(np.log(radii[mask]), np.log(errors[mask]), 1)[0])
    return {"site": [float(c) for c in x0f], "deriv": list(i),
            "radii": radii.tolist(), "errors": errors.tolist(),
            "fitted_order": order}


def sample_field(field, grid_spec, i=None):
    """Evaluate d^i Tf on a tensor grid, row-major.

    grid_spec: per-axis (min, max, count).  Failed points become NaN and are
    listed in the sidecar error list.  Returns (values, errors) where values
    has the grid shape.
    """
    axes = [np.linspace(lo, hi, int(cnt)) for lo, hi, cnt in grid_spec]
    shape = tuple(len(a) for a in axes)
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    values = np.empty(len(pts))
    errors = []
    for r, row in enumerate(pts):
        try:
            values[r] = field.eval(tuple(row), i)
        except Exception as exc:
            values[r] = np.nan
            errors.append({"index": r, "point": row.tolist(), "error": str(exc)})
    return values.reshape(shape), errors
