"""Smooth partition of unity subordinate to the 1.1-dilated Whitney cubes.

The 1-D cutoff is psi(t) = h((1.1 - |t|) / 0.1) with
h(u) = g(u) / (g(u) + g(1 - u)), g(u) = exp(-1/u) for u > 0 else 0, so that
psi = 1 on [-1, 1] and 0 outside [-1.1, 1.1].  Cube bumps are products of
axis cutoffs; theta_Q = phi_Q / sum_R phi_R over the cubes whose 1.1-boxes
cover the evaluation point.  All derivatives come from forward truncated
Taylor propagation; branch selection is by exact sign tests, so the support
statement theta_Q = 0 outside 1.1Q holds exactly.
"""

from fractions import Fraction

from .geometry import to_frac_point
from .taylor_arith import TaylorValue, exp_neg_inv_derivs

INNER = Fraction(1)
OUTER = Fraction(11, 10)
WIDTH = OUTER - INNER


def transition(u, order=0):
    """h(u) = g(u)/(g(u)+g(1-u)) and derivatives, as a 1-D TaylorValue."""
    tv_u = TaylorValue(1, order, {(0,): float(u), (1,): 1.0} if order else {(0,): float(u)})
    return _h_of(tv_u, float(u), order)


def _h_of(tv_u, u_val, order):
    gu = tv_u.compose_univariate(exp_neg_inv_derivs(u_val, order))
    tv_v = 1.0 - tv_u
    gv = tv_v.compose_univariate(exp_neg_inv_derivs(1.0 - u_val, order))
    return gu / (gu + gv)


def psi_univariate(t_frac, inv_r, order):
    """The scaled axis cutoff psi((x_i - c_i)/r) as a 1-D TaylorValue in x_i.

    t_frac is the exact rational (x_i - c_i)/r; inv_r = 1/r scales the
    derivative chain.  Branches are decided exactly.
    """
    a = abs(t_frac)
    if a <= INNER:
        return TaylorValue.constant(1.0, 1, order)
    if a >= OUTER:
        return TaylorValue.constant(0.0, 1, order)
    sign = 1.0 if t_frac > 0 else -1.0
    u_val = float((OUTER - a) / WIDTH)
    du_dx = -sign * float(inv_r) / float(WIDTH)
    tv_u = TaylorValue(1, order, {(0,): u_val})
    if order >= 1:
        tv_u.coeffs[(1,)] = du_dx
    return _h_of(tv_u, u_val, order)


def phi(cube, x, order):
    """The unnormalized cube bump: 1 on Q, 0 outside 1.1Q, with all
    partials up to `order`."""
    n = cube.n
    x = to_frac_point(x)
    r = cube.side / 2
    inv_r = Fraction(1) / r
    factors = []
    for i, (xi, ai) in enumerate(zip(x, cube.coords)):
        c = (2 * ai + 1) * r
        t = (xi - c) * inv_r
        f = psi_univariate(t, inv_r, order)
        if f.value == 0.0 and not f.coeffs:
            return TaylorValue(n, order)   # exact zero
        factors.append(f.lift(n, i))
    out = TaylorValue.constant(1.0, n, order)
    for f in factors:
        out = out * f
    return out


def covering_cubes(W, x):
    """All accepted cubes R with x inside the closed box 1.1R."""
    located = W.locate(x)
    cands = set(located)
    for c in located:
        cands.update(W.neighbors(c))
    xf = to_frac_point(x)
    cover = [c for c in cands if c.box().dilate(OUTER).contains(xf)]
    return sorted(cover, key=lambda c: (c.level, c.coords))


def theta(W, cube, x, order):
    """theta_Q(x) with partials up to `order`, as a TaylorValue.

    The denominator ranges over exactly the cubes whose 1.1-boxes contain x
    and is >= 1 because the cube containing x contributes 1.
    """
    cover = covering_cubes(W, x)
    if cube not in cover:
        return TaylorValue(W.n, order)
    parts = {c: phi(c, x, order) for c in cover}
    denom = TaylorValue(W.n, order)
    for tv in parts.values():
        denom = denom + tv
    assert denom.value >= 1.0 - 1e-12, "partition denominator below 1"
    return parts[cube] / denom


def theta_all(W, x, order):
    """theta_R(x) for every covering cube R at once (shared denominator)."""
    cover = covering_cubes(W, x)
    parts = {c: phi(c, x, order) for c in cover}
    denom = TaylorValue(W.n, order)
    for tv in parts.values():
        denom = denom + tv
    inv = denom.reciprocal()
    return {c: tv * inv for c, tv in parts.items()}


def verify_derivative_bounds(W, order, grid=5, max_cubes_per_level=3,
                             scales=4, ratio_tol=1.25):
    """Scale-normalized derivative sups sup |d^k theta_Q| * delta_Q^{|k|}.

    Samples a per-cube grid over 1.1Q at `scales` distinct cube levels and
    reports, per derivative order, the normalized sup and its max/min ratio
    across scales (asserted <= ratio_tol).
    """
    import numpy as np
    from .multiindex import multi_indices, mi_order

    levels = sorted(W.levels)[:scales] if len(W.levels) >= scales else sorted(W.levels)
    per_level = {}
    for m in levels:
        coords = W.levels[m]
        sup = {}
        for row in coords[:max_cubes_per_level]:
            cube = _cube_from_row(m, row)
            box = cube.box().dilate(OUTER)
            axes = [np.linspace(float(l), float(h), grid + 2)[1:-1]
                    for l, h in zip(box.lo, box.hi)]
            mesh = np.meshgrid(*axes, indexing="ij")
            pts = np.stack([a.ravel() for a in mesh], axis=1)
            for pt in pts:
                try:
                    tv = theta(W, cube, tuple(pt), order)
                except ValueError:
                    continue          # on a site or outside the domain
                for k in multi_indices(W.n, order):
                    v = abs(tv.derivative(k)) * cube.diameter() ** mi_order(k)
                    o = mi_order(k)
                    sup[o] = max(sup.get(o, 0.0), v)
        per_level[m] = sup
    report = {"levels": levels, "normalized_sup": per_level, "ratios": {},
              "passed": True}
    for o in range(order + 1):
        vals = [per_level[m].get(o, 0.0) for m in levels if per_level[m].get(o, 0.0) > 0]
        if len(vals) >= 2:
            ratio = max(vals) / min(vals)
            report["ratios"][o] = ratio
            if ratio > ratio_tol:
                report["passed"] = False
    return report


def _cube_from_row(level, row):
    from .geometry import DyadicCube
    return DyadicCube(level, tuple(int(c) for c in row))
