"""Scenario runner: end-to-end boundedness experiments, the four-term
split of the extension's seminorm, and aggregated verification suites.

A scenario file fixes the space parameters, the site generator, the test
function, decomposition depth, estimator budgets, and a seed; every
randomized step derives its stream from that seed, so reruns are
byte-identical.
"""

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .decomposition import build, DepthCapError
from .extension import ExtensionField, jets_from_function, jet_agreement_check
from .functions import by_name, polynomial
from .geometry import pow2, to_frac_point, float_point
from .jets import jet_derivative, jet_eval
from .multiindex import (indices_of_order, multi_indices, mi_factorial,
                         mi_order)
from .params import SpaceParams
from .partition import theta_all, verify_derivative_bounds
from .paths import (build_path, sample_A_P, fit_decay, lemma12_check,
                    greedy_optimality_check, a_p_radius_check)
from .rng import block_generator, blocks, derive_seed
from .seminorm import Region, gagliardo, lemma7_touching, lemma7_far

SCHEMA_VERSION = 1


@dataclass
class Scenario:
    name: str
    params: SpaceParams
    sites_spec: dict
    function_spec: dict
    domain_exp: int
    max_depth: int
    budgets: dict = dc_field(default_factory=dict)
    seed: int = 0

    def to_json(self):
        return {"schema": SCHEMA_VERSION, "name": self.name,
                "params": self.params.to_json(),
                "sites": self.sites_spec, "function": self.function_spec,
                "domain_exp": self.domain_exp, "max_depth": self.max_depth,
                "budgets": self.budgets, "seed": self.seed}

    @classmethod
    def from_json(cls, data):
        if data.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported scenario schema "
                             f"{data.get('schema')!r}, expected {SCHEMA_VERSION}")
        return cls(name=data.get("name", "scenario"),
                   params=SpaceParams.from_json(data["params"]),
                   sites_spec=data["sites"],
                   function_spec=data["function"],
                   domain_exp=int(data["domain_exp"]),
                   max_depth=int(data["max_depth"]),
                   budgets=dict(data.get("budgets", {})),
                   seed=int(data.get("seed", 0)))

    def budget(self, key, default):
        return self.budgets.get(key, default)


def generate_sites(spec, n, domain_exp):
    """Site list from a generator spec: explicit, random dyadic cloud,
    grid, or a 1-D Cantor middle-half stage."""
    kind = spec["kind"]
    if kind == "explicit":
        return [tuple(Fraction(c) for c in pt) for pt in spec["points"]]
    if kind == "random":
        q = int(spec.get("resolution", 6))
        count = int(spec["count"])
        half = 2 ** (domain_exp - 1)     # margin >= quarter domain radius
        g = block_generator(derive_seed(int(spec.get("seed", 0)), "sites"), 0)
        pts = set()
        while len(pts) < count:
            raw = g.integers(-half * 2 ** q, half * 2 ** q + 1, size=n)
            pts.add(tuple(Fraction(int(v), 2 ** q) for v in raw))
        return sorted(pts)
    if kind == "grid":
        per_axis = int(spec["per_axis"])
        extent = Fraction(spec.get("extent", 2 ** (domain_exp - 1)))
        from itertools import product
        step = 2 * extent / max(per_axis - 1, 1)
        axis = [(-extent + i * step) for i in range(per_axis)]
        return [tuple(pt) for pt in product(axis, repeat=n)]
    if kind == "cantor":
        if n != 1:
            raise ValueError("Cantor site generator is one-dimensional")
        stage = int(spec["stage"])
        intervals = [(Fraction(0), Fraction(1))]
        for _ in range(stage):
            nxt = []
            for a, b in intervals:
                w = (b - a) / 4
                nxt += [(a, a + w), (b - w, b)]
            intervals = nxt
        pts = sorted({a for a, _ in intervals} | {b for _, b in intervals})
        return [(p,) for p in pts]
    raise ValueError(f"unknown site generator {kind!r}")


def build_scenario(sc):
    """Decomposition, test function, jets and the extension field."""
    sites = generate_sites(sc.sites_spec, sc.params.n, sc.domain_exp)
    W = build(sc.params, sites, sc.domain_exp, sc.max_depth)
    spec = dict(sc.function_spec)
    F = by_name(spec.pop("name"), sc.params.n, **spec)
    jets = jets_from_function(F, W.sites, sc.params)
    return W, F, jets, ExtensionField(W, jets)


def omega_region(sc):
    r = float(2 ** sc.domain_exp)
    n = sc.params.n
    return Region.from_box([-r] * n, [r] * n, label="domain")


def covered_region(W, label="covered"):
    """Union of the accepted cubes: the region where the extension is a
    smooth blend of jets (the fringe fallback has a derivative kink that
    the supercritical-kernel integral does not tolerate)."""
    cubes = sorted(W.cubes(), key=lambda c: c.key())
    return Region.from_cubes(cubes, label=label)


def _jet_partial_grid(jets, sites, k, X):
    """(len(X), len(sites)) array of d^k J_site evaluated at the rows of X."""
    out = np.zeros((len(X), len(sites)))
    for s_idx, site in enumerate(sites):
        jd = jet_derivative(jets.jet(site), k)
        d = X - np.array([float(c) for c in jd.anchor])[None, :]
        acc = np.zeros(len(X))
        for m, coeff in jd.coeffs.items():
            if coeff != 0.0:
                mon = np.full(len(X), coeff / mi_factorial(m))
                for ax, e in enumerate(m):
                    if e:
                        mon = mon * d[:, ax] ** e
                acc += mon
        out[:, s_idx] = acc
    return out


class BandSampler:
    """Importance distribution for the extension's seminorm integrand.

    The top derivatives of the blended field spike inside the transition
    bands near cube boundaries, with magnitude driven by the weight
    gradient (about C_PSI / side) times the mismatch of neighboring
    anchor jets.  Sampling those annuli with probability proportional to
    an analytic proxy of the spike size raised to the p-th power turns a
    rare-event integrand into a well-sampled one.  The density is exact,
    so estimators weighted by 1/pdf stay unbiased for any field.
    """

    C_PSI = 24.0          # sup |theta'| * side over the transition profile
    INNER_F = 0.0         # sample the whole dilated cube: the band holds the
    OUTER_F = 1.1         # spike, the bulk holds the straddling pair halo

    def __init__(self, W, jets, params, field=None):
        from itertools import product as iproduct

        self.n = n = params.n
        p, top = params.p, params.s_floor
        cubes = sorted(W.cubes(), key=lambda c: c.key())
        K = len(cubes)
        levels = np.array([c.level for c in cubes])
        coords = np.array([c.coords for c in cubes], dtype=np.int64)
        sides = 2.0 ** (-levels.astype(float))
        centers = (coords + 0.5) * sides[:, None]
        half = sides / 2.0
        self.out_lo = centers - self.OUTER_F * half[:, None]
        self.out_hi = centers + self.OUTER_F * half[:, None]
        self.in_lo = centers - self.INNER_F * half[:, None]
        self.in_hi = centers + self.INNER_F * half[:, None]
        ann_vol = (np.prod(self.out_hi - self.out_lo, axis=1)
                   - np.prod(self.in_hi - self.in_lo, axis=1))
        if field is not None:
            g = self._field_proxy(W, field, params, centers, sides)
        else:
            g = self._spike_proxy(W, jets, params, centers, sides)
        # per-cube share of the pair integral: spike size to the p, times
        # the band surface area side^(n-1), times the kernel's radial factor
        # r^(1 - {s}p) integrated over pair separations r up to the cube
        # scale; both regimes of {s}p collapse to side^(n - {s}p)
        w = g ** p * sides ** (n - params.s_frac * p)
        if w.sum() <= 0.0:
            w = ann_vol.copy()
        w = 0.9 * w / w.sum() + 0.1 * ann_vol / ann_vol.sum()
        self.dens = w / ann_vol
        # peel each annulus into 2n disjoint slabs: slab (ax, lo/hi) takes
        # the outer range on axes > ax, the band on axis ax, and the inner
        # range on axes < ax
        slab_lo = np.repeat(self.out_lo, 2 * n, axis=0)
        slab_hi = np.repeat(self.out_hi, 2 * n, axis=0)
        slab_cube = np.repeat(np.arange(K), 2 * n)
        for ax in range(n):
            rows_a = 2 * ax + 2 * n * np.arange(K)
            rows_b = rows_a + 1
            slab_hi[rows_a, ax] = self.in_lo[:, ax]
            slab_lo[rows_b, ax] = self.in_hi[:, ax]
            for j in range(ax):
                for rows in (rows_a, rows_b):
                    slab_lo[rows, j] = self.in_lo[:, j]
                    slab_hi[rows, j] = self.in_hi[:, j]
        self.slab_lo, self.slab_hi = slab_lo, slab_hi
        slab_vol = np.prod(slab_hi - slab_lo, axis=1)
        probs = w[slab_cube] * slab_vol / ann_vol[slab_cube]
        self.cum = np.cumsum(probs)
        self.cum[-1] = 1.0
        # per-level coordinate hash for fast pdf lookups
        self.level_index = {}
        for i, c in enumerate(cubes):
            self.level_index.setdefault(c.level, {})[c.coords] = i
        self._offsets = list(iproduct((-1, 0, 1), repeat=n))

    @staticmethod
    def _spike_proxy(W, jets, params, centers, sides):
        """Per-cube spike-size proxy: the weight-gradient scale
        C_PSI / side times the value mismatch of nearby site jets at the
        cube center, cascaded over derivative orders, plus the bulk size
        of the anchor jet's top derivatives."""
        n, top = params.n, params.s_floor
        sites = np.array([[float(c) for c in s] for s in W.sites])
        ks_by_order = [indices_of_order(n, j) for j in range(top + 1)]
        # jet partial values at the cube centers, per site and order
        d2 = ((centers[:, None, :] - sites[None, :, :]) ** 2).sum(axis=2)
        anchor = np.argmin(d2, axis=1)
        reach = (100.0 * math.sqrt(n) * sides) ** 2
        near = d2 <= reach[:, None]
        rows = np.arange(len(centers))
        bulk = np.zeros(len(centers))
        scale = BandSampler.C_PSI / sides
        g = np.zeros(len(centers))
        for j in range(top + 1):
            # sum over |k| = j of |d^k J_b - d^k J_anchor| at the center,
            # maximized over sites near enough to anchor a neighboring cube
            acc = np.zeros(d2.shape)
            for k in ks_by_order[j]:
                grid = _jet_partial_grid(jets, W.sites, k, centers)
                acc += np.abs(grid - grid[rows, anchor][:, None])
                if j == top:
                    bulk += np.abs(grid[rows, anchor])
            acc = np.where(near, acc, 0.0)
            g += scale ** (top - j) * acc.max(axis=1)
        return g + bulk

    @staticmethod
    def _field_proxy(W, field, params, centers, sides):
        """Per-cube oscillation of the field's top derivatives, measured
        directly: probe each cube's center and the midpoints of its faces
        inside the transition band, and take the largest top-derivative
        deviation from the center plus the bulk size at the center.
        Deterministic, so the sampler stays reproducible."""
        n, top = params.n, params.s_floor
        ks = indices_of_order(n, top)
        bound = float(pow2(W.domain_exp))
        # ring of band probes: three tangential stations per face plus the
        # corners, all at 1.03 half-sides, so sign swings across the band
        # and variation along it both register
        offs = []
        for ax in range(n):
            for sgn in (-1.03, 1.03):
                for tan in (-0.7, 0.0, 0.7):
                    o = [tan] * n
                    o[ax] = sgn
                    offs.append(o)
        from itertools import product as iproduct
        offs.extend(list(c) for c in iproduct((-1.03, 1.03), repeat=n))
        offs = np.unique(np.array(offs), axis=0)
        probes = [centers]
        for o in offs:
            probes.append(np.clip(centers + o[None, :] * sides[:, None] / 2.0,
                                  -bound, bound))
        g = np.zeros(len(centers))
        for k in ks:
            lo = hi = field.partial(k, probes[0])
            g += np.abs(lo)
            for pt in probes[1:]:
                v = field.partial(k, pt)
                lo = np.minimum(lo, v)
                hi = np.maximum(hi, v)
            g += hi - lo
        return g

    def sample(self, U):
        """Map uniforms of shape (m, n+1) to annulus points."""
        idx = np.searchsorted(self.cum, U[:, 0], side="right")
        idx = np.minimum(idx, len(self.cum) - 1)
        lo, hi = self.slab_lo[idx], self.slab_hi[idx]
        return lo + U[:, 1:] * (hi - lo)

    def pdf(self, X):
        out = np.zeros(len(X))
        for r, x in enumerate(X):
            total = 0.0
            for level, table in self.level_index.items():
                side = 2.0 ** (-level)
                base = tuple(int(math.floor(v / side)) for v in x)
                for off in self._offsets:
                    i = table.get(tuple(b + o for b, o in zip(base, off)))
                    if i is None:
                        continue
                    if (np.all(x >= self.out_lo[i]) and np.all(x <= self.out_hi[i])
                            and not (np.all(x >= self.in_lo[i])
                                     and np.all(x <= self.in_hi[i]))):
                        total += self.dens[i]
            out[r] = total
        return out


def band_pair_mc(field, W, region, params, sampler, budget, seed):
    """Unbiased pair-sampling seminorm estimate with defensive mixtures:
    each endpoint is drawn half uniformly, half from the transition-band
    distribution; the second endpoint's radial branch matches the kernel
    singularity.  Densities are exact, so the estimate is unbiased."""
    from .seminorm import RMIN_FACTOR, _top_partials, _wrap, sphere_area

    n, p = params.n, params.p
    ks = indices_of_order(n, params.s_floor)
    frac = params.s_frac
    expo = n + frac * p
    beta = p - frac * p
    vol = region.volume
    omega = sphere_area(n)
    R = region.diameter
    rmin = RMIN_FACTOR * R
    # Radial proposal: mixture of truncated power laws at geometric scales.
    # A single power law on [rmin, R] puts almost no mass at separations far
    # below R, which is where the kernel concentrates the integral; mixing
    # scales R, R/4, R/16, ... keeps every dyadic range of r well sampled.
    min_side = min(float(c.side) for c in W.cubes())
    n_scales = 1
    while R / 4.0 ** (n_scales - 1) > min_side and n_scales < 8:
        n_scales += 1
    scales = R / 4.0 ** np.arange(n_scales)
    scale_norms = beta / (scales ** beta - rmin ** beta)

    def radial_density(r_in):
        mass = (r_in[:, None] <= scales[None, :]) * scale_norms[None, :]
        return (mass.sum(axis=1) / n_scales * r_in ** (beta - 1.0)
                / (omega * r_in ** (n - 1.0)))

    s1 = s2 = 0.0
    count = 0
    for _, m, g in blocks(seed, budget):
        ucx = g.random(m)
        Ux = g.random((m, n + 1))
        ucy = g.random(m)
        G = g.standard_normal((m, n))
        Us = g.random(m)
        Ur = g.random(m)
        Uy = g.random((m, n + 1))
        X = np.where(ucx[:, None] < 0.5,
                     region.map_uniform(Ux), sampler.sample(Ux))
        norms = np.linalg.norm(G, axis=1)
        norms[norms == 0] = 1.0
        Rk = scales[np.minimum((Us * n_scales).astype(int), n_scales - 1)]
        r_draw = (rmin ** beta + Ur * (Rk ** beta - rmin ** beta)) ** (1.0 / beta)
        Y_rad = X + r_draw[:, None] * (G / norms[:, None])
        Y = np.where(ucy[:, None] < 0.5, Y_rad, sampler.sample(Uy))
        inside = region.contains(X) & region.contains(Y)
        r = np.linalg.norm(X - Y, axis=1)
        inside &= r > 0
        vals = np.zeros(m)
        if inside.any():
            qx = 0.5 / vol + 0.5 * sampler.pdf(X[inside])
            r_in = r[inside]
            q_rad = np.where((r_in >= rmin) & (r_in <= R),
                             radial_density(r_in), 0.0)
            qy = 0.5 * q_rad + 0.5 * sampler.pdf(Y[inside])
            diff = np.abs(_top_partials(field, ks, X[inside])
                          - _top_partials(field, ks, Y[inside]))
            num = diff.sum(axis=1) ** p
            ok = qx * qy > 0
            contrib = np.where(ok, num / r_in ** expo
                               / np.where(ok, qx * qy, 1.0), 0.0)
            vals[inside] = contrib
        s1 += float(vals.sum())
        s2 += float((vals ** 2).sum())
        count += m
    mean = s1 / count
    var = max(s2 / count - mean * mean, 0.0)
    err_p = 2.0 * math.sqrt(var / count)
    return _wrap(mean, err_p, "band-mc", seed, region, params,
                 {"samples": count, "diagonal_cutoff": rmin})


def run_bound_experiment(sc):
    """rho = ||Tf|| / ||F|| over the cube-covered region, with matched
    estimator settings for numerator and denominator."""
    W, F, jets, Tf = build_scenario(sc)
    region = covered_region(W)
    method = sc.budget("method", "importance-mc")
    budget = sc.budget("seminorm", 2000)
    if method == "band-mc":
        sampler = BandSampler(W, jets, sc.params, field=Tf)
        est_t = band_pair_mc(Tf, W, region, sc.params, sampler, budget,
                             derive_seed(sc.seed, "bound", "Tf"))
        est_f = band_pair_mc(F, W, region, sc.params, sampler, budget,
                             derive_seed(sc.seed, "bound", "F"))
    else:
        est_t = gagliardo(Tf, region, sc.params, method=method, budget=budget,
                          seed=derive_seed(sc.seed, "bound", "Tf"))
        est_f = gagliardo(F, region, sc.params, method=method, budget=budget,
                          seed=derive_seed(sc.seed, "bound", "F"))
    tiny = 1e-12
    if est_t.value < tiny and est_f.value < tiny:
        rho = None
        note = "degenerate: both vanish"
    elif est_f.value < tiny:
        rho = math.inf
        note = "denominator vanishes"
    else:
        rho = est_t.value / est_f.value
        note = ""
    return {"scenario": sc.to_json(),
            "Tf_seminorm": est_t.to_json(), "F_seminorm": est_f.to_json(),
            "rho": rho, "note": note,
            "cube_count": W.cube_count,
            "fringe_count": int(len(W.fringe)),
            "fallback_fraction": (Tf.fallback_count / max(Tf.eval_count, 1))}


def _classify(W, x):
    """"cube" with the located cube, or "fringe" for points unresolved at
    the enumeration depth (the stand-in for the near-site region)."""
    try:
        located = W.locate(tuple(x))
    except DepthCapError:
        return "fringe", None
    except ValueError:
        return "fringe", None       # exactly on a site: measure zero
    c = located[0]
    if c.level > W.max_level:
        return "fringe", None
    return "cube", c


def _tf_tops(Tf, x, ks):
    vals = Tf.eval_all(tuple(x), Tf.params.s_floor)
    return np.array([vals[k] for k in ks])


def run_term_split(sc):
    """Four-way split of the double integral for Tf by pair class:
    I both points near the sites, II non-touching cube pairs, III touching
    cube pairs, IV mixed.  Checks I <= ||F||^p and that the four terms add
    up to an independently estimated whole."""
    from .geometry import cubes_touch

    W, F, jets, Tf = build_scenario(sc)
    region = omega_region(sc)
    params = sc.params
    n, p = params.n, params.p
    ks = indices_of_order(n, params.s_floor)
    expo = n + params.s_frac * p
    vol = region.volume
    budget = sc.budget("split", 1500)
    sums = {"I": 0.0, "II": 0.0, "III": 0.0, "IV": 0.0}
    sqs = dict(sums)
    count = 0
    for _, m, g in blocks(derive_seed(sc.seed, "split"), budget):
        U = g.random((m, 2 * (n + 1)))
        X = region.map_uniform(U[:, :n + 1])
        Y = region.map_uniform(U[:, n + 1:])
        for x, y in zip(X, Y):
            d = float(np.linalg.norm(x - y))
            count += 1
            if d == 0.0:
                continue
            cx, qx = _classify(W, x)
            cy, qy = _classify(W, y)
            if cx == "fringe" and cy == "fringe":
                term = "I"
                tx = np.array([F.partial_at(k, tuple(x)) for k in ks])
                ty = np.array([F.partial_at(k, tuple(y)) for k in ks])
            else:
                tx = _tf_tops(Tf, x, ks)
                ty = _tf_tops(Tf, y, ks)
                if cx == "cube" and cy == "cube":
                    term = "III" if (qx == qy or cubes_touch(qx, qy)) else "II"
                else:
                    term = "IV"
            val = float(np.abs(tx - ty).sum()) ** p / d ** expo
            sums[term] += val
            sqs[term] += val * val
    terms = {}
    for key in sums:
        mean = sums[key] / count
        var = max(sqs[key] / count - mean * mean, 0.0)
        terms[key] = {"value": vol * vol * mean,
                      "error": 2.0 * vol * vol * math.sqrt(var / count)}
    whole = gagliardo(Tf, region, params, method="plain-mc",
                      budget=sc.budget("whole", budget),
                      seed=derive_seed(sc.seed, "split-whole"))
    f_norm = gagliardo(F, region, params, method="plain-mc",
                       budget=sc.budget("whole", budget),
                       seed=derive_seed(sc.seed, "split-fnorm"))
    total = sum(t["value"] for t in terms.values())
    total_err = sum(t["error"] for t in terms.values())
    whole_p = whole.extra["value_p"]
    whole_err = whole.extra["error_p"]
    f_p = f_norm.extra["value_p"]
    f_err = f_norm.extra["error_p"]
    consistent = abs(total - whole_p) <= total_err + whole_err + 1e-12
    i_bounded = terms["I"]["value"] <= f_p + terms["I"]["error"] + f_err + 1e-12
    return {"scenario": sc.to_json(), "terms": terms,
            "whole_p": whole_p, "whole_error": whole_err,
            "F_norm_p": f_p, "F_norm_error": f_err,
            "sum_consistent": bool(consistent),
            "term_I_bounded": bool(i_bounded),
            "samples": count}


def term_I_direct(sc, budget=None):
    """Term I recomputed as a plain seminorm of F over the fringe region."""
    W, F, jets, Tf = build_scenario(sc)
    fringe = list(W.fringe_cubes())
    if not fringe:
        return {"value_p": 0.0, "error_p": 0.0, "boxes": 0}
    region = Region.from_cubes(fringe, label="fringe")
    est = gagliardo(F, region, sc.params, method="plain-mc",
                    budget=budget or sc.budget("split", 1500),
                    seed=derive_seed(sc.seed, "term-I-direct"))
    return {"value_p": est.extra["value_p"], "error_p": est.extra["error_p"],
            "boxes": len(fringe)}


# -- aggregated verification ------------------------------------------------

def _record(checks, name, passed, **details):
    checks.append({"name": name, "passed": bool(passed), "details": details})


def _sample_domain_points(W, count, seed):
    g = block_generator(derive_seed(seed, "verify-points"), 0)
    half = float(2 ** W.domain_exp)
    pts = []
    while len(pts) < count:
        x = tuple(g.uniform(-half, half) for _ in range(W.n))
        try:
            W.locate(x)
        except (ValueError, DepthCapError):
            continue
        pts.append(x)
    return pts


def verify_all(sc, path_corpus=40, pou_points=1000):
    """Run every module's verification battery on one scenario."""
    checks = []
    W, F, jets, Tf = build_scenario(sc)
    params = sc.params
    n = params.n

    rep = W.verify_structure()
    for name, entry in rep.checks.items():
        _record(checks, f"decomposition/{name}", entry["passed"],
                **{k: v for k, v in entry.items() if k != "passed"})

    # partition of unity
    order = params.s_floor + 1
    pts = _sample_domain_points(W, pou_points, derive_seed(sc.seed, "pou"))
    worst_sum = 0.0
    worst_deriv = 0.0
    for i, x in enumerate(pts):
        deep = i < 100
        thetas = theta_all(W, x, order if deep else 0)
        total = sum(tv.value for tv in thetas.values())
        worst_sum = max(worst_sum, abs(total - 1.0))
        if deep:
            for k in multi_indices(n, order):
                if mi_order(k) == 0:
                    continue
                dsum = sum(tv.derivative(k) for tv in thetas.values())
                scale = max(abs(tv.derivative(k))
                            for tv in thetas.values()) or 1.0
                worst_deriv = max(worst_deriv, abs(dsum) / scale)
    _record(checks, "partition/sum-to-one", worst_sum <= 1e-12,
            worst=worst_sum, points=len(pts))
    _record(checks, "partition/derivative-sums-vanish", worst_deriv <= 1e-9,
            worst_relative=worst_deriv)
    bounds = verify_derivative_bounds(W, order)
    _record(checks, "partition/scale-normalized-bounds", bounds["passed"],
            ratios=bounds["ratios"])

    # extension
    g = block_generator(derive_seed(sc.seed, "poly"), 0)
    coeffs = {k: float(g.uniform(-1, 1))
              for k in multi_indices(n, params.s_floor)}
    poly = polynomial(n, coeffs)
    pjets = jets_from_function(poly, W.sites, params)
    pf = ExtensionField(W, pjets)
    scale = 1.0 + max(abs(poly.value_at(x)) for x in pts[:200])
    worst = max(abs(pf.eval(x) - poly.value_at(x)) for x in pts[:200])
    _record(checks, "extension/polynomial-reproduction",
            worst <= 1e-10 * scale, worst=worst, scale=scale)
    site_ok = all(
        abs(Tf.eval(s, k) - jets.jet(s).coeffs[k]) == 0.0
        for s in W.sites for k in multi_indices(n, params.s_floor))
    _record(checks, "extension/site-exactness", site_ok)
    radii = [2.0 ** (-j) * 0.5 for j in range(2, 7)]
    agree = jet_agreement_check(Tf, W.sites[0], (0,) * n, radii,
                                reference=F)
    ok = (agree["fitted_order"] == math.inf
          or agree["fitted_order"] >= params.s_floor + 0.5)
    _record(checks, "extension/jet-agreement", ok,
            fitted_order=agree["fitted_order"])

    # paths
    cubes = list(W.cubes())
    g = block_generator(derive_seed(sc.seed, "path-cubes"), 0)
    idx = g.choice(len(cubes), size=min(path_corpus, len(cubes)),
                   replace=False)
    corpus = []
    flags = {"adjacency": True, "monotone": True, "coverage": True,
             "claim2": True, "radius": True}
    for i in idx:
        P = cubes[int(i)]
        x = sample_A_P(W, P, derive_seed(sc.seed, "A_P", int(i)))
        if x == W.anchor(P) or not W.in_domain(x):
            continue
        flags["radius"] &= a_p_radius_check(W, P, x)
        try:
            path = build_path(W, P, x)
        except ValueError:
            continue
        if len(path) == 0:
            continue
        corpus.append(path)
        flags["adjacency"] &= path.adjacency_check()
        flags["monotone"] &= path.monotone_check()
        flags["coverage"] &= path.coverage_check(100)
        flags["claim2"] &= all(path.claim2_check())
    for key, val in flags.items():
        _record(checks, f"paths/{key}", val, corpus=len(corpus))
    if corpus:
        decay = fit_decay(corpus)
        _record(checks, "paths/decay", decay.a < 1.0, **decay.to_json())
        _record(checks, "paths/greedy-optimality",
                all(greedy_optimality_check(W, p) for p in corpus[:5]))

    # singular integral bounds
    Q = cubes[len(cubes) // 2]
    nbrs = W.neighbors(Q)
    if nbrs:
        t7 = lemma7_touching(W, Q, nbrs[0], params,
                             budget=sc.budget("lemma7", 2048))
        _record(checks, "seminorm/lemma7-touching", t7["passed"],
                bound_ratio=t7["bound_ratio"], scale_ratios=t7["scale_ratios"])
    far = lemma7_far(W, Q, params, budget=sc.budget("lemma7", 2048))
    _record(checks, "seminorm/lemma7-far", far["passed"],
            ratio=far["ratio"], bound_ratio=far["bound_ratio"],
            scale_ratios=far["scale_ratios"])

    # chain inequality
    if params.s_frac * params.p > n and corpus:
        P = corpus[0].cubes[0]
        x = corpus[0].origin
        l12 = lemma12_check(W, P, x, F,
                            budget=sc.budget("lemma12", 300))
        _record(checks, "paths/lemma12-finite",
                math.isfinite(l12["ratio"]), ratio=l12["ratio"],
                tail_flag=l12["tail_flag"])

    passed = all(c["passed"] for c in checks)
    return {"scenario": sc.to_json(), "passed": passed, "checks": checks}


def summarize(report):
    lines = [f"scenario: {report['scenario']['name']}",
             f"overall: {'PASS' if report['passed'] else 'FAIL'}"]
    for c in report["checks"]:
        lines.append(f"  [{'ok' if c['passed'] else 'FAIL'}] {c['name']}")
    return "\n".join(lines)
