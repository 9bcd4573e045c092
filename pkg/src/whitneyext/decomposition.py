"""Whitney decomposition of the complement of a finite site set.

The decomposition is built by recursive subdivision from the 2^n orthant
root cubes of the computational domain: a cube is accepted exactly when
dist(Q, D) >= 10 delta_Q (tested as 100 n side^2 <= dist^2 in integers),
otherwise it is split into its 2^n dyadic children.  Acceptance of a cube
implies its tree parent failed, which yields dist(Q, D) < 22 delta_Q.

The per-level cube sets are stored as integer numpy arrays so that large
3-D decompositions stay tractable; all predicates are exact.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .geometry import (Box, DyadicCube, pow2, to_frac_point, dyadic_exponent,
                       dist_sq_box_to_points, cubes_touch)


class DepthCapError(RuntimeError):
    """Raised when locate cannot resolve a point above the hard depth cap."""


def _scaled_sites(sites, q):
    """Sites as an (S, n) int array of numerators at denominator 2^q."""
    out = []
    for pt in sites:
        row = []
        for c in pt:
            f = Fraction(c) * (2 ** q)
            assert f.denominator == 1
            row.append(int(f))
        out.append(row)
    return np.asarray(out, dtype=np.int64)


def _child_offsets(n):
    return np.array(list(product((0, 1), repeat=n)), dtype=np.int64)


def _min_dist_sq(coords, level, sites_scaled, q):
    """Exact squared distance (in units 2^{-2r}, r = max(level, q)) from each
    cube at `level` to the nearest site.  Returns (dist2, side_scaled)."""
    r = max(level, q)
    side = np.int64(1) << (r - level)
    lo = coords * side
    sv = sites_scaled * (np.int64(1) << (r - q))
    best = None
    for srow in sv:
        gap_lo = srow[None, :] - (lo + side)          # site right of cube
        gap_hi = lo - srow[None, :]                   # site left of cube
        g = np.maximum(np.maximum(gap_lo, gap_hi), 0)
        d2 = np.sum(g.astype(np.int64) ** 2, axis=1)
        best = d2 if best is None else np.minimum(best, d2)
    return best, side


@dataclass
class StructureReport:
    checks: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def record(self, name, passed, **details):
        self.checks[name] = {"passed": bool(passed), **details}

    @property
    def all_passed(self):
        return all(c["passed"] for c in self.checks.values())

    def to_json(self):
        return {"checks": self.checks, "stats": self.stats,
                "all_passed": self.all_passed}


class WhitneyDecomposition:
    """The enumerated cube family together with lazy exact queries."""

    def __init__(self, params, sites, domain_exp, max_level, levels, fringe):
        self.params = params
        self.sites = tuple(to_frac_point(s) for s in sites)
        self.domain_exp = domain_exp
        self.max_level = max_level
        self.levels = levels          # level -> (N, n) int64 coords
        self.fringe = fringe          # (N, n) int64 coords at max_level
        self._q = dyadic_exponent(self.sites)
        self._sites_scaled = _scaled_sites(self.sites, self._q)
        self._member = {}             # level -> set of coord tuples (lazy)
        self._anchors = {}

    # -- basic info --------------------------------------------------------

    @property
    def n(self):
        return self.params.n

    @property
    def cube_count(self):
        return sum(len(v) for v in self.levels.values())

    def domain_box(self):
        r = pow2(self.domain_exp)
        return Box((-r,) * self.n, (r,) * self.n)

    def cubes(self):
        """Iterate all enumerated cubes (coarse to fine)."""
        for m in sorted(self.levels):
            for row in self.levels[m]:
                yield DyadicCube(m, tuple(int(c) for c in row))

    def fringe_cubes(self):
        for row in self.fringe:
            yield DyadicCube(self.max_level, tuple(int(c) for c in row))

    # -- exact predicates --------------------------------------------------

    def in_domain(self, x):
        return self.domain_box().contains(x)

    def cube_in_domain(self, cube):
        if cube.level < -self.domain_exp:
            return False
        half = 1 << (self.domain_exp + cube.level)
        return all(-half <= a <= half - 1 for a in cube.coords)

    def _dist_sq(self, cube):
        return dist_sq_box_to_points(cube.box(), self.sites)

    def _passes_10(self, cube):
        # dist(Q, D) >= 10 delta_Q, squared form
        return self._dist_sq(cube) >= 100 * self.n * cube.side ** 2

    def is_accepted(self, cube):
        """Exact membership in the (idealized, depth-unbounded) decomposition.

        Consistent with the enumeration for levels <= max_level.
        """
        if not self.cube_in_domain(cube):
            return False
        if not self._passes_10(cube):
            return False
        if cube.level == -self.domain_exp:
            return True
        return not self._passes_10(cube.parent())

    def enumerated(self, cube):
        """Membership among the enumerated cubes (set lookup)."""
        m = cube.level
        if m not in self.levels:
            return False
        if m not in self._member:
            self._member[m] = set(map(tuple, self.levels[m].tolist()))
        return cube.coords in self._member[m]

    # -- queries -----------------------------------------------------------

    def locate(self, x, depth_margin=40):
        """All accepted cubes whose closed box contains x (1 to 2^n cubes).

        Walks the dyadic ancestor chains of x from coarse to fine, stopping
        each chain at its first accepted cube; independent of max_level.
        """
        x = to_frac_point(x)
        if not self.in_domain(x):
            raise ValueError("outside computational domain")
        if x in self.sites:
            raise ValueError("on the closed set")
        cap = self.max_level + depth_margin
        # per-axis root coords containing x
        axis0 = []
        for c in x:
            scaled = c * pow2(-self.domain_exp)
            opts = []
            if -1 <= scaled <= 0:
                opts.append(-1)
            if 0 <= scaled <= 1:
                opts.append(0)
            axis0.append(opts)
        frontier = {tuple(cs) for cs in product(*axis0)}
        level = -self.domain_exp
        found = set()
        while frontier:
            if level > cap:
                raise DepthCapError(
                    f"unresolvable at depth cap {cap}: point {tuple(map(float, x))} "
                    f"has {len(frontier)} open chains")
            nxt = set()
            for coords in frontier:
                cube = DyadicCube(level, coords)
                if self._passes_10(cube):
                    found.add(cube)
                    continue
                # descend through children containing x
                axis = []
                for a, c in zip(coords, x):
                    scaled = c * pow2(level + 1)
                    lo = int(math.floor(scaled))
                    opts = [b for b in ((lo - 1, lo) if scaled == lo else (lo,))
                            if 2 * a <= b <= 2 * a + 1]
                    axis.append(opts)
                for cs in product(*axis):
                    nxt.add(cs)
            frontier = nxt
            level += 1
        return sorted(found, key=lambda c: (c.level, c.coords))

    def neighbors(self, cube):
        """All accepted cubes touching `cube` (levels within +-1 suffice)."""
        m, a = cube.level, cube.coords
        out = []
        cands = set()
        # same level
        for off in product((-1, 0, 1), repeat=self.n):
            if any(off):
                cands.add((m, tuple(ai + o for ai, o in zip(a, off))))
        # finer level
        for cs in product(*[range(2 * ai - 1, 2 * ai + 3) for ai in a]):
            cands.add((m + 1, cs))
        # coarser level
        if m - 1 >= -self.domain_exp:
            axis = []
            for ai in a:
                opts = [b for b in (((ai) >> 1) - 1, ai >> 1, (ai >> 1) + 1)
                        if 2 * b <= ai + 1 and 2 * (b + 1) >= ai]
                axis.append(opts)
            for cs in product(*axis):
                cands.add((m - 1, cs))
        for lvl, cs in cands:
            cand = DyadicCube(lvl, cs)
            if cand == cube:
                continue
            if cubes_touch(cube, cand) and self.is_accepted(cand):
                out.append(cand)
        return sorted(out, key=lambda c: (c.level, c.coords))

    def anchor(self, cube):
        """Nearest site to the cube; ties broken by lexicographically
        smallest site coordinates."""
        if cube not in self._anchors:
            box = cube.box()
            best = None
            for site in sorted(self.sites):
                d2 = box.dist_sq_to_point(site)
                if best is None or d2 < best[0]:
                    best = (d2, site)
            self._anchors[cube] = best[1]
        return self._anchors[cube]

    # -- verification ------------------------------------------------------

    def verify_structure(self, checks=None, pair_check_limit=6000,
                         sample_points=512, seed=0):
        """Exact structural checks; failures are report entries."""
        all_checks = ("bounds", "disjoint", "tiling", "coverage",
                      "level_ratio", "neighbor_count", "overlap", "far_cubes")
        checks = tuple(checks) if checks else all_checks
        rep = StructureReport()
        rep.stats["cube_count"] = self.cube_count
        rep.stats["fringe_count"] = int(len(self.fringe))
        rep.stats["levels"] = sorted(int(m) for m in self.levels)

        if "bounds" in checks:
            self._check_bounds(rep)
        if "disjoint" in checks:
            self._check_disjoint(rep)
        if "tiling" in checks:
            self._check_tiling(rep)
        if "coverage" in checks:
            self._check_coverage(rep)
        if "level_ratio" in checks:
            self._check_level_ratio(rep)
        if "neighbor_count" in checks:
            self._check_neighbor_count(rep, pair_check_limit)
        if "overlap" in checks:
            self._check_overlap(rep, sample_points, seed)
        if "far_cubes" in checks:
            self._check_far_cubes(rep, pair_check_limit)
        return rep

    def _check_bounds(self, rep):
        # 100 n side^2 <= dist^2 <= 484 n side^2 for every enumerated cube
        bad = 0
        lo_ratio, hi_ratio = math.inf, 0.0
        for m, coords in self.levels.items():
            d2, side = _min_dist_sq(coords, m, self._sites_scaled, self._q)
            s2 = int(side) ** 2
            ok = (d2 >= 100 * self.n * s2) & (d2 <= 484 * self.n * s2)
            bad += int(np.count_nonzero(~ok))
            if len(d2):
                ratios = d2 / (self.n * s2)
                lo_ratio = min(lo_ratio, float(ratios.min()))
                hi_ratio = max(hi_ratio, float(ratios.max()))
        rep.record("bounds", bad == 0, violations=bad,
                   min_dist2_over_ndelta2=lo_ratio,
                   max_dist2_over_ndelta2=hi_ratio)

    def _pack(self, coords, level):
        """Pack per-level coords into single int64 keys."""
        bits = self.domain_exp + level + 1
        if bits * self.n > 62:
            raise OverflowError("coordinate range too wide to pack")
        off = np.int64(1 << (bits - 1))
        key = np.zeros(len(coords), dtype=np.int64)
        for i in range(self.n):
            key = (key << bits) | (coords[:, i] + off)
        return key

    def _check_disjoint(self, rep):
        dup = 0
        overlap = 0
        lvls = sorted(self.levels)
        packed = {m: np.sort(self._pack(self.levels[m], m)) for m in lvls}
        for m in lvls:
            dup += len(self.levels[m]) - len(np.unique(packed[m]))
        for mi, m in enumerate(lvls):
            for mc in lvls[:mi]:
                anc = self.levels[m] >> (m - mc)
                keys = self._pack(anc, mc)
                idx = np.searchsorted(packed[mc], keys)
                idx = np.clip(idx, 0, len(packed[mc]) - 1)
                overlap += int(np.count_nonzero(packed[mc][idx] == keys))
        rep.record("disjoint", dup == 0 and overlap == 0,
                   duplicate_cubes=dup, nested_cubes=overlap)

    def _check_tiling(self, rep):
        total = Fraction(0)
        for m, coords in self.levels.items():
            total += len(coords) * pow2(-m) ** self.n
        total += len(self.fringe) * pow2(-self.max_level) ** self.n
        want = (2 * pow2(self.domain_exp)) ** self.n
        rep.record("tiling", total == want,
                   tiled_measure=str(total), domain_measure=str(want))

    def _check_coverage(self, rep):
        # every fringe cube fails 10 delta <= dist, hence every point at
        # distance >= 20 sqrt(n) 2^-max_level from D lies in an accepted cube
        if len(self.fringe) == 0:
            rep.record("coverage", True, fringe_passing=0)
            return
        d2, side = _min_dist_sq(self.fringe, self.max_level,
                                self._sites_scaled, self._q)
        bad = int(np.count_nonzero(d2 >= 100 * self.n * int(side) ** 2))
        rep.record("coverage", bad == 0, fringe_passing=bad)

    def _check_level_ratio(self, rep):
        # no two accepted touching cubes may differ by >= 2 levels
        lvls = sorted(self.levels)
        packed = {m: np.sort(self._pack(self.levels[m], m)) for m in lvls}
        bad = 0
        for m in lvls:
            coords = self.levels[m]
            for mc in lvls:
                if m - mc < 2 or not len(packed[mc]):
                    continue
                d = m - mc
                lowbits = (1 << d) - 1
                # A fine cube touches a coarse cube offset by o only when it
                # is flush against the corresponding face of its level-mc
                # ancestor, which pins its coordinates mod 2^d (exactly).
                # The nested case o = 0 is the disjointness check's job.
                for off in product((-1, 0, 1), repeat=self.n):
                    if not any(off):
                        continue
                    mask = np.ones(len(coords), dtype=bool)
                    for i, o in enumerate(off):
                        if o == 1:
                            mask &= (coords[:, i] & lowbits) == lowbits
                        elif o == -1:
                            mask &= (coords[:, i] & lowbits) == 0
                    if not mask.any():
                        continue
                    cand = (coords[mask] >> d) + np.asarray(off, dtype=np.int64)
                    lim = 1 << (self.domain_exp + mc)
                    inside = np.all((cand >= -lim) & (cand < lim), axis=1)
                    cand = cand[inside]
                    if not len(cand):
                        continue
                    keys = self._pack(cand, mc)
                    idx = np.clip(np.searchsorted(packed[mc], keys),
                                  0, len(packed[mc]) - 1)
                    bad += int(np.count_nonzero(packed[mc][idx] == keys))
        rep.record("level_ratio", bad == 0, touching_pairs_level_diff_ge_2=bad)

    def _check_neighbor_count(self, rep, limit):
        cubes = list(self.cubes()) if self.cube_count <= limit else None
        if cubes is None:
            rng = np.random.default_rng(0)
            cubes = []
            for m, coords in self.levels.items():
                take = min(len(coords), 40)
                for i in rng.choice(len(coords), size=take, replace=False):
                    cubes.append(DyadicCube(m, tuple(int(c) for c in coords[i])))
        counts = [len(self.neighbors(c)) for c in cubes]
        ok = True
        ratio_ok = True
        for c in cubes:
            for nb in self.neighbors(c):
                if abs(nb.level - c.level) > 1:
                    ratio_ok = False
        rep.record("neighbor_count", ok and ratio_ok,
                   max_neighbors=max(counts) if counts else 0,
                   sampled=len(cubes), diameter_ratio_ok=ratio_ok)

    def _check_overlap(self, rep, sample_points, seed):
        rng = np.random.default_rng(seed)
        half = float(pow2(self.domain_exp))
        worst = 0
        tried = 0
        for _ in range(sample_points):
            x = tuple(rng.uniform(-half, half) for _ in range(self.n))
            try:
                located = self.locate(x)
            except (ValueError, DepthCapError):
                continue
            tried += 1
            cands = set(located)
            for c in located:
                cands.update(self.neighbors(c))
            xf = to_frac_point(x)
            count = sum(1 for c in cands
                        if c.box().dilate(Fraction(11, 10)).contains(xf))
            worst = max(worst, count)
        rep.record("overlap", worst <= 6 ** self.n,
                   max_multiplicity=worst, sampled=tried)

    def _check_far_cubes(self, rep, limit):
        # non-touching cubes must miss the open double cube (2Q)^circ
        if self.cube_count > limit:
            rep.record("far_cubes", True, skipped=True,
                       reason=f"cube count {self.cube_count} > {limit}")
            return
        scale = self.max_level + 1
        los, his, sides = [], [], []
        for m in sorted(self.levels):
            f = np.int64(1 << (scale - m))
            c = self.levels[m]
            los.append(c * f)
            his.append((c + 1) * f)
            sides.append(np.full(len(c), f, dtype=np.int64))
        lo = np.concatenate(los)
        hi = np.concatenate(his)
        side = np.concatenate(sides)
        touch = np.ones((len(lo), len(lo)), dtype=bool)
        inter2 = np.ones((len(lo), len(lo)), dtype=bool)
        for i in range(self.n):
            l, h = lo[:, i], hi[:, i]
            touch &= (l[:, None] <= h[None, :]) & (l[None, :] <= h[:, None])
            l2 = l - side // 2
            h2 = h + side // 2
            inter2 &= (l2[:, None] < h[None, :]) & (l[None, :] < h2[:, None])
        np.fill_diagonal(touch, True)
        bad = int(np.count_nonzero(inter2 & ~touch))
        rep.record("far_cubes", bad == 0, violations=bad)


def build(params, sites, domain_exp, max_depth):
    """Build the Whitney decomposition of the complement of `sites`.

    domain_exp = L gives the domain [-2^L, 2^L]^n; max_depth = L_max is the
    finest enumerated level.  Unaccepted leaves at L_max are recorded as the
    unresolved fringe, never dropped.
    """
    n = params.n
    sites = [to_frac_point(s) for s in sites]
    if not sites:
        raise ValueError("empty site set")
    if len(set(sites)) != len(sites):
        raise ValueError("duplicate sites")
    if max_depth <= -domain_exp:
        raise ValueError("max_depth must exceed -domain_exp")
    half = pow2(domain_exp)
    margin = half / 4
    for s in sites:
        for c in s:
            if not (-half < c < half):
                raise ValueError("domain too small: site outside interior")
            if min(c + half, half - c) < margin:
                raise ValueError("domain too small: margin violated")
    q = dyadic_exponent(sites)
    r_max = max(max_depth, q)
    if domain_exp + r_max > 30:
        raise ValueError("coordinate range too wide for exact int64 arithmetic")

    sites_scaled = _scaled_sites(sites, q)
    offs = _child_offsets(n)
    pending = np.array(list(product((-1, 0), repeat=n)), dtype=np.int64)
    levels = {}
    fringe = np.empty((0, n), dtype=np.int64)
    for m in range(-domain_exp, max_depth + 1):
        if len(pending) == 0:
            break
        d2, side = _min_dist_sq(pending, m, sites_scaled, q)
        accept = d2 >= 100 * n * int(side) ** 2
        if accept.any():
            levels[m] = pending[accept]
        rest = pending[~accept]
        if m == max_depth:
            fringe = rest
            break
        pending = (rest[:, None, :] * 2 + offs[None, :, :]).reshape(-1, n)
    return WhitneyDecomposition(params, sites, domain_exp, max_depth,
                                levels, fringe)


def brute_force_scan(params, sites, domain_exp, max_depth):
    """Independent oracle: test every dyadic cube in the domain for
    "dist >= 10 delta and the parent fails".  Exponential in n and depth;
    1-D (or tiny 2-D) use only.
    """
    n = params.n
    sites = [to_frac_point(s) for s in sites]
    found = []
    for m in range(-domain_exp, max_depth + 1):
        span = 1 << (domain_exp + m)
        for coords in product(range(-span, span), repeat=n):
            cube = DyadicCube(m, coords)
            d2 = dist_sq_box_to_points(cube.box(), sites)
            if d2 < 100 * n * cube.side ** 2:
                continue
            if m > -domain_exp:
                par = cube.parent()
                pd2 = dist_sq_box_to_points(par.box(), sites)
                if pd2 >= 100 * n * par.side ** 2:
                    continue
            found.append(cube)
    return found
