"""Cube chains from a point toward its anchor site.

A path is a greedy covering of the segment [x, x_P) by accepted cubes:
at each step the cube whose exit parameter along the segment is farthest
is appended.  Diameters along a path decay geometrically in observed
blocks; fit_decay extracts the block length C_n and the decay base
a = 2^(-1/C_n) from a corpus and finds the smallest power-of-two
prefactor A making delta_j <= A a^(j-i) delta_i hold throughout.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import to_frac_point, float_point, pow2
from .jets import jet_eval, jet_derivative
from .multiindex import multi_indices, indices_of_order, mi_order
from .rng import block_generator, derive_seed


@dataclass(frozen=True)
class CubePath:
    """Greedy cube covering of the segment from origin toward target."""

    origin: tuple          # exact rational point, in the first cube
    target: tuple          # anchor site x_P (not reached; it lies in D)
    cubes: tuple           # DyadicCube sequence P_0, P_1, ...
    entries: tuple         # entry parameters a_Q in [0,1), strictly increasing
    exits: tuple           # exit parameters b_Q
    truncation: str        # "diameter floor" | "max length" | "depth cap"

    def __len__(self):
        return len(self.cubes)

    @property
    def levels(self):
        return tuple(c.level for c in self.cubes)

    @property
    def diameters(self):
        return tuple(c.diameter() for c in self.cubes)

    def point_at(self, t):
        """Exact point on the segment, s(t) = origin + t (target - origin)."""
        t = Fraction(t)
        return tuple(o + t * (p - o) for o, p in zip(self.origin, self.target))

    def covered_to(self):
        """Largest parameter such that [origin, s(b)] lies in the cube union."""
        return self.exits[-1]

    def adjacency_check(self):
        """Consecutive cubes share at least a boundary point."""
        from .geometry import cubes_touch
        return all(cubes_touch(a, b)
                   for a, b in zip(self.cubes, self.cubes[1:]))

    def monotone_check(self):
        """Entry points approach the target strictly (entries increase)."""
        return all(a < b for a, b in zip(self.entries, self.entries[1:]))

    def coverage_check(self, samples=1000):
        """Exact membership of sampled covered-prefix points in the union."""
        b = self.covered_to()
        boxes = [c.box() for c in self.cubes]
        for i in range(samples):
            t = b * Fraction(i, samples)
            pt = self.point_at(t)
            if not any(box.contains(pt) for box in boxes):
                return False
        return True

    def claim2_check(self):
        """Exact squared-form check 10 delta_Q <= |x' - x_P| <= 131 delta_Q
        at every cube's entry point x'.  Returns per-cube booleans."""
        out = []
        for cube, a in zip(self.cubes, self.entries):
            xp = self.point_at(a)
            d2 = sum((u - v) ** 2 for u, v in zip(xp, self.target))
            side2 = pow2(-2 * cube.level)
            n = len(self.target)
            out.append(100 * n * side2 <= d2 <= 131 * 131 * n * side2)
        return out

    def to_json(self):
        return {"origin": [str(c) for c in self.origin],
                "target": [str(c) for c in self.target],
                "cubes": [c.key() for c in self.cubes],
                "entries": [str(a) for a in self.entries],
                "exits": [str(b) for b in self.exits],
                "truncation": self.truncation}


def _segment_interval(x, d, box):
    """Exact parameter interval {t : x + t d in box}, or None."""
    lo_t, hi_t = Fraction(-10 ** 9), Fraction(10 ** 9)
    for xi, di, l, h in zip(x, d, box.lo, box.hi):
        if di == 0:
            if not (l <= xi <= h):
                return None
        else:
            t0, t1 = (l - xi) / di, (h - xi) / di
            if t0 > t1:
                t0, t1 = t1, t0
            lo_t = max(lo_t, t0)
            hi_t = min(hi_t, t1)
    if lo_t > hi_t:
        return None
    return lo_t, hi_t


def build_path(W, P, x, max_cubes=None):
    """Greedy farthest-exit covering of the segment from x to the anchor of P.

    Among the cubes containing the current segment point, the one reaching
    farthest along the segment is chosen; ties prefer the coarser level,
    then lexicographically smallest coordinates.  The chain stops at the
    diameter floor 2^-max_level * sqrt(n), the length cap, or a locate
    depth-cap failure.
    """
    from .decomposition import DepthCapError

    x = to_frac_point(x)
    target = W.anchor(P)
    if x == target:
        raise ValueError("path origin coincides with the target site")
    if max_cubes is None:
        max_cubes = 10 * 10 * W.n * (W.max_level + 2)
    d = tuple(p - o for o, p in zip(x, target))
    t = Fraction(0)
    cubes, entries, exits = [], [], []
    truncation = "max length"
    while len(cubes) < max_cubes:
        pt = tuple(o + t * di for o, di in zip(x, d))
        try:
            located = W.locate(pt)
        except DepthCapError:
            truncation = "depth cap"
            break
        best = None
        for c in located:
            iv = _segment_interval(x, d, c.box())
            if iv is None:
                continue
            b = min(iv[1], Fraction(1))
            key = (-b, c.level, c.coords)
            if best is None or key < best[0]:
                best = (key, c, b)
        if best is None or best[2] <= t:
            truncation = "depth cap"
            break
        _, cube, b = best
        cubes.append(cube)
        entries.append(t)
        exits.append(b)
        t = b
        if cube.level > W.max_level:
            truncation = "diameter floor"
            break
    return CubePath(x, target, tuple(cubes), tuple(entries), tuple(exits),
                    truncation)


def greedy_optimality_check(W, path):
    """No cube containing an entry point beats the chosen cube's exit."""
    for cube, a, b in zip(path.cubes, path.entries, path.exits):
        pt = path.point_at(a)
        d = tuple(p - o for o, p in zip(path.origin, path.target))
        for c in W.locate(pt):
            iv = _segment_interval(path.origin, d, c.box())
            if iv is not None and min(iv[1], Fraction(1)) > b:
                return False
    return True


def two_ring(W, P):
    """All accepted cubes within neighbor-graph distance <= 2 of P."""
    ring1 = set(W.neighbors(P)) | {P}
    ring2 = set(ring1)
    for c in ring1:
        ring2.update(W.neighbors(c))
    return sorted(ring2, key=lambda c: (c.level, c.coords))


def sample_A_P(W, P, seed):
    """One random point of A_P: a convex combination of uniform points in
    two cubes of the two-ring of P.  Deterministic per seed."""
    ring = two_ring(W, P)
    g = block_generator(derive_seed(seed, "A_P", P.key()), 0)
    i, j = g.integers(0, len(ring), size=2)
    t = g.random()
    pts = []
    for c in (ring[int(i)], ring[int(j)]):
        box = c.box()
        u = g.random(W.n)
        pts.append([float(l) + uu * float(h - l)
                    for l, h, uu in zip(box.lo, box.hi, u)])
    y = tuple(t * a + (1.0 - t) * b for a, b in zip(*pts))
    return to_frac_point(y)


def a_p_radius_check(W, P, y):
    """|y - x_P| <= (17/10) * 22 * delta_P, the two-ring hull scale."""
    xp = W.anchor(P)
    d2 = sum((Fraction(a) - b) ** 2 for a, b in zip(y, xp))
    bound = Fraction(17, 10) * 22
    return d2 <= bound * bound * P.diameter_sq()


@dataclass(frozen=True)
class PathDecayConstants:
    """delta_{P_j} <= A a^(j-i) delta_{P_i} over the fitted corpus."""

    A: float
    a: float
    C_n: int
    max_exponent: float = field(default=0.0)

    def to_json(self):
        return {"A": self.A, "a": self.a, "C_n": self.C_n,
                "max_exponent": self.max_exponent}


def fit_decay(paths):
    """Fit (A, a, C_n) on a corpus of built paths.

    C_n is the longest observed run of constant-diameter cubes; the decay
    base is a = 2^(-1/C_n); A is the smallest power of two validating the
    inequality over every (i <= j) pair in the corpus.
    """
    if not paths:
        raise ValueError("empty path corpus")
    c_n = 1
    for path in paths:
        lv = path.levels
        if len(lv) > 1 and all(m2 <= m1 for m1, m2 in zip(lv, lv[1:])) \
                and lv[-1] < lv[0]:
            raise ValueError("decay violated: diameters increase along a path")
        run = 1
        for m1, m2 in zip(lv, lv[1:]):
            run = run + 1 if m2 == m1 else 1
            c_n = max(c_n, run)
    a = 2.0 ** (-1.0 / c_n)
    worst = 0.0
    for path in paths:
        lv = np.array(path.levels, dtype=float)
        j = np.arange(len(lv))
        # log2(delta_j) - (j - i)*log2(a) - log2(delta_i) <= log2(A)
        v = -lv + j / c_n
        if len(v):
            worst = max(worst, float(np.max(v - np.minimum.accumulate(v))))
    A = 2.0 ** max(0, math.ceil(worst - 1e-12))
    return PathDecayConstants(A=A, a=a, C_n=c_n, max_exponent=worst)


def lemma12_check(W, P, x, F, eps_rule="half", budget=400, method="tensor-quad",
                  max_cubes=None):
    """Ratio of the jet-error functional at x to the weighted sum of
    per-cube seminorms along the chain from x to the anchor of P.

    The left side aggregates |d^i (jet at x_P)(x) - d^i F(x)|^p with the
    scale weights delta_P^(n - s p + |i| p); the right side weights each
    chain cube's seminorm (cubes after the first) by delta^({s}p - n - eps)
    with eps = ({s}p - n)/2.  The omitted infinite tail is bounded through
    the Lipschitz constant of the top derivatives and reported.
    """
    from .seminorm import gagliardo, Region

    params = W.params
    n, s, p = params.n, params.s, params.p
    frac = params.s_frac
    if frac * p <= n:
        raise ValueError("requires n/p < {s}")
    eps = (frac * p - n) / 2.0 if eps_rule == "half" else float(eps_rule)
    path = build_path(W, P, x, max_cubes=max_cubes)
    xp = W.anchor(P)
    xpf = float_point(xp)
    xf = float_point(to_frac_point(x))
    order = params.s_floor
    jet = F.jet_at(xpf, order)
    delta_p = P.diameter()
    lhs = 0.0
    for i in multi_indices(n, order):
        diff = jet_eval(jet_derivative(jet, i), xf) - F.partial_at(i, xf)
        lhs += delta_p ** (n - s * p + mi_order(i) * p) * abs(diff) ** p
    rhs_sum = 0.0
    terms = []
    for cube in path.cubes[1:]:
        est = gagliardo(F, Region.from_cubes([cube]), params,
                        method=method, budget=budget,
                        seed=derive_seed(0, "lemma12", cube.key()))
        term = est.value ** p * cube.diameter() ** (frac * p - n - eps)
        rhs_sum += term
        terms.append({"cube": cube.key(), "seminorm": est.value, "term": term})
    rhs = delta_p ** (n - frac * p + eps) * rhs_sum
    # Tail bound: |d^k F(x) - d^k F(y)| <= L |x - y| on the chain hull gives
    # seminorm(Q)^p <= (K L)^p |Q| omega c delta^(p - {s}p), so the omitted
    # levels contribute a geometric series in delta^(p - eps).
    tail = _tail_bound(path, F, params, eps) * delta_p ** (n - frac * p + eps)
    total = rhs + tail
    flagged = total > 0 and tail > 1e-6 * total
    if lhs == 0.0:
        ratio = 0.0
    elif rhs == 0.0:
        ratio = math.inf
    else:
        ratio = lhs / rhs
    return {"lhs": lhs, "rhs": rhs, "ratio": ratio, "epsilon": eps,
            "path_length": len(path), "truncation": path.truncation,
            "tail_bound": tail, "tail_flag": bool(flagged), "terms": terms}


def _tail_bound(path, F, params, eps, probe=64):
    n, p = params.n, params.p
    frac = params.s_frac
    if not path.cubes:
        return 0.0
    last = path.cubes[-1]
    # Lipschitz scale of the top derivatives near the chain's tail.
    box = last.box().dilate(Fraction(3))
    g = block_generator(derive_seed(0, "tail", last.key()), 0)
    X = np.array([[float(l) + u * float(h - l)
                   for l, h, u in zip(box.lo, box.hi, row)]
                  for row in g.random((probe, n))])
    L = 0.0
    for k in indices_of_order(n, params.s_floor + 1):
        L = max(L, float(np.max(np.abs(F.partial(k, X)))))
    K = len(indices_of_order(n, params.s_floor))
    omega = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
    beta = p - frac * p
    run_cap = 1
    run = 1
    lv = path.levels
    for m1, m2 in zip(lv, lv[1:]):
        run = run + 1 if m2 == m1 else 1
        run_cap = max(run_cap, run)
    total = 0.0
    delta = last.diameter()
    for _ in range(80):
        delta *= 0.5
        vol = (delta / math.sqrt(n)) ** n
        semi_p = (K * L) ** p * vol * omega * delta ** beta / beta
        total += run_cap * semi_p * delta ** (frac * p - n - eps)
        if semi_p == 0.0:
            break
    return total
