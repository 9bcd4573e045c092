"""Acceptance gate: one test per quantitative criterion, with the stated
tolerances pinned.  Each test prints a single summary line."""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from whitneyext import (
    ExtensionField, Scenario, SpaceParams, build, build_path,
    brute_force_scan, fit_decay, gagliardo, jets_from_function,
    lemma7_far, lemma7_touching, lemma12_check, run_bound_experiment,
    sample_A_P, verify_all, Region)
from whitneyext.extension import jet_agreement_check
from whitneyext.functions import gaussian_bump, polynomial
from whitneyext.geometry import DyadicCube, dist_sq_box_to_points
from whitneyext.harness import _sample_domain_points
from whitneyext.multiindex import multi_indices, mi_order
from whitneyext.partition import theta, theta_all, verify_derivative_bounds
from whitneyext.rng import block_generator, derive_seed


def _random_sites(seed, n, count, resolution, domain_exp):
    g = block_generator(derive_seed(seed, "acceptance-sites", n), 0)
    lim = 3 * 2 ** (domain_exp + resolution) // 4
    pts = set()
    while len(pts) < count:
        raw = g.integers(-lim, lim + 1, size=n)
        pts.add(tuple(Fraction(int(v), 2 ** resolution) for v in raw))
    return sorted(pts)


def test_criterion_01_decomposition_exactness():
    plans = {
        1: dict(params=SpaceParams(1, 1.5, 4.0), domain_exp=4,
                counts=[50, 34, 21, 13, 8, 5, 3, 2, 27, 42], resolution=6),
        2: dict(params=SpaceParams(2, 1.5, 6.0), domain_exp=2,
                counts=[20, 14, 9, 6, 4, 3, 2, 1, 17, 11], resolution=5),
        3: dict(params=SpaceParams(3, 1.5, 8.0), domain_exp=0,
                counts=[1, 1, 2, 1, 2, 1, 1, 2, 1, 2], resolution=4),
    }
    t0 = time.time()
    total_cubes = 0
    for n, plan in plans.items():
        for i, count in enumerate(plan["counts"]):
            sites = _random_sites(i, n, count, plan["resolution"],
                                  plan["domain_exp"])
            W = build(plan["params"], sites, plan["domain_exp"], 12)
            rep = W.verify_structure(
                checks=["bounds", "disjoint", "level_ratio"])
            assert rep.all_passed, (n, i, rep.to_json())
            total_cubes += W.cube_count
    elapsed = time.time() - t0
    assert elapsed <= 60.0, f"criterion 1 runtime {elapsed:.1f}s > 60s"
    print(f"\n[criterion 01] PASS: 30 scenarios, {total_cubes} cubes, "
          f"{elapsed:.1f}s")


def test_criterion_02_brute_force_equality(params1):
    sites = [(Fraction(0),)]
    W = build(params1, sites, 5, 8)
    fast = {c.key() for c in W.cubes()}
    slow = {c.key() for c in brute_force_scan(params1, sites, 5, 8)}
    assert fast == slow
    # the closed-form pattern: coordinates 10..19 and mirrors, every level
    for m, coords in W.levels.items():
        got = sorted(int(c) for c in coords[:, 0])
        span = 1 << (W.domain_exp + m)
        pos = [a for a in range(10, 20) if a + 1 <= span]
        assert got == sorted([-a - 1 for a in pos] + pos)
    print(f"\n[criterion 02] PASS: {len(fast)} cubes match the brute-force "
          "scan and the closed-form pattern")


def test_criterion_03_partition_of_unity(W1):
    pts = _sample_domain_points(W1, 10 ** 4, 17)
    worst = 0.0
    for x in pts:
        total = sum(tv.value for tv in theta_all(W1, x, 0).values())
        worst = max(worst, abs(total - 1.0))
    assert worst <= 1e-12

    # derivative propagation vs five-point finite-difference stencils;
    # errors are measured relative to the scale-normalized derivative sup
    # of the corpus, the natural size of d^j theta on a cube of that level
    g = block_generator(derive_seed(0, "fd"), 0)
    cubes = list(W1.cubes())
    records = []
    for _ in range(100):
        cube = cubes[int(g.integers(0, len(cubes)))]
        side = float(cube.side)
        c = float(cube.center()[0])
        x = c + float(g.uniform(-0.54, 0.54)) * side
        tv = theta(W1, cube, (x,), 2)
        h = 2e-5 * side

        def val(t):
            return theta(W1, cube, (t,), 0).value

        f2, f1, f0, g1, g2 = (val(x - 2 * h), val(x - h), val(x),
                              val(x + h), val(x + 2 * h))
        fd1 = (f2 - 8 * f1 + 8 * g1 - g2) / (12 * h)
        fd2 = (-f2 + 16 * f1 - 30 * f0 + 16 * g1 - g2) / (12 * h * h)
        records.append((side, tv.derivative((1,)), fd1,
                        tv.derivative((2,)), fd2))
    s1 = max(1.0, max(abs(a1) * side for side, a1, _, _, _ in records))
    s2 = max(1.0, max(abs(a2) * side ** 2 for side, _, _, a2, _ in records))
    worst_fd = max(max(abs(fd1 - a1) * side / s1,
                       abs(fd2 - a2) * side ** 2 / s2)
                   for side, a1, fd1, a2, fd2 in records)
    assert worst_fd <= 1e-5, worst_fd

    rep = verify_derivative_bounds(W1, order=2, scales=4, ratio_tol=1.25)
    assert rep["passed"], rep
    print(f"\n[criterion 03] PASS: sum deviation {worst:.2e} <= 1e-12, "
          f"FD mismatch {worst_fd:.2e} <= 1e-5, scale ratios "
          f"{max(rep['ratios'].values()):.3f} <= 1.25")


def test_criterion_04_polynomial_reproduction(W1, params1):
    g = block_generator(derive_seed(0, "poly-corpus"), 0)
    pts = _sample_domain_points(W1, 10 ** 3, 23)
    worst_overall = 0.0
    for _ in range(20):
        coeffs = {k: float(g.uniform(-2, 2)) for k in multi_indices(1, 1)}
        F = polynomial(1, coeffs)
        Tf = ExtensionField(W1, jets_from_function(F, W1.sites, params1))
        vals = [abs(F.value_at(x)) for x in pts]
        tol = 1e-10 * (1.0 + max(vals))
        worst = max(abs(Tf.eval(x) - F.value_at(x)) for x in pts)
        assert worst <= tol, (coeffs, worst, tol)
        worst_overall = max(worst_overall, worst)
    print(f"\n[criterion 04] PASS: 20 polynomials, worst error "
          f"{worst_overall:.2e}")


def test_criterion_05_jet_agreement(W1, W1_pair, params1):
    F = gaussian_bump(1, width=4.0)
    radii = [0.4 * 2.0 ** (-j) for j in range(6)]
    results = []
    for W in (W1, W1_pair):
        Tf = ExtensionField(W, jets_from_function(F, W.sites, params1))
        for site in W.sites:
            for i in ((0,), (1,)):
                rep = jet_agreement_check(Tf, site, i, radii, reference=F)
                floor_order = params1.s_floor - mi_order(i) + 0.5
                assert (rep["fitted_order"] == math.inf
                        or rep["fitted_order"] >= floor_order), rep
                results.append(rep["fitted_order"])
    print(f"\n[criterion 05] PASS: fitted orders "
          f"{[round(r, 2) for r in results]}")


def _path_corpus_1d(W1):
    P = DyadicCube(0, (10,))
    paths = []
    for i in range(60):
        x = (Fraction(21, 2) + Fraction(i, 128),)
        paths.append(build_path(W1, P, x))
    for i in range(60):
        x = (-Fraction(21, 2) - Fraction(i, 128),)
        paths.append(build_path(W1, DyadicCube(0, (-11,)), x))
    return paths


def _path_corpus_2d(W2):
    cubes = list(W2.cubes())
    g = block_generator(derive_seed(0, "corpus2"), 0)
    paths = []
    tries = 0
    while len(paths) < 80 and tries < 400:
        tries += 1
        P = cubes[int(g.integers(0, len(cubes)))]
        x = sample_A_P(W2, P, derive_seed(1, "corpus2", tries))
        if not W2.in_domain(x) or x == W2.anchor(P):
            continue
        try:
            paths.append(build_path(W2, P, x))
        except ValueError:
            continue
    return paths


def test_criterion_06_path_properties(W1, W2):
    one_d = _path_corpus_1d(W1)
    two_d = _path_corpus_2d(W2)
    corpus = one_d + two_d
    assert len(corpus) >= 200
    for path in corpus:
        assert path.adjacency_check()
        assert path.monotone_check()
        assert path.coverage_check(200)
    d1 = fit_decay(one_d)
    d2 = fit_decay(two_d)
    assert d1.a < 1.0 and d2.a < 1.0
    assert d1.C_n == 10
    assert d1.a == 2.0 ** (-1.0 / 10.0)
    print(f"\n[criterion 06] PASS: {len(corpus)} paths, 1-D C_n={d1.C_n}, "
          f"a={d1.a:.6f}; 2-D C_n={d2.C_n}, a={d2.a:.6f}")


def test_criterion_07_claim2(W1, W2):
    entries = 0
    for path in _path_corpus_1d(W1) + _path_corpus_2d(W2):
        flags = path.claim2_check()
        assert all(flags), path.to_json()
        entries += len(flags)
    assert entries >= 10 ** 4
    print(f"\n[criterion 07] PASS: {entries} path-cube entries, all within "
          "the exact squared window")


def test_criterion_08_seminorm_calibration(params1):
    cal = SpaceParams(n=1, s=0.5, p=2.0, require_embedding=False)
    F = polynomial(1, {(0,): 0.0, (1,): 1.0})
    box = Region.from_box([0.0], [1.0])
    values = {}
    for method in ("plain-mc", "importance-mc", "tensor-quad"):
        est = gagliardo(F, box, cal, method=method, budget=10 ** 6, seed=9)
        assert abs(est.value - 1.0) <= 0.01, (method, est.value)
        values[method] = est.value

    # plain-mc vs tensor-quad on ten smooth configurations
    configs = [(w, lo, hi) for w in (0.5, 1.0, 2.0, 4.0)
               for lo, hi in ((-1.0, 1.0), (0.0, 2.0))][:8]
    configs += [(1.5, -2.0, 0.5), (3.0, -0.5, 3.0)]
    agreements = []
    for w, lo, hi in configs:
        G = gaussian_bump(1, width=w)
        r = Region.from_box([lo], [hi])
        a = gagliardo(G, r, params1, method="plain-mc", budget=2 * 10 ** 5,
                      seed=4)
        b = gagliardo(G, r, params1, method="tensor-quad", budget=10 ** 5,
                      seed=4)
        tol = a.error_bound + b.error_bound + 1e-9
        assert abs(a.value - b.value) <= tol, (w, lo, hi, a.value, b.value,
                                               tol)
        agreements.append(abs(a.value - b.value))
    print(f"\n[criterion 08] PASS: calibration {values}, 10 smooth configs "
          f"agree (max gap {max(agreements):.2e})")


def test_criterion_09_lemma7_scale_stability(W1, params1):
    touch = lemma7_touching(W1, DyadicCube(1, (19,)), DyadicCube(0, (10,)),
                            params1, budget=4096, scales=3)
    spread_t = max(touch["scale_ratios"]) / min(touch["scale_ratios"])
    assert spread_t <= 1.10, touch
    far = lemma7_far(W1, DyadicCube(2, (12,)), params1, budget=4096,
                     scales=3)
    spread_f = max(far["scale_ratios"]) / min(far["scale_ratios"])
    assert spread_f <= 1.10, far
    print(f"\n[criterion 09] PASS: touching spread {spread_t:.4f}, far-field "
          f"spread {spread_f:.4f} (both <= 1.10)")


def test_criterion_10_lemma12(W1, params1):
    g = block_generator(derive_seed(0, "l12"), 0)
    cubes = [c for c in W1.cubes() if c.level >= 0]
    full_ratios = []
    short_ratios = []
    for i in range(20):
        P = cubes[int(g.integers(0, len(cubes)))]
        x = sample_A_P(W1, P, derive_seed(3, "l12", i))
        if x == W1.anchor(P) or not W1.in_domain(x):
            continue
        F = gaussian_bump(1, width=float(g.uniform(2.0, 6.0)))
        full = lemma12_check(W1, P, x, F, budget=128)
        assert math.isfinite(full["ratio"]), full
        full_ratios.append(full["ratio"])
        # refinement: drop the finest third of the chain
        short = lemma12_check(W1, P, x, F, budget=128,
                              max_cubes=max(2, 2 * full["path_length"] // 3))
        short_ratios.append(short["ratio"])
    worst = max(full_ratios)
    assert math.isfinite(worst)
    # the corpus maximum must be stable under path-truncation refinement
    drift = abs(max(short_ratios) - worst) / worst
    assert drift <= 0.20, (worst, max(short_ratios))
    poly = polynomial(1, {(0,): 0.3, (1,): -1.1})
    rep = lemma12_check(W1, DyadicCube(0, (10,)), (Fraction(21, 2),), poly,
                        budget=64)
    assert rep["lhs"] == 0.0
    print(f"\n[criterion 10] PASS: max ratio {worst:.3e} finite, truncation "
          f"drift {drift:.2%} <= 20%, polynomial LHS = 0")


def test_criterion_11_boundedness_envelope():
    stages = [10, 32, 100]
    seeds = range(10)
    maxima = []
    t0 = time.time()
    for count in stages:
        rhos = []
        for seed in seeds:
            sc = Scenario(
                name=f"envelope-{count}-{seed}",
                params=SpaceParams(n=2, s=1.5, p=6.0),
                sites_spec={"kind": "random", "count": count,
                            "resolution": 4, "seed": seed},
                function_spec={"name": "gaussian", "width": 1.0},
                domain_exp=2, max_depth=5,
                budgets={"method": "band-mc", "seminorm": 20000},
                seed=seed)
            rep = run_bound_experiment(sc)
            assert rep["rho"] is not None and math.isfinite(rep["rho"]), rep
            rhos.append(rep["rho"])
        maxima.append(max(rhos))
    for prev, cur in zip(maxima, maxima[1:]):
        assert cur < 2.0 * prev, maxima
    elapsed = time.time() - t0
    print(f"\n[criterion 11] PASS: stage maxima "
          f"{[round(m, 3) for m in maxima]}, growth < 2x, {elapsed:.0f}s")


def test_criterion_12_reproducibility(tmp_path):
    from whitneyext.io import dump_json

    sc = Scenario(
        name="repro",
        params=SpaceParams(n=1, s=1.5, p=4.0),
        sites_spec={"kind": "random", "count": 3, "resolution": 4,
                    "seed": 8},
        function_spec={"name": "gaussian", "width": 4.0},
        domain_exp=4, max_depth=6,
        budgets={"seminorm": 600, "split": 300, "whole": 600,
                 "lemma7": 512, "lemma12": 64},
        seed=8)
    for runner, name in ((run_bound_experiment, "bound"),
                         (verify_all, "verify")):
        a, b = tmp_path / f"{name}-a.json", tmp_path / f"{name}-b.json"
        dump_json(runner(sc), a)
        dump_json(runner(sc), b)
        assert a.read_bytes() == b.read_bytes(), name
    print("\n[criterion 12] PASS: bound and verify reports bit-identical "
          "across reruns")
