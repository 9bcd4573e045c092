"""Evaluate the smooth partition of unity subordinate to the cube cover.

Each cube carries a bump supported on its 1.1-fold dilate, equal to one
on the cube itself; normalizing gives weights theta_Q that sum to one on
the covered region, with derivative sups scaling like side^{-|k|}.
"""

from fractions import Fraction

import numpy as np

from whitneyext import SpaceParams, build, theta_all
from whitneyext.partition import covering_cubes, verify_derivative_bounds


def main():
    params = SpaceParams(n=1, s=1.5, p=4.0)
    W = build(params, [(Fraction(0),)], domain_exp=5, max_depth=8)

    rng = np.random.default_rng(0)
    worst = 0.0
    for x in rng.uniform(-30.0, 30.0, size=200):
        weights = theta_all(W, (float(x),), order=0)
        total = sum(tv.value for tv in weights.values())
        worst = max(worst, abs(total - 1.0))
    print(f"sum-to-one over 200 points: max deviation {worst:.3e}")

    x = (10.98,)
    active = covering_cubes(W, x)
    print(f"x = {x[0]}: {len(active)} cubes carry weight")
    for cube, tv in sorted(theta_all(W, x, order=1).items(),
                           key=lambda kv: kv[0].key()):
        print(f"  {cube.level}:{cube.coords[0]:>3}  theta = {tv.value:.6f}  "
              f"theta' = {tv.derivative((1,)):+.6f}")

    # scale-normalized derivative sups vary little across cube levels
    rep = verify_derivative_bounds(W, order=2, grid=25)
    print("scale-normalized derivative sups, order 1, per level:")
    for level in rep["levels"]:
        sup = rep["normalized_sup"][level].get(1, 0.0)
        print(f"  level {level}: sup |theta'| * diam = {sup:.4f}")
    print(f"cross-scale ratios: {rep['ratios']}")
    assert rep["passed"]


if __name__ == "__main__":
    main()
