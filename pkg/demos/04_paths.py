"""Build cube chains from a starting cube toward its nearest site and
fit the geometric decay of their diameters.

Each chain covers the straight segment from a point near the starting
cube to the nearest site, consecutive cubes touch, diameters shrink
monotonically, and every entry point x' satisfies the exact window
10 delta_Q <= |x' - x_P| <= 131 delta_Q.
"""

from fractions import Fraction

from whitneyext import SpaceParams, build, build_path, fit_decay, sample_A_P


def main():
    params = SpaceParams(n=1, s=1.5, p=4.0)
    W = build(params, [(Fraction(0),)], domain_exp=5, max_depth=8)

    from whitneyext.geometry import DyadicCube
    P = DyadicCube(0, (10,))
    path = build_path(W, P, (Fraction(21, 2),))
    print(f"chain from cube [10,11] toward the origin: {len(path)} cubes")
    print("levels:", " ".join(str(m) for m in path.levels[:16]), "...")
    print("adjacency:", path.adjacency_check(),
          " monotone:", path.monotone_check(),
          " coverage:", path.coverage_check())
    print("entry-point window holds on every cube:",
          all(path.claim2_check()))

    # decay constants fitted over a corpus of chains
    paths = [build_path(W, P, (Fraction(21, 2) + Fraction(i, 64),))
             for i in range(16)]
    decay = fit_decay(paths)
    print(f"fitted decay: diam(Q_j) <= A * a^j with A = {decay.A:g}, "
          f"a = {decay.a:.6f} (block length C_n = {decay.C_n})")
    print(f"exact single-site values: C_n = 10, a = 2^(-1/10) = "
          f"{2.0 ** (-1.0 / 10.0):.6f}")

    # starting points drawn from the two-ring neighborhood of P
    for seed in range(3):
        y = sample_A_P(W, P, seed)
        q = build_path(W, P, y)
        print(f"seed {seed}: start {float(y[0]):+.4f}, "
              f"{len(q)} cubes, truncation = {q.truncation}")


if __name__ == "__main__":
    main()
