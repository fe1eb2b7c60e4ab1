"""Independent numpy/scipy computation of the reference numbers frozen in the C++ tests.

Run with `python3 tests/oracles/derive_values.py`; it prints every value at full precision.
"""
import itertools

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

PAIR_A = np.array([[1.1616, -0.5051], [-0.0505, 1.6162]])
PAIR_B = np.array([1.8182, -0.8182])

DC_A = np.array([[0, 1, 0], [0, 0, 1], [0.69527, -2.3565, 2.660]])
DC_B = np.array([0, 0, 8.74])
AC_A = np.array([[0, 1, 0], [0, 0, 1], [0.65711, -2.2691, 2.610]])
AC_B = np.array([0, 0, 19.17])


def normalize(a, b, u, x):
    p = np.diag(x)
    pinv = np.linalg.inv(p)
    return pinv @ a @ p, pinv @ b * u


def reach_gens(a, b, n):
    out, g = [], b.copy()
    for _ in range(n):
        out.append(g.copy())
        g = a @ g
    return np.array(out).T


def recover_gens(a, b, n):
    ainv = np.linalg.inv(a)
    out, g = [], ainv @ b
    for _ in range(n):
        out.append(g.copy())
        g = ainv @ g
    return np.array(out).T


def det_volume(g):
    n, m = g.shape
    return 2**n * sum(abs(np.linalg.det(g[:, list(c)])) for c in itertools.combinations(range(m), n))


def sign_sums(g):
    m = g.shape[1]
    return np.array([g @ np.array(s) for s in itertools.product([-1, 1], repeat=m)])


def hull_vertices(g):
    pts = sign_sums(g)
    h = ConvexHull(pts)
    return pts[h.vertices]


def in_zonotope(g, x):
    m = g.shape[1]
    res = linprog(np.zeros(m), A_eq=g, b_eq=x, bounds=[(-1, 1)] * m, method="highs")
    return res.status == 0


def main():
    np.set_printoptions(precision=17)
    print("pair support e1:", abs(PAIR_B[0]) + abs((PAIR_A @ PAIR_B)[0]))
    print("pair reach N=6 volume:", repr(det_volume(reach_gens(PAIR_A, PAIR_B, 6))))
    g = recover_gens(PAIR_A, PAIR_B, 6)
    print("pair recover N=6 volume:", repr(det_volume(g)))
    g5 = recover_gens(PAIR_A, PAIR_B, 5)
    outside = [v for v in hull_vertices(g) if not in_zonotope(g5, v)]
    print("pair recover vertices of R(6) outside R(5):", len(outside))
    for v in sorted(outside, key=tuple):
        print("   ", repr(v[0]), repr(v[1]))
    print("dc det:", repr(np.linalg.det(DC_A)))
    for label, (a, b, u, x) in {
        "dc rated": (DC_A, DC_B, 24, [30, 200, 30]),
        "ac rated": (AC_A, AC_B, 12, [30, 230, 35]),
        "dc target": (DC_A, DC_B, 24, [30, 180, 30]),
        "ac target": (AC_A, AC_B, 12, [30, 180, 30]),
    }.items():
        an, bn = normalize(a, b, u, np.array(x, dtype=float))
        gens = reach_gens(an, bn, 10)
        print(label, "reach N=10 volume:", repr(det_volume(gens)))
    an, bn = normalize(DC_A, DC_B, 24, np.array([30, 200, 30.0]))
    proj = reach_gens(an, bn, 8)[:2]
    print("dc rated N=8 projection (1,2) vertex count:", len(hull_vertices(proj)))


if __name__ == "__main__":
    main()
