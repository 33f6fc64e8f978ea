"""Curated complex reflection groups in dimension 4, built from root lines.

    python3 scripts/build_reflection_groups.py

g32: order-3 reflections in the 40 Witting lines over Q(zeta_3).  The sign
pattern of the 36 non-basis lines was found by searching the sign choices
for a line system closed under its own reflections.

g29: order-2 reflections in 40 lines over Q(i): e_i + i^c e_j and
(1, i^a, i^b, i^c) with a + b + c = 0 mod 4.  (With the parity condition
a + b + c even instead, the 60 lines e_i, e_i + i^c e_j, (1, i^a, i^b, i^c)
give G31 of order 46080.)

sp4_3: derived subgroup of g32.
"""
import itertools
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from build_catalog import write  # noqa: E402
from udk.cyclo import CycNum  # noqa: E402
from udk.designs import max_t  # noqa: E402
from udk.matrep import UMatrix, derived_subgroup, generated_subgroup  # noqa: E402

WITTING_SIGNS = ((1, 1), (1, -1), (-1, 1), (1, -1))


def reflection(v, root, n):
    """x -> x + (root - 1) <x, v>/<v, v> v, columns."""
    one, zero = CycNum.rational(1, n), CycNum.rational(0, n)
    norm = sum((c * c.conj() for c in v), zero)
    f = (root - one) / norm
    d = len(v)
    return UMatrix.from_rows([[(one if i == j else zero) + f * v[i] * v[j].conj() for j in range(d)]
                              for i in range(d)], n)


def witting_lines():
    one, zero = CycNum.rational(1, 3), CycNum.rational(0, 3)
    w = lambda k: CycNum.root(3, k)
    lines = [[one if j == i else zero for j in range(4)] for i in range(4)]
    for k in range(4):
        s1, s2 = WITTING_SIGNS[k]
        o = [i for i in range(4) if i != k]
        for a, b in itertools.product(range(3), repeat=2):
            v = [zero] * 4
            v[o[0]], v[o[1]], v[o[2]] = one, w(a) * s1, w(b) * s2
            lines.append(v)
    return lines


def g29_lines():
    one, zero = CycNum.rational(1, 4), CycNum.rational(0, 4)
    i_ = lambda k: CycNum.root(4, k)
    lines = []
    for a, b in itertools.combinations(range(4), 2):
        for c in range(4):
            v = [zero] * 4
            v[a], v[b] = one, i_(c)
            lines.append(v)
    for a, b, c in itertools.product(range(4), repeat=3):
        if (a + b + c) % 4 == 0:
            lines.append([one, i_(a), i_(b), i_(c)])
    return lines


def report(G, tmax=5):
    mt, rep = max_t(G, tmax)
    return {r.t: r.group_moment for r in rep.rows}, mt


if __name__ == "__main__":
    t0 = time.time()
    g32 = generated_subgroup([reflection(v, CycNum.root(3, 1), 3) for v in witting_lines()],
                             4, 3, 2_000_000, "g32_dim4")
    mom, mt = report(g32)
    print("g32", g32.order(), g32.scalar_order(), mom, mt, f"{time.time() - t0:.1f}s")
    write("g32_dim4", g32.generators,
          {"order": 155520, "scalar_order": 6, "moments": {"1": 1, "2": 2, "3": 6, "4": 25}, "max_t": 3},
          "order-3 reflections in the 40 Witting lines over Q(zeta_3) (scripts/build_reflection_groups.py)")

    t0 = time.time()
    D = derived_subgroup(g32)
    mom, mt = report(D)
    print("sp4_3", D.order(), D.scalar_order(), mom, mt, f"{time.time() - t0:.1f}s")
    write("sp4_3_dim4", D.generators,
          {"order": 51840, "scalar_order": 2, "moments": {"1": 1, "2": 2, "3": 6, "4": 25}, "max_t": 3},
          "derived subgroup of g32_dim4, isomorphic to Sp4(3) (scripts/build_reflection_groups.py)")

    t0 = time.time()
    g29 = generated_subgroup([reflection(v, CycNum.rational(-1, 4), 4) for v in g29_lines()],
                             4, 4, 2_000_000, "g29_dim4")
    mom, mt = report(g29)
    print("g29", g29.order(), g29.scalar_order(), mom, mt, f"{time.time() - t0:.1f}s")
    write("g29_dim4", g29.generators,
          {"order": 7680, "scalar_order": 4, "moments": {"1": 1, "2": 2, "3": 7}, "max_t": 2},
          "reflections in 40 lines over Q(i) (scripts/build_reflection_groups.py)")
