"""Write curated unitary group files from raw GAP exports (and local constructions).

    python3 scripts/build_catalog.py REPFILE [NAME ...]

REPFILE holds lines ``REP name N d [gens]`` where each entry is the list of
coefficients of zeta_N^k, k = 0..N-1 (GAP's CoeffsCyc).
"""
import ast
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from udk.cyclo import CycNum
from udk.fileformat import GroupFile, save_group_file
from udk.matrep import FiniteMatrixGroup, UMatrix

DATA = Path(__file__).resolve().parents[1] / "src" / "udk" / "data"


def read_reps(path):
    text = Path(path).read_text().replace("\\\n", "")
    out = {}
    for m in re.finditer(r"REP (\S+) (\d+) (\d+) (\[.*?\])\s*(?=REP |\Z|Syntax|#)", text, re.S):
        name, N, d, body = m.groups()
        body = re.sub(r"(-?\d+)/(\d+)", r'"\1/\2"', " ".join(body.split()))
        gens = ast.literal_eval(body)
        N = int(N)
        mats = []
        for g in gens:
            rows = [[CycNum.from_terms(N, [(Fraction(c), k) for k, c in enumerate(e) if c != 0]) for e in r] for r in g]
            mats.append(UMatrix.from_rows(rows, N))
        out[name] = mats
    return out


def write(name, gens, expected, provenance):
    G = FiniteMatrixGroup(name, gens)
    gf = GroupFile(name, G.dim, G.generators, conductor=G.conductor, expected=expected, provenance=provenance)
    save_group_file(gf, DATA / f"{name}.json")
    return G


# Expected values: group orders from the group libraries, moments from the
# character tables (scripts/gap/table_moments.g), max_t against the Haar values.
EXPECTED = {
    "sl3_2_dim3": ({"order": 168, "scalar_order": 1, "moments": {"1": 1, "2": 2, "3": 7, "4": 44}, "max_t": 2},
                   "L3(2) on its 3-dimensional irreducible (Dixon's method, scripts/gap/unitary_reps.g)"),
    "valentiner_3a6_dim3": ({"order": 1080, "scalar_order": 3, "moments": {"1": 1, "2": 2, "3": 6, "4": 28},
                             "max_t": 3},
                            "Valentiner group 3.A6 (Dixon's method, scripts/gap/unitary_reps.g)"),
    "two_a7_dim4": ({"order": 5040, "scalar_order": 2, "moments": {"1": 1, "2": 2, "3": 6, "4": 38}, "max_t": 3},
                    "2.A7 on a 4-dimensional faithful irreducible (Dixon's method, scripts/gap/unitary_reps.g)"),
    "four1_l34_dim8": ({"order": 80640, "scalar_order": 4, "moments": {"1": 1, "2": 2, "3": 17}, "max_t": 2},
                       "4_1.L3(4) on an 8-dimensional faithful irreducible (Dixon's method, scripts/gap/unitary_reps.g)"),
    "two_m12_dim10": ({"order": 190080, "scalar_order": 2, "moments": {"1": 1, "2": 2, "3": 15}, "max_t": 2},
                      "2.M12 on a 10-dimensional faithful irreducible (Dixon's method, scripts/gap/unitary_reps.g)"),
    "six_a7_dim6": ({"order": 15120, "scalar_order": 6, "moments": {"1": 1, "2": 2, "3": 21}, "max_t": 2},
                    "6.A7 on a 6-dimensional faithful irreducible (orthonormal frame of matrix coefficients, scripts/gap/subgroup_frame.g)"),
    "six_l34_2_dim6": ({"order": 241920, "scalar_order": 6, "moments": {"1": 1, "2": 2, "3": 6, "4": 56},
                        "max_t": 3},
                       "6.L3(4).2_1: the 6-dimensional irreducible of 6.L3(4) extended by an outer automorphism "
                       "fixing its character (scripts/gap/extend_frame.g)"),
}

# catalog names exported under another label; extend_frame.g exports every
# candidate automorphism and central twist, all with the same order and moments
SOURCE = {"six_l34_2_dim6": "six_l34_2_c1_z1"}


if __name__ == "__main__":
    reps = read_reps(sys.argv[1])
    for name in sys.argv[2:] or list(EXPECTED):
        if SOURCE.get(name, name) not in reps:
            continue
        gens = reps[SOURCE.get(name, name)]
        t = time.time()
        G = write(name, gens, *EXPECTED[name]).enumerate()
        print(name, G.dim, G.conductor, G.order(), G.scalar_order(), f"{time.time() - t:.1f}s",
              "den", max(g.den for g in gens))
