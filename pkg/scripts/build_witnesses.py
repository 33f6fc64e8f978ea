"""Turn raw GAP witness output into symplectic group files in standard form.

    python3 scripts/build_witnesses.py scripts/gap/symplectic_witnesses.out
"""
import ast
import re
import sys
from pathlib import Path

import numpy as np

from udk.fileformat import GroupFile, save_group_file
from udk.symplectic import SympGroup, to_standard_form, transitivity_certificate

OUT = Path(__file__).resolve().parents[1] / "src" / "udk" / "data" / "symplectic"

# (gap label prefix, file stem, structure note); first match wins
NAMES = [
    ("sp2_3_order8", "q8_in_sp2_3", "Q8"),
    ("sp2_5_order24", "sl2_3_in_sp2_5", "SL2(3)"),
    ("sp2_7_order48", "sl2_3_c2_in_sp2_7", "SL2(3).C2 = SmallGroup(48,28)"),
    ("sp2_11_order120", "sl2_5_in_sp2_11", "SL2(5)"),
    ("sp4_3_order160_", "sg160_in_sp4_3", "SmallGroup(160,199)"),
    ("sp4_3_order320_", "sg320_in_sp4_3", "SmallGroup(320,1581)"),
    ("sp4_3_order240_", "two_s5_in_sp4_3", "2.S5"),
    ("sp4_3_order720_", "sl2_9_in_sp4_3", "SL2(9)"),
    ("sp4_3_order1440_", "sl2_9_c2_in_sp4_3", "SL2(9):C2 = SmallGroup(1440,4591)"),
    ("sp4_3_order1920_", "sg1920_in_sp4_3", "C2.(C2^4:A5) = SmallGroup(1920,241003)"),
    ("sp6_2_order504_", "sl2_8_in_sp6_2", "SL2(8)"),
    ("sp6_2_order1512_", "sl2_8_c3_in_sp6_2", "SL2(8):C3"),
    ("sp6_2_order6048_", "su3_3_in_sp6_2", "SU3(3)"),
    ("sp6_2_order12096_", "su3_3_c2_in_sp6_2", "SU3(3):C2"),
    ("sl2_13_in_sp6_3", "sl2_13_in_sp6_3", "SL2(13)"),
]


def records(text):
    for line in text.splitlines():
        m = re.match(r"WITNESS (.*) (\d+) (\[.*\]) (\[\s*\[.*\]\s*\])\s*$", line)
        if m:
            label, p, gens, form = m.groups()
            yield label, int(p), ast.literal_eval(gens), ast.literal_eval(form)


def main(path):
    OUT.mkdir(parents=True, exist_ok=True)
    done = set()
    for label, p, gens, form in records(Path(path).read_text()):
        hit = next(((stem, note) for pre, stem, note in NAMES if label.startswith(pre)), None)
        if hit is None or hit[0] in done:
            continue
        stem, note = hit
        # GAP acts on row vectors (g F g^T = F); transpose to the column convention
        std = to_standard_form([np.array(g).T for g in gens], np.array(form), p)
        H = SympGroup(p, len(form) // 2, std, name=stem)
        cert = transitivity_certificate(H)
        assert cert is not None, stem
        gf = GroupFile(
            stem, H.dim, [g.tolist() for g in H.generators], modulus=p,
            expected={"order": cert.order, "transitive": True, "structure": note},
            provenance=f"{note} <= Sp{H.dim}({p}); generators from a GAP subgroup search, "
            "rewritten in a symplectic basis of the invariant form",
        )
        save_group_file(gf, OUT / f"{stem}.json")
        done.add(stem)
        print(f"{stem:22s} p={p} dim={H.dim} order={cert.order} on {cert.nvectors}")
    missing = {s for _, s, _ in NAMES} - done
    if missing:
        sys.exit(f"missing: {sorted(missing)}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "scripts/gap/symplectic_witnesses.out")
