"""Acceptance criteria 1-10, one test (and one reported line) per criterion.

Every criterion is exact except the Monte Carlo cross-check, which uses a
4-sigma band at pinned seeds.  Expensive per-group data (moments, max_t,
property checks, scalar extension) is computed once per catalog entry and
the closure is released afterwards, so the largest groups are never held
in memory together.
"""
import math
import time
from functools import lru_cache

import pytest

from udk import catalog, reproduce, symplectic
from udk.cyclo import CycNum
from udk.designs import max_t, moments, sym_alt_multiplicities
from udk.haar import haar_moment, haar_moment_dim2_oracle, mc_trace_powers
from udk.matrep import UMatrix, closure, derived_series_limit, is_perfect

T_PROPS = 6  # property suites run for t <= 6
T_SCAN = 7  # max_t scan; 7 separates SL2(5) (5) from every other entry


@lru_cache(maxsize=None)
def profile(name):
    """Verified invariants of one catalog entry, or None if its data file is absent."""
    if name not in catalog.names():
        return None
    t0 = time.time()
    G = catalog.get_group(name).enumerate()
    rep = catalog.verify(name, G, strict=False)
    mom = moments(G, range(1, T_SCAN + 1))  # raises IntegralityViolation on a non-integer
    mt, report = max_t(G, T_SCAN)
    mss, msa, maa = sym_alt_multiplicities(G)
    # adjoin a scalar outside the scalar subgroup: zeta_(2z) with z = |Z(G) cap scalars|
    z = G.scalar_order()
    H = closure(G.generators + [UMatrix.scalar(G.dim, CycNum.root(2 * z))], name=name + "_ext")
    ext_mom = moments(H, range(1, T_PROPS + 1))
    ext = dict(order=H.order(), scalar_order=H.scalar_order(), moments=ext_mom, max_t=max_t(H, T_PROPS)[0])
    del H
    return dict(
        dim=G.dim, order=G.order(), scalar_order=z, verify=rep, moments=mom, max_t=mt, flags=report.flags,
        sym_alt=(mss, msa, maa), ext=ext, seconds=time.time() - t0,
    )


def present(dim=None):
    return [n for n in catalog.names() if dim is None or catalog.entry(n).dim == dim]


# ---------------------------------------------------------------------------


def test_criterion_01_haar_exactness(record):
    t0 = time.time()
    fact = all(haar_moment(d, t) == math.factorial(t) for t in range(1, 9) for d in range(t, 13))
    dim2 = [haar_moment(2, t) for t in range(1, 7)]
    oracle = [haar_moment_dim2_oracle(t) for t in range(1, 7)]
    ok = fact and dim2 == oracle == [1, 2, 5, 14, 42, 132]
    dt = time.time() - t0
    record(1, ok and dt < 1, f"t! for d >= t, t <= 8: {fact}; U_2 moments {dim2}; oracle {oracle}; {dt:.2f} s")
    assert ok and dt < 1


def test_criterion_02_monte_carlo(record):
    t0 = time.time()
    worst = 0.0
    bad = []
    for d, seed in [(2, 20), (3, 30), (4, 40), (6, 60)]:
        est = mc_trace_powers(d, range(1, 5), 1_000_000, seed)
        for t, (mean, err) in est.items():
            z = abs(mean - haar_moment(d, t)) / err
            worst = max(worst, z)
            if z > 4:
                bad.append((d, t, mean, err))
    dt = time.time() - t0
    record(2, not bad, f"16 (d, t) pairs at N = 10^6; largest deviation {worst:.2f} stderr; {dt:.1f} s"
           + (f"; outside 4 sigma: {bad}" if bad else ""))
    assert not bad


def test_criterion_03_sl2_5(record):
    t0 = time.time()
    G = catalog.get_group("sl2_5_dim2").enumerate()
    mom = moments(G, range(1, 7))
    haar = {t: haar_moment(2, t) for t in range(1, 7)}
    ok = all(mom[t] == haar[t] for t in range(1, 6)) and mom[6] > haar[6]
    dt = time.time() - t0
    record(3, ok and dt < 1, f"SL2(5): M_2t = {list(mom.values())} vs Haar {list(haar.values())}; {dt:.2f} s")
    assert ok and dt < 1


def test_criterion_04_dim2(record):
    t0 = time.time()
    s3 = moments(catalog.get_group("sl2_3_dim2").enumerate(), [2, 3])
    c1 = moments(catalog.get_group("clifford_1").enumerate(), [2, 3, 4])
    mt = {n: profile(n)["max_t"] for n in present(2)}
    rows = reproduce.reproduce("dim2")
    notes = [r for r in rows if r.status == "note"]
    ok = (s3 == {2: 2, 3: 6} and c1 == {2: 2, 3: 5, 4: 15}
          and mt["sl2_5_dim2"] == 5 and mt["clifford_1"] == 3 and mt["sl2_3_dim2"] == 2
          and not reproduce.failed(rows) and len(notes) == 2)
    # partition of the dim-2 statement: (A1) t <= 5, (A2) t <= 3, (A3) t = 2
    dt = time.time() - t0
    record(4, ok and dt < 5, f"SL2(3) M4, M6 = {s3[2]}, {s3[3]}; Clifford M4, M6, M8 = {c1[2]}, {c1[3]}, {c1[4]}; "
           f"max_t {mt}; {len(notes)} proof-text annotations; {dt:.1f} s")
    assert ok


def test_criterion_05_dim3(record):
    t0 = time.time()
    q = profile("qutrit_normalizer")
    s = profile("sl3_2_dim3")
    v = profile("valentiner_3a6_dim3")
    missing = [n for n, p in [("sl3_2_dim3", s), ("valentiner_3a6_dim3", v)] if p is None]
    if missing:
        record(5, "FAIL", f"data missing for {missing}")
        pytest.fail(f"data missing for {missing}")
    vm = v["moments"]
    all3 = {n: profile(n)["max_t"] for n in present(3)}
    ok = (q["max_t"] == 2 and s["max_t"] == 2 and (vm[2], vm[3]) == (2, 6) and vm[4] > 24 and v["max_t"] == 3
          and all(m < 4 for m in all3.values()))
    dt = time.time() - t0
    record(5, ok, f"qutrit max_t {q['max_t']}; SL3(2) max_t {s['max_t']}; 3.A6 M4, M6, M8 = {vm[2]}, {vm[3]}, "
           f"{vm[4]}; dim-3 max_t {all3}; {dt:.1f} s")
    assert ok


@pytest.mark.slow
def test_criterion_06_dim4(record):
    t0 = time.time()
    a7 = profile("two_a7_dim4")
    sp = profile("sp4_3_dim4")
    cl = profile("clifford_2")
    L = derived_series_limit(catalog.get_group("clifford_2").enumerate())
    core = (L.order(), is_perfect(L), moments(L, [3])[3])
    all4 = {n: profile(n)["max_t"] for n in present(4)}
    ok = (a7 is not None and sp is not None
          and [a7["moments"][t] for t in (2, 3, 4)] == [2, 6, 38] and sp["moments"][4] == 25
          and cl["order"] == 92160 and cl["max_t"] == 3 and core == (23040, True, 6)
          and all(m < 4 for m in all4.values()))
    dt = time.time() - t0
    record(6, ok, f"2.A7 M4, M6, M8 = {[a7['moments'][t] for t in (2, 3, 4)]}; Sp4(3) M8 = {sp['moments'][4]}; "
           f"Clifford order {cl['order']} max_t {cl['max_t']}; perfect core (order, perfect, M6) = {core}; "
           f"dim-4 max_t {all4}; {dt:.0f} s")
    assert ok


TABLE = [
    ("six_a7_dim6", 3, 21),
    ("two_m12_dim10", 3, 15),
    ("four1_l34_dim8", 3, 17),
    ("six_l34_2_dim6", 4, 56),
]


@pytest.mark.slow
@pytest.mark.parametrize("name,t,want", TABLE, ids=[r[0] for r in TABLE])
def test_criterion_07_table_lines(record, name, t, want):
    t0 = time.time()
    p = profile(name)
    haar = math.factorial(t)
    if p is None:
        record(7, "SKIPPED", f"{name}: no curated data file in {catalog.data_dir()}")
        pytest.skip(f"{name}: curated data not available")
    got = p["moments"][t]
    ok = p["verify"].ok and got == want
    record(7, ok, f"{name}: order {p['order']}, M_{2 * t} = {got} (expected {want}) vs Haar {haar}; "
           f"{time.time() - t0:.0f} s")
    assert ok


@pytest.mark.slow
def test_criterion_08_global(record):
    t0 = time.time()
    high = {n: profile(n)["max_t"] for n in present() if profile(n)["max_t"] >= 4}
    ok = high == {"sl2_5_dim2": 5}
    record(8, ok, f"entries with max_t >= 4 among {len(present())}: {high}; {time.time() - t0:.0f} s")
    assert ok


def test_criterion_09_symplectic(record):
    t0 = time.time()
    want = {3: {8, 24}, 5: {24, 120}, 7: {48, 336}, 11: {120, 1320}, 13: {2184}}
    found = {p: [c.order for c in symplectic.search_transitive_2dim(p)] for p in want}
    orders_ok = all(set(found[p]) == want[p] for p in want)
    required = ["sl2_9_in_sp4_3", "sl2_8_in_sp6_2", "su3_3_in_sp6_2", "sl2_13_in_sp6_3"]
    names = symplectic.witness_names()
    reports = {n: symplectic.verify_witness(n) for n in names}
    wit_ok = all(r in names for r in required) and all(r.ok for r in reports.values())
    dt = time.time() - t0
    record(9, orders_ok and wit_ok, f"transitive class orders {found}; "
           f"{sum(r.ok for r in reports.values())}/{len(reports)} witnesses verified; {dt:.0f} s")
    assert orders_ok and wit_ok


@pytest.mark.slow
def test_criterion_10_properties(record):
    t0 = time.time()
    failures = []
    for n in present():
        p = profile(n)
        d = p["dim"]
        haar = {t: haar_moment(d, t) for t in range(1, T_PROPS + 1)}
        mom = {t: p["moments"][t] for t in range(1, T_PROPS + 1)}
        eq = [mom[t] == haar[t] for t in range(1, T_PROPS + 1)]
        checks = {
            "verified": p["verify"].ok,
            "trace_conjugation": p["verify"].checks["trace_conjugation"],
            "integrality": all(isinstance(v, int) and v >= 0 for v in mom.values()),
            "lower_bound": all(mom[t] >= haar[t] for t in mom),
            "monotonicity": eq == sorted(eq, reverse=True),
            "scalar_extension": p["ext"]["moments"] == mom and p["ext"]["max_t"] == min(p["max_t"], T_PROPS)
                                and p["ext"]["order"] > p["order"],
            "m4_decomposition": mom[2] == p["sym_alt"][0] + 2 * p["sym_alt"][1] + p["sym_alt"][2],
            "m4_criterion": (mom[2] == 2) == (p["sym_alt"] == (1, 0, 1)),
        }
        failures += [(n, k) for k, v in checks.items() if not v]
    dt = time.time() - t0
    record(10, not failures, f"{len(present())} catalog entries, t <= {T_PROPS}, 8 properties each; "
           f"failures {failures}; {dt:.0f} s (includes closures shared with criteria 5-8)")
    assert not failures
