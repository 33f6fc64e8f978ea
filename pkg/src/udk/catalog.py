"""Concrete finite subgroups of U_d: built-in constructions and curated data.

Built-in groups are assembled from exact generators here.  Curated groups
are read from group files in the data directory (``UDK_DATA_DIR`` overrides
it) and are never trusted: closure order, scalar order and every populated
moment expectation are recomputed on verification.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from .cyclo import CycNum
from .designs import max_t as _max_t
from .designs import moments as _moments
from .fileformat import GroupFile, group_file_from, load_group_file, parse_entry, save_group_file
from .matrep import DEFAULT_CAP, FiniteMatrixGroup, UMatrix


class TooLarge(ValueError):
    pass


class UnknownName(KeyError):
    pass


class DataMissing(FileNotFoundError):
    pass


class VerificationFailed(AssertionError):
    def __init__(self, name: str, prop: str, expected, computed):
        super().__init__(f"{name}: {prop} expected {expected}, computed {computed}")
        self.name = name
        self.prop = prop
        self.expected = expected
        self.computed = computed


def data_dir() -> Path:
    env = os.environ.get("UDK_DATA_DIR")
    return Path(env) if env else Path(str(resources.files("udk") / "data"))


# ---------------------------------------------------------------------------
# small helpers


def mat(rows, n: int) -> UMatrix:
    """Matrix from entry strings (or ints) in the file grammar."""
    return UMatrix.from_rows([[parse_entry(str(e), n) for e in row] for row in rows], n)


def kron(A: UMatrix, B: UMatrix) -> UMatrix:
    n = math.lcm(A.conductor, B.conductor)
    a, b = A.promote(n).rows(), B.promote(n).rows()
    da, db = len(a), len(b)
    rows = [[a[i // db][j // db] * b[i % db][j % db] for j in range(da * db)] for i in range(da * db)]
    return UMatrix.from_rows(rows, n)


def kron_all(mats) -> UMatrix:
    return reduce(kron, mats)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def clock_shift(p: int) -> tuple[UMatrix, UMatrix]:
    """Shift X|j> = |j+1> and clock Z|j> = zeta_p^j |j>."""
    zero, one = CycNum.rational(0, p), CycNum.rational(1, p)
    X = [[one if i == (j + 1) % p else zero for j in range(p)] for i in range(p)]
    Z = [[CycNum.root(p, i) if i == j else zero for j in range(p)] for i in range(p)]
    return UMatrix.from_rows(X, p), UMatrix.from_rows(Z, p)


# ---------------------------------------------------------------------------
# built-in constructions


def extraspecial_pauli(p: int, a: int) -> FiniteMatrixGroup:
    """p^(1+2a) in its faithful irreducible of degree p^a (p = 2: with i*I adjoined)."""
    if not _is_prime(p) or a < 1:
        raise ValueError("need a prime p and a >= 1")
    if p ** a > 16:
        raise TooLarge(f"p^a = {p ** a} > 16")
    X, Z = clock_shift(p)
    n = 4 if p == 2 else p
    X, Z = X.promote(n), Z.promote(n)
    I = UMatrix.identity(p, n)
    gens = []
    for k in range(a):
        for g in (X, Z):
            gens.append(kron_all([g if j == k else I for j in range(a)]))
    if p == 2:
        gens.append(UMatrix.scalar(2 ** a, CycNum.root(4, 1), 4))
    return FiniteMatrixGroup(f"pauli_{p}_{a}", gens)


def q8() -> FiniteMatrixGroup:
    iX = mat([[0, "z4"], ["z4", 0]], 4)
    iZ = mat([["z4", 0], [0, "-z4"]], 4)
    return FiniteMatrixGroup("q8", [iX, iZ])


_H = [["1/2*z8 - 1/2*z8^3", "1/2*z8 - 1/2*z8^3"], ["1/2*z8 - 1/2*z8^3", "-1/2*z8 + 1/2*z8^3"]]


def clifford_group(a: int) -> FiniteMatrixGroup:
    if a not in (1, 2):
        raise ValueError("clifford_group is built for a = 1, 2")
    H = mat(_H, 8)
    S = mat([[1, 0], [0, "z8^2"]], 8)
    if a == 1:
        return FiniteMatrixGroup("clifford_1", [H, S])
    I = UMatrix.identity(2, 8)
    CZ = mat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]], 8)
    gens = [kron(H, I), kron(I, H), kron(S, I), kron(I, S), CZ]
    return FiniteMatrixGroup("clifford_2", gens)


def qutrit_normalizer() -> FiniteMatrixGroup:
    X, Z = clock_shift(3)
    # 1/sqrt(-3) with sqrt(-3) = 1 + 2*z3, i.e. -(1 + 2*z3)/3
    s = parse_entry("-1/3 - 2/3*z3", 3)
    F = UMatrix.from_rows([[s * CycNum.root(3, j * k) for k in range(3)] for j in range(3)], 3)
    P = mat([[1, 0, 0], [0, 1, 0], [0, 0, "z3"]], 3)
    return FiniteMatrixGroup("qutrit_normalizer", [X, Z, F, P])


def _quaternion(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> UMatrix:
    """a + b*i + c*j + d*k as [[a + b*I, c + d*I], [-c + d*I, a - b*I]]."""
    i = CycNum.root(4, 1)
    return UMatrix.from_rows([[a + b * i, c + d * i], [-c + d * i, a - b * i]])


def sl2_3_dim2() -> FiniteMatrixGroup:
    iX = mat([[0, "z4"], ["z4", 0]], 4)
    iZ = mat([["z4", 0], [0, "-z4"]], 4)
    h = CycNum.rational(Fraction(1, 2))
    # (-1 + i + j + k)/2 has order 3 and determinant 1
    w = _quaternion(-h, h, h, h)
    return FiniteMatrixGroup("sl2_3_dim2", [iX, iZ, w])


def sl2_5_dim2() -> FiniteMatrixGroup:
    h = Fraction(1, 2)
    phi = parse_entry("1 + z5 + z5^4")
    phi_inv = parse_entry("z5 + z5^4")
    zero = CycNum.rational(0)
    i_ = _quaternion(zero, CycNum.rational(1), zero, zero)
    j_ = _quaternion(zero, zero, CycNum.rational(1), zero)
    # icosian (phi + i + phi^-1 j)/2
    t = _quaternion(phi * h, CycNum.rational(h), phi_inv * h, zero)
    return FiniteMatrixGroup("sl2_5_dim2", [i_.promote(20), j_.promote(20), t.promote(20)])


# ---------------------------------------------------------------------------
# registry


@dataclass
class CatalogEntry:
    name: str
    kind: str  # "built-in" | "curated"
    dim: int
    expected: dict = field(default_factory=dict)
    provenance: str = ""
    builder: Optional[Callable[[], FiniteMatrixGroup]] = field(default=None, repr=False)
    cap: Optional[int] = None

    def group(self, cap: Optional[int] = None) -> FiniteMatrixGroup:
        if self.kind == "built-in":
            G = self.builder()
        else:
            G = _curated_file(self.name).group()
        G.cap = cap or self.cap or G.cap
        return G

    def summary(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "dim": str(self.dim)}
        for k in ("order", "scalar_order", "max_t"):
            if k in self.expected:
                out[k] = str(self.expected[k])
        return out


def _pauli_expected(p, a):
    # nonzero traces live on the center only
    z = 4 if p == 2 else p
    order = z * p ** (2 * a)
    return {
        "order": order,
        "scalar_order": z,
        "moments": {str(t): p ** (2 * a * (t - 1)) for t in (1, 2, 3)},
        "max_t": 1,
    }


_BUILTIN: dict[str, tuple[Callable[[], FiniteMatrixGroup], int, dict, str]] = {
    "q8": (q8, 2, {"order": 8, "scalar_order": 2, "moments": {"1": 1, "2": 4, "3": 16}, "max_t": 1},
           "quaternion group {+-1, +-iX, +-iZ, +-iXZ}"),
    "pauli_2_1": (lambda: extraspecial_pauli(2, 1), 2, _pauli_expected(2, 1), "C4 * 2^(1+2) on one qubit"),
    "pauli_2_2": (lambda: extraspecial_pauli(2, 2), 4, _pauli_expected(2, 2), "C4 * 2^(1+4) on two qubits"),
    "pauli_3_1": (lambda: extraspecial_pauli(3, 1), 3, _pauli_expected(3, 1), "3^(1+2)_+ clock and shift"),
    "clifford_1": (lambda: clifford_group(1), 2,
                   {"order": 192, "scalar_order": 8, "moments": {"1": 1, "2": 2, "3": 5, "4": 15}, "max_t": 3},
                   "single-qubit Clifford group <H, S>"),
    "clifford_2": (lambda: clifford_group(2), 4,
                   {"order": 92160, "scalar_order": 8, "moments": {"1": 1, "2": 2, "3": 6}, "max_t": 3},
                   "two-qubit Clifford group <H, S, CZ>"),
    "qutrit_normalizer": (qutrit_normalizer, 3,
                          {"order": 648, "scalar_order": 3, "moments": {"1": 1, "2": 2, "3": 7, "4": 40}, "max_t": 2},
                          "3^(1+2) with Fourier and phase gates"),
    "sl2_3_dim2": (sl2_3_dim2, 2,
                   {"order": 24, "scalar_order": 2, "moments": {"1": 1, "2": 2, "3": 6}, "max_t": 2},
                   "binary tetrahedral group, Q8 plus an order-3 unit quaternion"),
    "sl2_5_dim2": (sl2_5_dim2, 2,
                   {"order": 120, "scalar_order": 2, "moments": {"1": 1, "2": 2, "3": 5, "4": 14, "5": 42},
                    "max_t": 5},
                   "binary icosahedral group from icosians over Q(zeta_20)"),
}

CURATED = (
    "sl3_2_dim3",
    "valentiner_3a6_dim3",
    "two_a7_dim4",
    "sp4_3_dim4",
    "g29_dim4",
    "g32_dim4",
    "six_a7_dim6",
    "four1_l34_dim8",
    "two_m12_dim10",
    "six_l34_2_dim6",
)


def _curated_file(name: str) -> GroupFile:
    path = data_dir() / f"{name}.json"
    if not path.exists():
        raise DataMissing(str(path))
    return load_group_file(path)


def entry(name: str) -> CatalogEntry:
    if name in _BUILTIN:
        fn, d, exp, prov = _BUILTIN[name]
        return CatalogEntry(name, "built-in", d, dict(exp), prov, fn)
    if name in CURATED:
        gf = _curated_file(name)
        return CatalogEntry(name, "curated", gf.dimension, dict(gf.expected), gf.provenance,
                            cap=gf.expected.get("cap"))
    raise UnknownName(name)


def names(include_missing: bool = False) -> list[str]:
    out = list(_BUILTIN)
    for n in CURATED:
        if include_missing or (data_dir() / f"{n}.json").exists():
            out.append(n)
    return out


def list_catalog() -> list[CatalogEntry]:
    return [entry(n) for n in names()]


def get_group(name: str, cap: Optional[int] = None) -> FiniteMatrixGroup:
    return entry(name).group(cap)


def curated(name: str, cap: Optional[int] = None) -> FiniteMatrixGroup:
    """Load, close and verify a curated group."""
    if name not in CURATED:
        raise UnknownName(name)
    G = get_group(name, cap)
    verify(name, G)
    return G


def emit(name: str, path) -> Path:
    e = entry(name)
    if e.kind == "curated":
        gf = _curated_file(name)
    else:
        gf = group_file_from(e.builder(), e.expected, e.provenance)
    return save_group_file(gf, path)


@dataclass
class VerifyReport:
    name: str
    order: int
    scalar_order: int
    moments: dict[int, int]
    max_t: Optional[int]
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def verify(name: str, G: Optional[FiniteMatrixGroup] = None, strict: bool = True,
           cap: Optional[int] = None) -> VerifyReport:
    """Recompute every populated expectation; raise VerificationFailed on mismatch if strict."""
    e = entry(name)
    if G is None:
        G = e.group(cap)
    G.enumerate()
    exp = e.expected
    computed: dict[str, object] = {"order": G.order(), "scalar_order": G.scalar_order()}
    want_t = [int(t) for t in exp.get("moments", {})]
    mt = None
    if "max_t" in exp:
        mt, report = _max_t(G, max(int(exp["max_t"]) + 1, max(want_t, default=1)))
        mom = {r.t: r.group_moment for r in report.rows}
    else:
        mom = _moments(G, want_t) if want_t else {}
    computed["max_t"] = mt
    checks = {}
    failure = None
    for key in ("order", "scalar_order", "max_t"):
        if key in exp:
            checks[key] = computed[key] == int(exp[key])
            if not checks[key] and failure is None:
                failure = VerificationFailed(name, key, exp[key], computed[key])
    # tr(g^-1) = conj(tr g) holds for every element of a finite group
    checks["trace_conjugation"] = all(b == a.conj() for a, b in G.trace_profile())
    if not checks["trace_conjugation"] and failure is None:
        failure = VerificationFailed(name, "trace_conjugation", True, False)
    for t, v in sorted(exp.get("moments", {}).items(), key=lambda kv: int(kv[0])):
        ok = mom[int(t)] == int(v)
        checks[f"M{2 * int(t)}"] = ok
        if not ok and failure is None:
            failure = VerificationFailed(name, f"moment t={t}", v, mom[int(t)])
    if strict and failure is not None:
        raise failure
    return VerifyReport(name, G.order(), G.scalar_order(), mom, mt, checks)
