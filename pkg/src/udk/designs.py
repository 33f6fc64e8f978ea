"""Exact moments M_2t(G, V) of finite matrix groups and t-group certification.

The moment is ``(1/|G|) sum_g (tr g * tr g^-1)^t``.  Using ``tr g^-1`` rather
than the complex conjugate of ``tr g`` keeps the computation valid for
generator sets that are only unitarizable.  Every moment is an inner
product of characters, hence a nonnegative integer; anything else is a
defect and raises :class:`IntegralityViolation`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cyclo import CycNum
from .haar import haar_moment, mc_trace_powers
from .matrep import FiniteMatrixGroup, NotEnumerated


class IntegralityViolation(ArithmeticError):
    pass


def _require(G: FiniteMatrixGroup):
    if not G.enumerated:
        raise NotEnumerated(G.name)


def _as_count(value: CycNum, what: str) -> int:
    try:
        q = value.as_rational()
    except ValueError as exc:
        raise IntegralityViolation(f"{what} is not rational: {value}") from exc
    if q.denominator != 1 or q < 0:
        raise IntegralityViolation(f"{what} is not a nonnegative integer: {q}")
    return int(q)


def _pair_products(G: FiniteMatrixGroup) -> list[tuple[CycNum, int]]:
    vals = G.trace_values()
    return [(vals[a] * vals[b], c) for (a, b), c in sorted(G.trace_id_pairs().items())]


def moment(G: FiniteMatrixGroup, t: int) -> int:
    """Exact M_2t(G, V)."""
    _require(G)
    if t < 1:
        raise ValueError("t must be >= 1")
    return moments(G, [t])[t]


def moments(G: FiniteMatrixGroup, ts) -> dict[int, int]:
    _require(G)
    pairs = _pair_products(G)
    order = G.order()
    out = {}
    for t in ts:
        total = CycNum.rational(0, G.conductor)
        for p, c in pairs:
            total = total + (p ** t) * c
        out[t] = _as_count(total / order, f"M_{2 * t}({G.name})")
    return out


def is_unitary_t_group(G: FiniteMatrixGroup, t: int) -> bool:
    return moment(G, t) == haar_moment(G.dim, t)


@dataclass
class MomentRow:
    t: int
    group_moment: int
    haar_moment: int

    @property
    def equal(self) -> bool:
        return self.group_moment == self.haar_moment


@dataclass
class MomentReport:
    name: str
    dim: int
    order: int
    rows: list[MomentRow]
    max_t: int
    flags: dict[str, bool] = field(default_factory=dict)
    scalar_order: Optional[int] = None
    sym_alt: Optional[tuple[int, int, int]] = None
    mc: Optional[dict[int, tuple[float, float]]] = None

    def row(self, t: int) -> MomentRow:
        return next(r for r in self.rows if r.t == t)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "dim": str(self.dim),
            "order": str(self.order),
            "rows": [
                {"t": str(r.t), "group_moment": str(r.group_moment), "haar_moment": str(r.haar_moment), "equal": r.equal}
                for r in self.rows
            ],
            "max_t": str(self.max_t),
            "flags": dict(self.flags),
        }
        if self.scalar_order is not None:
            out["scalar_order"] = str(self.scalar_order)
        if self.sym_alt is not None:
            out["sym_alt"] = dict(zip(("mSS", "mSA", "mAA"), map(str, self.sym_alt)))
        if self.mc is not None:
            # floating point by nature; marked as such in the schema
            out["mc_haar"] = {str(t): {"mean_float": m, "stderr_float": s} for t, (m, s) in self.mc.items()}
        return out


def _build_report(G: FiniteMatrixGroup, t_cap: int) -> MomentReport:
    values = moments(G, range(1, t_cap + 1))
    rows = [MomentRow(t, values[t], haar_moment(G.dim, t)) for t in range(1, t_cap + 1)]
    equal = [r.equal for r in rows]
    lead = 0
    while lead < len(equal) and equal[lead]:
        lead += 1
    monotone = not any(equal[lead:])
    flags = {
        "integrality": True,
        "monotonicity": monotone,
        "lower_bound": all(r.group_moment >= r.haar_moment for r in rows),
    }
    return MomentReport(G.name, G.dim, G.order(), rows, lead, flags)


def max_t(G: FiniteMatrixGroup, t_cap: int = 8) -> tuple[int, MomentReport]:
    """Largest t <= t_cap with M_2t(G) equal to the Haar value (0 if none)."""
    _require(G)
    report = _build_report(G, t_cap)
    return report.max_t, report


def sym_alt_multiplicities(G: FiniteMatrixGroup) -> tuple[int, int, int]:
    """Inner products [S,S], [S,A], [A,A] for S = Sym^2 chi and A = Alt^2 chi."""
    _require(G)
    ids = G.trace_ids()
    inv = G.inverse_index()
    sq_ids, sq_vals = G.square_trace_ids()
    vals = G.trace_values()
    keyed = Counter(zip(ids.tolist(), ids[inv].tolist(), sq_ids.tolist(), sq_ids[inv].tolist()))
    half = Fraction(1, 2)
    acc = [CycNum.rational(0, G.conductor) for _ in range(3)]
    for (a, b, sa, sb), c in keyed.items():
        x, xi = vals[a], vals[b]
        s_g = (x * x + sq_vals[sa]) * half
        a_g = (x * x - sq_vals[sa]) * half
        s_gi = (xi * xi + sq_vals[sb]) * half
        a_gi = (xi * xi - sq_vals[sb]) * half
        acc[0] = acc[0] + s_g * s_gi * c
        acc[1] = acc[1] + s_g * a_gi * c
        acc[2] = acc[2] + a_g * a_gi * c
    order = G.order()
    mss, msa, maa = (_as_count(v / order, f"{lbl}({G.name})") for v, lbl in zip(acc, ("mSS", "mSA", "mAA")))
    return mss, msa, maa


def certify(
    G: FiniteMatrixGroup,
    t_cap: int = 8,
    *,
    mc_samples: Optional[int] = None,
    seed: int = 0,
    with_sym_alt: bool = False,
) -> MomentReport:
    G.enumerate()
    _, report = max_t(G, t_cap)
    report.scalar_order = G.scalar_order()
    if with_sym_alt:
        mss, msa, maa = report.sym_alt = sym_alt_multiplicities(G)
        report.flags["m4_decomposition"] = moment(G, 2) == mss + 2 * msa + maa
    if mc_samples:
        report.mc = mc_trace_powers(G.dim, range(1, t_cap + 1), mc_samples, seed)
    return report


__all__ = [
    "IntegralityViolation",
    "MomentReport",
    "MomentRow",
    "certify",
    "is_unitary_t_group",
    "max_t",
    "moment",
    "moments",
    "sym_alt_multiplicities",
]
