"""Matrices over cyclotomic fields and finite matrix groups.

A matrix is stored as an integer coefficient array ``num`` of shape
``(d, d, phi(n))`` together with one positive common denominator ``den``;
entry ``(i, j)`` is ``sum_k num[i, j, k] * zeta_n**k / den`` in the reduced
power basis.  Closure, inverses and commutators all work on batches of
these arrays, which keeps the exact arithmetic inside numpy integer
matmuls.  Coefficients are checked against int64 overflow before every
product; object (arbitrary precision) arrays take over when needed.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .cyclo import CycNum, euler_phi, mult_tensor

DEFAULT_CAP = 2_000_000
_INT64_SAFE = 2**62
_BATCH = 4096


class CapExceeded(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"closure exceeded cap of {cap} elements")
        self.cap = cap


class SingularGenerator(ValueError):
    pass


class NotEnumerated(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# single matrices


def _lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


class UMatrix:
    """Square matrix with entries in Q(zeta_n)."""

    __slots__ = ("dim", "conductor", "num", "den")

    def __init__(self, num: np.ndarray, den: int, conductor: int):
        self.dim = num.shape[0]
        self.conductor = conductor
        num, den = _normalize_one(num, den)
        self.num = num
        self.num.setflags(write=False)
        self.den = den

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], conductor: Optional[int] = None) -> "UMatrix":
        cells = [[c if isinstance(c, CycNum) else CycNum.rational(Fraction(c)) for c in row] for row in rows]
        d = len(cells)
        if any(len(row) != d for row in cells):
            raise ValueError("matrix is not square")
        n = conductor or _lcm_all(c.n for row in cells for c in row)
        f = euler_phi(n)
        cells = [[c.promote(n) for c in row] for row in cells]
        den = _lcm_all(q.denominator for row in cells for c in row for q in c.coeffs)
        num = np.empty((d, d, f), dtype=object)
        for i, row in enumerate(cells):
            for j, c in enumerate(row):
                num[i, j] = [int(q * den) for q in c.coeffs]
        return cls(_to_int(num), den, n)

    @classmethod
    def identity(cls, d: int, conductor: int = 1) -> "UMatrix":
        num = np.zeros((d, d, euler_phi(conductor)), dtype=np.int64)
        num[np.arange(d), np.arange(d), 0] = 1
        return cls(num, 1, conductor)

    @classmethod
    def scalar(cls, d: int, value: CycNum, conductor: Optional[int] = None) -> "UMatrix":
        zero = CycNum.rational(0, value.n)
        return cls.from_rows([[value if i == j else zero for j in range(d)] for i in range(d)], conductor)

    def promote(self, n: int) -> "UMatrix":
        if n == self.conductor:
            return self
        return UMatrix.from_rows(self.rows(), n)

    def entry(self, i: int, j: int) -> CycNum:
        return CycNum(self.conductor, [Fraction(int(v), self.den) for v in self.num[i, j]])

    def rows(self) -> list[list[CycNum]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def trace(self) -> CycNum:
        vec = self.num[np.arange(self.dim), np.arange(self.dim)].sum(axis=0)
        return CycNum(self.conductor, [Fraction(int(v), self.den) for v in vec])

    def numeric(self) -> np.ndarray:
        zeta = np.exp(2j * np.pi * np.arange(self.num.shape[2]) / self.conductor)
        return self.num.astype(np.float64) @ zeta / self.den

    def key(self) -> bytes:
        return _encode(self.num.reshape(-1), self.den)

    def is_scalar(self) -> bool:
        off = self.num.copy()
        diag = off[np.arange(self.dim), np.arange(self.dim)].copy()
        off[np.arange(self.dim), np.arange(self.dim)] = 0
        return not off.any() and bool((diag == diag[0]).all())

    def __matmul__(self, other: "UMatrix") -> "UMatrix":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        if other.conductor != self.conductor:
            n = math.lcm(self.conductor, other.conductor)
            return self.promote(n) @ other.promote(n)
        prod = batch_product(self.num[None], other.num[None], self.conductor)[0]
        return UMatrix(prod, self.den * other.den, self.conductor)

    def __eq__(self, other):
        if not isinstance(other, UMatrix):
            return NotImplemented
        if other.conductor != self.conductor:
            n = math.lcm(self.conductor, other.conductor)
            return self.promote(n).key() == other.promote(n).key()
        return self.key() == other.key()

    def __hash__(self):
        return hash((self.conductor, self.key()))

    def inverse(self) -> "UMatrix":
        """Gauss-Jordan elimination over the cyclotomic field."""
        d, n = self.dim, self.conductor
        a = self.rows()
        one, zero = CycNum.rational(1, n), CycNum.rational(0, n)
        inv = [[one if i == j else zero for j in range(d)] for i in range(d)]
        for col in range(d):
            cands = [r for r in range(col, d) if not a[r][col].is_zero()]
            if not cands:
                raise SingularGenerator("matrix is singular")
            # rational pivots keep the field inversions cheap
            piv = next((r for r in cands if a[r][col].is_rational()), cands[0])
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p = a[col][col].inverse()
            a[col] = [x * p for x in a[col]]
            inv[col] = [x * p for x in inv[col]]
            for r in range(d):
                if r != col and not a[r][col].is_zero():
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                    inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
        return UMatrix.from_rows(inv, n)

    def __repr__(self):
        return f"UMatrix(dim={self.dim}, conductor={self.conductor})"


# ---------------------------------------------------------------------------
# integer kernels


def _to_int(arr: np.ndarray) -> np.ndarray:
    if arr.dtype != object:
        return arr.astype(np.int64)
    flat = arr.reshape(-1)
    if all(abs(int(v)) < _INT64_SAFE for v in flat):
        return arr.astype(np.int64)
    return arr


def _normalize_one(num: np.ndarray, den: int) -> tuple[np.ndarray, int]:
    num = _to_int(np.asarray(num))
    g = math.gcd(int(np.gcd.reduce(np.abs(num).reshape(-1).astype(object)) if num.size else 0), int(den))
    if den < 0:
        g = -g
    if g != 1:
        num = num // g
        den = den // g
    return _to_int(num), int(den)


def _normalize_batch(P: np.ndarray, dens: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = P.shape[0]
    flat = P.reshape(n, -1)
    if P.dtype == object:
        g = np.array([math.gcd(math.gcd(*map(int, row)) if len(row) > 1 else int(row[0]), int(dv))
                      for row, dv in zip(flat, dens)], dtype=object)
    else:
        g = np.gcd(np.gcd.reduce(flat, axis=1), dens)
    shape = (n,) + (1,) * (P.ndim - 1)
    P = P // g.reshape(shape)
    dens = dens // g
    if P.dtype == object and all(abs(int(v)) < _INT64_SAFE for v in P.reshape(-1)) and \
            all(int(v) < _INT64_SAFE for v in dens):
        P, dens = P.astype(np.int64), dens.astype(np.int64)
    return P, dens


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.reshape(-1))
    return int(np.abs(a).max())


def _safe(a: np.ndarray, b: np.ndarray, terms: int) -> bool:
    return a.dtype != object and b.dtype != object and _maxabs(a) * _maxabs(b) * max(terms, 1) < _INT64_SAFE


def batch_product(X: np.ndarray, Y: np.ndarray, n: int) -> np.ndarray:
    """Numerators of X[k] @ Y[k] for stacked (N, d, d, f) numerator arrays."""
    T = mult_tensor(n)
    d, f = X.shape[1], X.shape[3]
    terms = d * f * f * int(np.abs(T).max())
    if not _safe(X, Y, terms):
        X, Y, T = X.astype(object), Y.astype(object), T.astype(object)
        return np.einsum("nija,njkb,abc->nikc", X, Y, T)
    XY = np.einsum("nija,njkb->nikab", X, Y)
    return np.tensordot(XY, T, axes=([3, 4], [0, 1]))


def right_operator(A: np.ndarray, n: int) -> np.ndarray:
    """R with X @ A == (X.reshape(N, d, d*f) @ R).reshape(N, d, d, f)."""
    T = mult_tensor(n)
    d, f = A.shape[0], A.shape[2]
    dt = object if A.dtype == object else np.int64
    return np.einsum("jkb,abc->jakc", A.astype(dt), T.astype(dt)).reshape(d * f, d * f)


def left_operator(A: np.ndarray, n: int) -> np.ndarray:
    """L with A @ X == (X^T-arranged) @ L.T; see :func:`apply_left`."""
    T = mult_tensor(n)
    d, f = A.shape[0], A.shape[2]
    dt = object if A.dtype == object else np.int64
    return np.einsum("ija,abc->icjb", A.astype(dt), T.astype(dt)).reshape(d * f, d * f)


def apply_right(X: np.ndarray, R: np.ndarray) -> np.ndarray:
    N, d, _, f = X.shape
    flat = X.reshape(N, d, d * f)
    if not _safe(flat, R, d * f):
        flat, R = flat.astype(object), R.astype(object)
    return (flat @ R).reshape(N, d, d, f)


def apply_left(L: np.ndarray, X: np.ndarray) -> np.ndarray:
    N, d, _, f = X.shape
    flat = X.transpose(0, 2, 1, 3).reshape(N, d, d * f)
    if not _safe(flat, L, d * f):
        flat, L = flat.astype(object), L.astype(object)
    out = (flat @ L.T).reshape(N, d, d, f)
    return out.transpose(0, 2, 1, 3)


_CODES = [(np.int8, 127), (np.int16, 32767), (np.int32, 2**31 - 1), (np.int64, 2**63 - 1)]


def _encode(flat: np.ndarray, den: int) -> bytes:
    m = _maxabs(flat)
    for code, (dt, lim) in enumerate(_CODES):
        if m <= lim and den <= 2**63 - 1:
            return bytes([code]) + int(den).to_bytes(8, "little") + flat.astype(dt).tobytes()
    # arbitrary precision fallback; text is still canonical
    return b"\xff" + repr((int(den), [int(v) for v in flat])).encode()


def _decode(key: bytes, shape: tuple[int, ...]) -> tuple[np.ndarray, int]:
    code = key[0]
    if code == 0xFF:
        den, vals = eval(key[1:].decode())  # noqa: S307 - produced by _encode only
        return np.array(vals, dtype=object).reshape(shape), den
    den = int.from_bytes(key[1:9], "little")
    arr = np.frombuffer(key, dtype=_CODES[code][0], offset=9).astype(np.int64).reshape(shape)
    return arr, den


def _encode_batch(P: np.ndarray, dens: np.ndarray) -> list[bytes]:
    n = P.shape[0]
    flat = P.reshape(n, -1)
    if P.dtype == object:
        return [_encode(row, int(dv)) for row, dv in zip(flat, dens)]
    m = np.abs(flat).max(axis=1) if flat.shape[1] else np.zeros(n, dtype=np.int64)
    casts = [flat.astype(dt) if (m <= lim).any() else None for dt, lim in _CODES]
    out = []
    for r in range(n):
        for code, (dt, lim) in enumerate(_CODES):
            if m[r] <= lim:
                out.append(bytes([code]) + int(dens[r]).to_bytes(8, "little") + casts[code][r].tobytes())
                break
    return out


def _trace_keys(P: np.ndarray, dens: np.ndarray) -> list[tuple[int, ...]]:
    d = P.shape[1]
    tr = P[:, np.arange(d), np.arange(d), :].sum(axis=1)
    if tr.dtype == object:
        g = np.array([math.gcd(*map(int, row), int(dv)) for row, dv in zip(tr, dens)], dtype=object)
    else:
        g = np.gcd(np.gcd.reduce(tr, axis=1), dens)
    tr = tr // g[:, None]
    dd = dens // g
    return [(int(dv),) + tuple(int(v) for v in row) for row, dv in zip(tr, dd)]


def trace_key_value(key: tuple[int, ...], n: int) -> CycNum:
    den = key[0]
    return CycNum(n, [Fraction(v, den) for v in key[1:]])


# ---------------------------------------------------------------------------
# groups


@dataclass
class FiniteMatrixGroup:
    """A finite matrix group given by generators; the element table is built lazily."""

    name: str
    generators: list[UMatrix]
    cap: int = DEFAULT_CAP
    dim: int = field(init=False)
    conductor: int = field(init=False)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("at least one generator is required")
        dims = {g.dim for g in self.generators}
        if len(dims) != 1:
            raise ValueError(f"generators have mixed dimensions {sorted(dims)}")
        self.dim = dims.pop()
        self.conductor = _lcm_all(g.conductor for g in self.generators)
        self.generators = [g.promote(self.conductor) for g in self.generators]
        self._keys: Optional[list[bytes]] = None
        self._index: Optional[dict[bytes, int]] = None
        self._parent = self._via = None
        self._levels: list[int] = []
        self._trace_ids = None
        self._trace_table: list[tuple[int, ...]] = []
        self._inv = None
        self._profile: Optional[Counter] = None
        self._gen_inverses: Optional[list[UMatrix]] = None
        self._sq_trace_ids = None

    # -- enumeration -----------------------------------------------------
    @property
    def enumerated(self) -> bool:
        return self._keys is not None

    def enumerate(self) -> "FiniteMatrixGroup":
        if self._keys is None:
            self._close()
        return self

    def _require(self):
        if self._keys is None:
            raise NotEnumerated(self.name)

    def _shape(self):
        return (self.dim, self.dim, euler_phi(self.conductor))

    def _close(self):
        n, cap = self.conductor, self.cap
        self._gen_inverses = [g.inverse() for g in self.generators]
        ident = UMatrix.identity(self.dim, n)
        keys = [ident.key()]
        index = {keys[0]: 0}
        parent, via = [-1], [-1]
        trace_ids = [0]
        trace_table = [_trace_keys(ident.num[None], np.array([1], dtype=np.int64))[0]]
        trace_lookup = {trace_table[0]: 0}
        ops = [right_operator(g.num, n) for g in self.generators]
        gden = [g.den for g in self.generators]
        levels = [0, 1]
        frontier = [0]
        while frontier:
            new = []
            for start in range(0, len(frontier), _BATCH):
                chunk = frontier[start:start + _BATCH]
                X, D = self._stack(chunk, keys)
                for gi, R in enumerate(ops):
                    P, Dn = _normalize_batch(apply_right(X, R), D * gden[gi])
                    pkeys = _encode_batch(P, Dn)
                    fresh = []
                    for r, k in enumerate(pkeys):
                        if k not in index:
                            index[k] = len(keys)
                            keys.append(k)
                            parent.append(chunk[r])
                            via.append(gi)
                            new.append(index[k])
                            fresh.append(r)
                            if len(keys) > cap:
                                raise CapExceeded(cap)
                    if fresh:
                        fr = np.array(fresh)
                        for tk in _trace_keys(P[fr], Dn[fr]):
                            tid = trace_lookup.get(tk)
                            if tid is None:
                                tid = trace_lookup[tk] = len(trace_table)
                                trace_table.append(tk)
                            trace_ids.append(tid)
            frontier = new
            if new:
                levels.append(len(keys))
        self._keys, self._index = keys, index
        self._parent = np.array(parent, dtype=np.int64)
        self._via = np.array(via, dtype=np.int64)
        self._levels = levels
        self._trace_ids = np.array(trace_ids, dtype=np.int64)
        self._trace_table = trace_table
        self._compute_inverses()

    def _stack(self, idx: Sequence[int], keys=None) -> tuple[np.ndarray, np.ndarray]:
        keys = self._keys if keys is None else keys
        shape = self._shape()
        arrs, dens = [], []
        for i in idx:
            a, dv = _decode(keys[i], shape)
            arrs.append(a)
            dens.append(dv)
        X = np.stack(arrs)
        obj = X.dtype == object or any(dv >= _INT64_SAFE for dv in dens)
        return X, np.array(dens, dtype=object if obj else np.int64)

    def _compute_inverses(self):
        # h = g * s  =>  h^-1 = s^-1 * g^-1, processed level by level
        n = self.conductor
        N = len(self._keys)
        inv = np.full(N, -1, dtype=np.int64)
        inv[0] = 0
        lops = [left_operator(g.num, n) for g in self._gen_inverses]
        lden = [g.den for g in self._gen_inverses]
        for lo, hi in zip(self._levels[1:-1], self._levels[2:]):
            members = np.arange(lo, hi)
            for gi in range(len(lops)):
                sel = members[self._via[members] == gi]
                for start in range(0, len(sel), _BATCH):
                    part = sel[start:start + _BATCH]
                    X, D = self._stack(inv[self._parent[part]])
                    P, Dn = _normalize_batch(apply_left(lops[gi], X), D * lden[gi])
                    for h, k in zip(part, _encode_batch(P, Dn)):
                        j = self._index.get(k)
                        if j is None:
                            raise ArithmeticError("inverse not found in closure; generators are not of finite order")
                        inv[h] = j
        self._inv = inv

    # -- element access --------------------------------------------------
    def __len__(self):
        self._require()
        return len(self._keys)

    def element(self, i: int) -> UMatrix:
        self._require()
        a, dv = _decode(self._keys[i], self._shape())
        return UMatrix(a, dv, self.conductor)

    def elements(self) -> Iterator[UMatrix]:
        for i in range(len(self)):
            yield self.element(i)

    def index_of(self, m: UMatrix) -> Optional[int]:
        self._require()
        if m.dim != self.dim:
            return None
        if self.conductor % m.conductor == 0:
            return self._index.get(m.promote(self.conductor).key())
        # m may still lie over a subfield of the group's field
        rows = [[c.minimal() for c in row] for row in m.rows()]
        if any(self.conductor % c.n for row in rows for c in row):
            return None
        return self._index.get(UMatrix.from_rows(rows, self.conductor).key())

    def __contains__(self, m: UMatrix) -> bool:
        return self.index_of(m) is not None

    def inverse_index(self) -> np.ndarray:
        self.enumerate()
        return self._inv

    def element_keys(self) -> list[bytes]:
        self.enumerate()
        return list(self._keys)

    # -- statistics -----------------------------------------------------
    def order(self) -> int:
        self.enumerate()
        return len(self._keys)

    def trace(self, i: int) -> CycNum:
        self._require()
        return trace_key_value(self._trace_table[self._trace_ids[i]], self.conductor)

    def trace_profile(self) -> Counter:
        """Counter mapping (tr g, tr g^-1) as CycNum pairs to multiplicities."""
        self.enumerate()
        if self._profile is None:
            pairs = Counter(zip(self._trace_ids.tolist(), self._trace_ids[self._inv].tolist()))
            vals = [trace_key_value(k, self.conductor) for k in self._trace_table]
            self._profile = Counter({(vals[a], vals[b]): c for (a, b), c in pairs.items()})
        return self._profile

    def trace_id_pairs(self) -> Counter:
        self.enumerate()
        return Counter(zip(self._trace_ids.tolist(), self._trace_ids[self._inv].tolist()))

    def trace_values(self) -> list[CycNum]:
        self.enumerate()
        return [trace_key_value(k, self.conductor) for k in self._trace_table]

    def trace_ids(self) -> np.ndarray:
        self.enumerate()
        return self._trace_ids

    def square_trace_ids(self) -> tuple[np.ndarray, list[CycNum]]:
        """Trace ids of g*g for every element, plus the value table they index."""
        self.enumerate()
        if self._sq_trace_ids is None:
            n = self.conductor
            lookup = {k: i for i, k in enumerate(self._trace_table)}
            table = list(self._trace_table)
            ids = np.empty(len(self._keys), dtype=np.int64)
            for start in range(0, len(self._keys), _BATCH):
                idx = range(start, min(start + _BATCH, len(self._keys)))
                X, D = self._stack(idx)
                P, Dn = _normalize_batch(batch_product(X, X, n), D * D)
                for i, tk in zip(idx, _trace_keys(P, Dn)):
                    tid = lookup.get(tk)
                    if tid is None:
                        tid = lookup[tk] = len(table)
                        table.append(tk)
                    ids[i] = tid
            self._sq_trace_ids = (ids, table)
        ids, table = self._sq_trace_ids
        return ids, [trace_key_value(k, self.conductor) for k in table]

    def scalar_indices(self) -> list[int]:
        self.enumerate()
        d = self.dim
        out = []
        for start in range(0, len(self._keys), _BATCH):
            idx = np.arange(start, min(start + _BATCH, len(self._keys)))
            X, _ = self._stack(idx)
            diag = X[:, np.arange(d), np.arange(d), :]
            off = X.copy()
            off[:, np.arange(d), np.arange(d), :] = 0
            mask = ~off.reshape(len(idx), -1).any(axis=1) & (diag == diag[:, :1]).all(axis=(1, 2))
            out.extend(idx[mask].tolist())
        return out

    def scalar_order(self) -> int:
        return len(self.scalar_indices())

    def element_orders(self) -> np.ndarray:
        """Order of every element, by repeated batched multiplication."""
        self.enumerate()
        n = self.conductor
        N = len(self._keys)
        orders = np.zeros(N, dtype=np.int64)
        for start in range(0, N, _BATCH):
            idx = np.arange(start, min(start + _BATCH, N))
            X, D = self._stack(idx)
            P, Dp = X, D
            live = np.arange(len(idx))
            k = 1
            while live.size:
                done = np.array([self._index.get(key) == 0 for key in _encode_batch(P, Dp)])
                orders[idx[live[done]]] = k
                keep = ~done
                live, P, Dp, X, D = live[keep], P[keep], Dp[keep], X[keep], D[keep]
                if not live.size:
                    break
                k += 1
                if k > N:
                    raise ArithmeticError("element order exceeds group order")
                P, Dp = _normalize_batch(batch_product(P, X, n), Dp * D)
        return orders

    def element_order_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_orders().tolist()).items()))

    # -- subgroup helpers ----------------------------------------------
    def commutators_with_generators(self) -> list[UMatrix]:
        """Distinct commutators s^-1 g^-1 s g for generators s and all elements g."""
        self.enumerate()
        n = self.conductor
        found: dict[bytes, None] = {}
        inv = self._inv
        N = len(self._keys)
        for s, s_inv in zip(self.generators, self._gen_inverses):
            Ls, Lsi = left_operator(s.num, n), left_operator(s_inv.num, n)
            for start in range(0, N, _BATCH):
                idx = np.arange(start, min(start + _BATCH, N))
                G, Dg = self._stack(idx)
                Gi, Dgi = self._stack(inv[idx])
                A, Da = _normalize_batch(apply_left(Ls, G), Dg * s.den)
                B, Db = _normalize_batch(batch_product(Gi, A, n), Dgi * Da)
                C, Dc = _normalize_batch(apply_left(Lsi, B), Db * s_inv.den)
                for k in _encode_batch(C, Dc):
                    found.setdefault(k, None)
        shape = self._shape()
        out = []
        for k in found:
            a, dv = _decode(k, shape)
            out.append(UMatrix(a, dv, n))
        return out


def closure(generators: Sequence[UMatrix], cap: int = DEFAULT_CAP, name: str = "group") -> FiniteMatrixGroup:
    if cap < 1:
        raise ValueError("cap must be positive")
    return FiniteMatrixGroup(name, list(generators), cap=cap).enumerate()


def group_order(G: FiniteMatrixGroup) -> int:
    G._require()
    return G.order()


def trace_profile(G: FiniteMatrixGroup) -> Counter:
    G._require()
    return G.trace_profile()


def scalar_order(G: FiniteMatrixGroup) -> int:
    G._require()
    return G.scalar_order()


def element_order_histogram(G: FiniteMatrixGroup) -> dict[int, int]:
    G._require()
    return G.element_order_histogram()


def generated_subgroup(candidates: Sequence[UMatrix], dim: int, conductor: int, cap: int, name: str) -> FiniteMatrixGroup:
    """Subgroup generated by ``candidates``, adding only elements not yet covered."""
    gens: list[UMatrix] = []
    H = FiniteMatrixGroup(name, [UMatrix.identity(dim, conductor)], cap=cap).enumerate()
    for c in candidates:
        if H.index_of(c) is None:
            gens.append(c)
            H = FiniteMatrixGroup(name, list(gens), cap=cap).enumerate()
    return H


def derived_subgroup(G: FiniteMatrixGroup) -> FiniteMatrixGroup:
    G._require()
    comms = G.commutators_with_generators()
    return generated_subgroup(comms, G.dim, G.conductor, G.cap, f"[{G.name},{G.name}]")


def derived_series_limit(G: FiniteMatrixGroup) -> FiniteMatrixGroup:
    G._require()
    cur = G
    while True:
        nxt = derived_subgroup(cur)
        if nxt.order() == cur.order():
            return cur
        cur = nxt


def is_perfect(G: FiniteMatrixGroup) -> bool:
    return derived_subgroup(G).order() == G.order()
