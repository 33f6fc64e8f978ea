"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis ``1, z, ..., z^(phi(n)-1)`` after
reduction modulo the n-th cyclotomic polynomial, which makes the
representation canonical for a fixed conductor.
"""
from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

Rational = Union[int, Fraction]


class ZeroConductor(ValueError):
    pass


class NotRational(ValueError):
    pass


_lock = threading.RLock()


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    assert not any(num[: len(den) - 1]), "inexact division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ZeroConductor(n)
    with _lock:
        poly = [-1] + [0] * (n - 1) + [1]
        for d in _divisors(n)[:-1]:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def power_table(n: int) -> np.ndarray:
    """Row k holds the reduced coordinates of zeta_n^k, 0 <= k < n (int64)."""
    phi_poly = cyclotomic_poly(n)
    f = len(phi_poly) - 1
    table = np.zeros((n, f), dtype=np.int64)
    cur = [1] + [0] * (f - 1)
    for k in range(n):
        table[k] = cur
        # multiply by x and reduce with the monic relation
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi_poly[:-1])]
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def mult_tensor(n: int) -> np.ndarray:
    """T[a, b, c]: coordinate c of z^a * z^b in the reduced basis."""
    f = euler_phi(n)
    tab = power_table(n)
    idx = (np.arange(f)[:, None] + np.arange(f)[None, :]) % n
    out = tab[idx]
    out.setflags(write=False)
    return out


def reduce_exponents(n: int, coeffs_by_exp: np.ndarray) -> np.ndarray:
    """Reduce a length-n vector sum c_k z^k into the power basis (exact ints/objects)."""
    return coeffs_by_exp @ power_table(n).astype(coeffs_by_exp.dtype)


class CycNum:
    """Immutable element of Q(zeta_n) in the reduced power basis."""

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs: Sequence[Rational]):
        if n < 1:
            raise ZeroConductor(n)
        f = euler_phi(n)
        if len(coeffs) != f:
            raise ValueError(f"expected {f} coefficients for conductor {n}, got {len(coeffs)}")
        self.n = n
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Rational, int]]) -> "CycNum":
        if n < 1:
            raise ZeroConductor(n)
        tab = power_table(n)
        acc = [Fraction(0)] * tab.shape[1]
        for c, e in terms:
            c = Fraction(c)
            if not c:
                continue
            row = tab[e % n]
            for k in np.flatnonzero(row):
                acc[k] += c * int(row[k])
        return cls(n, acc)

    @classmethod
    def rational(cls, q: Rational, n: int = 1) -> "CycNum":
        return cls.from_terms(n, [(q, 0)])

    @classmethod
    def root(cls, n: int, k: int = 1) -> "CycNum":
        return cls.from_terms(n, [(1, k)])

    # conductor handling ----------------------------------------------
    def promote(self, m: int) -> "CycNum":
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"conductor {self.n} does not divide {m}")
        step = m // self.n
        return CycNum.from_terms(m, [(c, step * k) for k, c in enumerate(self.coeffs) if c])

    def galois(self, k: int) -> "CycNum":
        """Apply zeta_n -> zeta_n^k (k coprime to n)."""
        if math.gcd(k, self.n) != 1:
            raise ValueError(f"{k} is not a unit mod {self.n}")
        return CycNum.from_terms(self.n, [(c, k * j) for j, c in enumerate(self.coeffs) if c])

    def minimal(self) -> "CycNum":
        """The same number written over the smallest conductor containing it."""
        if self.is_rational():
            return CycNum(1, [self.coeffs[0]])
        for m in _divisors(self.n)[:-1]:
            if m % 4 == 2:
                continue  # Q(zeta_m) == Q(zeta_{m/2})
            units = [k for k in range(1, self.n) if (k - 1) % m == 0 and math.gcd(k, self.n) == 1]
            if all(self.galois(k) == self for k in units):
                return _demote(self, m)
        return self

    # predicates / views ----------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise NotRational(str(self))
        return self.coeffs[0]

    def numeric(self) -> complex:
        return sum(
            (float(c) * cmath.exp(2j * math.pi * k / self.n) for k, c in enumerate(self.coeffs) if c),
            0j,
        )

    def conj(self) -> "CycNum":
        return self.galois(-1 % self.n) if self.n > 2 else self

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> tuple["CycNum", "CycNum"]:
        if not isinstance(other, CycNum):
            if isinstance(other, (int, Fraction)):
                return self, CycNum.rational(other, self.n)
            return NotImplemented, NotImplemented
        if other.n == self.n:
            return self, other
        m = math.lcm(self.n, other.n)
        return self.promote(m), other.promote(m)

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.n, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return CycNum(a.n, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.n, [c * other for c in self.coeffs])
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        n = a.n
        tab = power_table(n)
        acc = [Fraction(0)] * len(a.coeffs)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if not y:
                    continue
                row = tab[(i + j) % n]
                xy = x * y
                for k in np.flatnonzero(row):
                    acc[k] += xy * int(row[k])
        return CycNum(n, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNum.rational(1, self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CycNum.rational(1 / self.coeffs[0], self.n)
        # x * prod of the other Galois conjugates is the (rational) norm
        others = [k for k in range(2, self.n) if math.gcd(k, self.n) == 1]
        prod = CycNum.rational(1, self.n)
        for k in others:
            prod = prod * self.galois(k)
        norm = (self * prod).as_rational()
        return prod * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.n, [c / other for c in self.coeffs])
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        if self.n == other.n:
            return self.coeffs == other.coeffs
        a, b = self._coerce(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            m = self.minimal()
            self._hash = hash(m.coeffs[0]) if m.n == 1 else hash((m.n, m.coeffs))
        return self._hash

    def __repr__(self):
        return f"CycNum({self.n}, {render(self)!r})"

    def __str__(self):
        return render(self)


def _demote(x: CycNum, m: int) -> CycNum:
    """Express x (known to lie in Q(zeta_m)) over conductor m."""
    f = euler_phi(m)
    step = x.n // m
    # column k = coordinates of zeta_m^k inside Q(zeta_n)
    cols = [CycNum.root(x.n, step * k).coeffs for k in range(f)]
    rows = [[cols[k][r] for k in range(f)] + [x.coeffs[r]] for r in range(len(x.coeffs))]
    sol = _solve_rational(rows, f)
    return CycNum(m, sol)


def _solve_rational(rows: list[list[Fraction]], nvars: int) -> list[Fraction]:
    rows = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        raise ValueError("inconsistent system")
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol


def render(x: CycNum) -> str:
    """Text form accepted by :func:`udk.fileformat.parse_entry`."""
    parts = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if k == 0:
            body = str(mag)
        else:
            root = f"z{x.n}" if k == 1 else f"z{x.n}^{k}"
            body = root if mag == 1 else f"{mag}*{root}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# functional aliases mirroring the operation names used across the package
def cyc_from_terms(n: int, terms: Iterable[tuple[Rational, int]]) -> CycNum:
    return CycNum.from_terms(n, terms)


def cyc_add(x: CycNum, y: CycNum) -> CycNum:
    return x + y


def cyc_mul(x: CycNum, y: CycNum) -> CycNum:
    return x * y


def cyc_neg(x: CycNum) -> CycNum:
    return -x


def cyc_conj(x: CycNum) -> CycNum:
    return x.conj()


def cyc_as_rational(x: CycNum) -> Fraction:
    return x.as_rational()


def cyc_numeric(x: CycNum) -> complex:
    return x.numeric()
