"""Symplectic groups over F_p: orbits on nonzero vectors and transitive subgroups.

Matrices are small int64 arrays reduced mod p.  Vectors of F_p^m are coded
as integers with coordinate 0 as the least significant base-p digit.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .matrep import CapExceeded

SUPPORTED_PRIMES = (3, 5, 7, 11, 13)
DEFAULT_CAP = 2_000_000


class NotSymplectic(ValueError):
    pass


class UnsupportedPrime(ValueError):
    pass


class UnknownWitness(KeyError):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


def standard_form(n: int, p: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]] mod p."""
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    J[:n, n:] = np.eye(n, dtype=np.int64)
    J[n:, :n] = (-np.eye(n, dtype=np.int64)) % p
    return J


def mat_inv_mod(A: np.ndarray, p: int) -> np.ndarray:
    m = A.shape[0]
    M = np.concatenate([np.asarray(A, dtype=np.int64) % p, np.eye(m, dtype=np.int64)], axis=1)
    for c in range(m):
        piv = next((r for r in range(c, m) if M[r, c]), None)
        if piv is None:
            raise ValueError("singular matrix mod p")
        M[[c, piv]] = M[[piv, c]]
        M[c] = (M[c] * pow(int(M[c, c]), -1, p)) % p
        for r in range(m):
            if r != c and M[r, c]:
                M[r] = (M[r] - M[r, c] * M[c]) % p
    return M[:, m:]


def preserves(g: np.ndarray, J: np.ndarray, p: int) -> bool:
    return bool(np.array_equal((g.T @ J @ g) % p, J % p))


def to_standard_form(gens, form: np.ndarray, p: int) -> list[np.ndarray]:
    """Conjugate generators preserving ``form`` into ones preserving the standard J.

    Builds a symplectic basis e_1..e_n, f_1..f_n of ``form`` (B(e_i, f_j) = delta_ij)
    and rewrites every generator in it.
    """
    F = np.asarray(form, dtype=np.int64) % p
    m = F.shape[0]
    if m % 2 or not np.array_equal(F, (-F.T) % p) or np.any(np.diag(F)):
        raise NotSymplectic("form is not alternating")
    B = lambda u, v: int(u @ F @ v) % p  # noqa: E731
    pool = [np.eye(m, dtype=np.int64)[i] for i in range(m)]
    es, fs = [], []
    while pool:
        e = pool.pop(0)
        k = next((i for i, v in enumerate(pool) if B(e, v)), None)
        if k is None:
            if np.any(e):
                raise NotSymplectic("form is degenerate")
            continue
        f = pool.pop(k)
        f = (f * pow(B(e, f), -1, p)) % p
        es.append(e)
        fs.append(f)
        # project the rest onto the orthogonal complement of <e, f>
        pool = [(v - B(v, f) * e + B(v, e) * f) % p for v in pool]
        pool = [v for v in pool if np.any(v)]
    if 2 * len(es) != m:
        raise NotSymplectic("form is degenerate")
    P = np.stack(es + fs, axis=1) % p  # columns are the new basis
    Pi = mat_inv_mod(P, p)
    out = [(Pi @ np.asarray(g, dtype=np.int64) @ P) % p for g in gens]
    J = standard_form(m // 2, p)
    assert np.array_equal((P.T @ F @ P) % p, J)
    return out


@dataclass
class SympGroup:
    p: int
    n: int
    generators: list
    name: str = ""
    form: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        m = 2 * self.n
        self.form = standard_form(self.n, self.p)
        gens = []
        for k, g in enumerate(self.generators):
            g = np.asarray(g, dtype=np.int64) % self.p
            if g.shape != (m, m):
                raise ValueError(f"generator {k} is not {m}x{m}")
            if not preserves(g, self.form, self.p):
                raise NotSymplectic(f"generator {k} does not preserve the form")
            g.setflags(write=False)
            gens.append(g)
        self.generators = gens
        self._order = None

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def nvectors(self) -> int:
        return self.p ** self.dim - 1

    def permutations(self) -> list[np.ndarray]:
        """Action of each generator on all p^(2n) vector codes."""
        vecs = all_vectors(self.p, self.dim)
        w = self.p ** np.arange(self.dim, dtype=np.int64)
        return [((vecs @ g.T) % self.p) @ w for g in self.generators]

    def order(self, cap: int = DEFAULT_CAP) -> int:
        if self._order is None:
            self._order = len(closure_mod_p(self.generators, self.p, cap))
        return self._order


@lru_cache(maxsize=16)
def all_vectors(p: int, m: int) -> np.ndarray:
    codes = np.arange(p ** m, dtype=np.int64)
    return np.stack([(codes // p ** i) % p for i in range(m)], axis=1)


def orbits(H: SympGroup) -> list[int]:
    """Sorted orbit sizes on the nonzero vectors."""
    perms = H.permutations()
    size = H.p ** H.dim
    # union-find over vector codes, vectorized by repeated label propagation
    label = np.arange(size, dtype=np.int64)
    while True:
        new = label.copy()
        for pi in perms:
            np.minimum.at(new, pi, label)
            new = np.minimum(new, new[pi])
        new = new[new]
        if np.array_equal(new, label):
            break
        label = new
    sizes = Counter(label[1:].tolist())
    out = sorted(sizes.values())
    assert sum(out) == H.nvectors
    return out


def is_transitive(H: SympGroup) -> bool:
    return orbits(H) == [H.nvectors]


@dataclass
class TransitivityCertificate:
    order: int
    nvectors: int

    @property
    def index_divides(self) -> bool:
        return self.order % self.nvectors == 0


def transitivity_certificate(H: SympGroup, cap: int = DEFAULT_CAP) -> Optional[TransitivityCertificate]:
    if not is_transitive(H):
        return None
    cert = TransitivityCertificate(H.order(cap), H.nvectors)
    if not cert.index_divides:
        raise AssertionError(f"transitive group of order {cert.order} on {cert.nvectors} vectors")
    return cert


def _keys(X: np.ndarray) -> list[bytes]:
    flat = X.reshape(len(X), -1).astype(np.int8 if X.max(initial=0) < 127 else np.int16)
    return [r.tobytes() for r in flat]


def closure_mod_p(gens, p: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """All elements of <gens> mod p, identity first, in BFS order."""
    gens = [np.asarray(g, dtype=np.int64) % p for g in gens]
    m = gens[0].shape[0]
    ident = np.eye(m, dtype=np.int64)[None]
    seen = {_keys(ident)[0]}
    blocks = [ident]
    frontier = ident
    while len(frontier):
        cand = np.concatenate([(frontier @ g) % p for g in gens])
        fresh = []
        for k, key in enumerate(_keys(cand)):
            if key not in seen:
                seen.add(key)
                fresh.append(k)
        if len(seen) > cap:
            raise CapExceeded(cap)
        frontier = cand[fresh]
        if len(frontier):
            blocks.append(frontier)
    return np.concatenate(blocks)


# ---------------------------------------------------------------------------
# subgroup search in Sp_2(p) = SL_2(p)


class _Sp2:
    """Sp_2(p) for a given form, with Cayley and conjugation tables."""

    def __init__(self, p: int, form: Optional[np.ndarray] = None):
        self.p = p
        self.form = standard_form(1, p) if form is None else np.asarray(form, dtype=np.int64) % p
        F = self.form
        if F[0, 0] or F[1, 1] or (F[0, 1] + F[1, 0]) % p or F[0, 1] == 0:
            raise NotSymplectic("not a nondegenerate alternating 2x2 form")
        r = np.arange(p)
        a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
        mats = np.stack([a, b, c, d], axis=1).reshape(-1, 2, 2)
        ok = np.all(((np.transpose(mats, (0, 2, 1)) @ F @ mats) % p) == F, axis=(1, 2))
        mats = mats[ok]
        # identity first for readability of indices
        ident = np.all(mats == np.eye(2, dtype=np.int64), axis=(1, 2))
        mats = np.concatenate([mats[ident], mats[~ident]])
        self.mats = mats
        N = len(mats)
        code = lambda X: ((X[..., 0, 0] * p + X[..., 0, 1]) * p + X[..., 1, 0]) * p + X[..., 1, 1]  # noqa: E731
        lookup = np.full(p ** 4, -1, dtype=np.int64)
        lookup[code(mats)] = np.arange(N)
        self.mul = np.empty((N, N), dtype=np.int32)
        for i in range(N):
            self.mul[i] = lookup[code((mats[i] @ mats) % p)]
        self.inv = np.argmax(self.mul == 0, axis=1).astype(np.int32)
        # conj[x, g] = x g x^-1
        self.conj = np.empty((N, N), dtype=np.int32)
        for x in range(N):
            self.conj[x] = self.mul[self.mul[x], self.inv[x]]
        self.orders = self._element_orders()
        # image of the first basis vector, coded as x0 + p*x1
        self.e1_image = (mats[:, 0, 0] + p * mats[:, 1, 0]).astype(np.int64)

    def __len__(self):
        return len(self.mats)

    def _element_orders(self) -> np.ndarray:
        N = len(self)
        orders = np.zeros(N, dtype=np.int64)
        cur = np.arange(N)
        for k in range(1, N + 1):
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.mul[cur, np.arange(N)]
        return orders

    def close(self, mask: np.ndarray, gens: list[int]) -> np.ndarray:
        mask = mask.copy()
        mask[0] = True
        frontier = np.flatnonzero(mask)
        while len(frontier):
            cand = np.unique(self.mul[np.ix_(frontier, gens)])
            frontier = cand[~mask[cand]]
            mask[frontier] = True
        return mask


@dataclass(frozen=True)
class SubgroupClass:
    order: int
    center_order: int
    derived_order: int
    order_histogram: tuple[tuple[int, int], ...]
    transitive: bool
    generators: tuple = ()

    @property
    def fingerprint(self) -> tuple:
        return (self.order, self.center_order, self.derived_order, self.order_histogram)


def _invariant(G: _Sp2, mask: np.ndarray) -> tuple:
    els = np.flatnonzero(mask)
    return (len(els), tuple(sorted(Counter(G.orders[els].tolist()).items())))


def _conjugate(G: _Sp2, a: np.ndarray, b: np.ndarray) -> bool:
    els = np.flatnonzero(a)
    images = G.conj[:, els]
    return bool(np.any(np.all(b[images], axis=1)))


def subgroup_classes(p: int, form: Optional[np.ndarray] = None) -> tuple[_Sp2, list[tuple[np.ndarray, list[int]]]]:
    """Conjugacy classes of subgroups of Sp_2(p) as (element mask, generator indices).

    Every nontrivial K has a maximal subgroup M and K = <M, g> for any g in K
    outside M; g may be taken of prime-power order since those elements
    generate K.  So extending class representatives by one such element
    at a time reaches every class.
    """
    G = _Sp2(p, form)
    N = len(G)
    pp = [g for g in range(1, N) if len(_prime_factors(int(G.orders[g]))) == 1]
    trivial = np.zeros(N, dtype=bool)
    trivial[0] = True
    reps: list[tuple[np.ndarray, list[int]]] = [(trivial, [])]
    buckets: dict[tuple, list[int]] = {_invariant(G, trivial): [0]}
    queue = [0]
    while queue:
        idx = queue.pop(0)
        H, gens = reps[idx]
        els = np.flatnonzero(H)
        # <H, g> and <H, x h g x^-1> are conjugate for h in H, x in N(H)
        norm = np.flatnonzero(np.all(H[G.conj[:, els]], axis=1))
        covered = H.copy()
        for g in pp:
            if covered[g]:
                continue
            covered[G.conj[np.ix_(norm, G.mul[els, g])].ravel()] = True
            K = G.close(H, gens + [g])
            inv = _invariant(G, K)
            bucket = buckets.setdefault(inv, [])
            if any(_conjugate(G, K, reps[j][0]) for j in bucket):
                continue
            bucket.append(len(reps))
            queue.append(len(reps))
            reps.append((K, gens + [g]))
    return G, reps


def _prime_factors(n: int) -> set[int]:
    out, q = set(), 2
    while q * q <= n:
        while n % q == 0:
            out.add(q)
            n //= q
        q += 1
    if n > 1:
        out.add(n)
    return out


def _describe(G: _Sp2, K: np.ndarray, gens: list[int]) -> SubgroupClass:
    els = np.flatnonzero(K)
    # [a, b] = a b a^-1 b^-1
    ab = G.mul[np.ix_(els, els)]
    comm = G.mul[ab, G.mul[np.ix_(G.inv[els], G.inv[els])]]
    dmask = np.zeros(len(G), dtype=bool)
    dmask[np.unique(comm)] = True
    dmask = G.close(dmask, np.flatnonzero(dmask).tolist() or [0])
    center = sum(1 for z in els if np.array_equal(G.mul[z, els], G.mul[els, z]))
    transitive = len(np.unique(G.e1_image[els])) == p_sq_minus_1(G.p)
    gen_mats = tuple(tuple(map(tuple, G.mats[g].tolist())) for g in gens)
    return SubgroupClass(
        order=len(els),
        center_order=center,
        derived_order=int(dmask.sum()),
        order_histogram=tuple(sorted(Counter(G.orders[els].tolist()).items())),
        transitive=transitive,
        generators=gen_mats,
    )


def p_sq_minus_1(p: int) -> int:
    return p * p - 1


def search_transitive_2dim(p: int, form: Optional[np.ndarray] = None, all_classes: bool = False) -> list[SubgroupClass]:
    """Subgroups of Sp_2(p) transitive on the nonzero vectors, up to conjugacy, by increasing order."""
    if p not in SUPPORTED_PRIMES:
        raise UnsupportedPrime(f"p = {p} not in {SUPPORTED_PRIMES}")
    G, reps = subgroup_classes(p, form)
    out = []
    for K, gens in reps:
        els = np.flatnonzero(K)
        if not all_classes and len(np.unique(G.e1_image[els])) != p * p - 1:
            continue
        out.append(_describe(G, K, gens))
    out.sort(key=lambda c: c.fingerprint)
    return out


# ---------------------------------------------------------------------------
# curated witnesses


def _witness_dir() -> Path:
    import os

    env = os.environ.get("UDK_DATA_DIR")
    base = Path(env) if env else Path(str(resources.files("udk") / "data"))
    return base / "symplectic"


def witness_names() -> list[str]:
    d = _witness_dir()
    return sorted(f.stem for f in d.glob("*.json") if not f.name.endswith(".expected.json"))


def load_witness(name: str) -> tuple[SympGroup, dict]:
    from .fileformat import load_group_file

    path = _witness_dir() / f"{name}.json"
    if not path.exists():
        raise UnknownWitness(name)
    gf = load_group_file(path)
    if not gf.symplectic:
        raise ValueError(f"{name} is not a symplectic group file")
    return SympGroup(gf.modulus, gf.dimension // 2, gf.generators, name=gf.name), gf.expected


@dataclass
class WitnessReport:
    name: str
    p: int
    dim: int
    checks: dict[str, bool]
    order: Optional[int]
    orbit_sizes: list[int]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "p": str(self.p),
            "dim": str(self.dim),
            "order": None if self.order is None else str(self.order),
            "orbit_sizes": [str(s) for s in self.orbit_sizes],
            "checks": dict(self.checks),
            "ok": self.ok,
        }


def verify_witness(name: str, cap: int = DEFAULT_CAP) -> WitnessReport:
    """Re-check a curated witness: form, order, transitivity, index divisibility."""
    path = _witness_dir() / f"{name}.json"
    if not path.exists():
        raise UnknownWitness(name)
    from .fileformat import load_group_file

    gf = load_group_file(path)
    checks: dict[str, bool] = {}
    try:
        H = SympGroup(gf.modulus, gf.dimension // 2, gf.generators, name=gf.name)
        checks["symplectic_form"] = True
    except NotSymplectic:
        return WitnessReport(name, gf.modulus, gf.dimension, {"symplectic_form": False}, None, [])
    order = H.order(cap)
    sizes = orbits(H)
    exp = gf.expected
    if "order" in exp:
        checks["order"] = order == int(exp["order"])
    checks["transitive"] = sizes == [H.nvectors]
    checks["index_divides"] = order % H.nvectors == 0
    if "transitive" in exp:
        checks["expected_transitive"] = checks["transitive"] == bool(exp["transitive"])
    return WitnessReport(name, H.p, H.dim, checks, order, sizes)
