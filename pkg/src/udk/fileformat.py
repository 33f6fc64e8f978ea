"""Group files and the matrix-entry expression grammar.

Grammar (version 1, whitespace ignored)::

    expr  := sign? term (('+' | '-') term)*
    term  := coeff ('*' root)? | root
    coeff := integer ('/' positive-integer)?
    root  := 'z' positive-integer ('^' integer)?

``zN`` is the primitive N-th root of unity exp(2*pi*i/N).  The optional
leading sign is an extension so that rendered negative values reparse.

A unitary group file is a JSON object::

    {"format": "udk-group/1", "name": ..., "dimension": d, "conductor": n,
     "generators": [[["entry", ...], ...], ...], "provenance": "..."}

Symplectic files carry ``"modulus": p`` instead of ``"conductor"`` and plain
integers in ``[0, p)`` as entries.  Expectations live in an adjacent
``<stem>.expected.json`` with the same container and an ``"expected"`` block.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .cyclo import CycNum, render
from .matrep import FiniteMatrixGroup, UMatrix

FORMAT = "udk-group/1"


class ParseError(ValueError):
    def __init__(self, text: str, position: int, expected: str):
        super().__init__(f"at position {position} in {text!r}: expected {expected}")
        self.text = text
        self.position = position
        self.expected = expected


class ZeroDenominator(ParseError):
    def __init__(self, text: str, position: int):
        super().__init__(text, position, "nonzero denominator")


class FormatError(ValueError):
    pass


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.roots: list[int] = []

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _int(self, what: str) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError(self.text, start, what)
        return int(self.text[start:self.pos])

    def _signed_int(self, what: str) -> int:
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        return sign * self._int(what)

    def _root(self) -> tuple[int, int]:
        self.pos += 1  # 'z'
        order_pos = self.pos
        n = self._int("root order after 'z'")
        if n < 1:
            raise ParseError(self.text, order_pos, "positive root order")
        k = 1
        if self._peek() == "^":
            self.pos += 1
            k = self._signed_int("integer exponent")
        self.roots.append(n)
        return n, k

    def _term(self) -> tuple[Fraction, Optional[tuple[int, int]]]:
        ch = self._peek()
        if ch == "z":
            return Fraction(1), self._root()
        if not ch.isdigit():
            raise ParseError(self.text, self.pos, "coefficient or root")
        num = self._int("integer")
        coeff = Fraction(num)
        if self._peek() == "/":
            self.pos += 1
            den_pos = self.pos
            den = self._int("denominator")
            if den == 0:
                raise ZeroDenominator(self.text, den_pos)
            coeff = Fraction(num, den)
        if self._peek() == "*":
            self.pos += 1
            if self._peek() != "z":
                raise ParseError(self.text, self.pos, "root 'zN'")
            return coeff, self._root()
        return coeff, None

    def parse(self) -> list[tuple[Fraction, Optional[tuple[int, int]]]]:
        terms = []
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        c, r = self._term()
        terms.append((sign * c, r))
        while self._peek() in ("+", "-") and self._peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
            c, r = self._term()
            terms.append((sign * c, r))
        if self._peek():
            raise ParseError(self.text, self.pos, "'+', '-' or end of input")
        return terms


def parse_entry(text: str, conductor: Optional[int] = None) -> CycNum:
    """Parse one matrix entry into an exact cyclotomic number."""
    p = _Parser(text)
    terms = p.parse()
    n = conductor
    if n is None:
        n = 1
        for m in p.roots:
            n = math.lcm(n, m)
    else:
        bad = [m for m in p.roots if n % m]
        if bad:
            raise FormatError(f"root order {bad[0]} in {text!r} does not divide conductor {n}")
    flat = []
    for c, r in terms:
        if r is None:
            flat.append((c, 0))
        else:
            m, k = r
            flat.append((c, (n // m) * k))
    return CycNum.from_terms(n, flat)


def render_entry(x: CycNum) -> str:
    return render(x)


# ---------------------------------------------------------------------------
# containers


@dataclass
class GroupFile:
    name: str
    dimension: int
    generators: list
    conductor: Optional[int] = None
    modulus: Optional[int] = None
    expected: dict[str, Any] = field(default_factory=dict)
    provenance: str = ""

    @property
    def symplectic(self) -> bool:
        return self.modulus is not None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"format": FORMAT, "name": self.name, "dimension": self.dimension}
        if self.symplectic:
            out["modulus"] = self.modulus
            out["generators"] = [[[int(v) for v in row] for row in g] for g in self.generators]
        else:
            out["conductor"] = self.conductor
            out["generators"] = [[[render(c) for c in row] for row in g.rows()] for g in self.generators]
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    def group(self, cap: Optional[int] = None) -> FiniteMatrixGroup:
        if self.symplectic:
            raise FormatError(f"{self.name} is a symplectic file")
        kw = {} if cap is None else {"cap": cap}
        return FiniteMatrixGroup(self.name, list(self.generators), **kw)


def group_file_from(G: FiniteMatrixGroup, expected: Optional[dict] = None, provenance: str = "") -> GroupFile:
    return GroupFile(G.name, G.dim, list(G.generators), conductor=G.conductor,
                     expected=dict(expected or {}), provenance=provenance)


def _check_square(gens, d, name):
    for k, g in enumerate(gens):
        if not isinstance(g, list) or len(g) != d or any(not isinstance(r, list) or len(r) != d for r in g):
            raise FormatError(f"{name}: generator {k} is not a {d}x{d} array")


def parse_group(data: dict) -> GroupFile:
    if not isinstance(data, dict):
        raise FormatError("group file must be a JSON object")
    fmt = data.get("format", FORMAT)
    if fmt != FORMAT:
        raise FormatError(f"unsupported format {fmt!r}")
    try:
        name = str(data["name"])
        d = int(data["dimension"])
        raw = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"missing or invalid field: {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise FormatError(f"{name}: generators must be a nonempty list")
    _check_square(raw, d, name)
    expected = dict(data.get("expected") or {})
    provenance = str(data.get("provenance", ""))
    if "modulus" in data:
        p = int(data["modulus"])
        gens = []
        for g in raw:
            if any(not isinstance(v, int) or not 0 <= v < p for row in g for v in row):
                raise FormatError(f"{name}: symplectic entries must be integers in [0, {p})")
            gens.append(np.array(g, dtype=np.int64))
        return GroupFile(name, d, gens, modulus=p, expected=expected, provenance=provenance)
    if "conductor" not in data:
        raise FormatError(f"{name}: need 'conductor' or 'modulus'")
    n = int(data["conductor"])
    if n < 1:
        raise FormatError(f"{name}: conductor must be positive")
    gens = []
    for g in raw:
        rows = [[parse_entry(str(v), n) for v in row] for row in g]
        gens.append(UMatrix.from_rows(rows, n))
    return GroupFile(name, d, gens, conductor=n, expected=expected, provenance=provenance)


def expected_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".expected.json")


def load_group_file(path) -> GroupFile:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    gf = parse_group(data)
    side = expected_path(path)
    if side.exists():
        extra = json.loads(side.read_text())
        gf.expected.update(extra.get("expected", {}))
    return gf


def dumps(obj: dict) -> str:
    """JSON text with one top-level field, and one generator, per line."""
    lines = []
    for k, v in obj.items():
        if k == "generators":
            gens = ",\n  ".join(json.dumps(g) for g in v)
            lines.append(f' "generators": [\n  {gens}\n ]')
        else:
            lines.append(f" {json.dumps(k)}: {json.dumps(v)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def save_group_file(gf: GroupFile, path, with_expected: bool = True) -> Path:
    path = Path(path)
    path.write_text(dumps(gf.to_json()))
    if with_expected and gf.expected:
        body = {"format": FORMAT, "name": gf.name, "expected": gf.expected}
        expected_path(path).write_text(dumps(body))
    return path
