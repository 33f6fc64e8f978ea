import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from udk import catalog
from udk.cyclo import CycNum
from udk.fileformat import (
    FormatError,
    GroupFile,
    ParseError,
    ZeroDenominator,
    load_group_file,
    parse_entry,
    parse_group,
    render_entry,
    save_group_file,
)

DATA = catalog.data_dir()


def test_spec_examples():
    x = parse_entry("1/2*z8 - 1/2*z8^3")
    assert x == (CycNum.root(8) - CycNum.root(8, 3)) * Fraction(1, 2)
    assert x * x == CycNum.rational(Fraction(1, 2))
    assert parse_entry("z3^2") == CycNum.root(3, 2)
    assert parse_entry("2") == CycNum.rational(2)


def test_whitespace_and_negative_exponent():
    assert parse_entry("  3 / 4 *  z5 ^ -1 ") == CycNum.root(5, -1) * Fraction(3, 4)
    assert parse_entry("z4^-1") == parse_entry("z4^3")


def test_leading_sign():
    assert parse_entry("-1") == CycNum.rational(-1)
    assert parse_entry("-z3 - z3^2") == CycNum.rational(1, 3)


def test_mixed_root_orders_share_a_field():
    x = parse_entry("z3 + z4")
    assert x.n == 12
    assert abs(x.numeric() - (CycNum.root(3).numeric() + 1j)) < 1e-12


def test_declared_conductor():
    assert parse_entry("z3", 12) == CycNum.root(3).promote(12)
    with pytest.raises(FormatError):
        parse_entry("z5", 12)


@pytest.mark.parametrize("text,pos", [
    ("", 0),
    ("1 +", 3),
    ("1 2", 2),
    ("z", 1),
    ("z0", 1),
    ("2*", 2),
    ("2*3", 2),
    ("1/", 2),
    ("z3^", 3),
    ("x", 0),
    ("1 ++ 2", 3),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_entry(text)
    assert info.value.position == pos
    assert info.value.expected


def test_zero_denominator():
    with pytest.raises(ZeroDenominator) as info:
        parse_entry("1/0*z4")
    assert info.value.position == 2
    assert isinstance(info.value, ParseError)


@st.composite
def cyclotomics(draw):
    n = draw(st.sampled_from([1, 3, 4, 5, 8, 12, 15, 24]))
    coeffs = draw(st.lists(st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000),
                           min_size=n, max_size=n))
    return CycNum.from_terms(n, [(c, k) for k, c in enumerate(coeffs)])


@given(cyclotomics())
def test_render_round_trip(x):
    assert parse_entry(render_entry(x)) == x


def test_catalog_files_round_trip():
    files = sorted(p for p in DATA.glob("*.json") if not p.name.endswith(".expected.json"))
    assert files
    for path in files:
        raw = json.loads(path.read_text())
        for g in raw["generators"]:
            for row in g:
                for s in row:
                    x = parse_entry(s, raw["conductor"])
                    assert parse_entry(render_entry(x), raw["conductor"]) == x


def test_save_load_round_trip(tmp_path):
    G = catalog.sl2_5_dim2()
    gf = GroupFile("t", 2, G.generators, conductor=G.conductor, expected={"order": 120}, provenance="test")
    path = save_group_file(gf, tmp_path / "t.json")
    back = load_group_file(path)
    assert back.generators == G.generators
    assert back.expected == {"order": 120}
    assert (tmp_path / "t.expected.json").exists()
    assert back.group().enumerate().order() == 120


def test_symplectic_file(tmp_path):
    data = {"format": "udk-group/1", "name": "s", "dimension": 2, "modulus": 3, "generators": [[[1, 1], [0, 1]]]}
    gf = parse_group(data)
    assert gf.symplectic and gf.modulus == 3
    with pytest.raises(FormatError):
        gf.group()
    data["generators"] = [[[1, 3], [0, 1]]]
    with pytest.raises(FormatError):
        parse_group(data)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(format="udk-group/2"),
    lambda d: d.pop("generators"),
    lambda d: d.update(generators=[]),
    lambda d: d.update(generators=[[["1", "0"]]]),
    lambda d: d.pop("conductor"),
    lambda d: d.update(conductor=0),
])
def test_format_errors(mutate):
    data = {"format": "udk-group/1", "name": "x", "dimension": 2, "conductor": 4,
            "generators": [[["0", "1"], ["1", "0"]]]}
    mutate(data)
    with pytest.raises(FormatError):
        parse_group(data)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(FormatError):
        load_group_file(p)
