import numpy as np
import pytest

from udk import symplectic as sp
from udk.symplectic import (
    NotSymplectic,
    SympGroup,
    UnknownWitness,
    UnsupportedPrime,
    closure_mod_p,
    is_transitive,
    load_witness,
    orbits,
    search_transitive_2dim,
    standard_form,
    to_standard_form,
    transitivity_certificate,
    verify_witness,
    witness_names,
)

EXPECTED_ORDERS = {3: [8, 24], 5: [24, 120], 7: [48, 48, 336], 11: [120, 120, 1320], 13: [2184]}


def test_trivial_group_orbits():
    H = SympGroup(3, 1, [np.eye(2, dtype=int)])
    assert orbits(H) == [1] * 8
    assert transitivity_certificate(H) is None


def test_scalars_are_not_transitive():
    H = SympGroup(5, 1, [-np.eye(2, dtype=int)])
    assert max(orbits(H)) <= 2
    assert not is_transitive(H)


def test_form_violation():
    with pytest.raises(NotSymplectic):
        SympGroup(5, 1, [np.diag([2, 2])])


def test_non_prime_modulus():
    with pytest.raises(ValueError):
        SympGroup(9, 1, [np.eye(2, dtype=int)])


def test_q8_in_sp2_3():
    H, exp = load_witness("q8_in_sp2_3")
    assert orbits(H) == [8]
    assert H.order() == 8


def test_sl2_3_in_sp2_5():
    H, _ = load_witness("sl2_3_in_sp2_5")
    assert orbits(H) == [24]
    cert = transitivity_certificate(H)
    assert (cert.order, cert.nvectors, cert.index_divides) == (24, 24, True)


@pytest.mark.parametrize("name", ["sl2_3_c2_in_sp2_7", "sl2_5_in_sp2_11"])
def test_index_certificate(name):
    H, exp = load_witness(name)
    cert = transitivity_certificate(H)
    assert cert.order == int(exp["order"]) == H.nvectors


@pytest.mark.parametrize("p", sorted(EXPECTED_ORDERS))
def test_search_2dim(p):
    classes = search_transitive_2dim(p)
    assert [c.order for c in classes] == EXPECTED_ORDERS[p]
    assert all(c.transitive for c in classes)
    for c in classes:
        assert c.order % (p * p - 1) == 0
        H = SympGroup(p, 1, c.generators)
        assert H.order() == c.order
        assert is_transitive(H)


def test_search_fingerprints_p7():
    a, b, full = search_transitive_2dim(7)
    # the two order-48 classes are not conjugate in Sp_2(7) but share a fingerprint
    assert a.fingerprint == b.fingerprint
    assert a.center_order == 2 and a.derived_order == 24
    assert full.derived_order == 336


def test_unsupported_prime():
    with pytest.raises(UnsupportedPrime):
        search_transitive_2dim(17)


def test_subgroup_count_sp2_3():
    # the lattice of SL_2(3): 1, Z2, three C4, four C3, four C6, Q8, SL_2(3)
    classes = search_transitive_2dim(3, all_classes=True)
    assert sorted(c.order for c in classes) == [1, 2, 3, 4, 6, 8, 24]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_search_stable_under_form_conjugation(p):
    rng = np.random.default_rng(p)
    while True:
        A = rng.integers(0, p, (2, 2))
        if round(np.linalg.det(A)) % p:
            break
    J = standard_form(1, p)
    form = (A.T @ J @ A) % p
    got = [c.fingerprint for c in search_transitive_2dim(p, form=form)]
    assert got == [c.fingerprint for c in search_transitive_2dim(p)]


def test_to_standard_form():
    p = 5
    J = standard_form(2, p)
    A = np.array([[1, 2, 0, 1], [0, 1, 3, 0], [0, 0, 1, 4], [2, 0, 0, 1]])
    Ai = sp.mat_inv_mod(A, p)
    form = (A.T @ J @ A) % p
    # diag(M, M^-T) preserves J; its conjugate by A preserves A^T J A
    T = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, p - 1, 1]])
    gens = [(Ai @ T @ A) % p]
    assert sp.preserves(gens[0], form, p)
    out = to_standard_form(gens, form, p)
    assert all(sp.preserves(g, J, p) for g in out)
    with pytest.raises(NotSymplectic):
        to_standard_form(gens, np.eye(4, dtype=int), p)


def test_closure_mod_p_identity_first():
    H, _ = load_witness("q8_in_sp2_3")
    els = closure_mod_p(H.generators, 3)
    assert np.array_equal(els[0], np.eye(2, dtype=int))
    assert len(els) == 8


def test_witness_catalog():
    names = witness_names()
    for req in ["sl2_9_in_sp4_3", "sl2_8_in_sp6_2", "su3_3_in_sp6_2", "sl2_13_in_sp6_3"]:
        assert req in names
    with pytest.raises(UnknownWitness):
        verify_witness("no_such_witness")


@pytest.mark.parametrize("name,order,nvec", [
    ("sl2_9_in_sp4_3", 720, 80),
    ("sl2_8_in_sp6_2", 504, 63),
    ("su3_3_in_sp6_2", 6048, 63),
    ("sl2_13_in_sp6_3", 2184, 728),
])
def test_spec_witnesses(name, order, nvec):
    rep = verify_witness(name)
    assert rep.ok
    assert rep.order == order
    assert rep.orbit_sizes == [nvec]


@pytest.mark.parametrize("name", witness_names())
def test_every_witness(name):
    rep = verify_witness(name)
    assert rep.ok, rep.checks
    H, _ = load_witness(name)
    assert is_transitive(H)
    sizes = orbits(H)
    assert sum(sizes) == H.nvectors
    assert all(rep.order % s == 0 for s in sizes)


def test_tampered_witness_fails(tmp_path, monkeypatch):
    import json
    import shutil

    src = sp._witness_dir()
    dst = tmp_path / "symplectic"
    shutil.copytree(src, dst)
    side = dst / "q8_in_sp2_3.expected.json"
    data = json.loads(side.read_text())
    data["expected"]["order"] = 16
    side.write_text(json.dumps(data))
    monkeypatch.setenv("UDK_DATA_DIR", str(tmp_path))
    rep = verify_witness("q8_in_sp2_3")
    assert not rep.ok and not rep.checks["order"]
