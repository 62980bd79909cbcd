import pytest

from supermanin.core import NCPoly, superdim, z
from supermanin.quotient import (AFFINE_RIGHT, CapExceeded, ManinQuotient, QuadraticSpec, bos_terms,
                                 ferm_terms, is_manin, macmahon_component, macmahon_report,
                                 power_commutator_defect, quotient, relations, verify_evaluation_embedding,
                                 verify_omega, verify_zeta)
from supermanin.tensor import FREE, generic_matrix

# words, relation instances, quotient dimension of the degree-d component
GOLDEN = {
    ((1, 1), 2): (16, 4, 12), ((1, 1), 3): (64, 32, 36), ((1, 1), 4): (256, 192, 108),
    ((2, 1), 2): (81, 20, 61), ((2, 1), 3): (729, 360, 397), ((2, 1), 4): (6561, 4860, 2569),
    ((1, 2), 2): (81, 20, 61), ((1, 2), 3): (729, 360, 397), ((1, 2), 4): (6561, 4860, 2569),
    ((2, 2), 2): (256, 64, 192), ((2, 2), 3): (4096, 2048, 2192),
}


@pytest.mark.parametrize("key", sorted(GOLDEN))
def test_golden_dims(key):
    (mn, d) = key
    r = macmahon_report(superdim(*mn), d)
    assert r["status"] == "pass"
    assert (r["dims"]["words"], r["dims"]["relations"], r["dims"]["quotient"]) == GOLDEN[key]


@pytest.mark.slow
def test_golden_dims_22_degree_4():
    r = macmahon_report(superdim(2, 2), 4)
    assert r["status"] == "pass"
    assert r["dims"] == {"words": 65536, "relations": 49152, "quotient": 24832}


def test_one_even_dimension_is_commutative():
    dim = superdim(1, 0)
    q = quotient(QuadraticSpec(dim))
    x = NCPoly.gen(z(1, 1, dim))
    assert not relations(QuadraticSpec(dim))
    assert q.reduce(x * x) == x * x
    # Bos = 1/(1 - u z) and Ferm = 1 - u z in closed form
    Z = generic_matrix(dim)
    assert bos_terms(Z, dim, 3) == [NCPoly.const(1), x, x * x, x * x * x]
    assert ferm_terms(Z, dim, 3) == [NCPoly.const(1), -x, NCPoly(), NCPoly()]


def test_one_odd_dimension_closed_forms():
    dim = superdim(0, 1)
    y = NCPoly.gen(z(1, 1, dim))
    Z = generic_matrix(dim)
    # Ferm = sum (u z)^k, Bos = 1 - u z
    assert ferm_terms(Z, dim, 3) == [NCPoly.const(1), y, y * y, y * y * y]
    assert bos_terms(Z, dim, 3)[:2] == [NCPoly.const(1), -y]


def test_one_one_quotient_relations():
    dim = superdim(1, 1)
    q = quotient(QuadraticSpec(dim))
    rels = relations(QuadraticSpec(dim))
    assert rels and all(q.reduce(r) == NCPoly() for r in rels)
    z11, z22 = NCPoly.gen(z(1, 1, dim)), NCPoly.gen(z(2, 2, dim))
    assert q.reduce(z11 * z22 - z22 * z11)
    assert is_manin(generic_matrix(dim), dim, q.ring())
    assert not is_manin(generic_matrix(dim), dim, FREE)


def test_macmahon_fails_in_free_algebra():
    dim = superdim(1, 1)
    Z = generic_matrix(dim)
    bos, ferm = bos_terms(Z, dim, 3), ferm_terms(Z, dim, 3)
    raw = sum((bos[a] * ferm[3 - a] for a in range(4)), NCPoly())
    assert raw
    assert macmahon_component(dim, 3) == NCPoly()


@pytest.mark.parametrize("mn", [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
def test_affine_maps(mn):
    dim = superdim(*mn)
    assert verify_evaluation_embedding(dim, 3)["status"] == "pass"
    assert verify_omega(dim, 3)["status"] == "pass"
    assert verify_zeta(dim, 3)["status"] == "pass"


def test_power_commutators():
    dim = superdim(1, 1)
    Z = generic_matrix(dim)
    q = quotient(QuadraticSpec(dim))
    for r in (2, 3, 4):
        assert power_commutator_defect(Z, dim, r, q.ring()).is_zero()
    assert not power_commutator_defect(Z, dim, 2, FREE).is_zero()


def test_guard():
    with pytest.raises(CapExceeded):
        ManinQuotient(QuadraticSpec(superdim(2, 2)), guard=10).build_graded_basis(3)


def test_report_shape():
    r = macmahon_report(superdim(1, 1), 2)
    assert set(r) == {"spec", "degree", "identity", "status", "counterexample", "dims"}
