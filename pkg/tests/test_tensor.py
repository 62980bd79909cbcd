import itertools
from math import factorial

import pytest
import sympy
from hypothesis import given, strategies as st

from supermanin.core import NCPoly, Rational, qq, superdim, z
from supermanin.linalg import Echelon, rank
from supermanin.quotient import QuadraticSpec, quotient
from supermanin.tensor import (RATIONALS, absorption_check, antisymmetrizer, compose, embed_matrix,
                               full_supertrace, generic_matrix, h_direct, h_expansion, identity_op,
                               partial_supertrace, perm_op, sign_phi, sign_psi, sign_gamma, sigma_direct,
                               sigma_expansion, symmetrizer, transposition, unit_op)

DIMS = [superdim(*d) for d in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]]


@given(st.permutations(range(3)), st.permutations(range(3)), st.sampled_from(DIMS))
def test_perm_homomorphism(s, t, dim):
    assert perm_op(s, dim) * perm_op(t, dim) == perm_op(compose(s, t), dim)


def test_perm_examples():
    one_even, one_odd = superdim(1, 0), superdim(0, 1)
    assert perm_op((0, 1), one_even) == identity_op(one_even, 2)
    assert perm_op((1, 0), one_even) == unit_op(one_even, (1, 1), (1, 1))
    assert perm_op((1, 0), one_odd) == unit_op(one_odd, (1, 1), (1, 1), -1)


@pytest.mark.parametrize("dim", DIMS)
def test_projectors(dim):
    for k in (1, 2, 3):
        H, A = symmetrizer(k, dim), antisymmetrizer(k, dim)
        assert H * H == H and A * A == A
        if k == 1:
            assert H == identity_op(dim, 1) == A
        else:
            assert (H * A).is_zero() and (A * H).is_zero()


def test_antisymmetrizer_on_one_odd_dimension():
    dim = superdim(0, 1)
    for k in (1, 2, 3):
        assert antisymmetrizer(k, dim) == identity_op(dim, k)


def test_supertraces():
    for dim in DIMS:
        sdim = dim.m - dim.n
        for k in (1, 2):
            assert full_supertrace(identity_op(dim, k)) == NCPoly.const(sdim ** k)
        assert full_supertrace(transposition(dim, 2, 1, 2)) == NCPoly.const(sdim)
    d11 = superdim(1, 1)
    assert full_supertrace(antisymmetrizer(2, d11)) == NCPoly()
    odd = superdim(0, 1)
    Z = [[NCPoly.gen(z(1, 1, odd))]]
    assert full_supertrace(embed_matrix(Z, 1, 1, odd)) == -NCPoly.gen(z(1, 1, odd))


@pytest.mark.parametrize("dim", DIMS)
def test_contraction_identity(dim):
    Z = generic_matrix(dim)
    lhs = partial_supertrace(embed_matrix(Z, 2, 2, dim) * transposition(dim, 2, 1, 2), [2])
    assert lhs == embed_matrix(Z, 1, 1, dim)


@pytest.mark.parametrize("dim", DIMS)
def test_embedding_commutes_with_transpositions(dim):
    Z = generic_matrix(dim)
    P = transposition(dim, 3, 1, 2)
    assert P * embed_matrix(Z, 1, 3, dim) == embed_matrix(Z, 2, 3, dim) * P
    Q = transposition(dim, 3, 2, 3)
    assert Q * embed_matrix(Z, 1, 3, dim) == embed_matrix(Z, 1, 3, dim) * Q


def test_embed_rejects_odd_pattern():
    dim = superdim(1, 1)
    bad = [[NCPoly.gen(z(1, 2, dim)), NCPoly()], [NCPoly(), NCPoly()]]
    with pytest.raises(ValueError):
        embed_matrix(bad, 1, 1, dim).check_even()


def test_signs():
    dim = superdim(0, 1)
    assert sign_phi((1, 0), (1, 1), (1, 1), dim) == -1
    assert sign_phi((0, 1), (1, 1), (1, 1), dim) == 1 == sign_psi((0, 1), (1, 1), (1, 1), dim)
    even = superdim(2, 0)
    assert sign_gamma((1, 2), (2, 1), even) == 0
    assert sign_phi((1, 0), (1, 2), (2, 1), even) == 1


def test_expansion_examples():
    one, odd = superdim(1, 0), superdim(0, 1)
    x = NCPoly.gen(z(1, 1, one))
    assert sigma_expansion([[x]], 2, one) == NCPoly()
    assert h_expansion([[x]], 2, one) == x * x
    y = NCPoly.gen(z(1, 1, odd))
    for k in (1, 2, 3):
        assert sigma_expansion([[y]], k, odd) == (y ** k).scale((-1) ** k)
    assert h_expansion([[y]], 2, odd) == NCPoly()
    for dim in DIMS:
        Z = generic_matrix(dim)
        tr = sum(((Z[i][i]).scale(-1 if dim.parity(i + 1) else 1) for i in range(dim.N)), NCPoly())
        assert sigma_expansion(Z, 1, dim) == tr == h_expansion(Z, 1, dim)


@pytest.mark.parametrize("dim", DIMS + [superdim(3, 0), superdim(0, 3)])
def test_expansions_agree_with_contraction(dim):
    q = quotient(QuadraticSpec(dim))
    ring = q.ring()
    Z = generic_matrix(dim)
    for k in (1, 2, 3):
        s, h = sigma_direct(Z, k, dim, ring), h_direct(Z, k, dim, ring)
        for alt in (False, True):
            assert sigma_expansion(Z, k, dim, ring, alt) == s
            assert h_expansion(Z, k, dim, ring, alt) == h
        assert absorption_check(Z, k, dim, ring) == {"antisymmetrizer": True, "symmetrizer": True}


def test_absorption_needs_the_relations():
    dim = superdim(1, 1)
    assert absorption_check(generic_matrix(dim), 2, dim) == {"antisymmetrizer": False, "symmetrizer": False}


def _principal_minor_sum(M, k):
    n = M.shape[0]
    return sum((M.extract(list(c), list(c)).det() for c in itertools.combinations(range(n), k)), sympy.Integer(0))


@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9))
def test_even_numeric_matrix_matches_elementary_symmetric(vals):
    """For a commuting purely even matrix, str A_k Z...Z is the sum of k-minors."""
    dim = superdim(3, 0)
    Z = [[qq(vals[3 * i + j]) for j in range(3)] for i in range(3)]
    M = sympy.Matrix(3, 3, vals)
    u = sympy.Symbol("u")
    inv_char = sympy.series(1 / (sympy.eye(3) - u * M).det(), u, 0, 4).removeO()
    for k in (1, 2, 3):
        assert sigma_direct(Z, k, dim, RATIONALS) == qq(str(_principal_minor_sum(M, k)))
        assert h_direct(Z, k, dim, RATIONALS) == qq(str(inv_char.coeff(u, k)))


@given(st.lists(st.dictionaries(st.integers(0, 6), st.integers(-3, 3), max_size=5), max_size=6))
def test_echelon_rank_matches_sympy(rows):
    vecs = [{c: qq(x) for c, x in r.items()} for r in rows]
    M = sympy.Matrix([[r.get(c, 0) for c in range(7)] for r in rows]) if rows else sympy.zeros(0, 7)
    assert rank(vecs) == M.rank()
    ech = Echelon()
    ech.extend(vecs)
    for v in vecs:
        assert ech.contains(v)
