import pytest
import sympy
from hypothesis import given, strategies as st

from supermanin.core import NCPoly, TAU_SYM, e, from_text, lam, qq, superdim
from supermanin.pbw import FREE_MODE, LOWERING_FIRST, PBW, VACUUM
from supermanin.quotient import is_manin
from supermanin.sugawara import (EXCLUSIVE, FieldAction, SugawaraFamilies, annihilation_report, build_T,
                                 det_lambda_check, det_product, expected_linearization, fourier_modes,
                                 lambda_det, lambda_matrix, lambda_symbols, linearization, newton_rhs,
                                 numeric_weight, pairwise_supercommute, recover_generators,
                                 recurrence_residues, round_trip, route_a, route_b, shifted_e, shifted_h)

D10, D01, D11, D20, D21 = (superdim(*d) for d in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)])


def E_(i, j, r, dim):
    return NCPoly.gen(e(i, j, r, dim))


def test_build_T_entries():
    tau = NCPoly.gen(TAU_SYM)
    assert build_T(D10) == [[tau + E_(1, 1, -1, D10)]]
    assert build_T(D01) == [[tau - E_(1, 1, -1, D01)]]
    T = build_T(D11)
    assert T[0][1] == E_(1, 2, -1, D11) and T[1][0] == -E_(2, 1, -1, D11)


@pytest.mark.parametrize("mn", [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2), (3, 1)])
def test_T_is_manin(mn):
    dim = superdim(*mn)
    assert is_manin(build_T(dim), dim, PBW(dim, FREE_MODE).ring())


def test_family_s_examples():
    F = SugawaraFamilies(D10)
    assert F.coefficients("s", 1) == {0: NCPoly.const(1), 1: E_(1, 1, -1, D10)}
    x = E_(1, 1, -1, D10)
    assert F.coefficients("s", 2) == {0: NCPoly.const(1), 1: x.scale(2), 2: x * x + E_(1, 1, -2, D10)}
    G = SugawaraFamilies(D21)
    total = E_(1, 1, -1, D21) + E_(2, 2, -1, D21) + E_(3, 3, -1, D21)
    assert G.coefficients("s", 1) == {0: NCPoly.const(1), 1: total}
    for fam in ("sigma", "h"):
        assert G.member(fam, 1, 1) == total


@pytest.mark.parametrize("dim", [D11, D21, superdim(1, 2)])
def test_b_equals_sigma(dim):
    F = SugawaraFamilies(dim)
    for k in (1, 2, 3):
        assert F.coefficients("b", k) == F.coefficients("sigma", k)


def test_one_odd_dimension_families():
    F = SugawaraFamilies(D01)
    # Ber(1 + uT) for a single odd row is (1 + uT)^(-1): sigma_k has every tau power
    for k in (1, 2, 3):
        assert F.member("sigma", k, 0) == NCPoly.const((-1) ** k)
        assert F.member("h", k, 0) == (NCPoly.const(-1) if k == 1 else NCPoly())


def test_annihilation_examples():
    F = SugawaraFamilies(D20)
    s22 = F.member("s", 2, 2)
    assert all(annihilation_report(s22, D20, -2).values())
    rep = annihilation_report(s22, D20, 0)
    assert any(not ok for (i, j, r), ok in rep.items() if r == 1)
    single = E_(1, 1, -1, D20)
    assert not annihilation_report(single, D20, -2)[(1, 2, 0)]


def test_gl11_failure_is_exact():
    """At m = n the bracket lacks the level term that would cancel -k str T^(k-1)."""
    F = SugawaraFamilies(D11)
    P = PBW(D11, VACUUM, level=0)
    for k in (2, 3, 4):
        for i in (1, 2):
            got = P.apply(E_(i, i, 1, D11), F.member("s", k, k))
            sign = -1 if i == 2 else 1
            assert got == F.member("s", k - 1, k - 1).scale(-k * sign)


@pytest.mark.parametrize("dim", [D10, D11, D20])
def test_pairwise_supercommute(dim):
    F = SugawaraFamilies(dim)
    vecs = [v for k in (1, 2, 3) for v in F.coefficients("s", k).values()]
    pairs, fails = pairwise_supercommute(vecs, dim)
    assert pairs > 0 and not fails


def test_pairwise_supercommute_detects_noncentral():
    pairs, fails = pairwise_supercommute([E_(1, 2, -1, D20), E_(2, 1, -1, D20)], D20)
    assert fails


@pytest.mark.parametrize("dim", [D10, D01, D11, D20, D21])
def test_routes_agree(dim):
    eng = FieldAction(dim, cap=3)
    for fam in ("sigma", "h"):
        for k in (1, 2, 3):
            assert route_a(dim, fam, k, cap=3, engine=eng) == route_b(dim, fam, k, cap=3)


def test_lowering_first_breaks_routes():
    eng = FieldAction(D20, cap=3, order=LOWERING_FIRST)
    assert route_a(D20, "sigma", 2, cap=3, engine=eng) != route_b(D20, "sigma", 2, cap=3)


def test_displayed_values():
    modes = fourier_modes(route_b(D21, "sigma", 1, cap=3), 1)
    assert modes[(1, 0)] == NCPoly.gen(lam(1)) + NCPoly.gen(lam(2)) + NCPoly.gen(lam(3))
    assert modes[(1, -2)] == E_(1, 1, -2, D21) + E_(2, 2, -2, D21) + E_(3, 3, -2, D21)


def test_newton_k1_and_gl10():
    for dim in (D10, D11):
        eng = FieldAction(dim, cap=3)
        assert route_a(dim, "s", 1, cap=3, engine=eng) == route_a(dim, "sigma", 1, cap=3, engine=eng)
        assert route_a(dim, "s", 2, cap=3, engine=eng) == newton_rhs(dim, 2, cap=3)


def test_shifted_polynomials():
    x = sympy.symbols("x1:4")
    assert shifted_h(0, x) == 1 == shifted_e(0, x)
    assert shifted_h(1, x) == sum(x)
    assert shifted_e(1, x) == sum(x)


def test_shifted_h_generating_series():
    u = sympy.Symbol("u")
    xs = [1, 2]
    l = len(xs)
    lhs = 1 + sum(shifted_h(a, xs) / sympy.prod([u + b for b in range(1, a + 1)]) for a in range(1, 4))
    rhs = sympy.prod([u - b for b in range(l)]) / sympy.prod([u - xs[i] - l + 1 + i for i in range(l)])
    # agree up to (and excluding) u^-4
    t = sympy.Symbol("t")
    diff = sympy.series((lhs - rhs).subs(u, 1 / t), t, 0, 4).removeO()
    assert sympy.simplify(diff) == 0


def test_lambda_matrix_examples():
    lams = lambda_symbols(2)
    r = sympy.Symbol("r")
    assert sympy.expand(lambda_det(D11)) == lams[0] + lams[1]
    assert sympy.expand(lambda_det(D20) - (lams[0] - lams[1] + 1 + r)) == 0
    for dim in (D11, D21, superdim(2, 2)):
        M = lambda_matrix(dim)
        assert all(M[0, i] == 1 for i in range(dim.N))


@pytest.mark.parametrize("mn", [(1, 0), (0, 1), (2, 0), (1, 1), (2, 1), (1, 2), (2, 2)])
def test_det_lambda(mn):
    assert det_lambda_check(superdim(*mn))


def test_exclusive_reading_fails():
    assert not det_lambda_check(D20, EXCLUSIVE)
    assert not det_lambda_check(D11, EXCLUSIVE)


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=3), st.integers(-4, -1))
def test_det_product_numeric(vals, r):
    """The product formula evaluated at integers equals the numeric determinant."""
    lams = [sympy.Integer(v) for v in vals]
    M = lambda_matrix(D21, sympy.Integer(r), lams)
    assert M.det() == det_product(D21, sympy.Integer(r), lams)


@pytest.mark.parametrize("mn", [(2, 0), (1, 1), (0, 2), (2, 1), (1, 2)])
def test_recurrences(mn):
    dim = superdim(*mn)
    for fam in ("sigma", "h"):
        assert not any(recurrence_residues(dim, fam, 3, cap=3).values())


WEIGHT = ["1/3", "-2/7", "5/11"]


@pytest.mark.parametrize("mn", [(1, 1), (2, 1), (1, 2), (3, 0)])
def test_generator_recovery(mn):
    dim = superdim(*mn)
    w = WEIGHT[:dim.N]
    for fam in ("sigma", "h"):
        exprs, lins, modes = recover_generators(dim, fam, w, 3)
        for r, M in lins.items():
            assert M == expected_linearization(dim, fam, w, r)
            assert M == linearization(dim, fam, w, r)
        assert round_trip(exprs, modes)


def test_generation_fails_on_the_det_hypersurface():
    with pytest.raises(ZeroDivisionError):
        recover_generators(D11, "sigma", ["1/3", "-1/3"], 2)
