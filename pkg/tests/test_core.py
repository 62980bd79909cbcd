import pytest
from hypothesis import given, strategies as st

from supermanin.core import (NCPoly, Rational, cmul, commutative_normal_form, e, from_text,
                             graded_component, lam, qq, superdim, supercommutator, to_text, z)

D = superdim(1, 1)
LETTERS = [z(i, j, D) for i in (1, 2) for j in (1, 2)]

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7).map(lambda f: qq(f"{f.numerator}/{f.denominator}"))
words = st.lists(st.sampled_from(LETTERS), max_size=3).map(tuple)
polys = st.dictionaries(words, coeffs, max_size=4).map(NCPoly)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a - a == NCPoly()


@given(polys)
def test_text_round_trip(p):
    assert from_text(to_text(p), D) == p


@given(polys, polys)
def test_supercommutator_antisymmetry(a, b):
    for pa in a.parity_components().values():
        for pb in b.parity_components().values():
            s = -1 if pa.parity and pb.parity else 1
            assert supercommutator(pa, pb) == supercommutator(pb, pa).scale(-s)


@given(polys, polys)
def test_cmul_commutes(a, b):
    assert cmul(a, b) == cmul(b, a)


def test_parity_of_letters():
    assert z(1, 2, D).parity == 1 and z(2, 2, D).parity == 0
    x = NCPoly.gen(z(1, 2, D))
    assert supercommutator(x, x) == (x * x).scale(2)


def test_canonical_text():
    p = NCPoly.gen(z(1, 1, D)) - NCPoly.const(1)
    assert to_text(p) == "-1 + z[1,1]"
    assert to_text(NCPoly.gen(e(1, 2, -1, D), Rational(-1, 2))) == "-1/2*e{-1}[1,2]"
    assert to_text(NCPoly()) == "0"


def test_graded_component():
    x, y = NCPoly.gen(z(1, 1, D)), NCPoly.gen(z(2, 2, D))
    p = x + x * y + NCPoly.const(3)
    assert graded_component(p, 2) == x * y
    assert graded_component(p, 0) == NCPoly.const(3)


def test_commutative_normal_form_sorts():
    a, b = NCPoly.gen(lam(1)), NCPoly.gen(lam(2))
    assert commutative_normal_form(a * b - b * a) == NCPoly()


def test_qq_rejects_floats_exactly():
    assert qq("3/6") == Rational(1, 2)
    with pytest.raises((TypeError, ValueError)):
        qq(0.1)
