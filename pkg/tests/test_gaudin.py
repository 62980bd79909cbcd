import pytest
from hypothesis import given, strategies as st

from supermanin.core import qq, superdim
from supermanin.gaudin import (CONST, PF, DiffOp, GaudinError, GaudinSystem, TensorModule, build_L,
                               casimir_value, check_module, commutativity_check, natural_module,
                               quadratic_hamiltonian, residue_decomposition_check)

POINTS = (qq(0), qq(1), qq("5/2"))


def _value(f: PF, x):
    total = qq(0)
    for (r, e), c in f.terms.items():
        total += c if r < 0 else c / (x - f.points[r]) ** e
    return total


keys = st.one_of(st.just(CONST), st.tuples(st.integers(0, 2), st.integers(1, 3)))
pfs = st.dictionaries(keys, st.integers(-4, 4).map(qq), max_size=4).map(lambda d: PF(d, POINTS))
probe = st.sampled_from([qq(7), qq("-3/2"), qq("1/3")])


@given(pfs, pfs, probe)
def test_partial_fraction_arithmetic(f, g, x):
    assert _value(f * g, x) == _value(f, x) * _value(g, x)
    assert _value(f + g, x) == _value(f, x) + _value(g, x)


@given(pfs, probe)
def test_partial_fraction_derivative(f, x):
    d = f.derivative()
    expect = qq(0)
    for (r, e), c in f.terms.items():
        if r >= 0:
            expect += -e * c / (x - POINTS[r]) ** (e + 1)
    assert _value(d, x) == expect


@pytest.mark.parametrize("mn", [(1, 0), (0, 1), (1, 1), (2, 1), (2, 0)])
def test_natural_module(mn):
    dim = superdim(*mn)
    assert check_module(natural_module(dim))
    assert casimir_value(natural_module(dim)) == dim.m - dim.n + 1


def test_tensor_module_koszul_sign():
    dim = superdim(1, 1)
    sp = TensorModule([natural_module(dim), natural_module(dim)])
    assert check_module(type(natural_module(dim))(dim, [a ^ b for a in (0, 1) for b in (0, 1)],
                                                  {(i, j): sp.action(i, j) for i in (1, 2) for j in (1, 2)}))


def test_coincident_points():
    with pytest.raises(GaudinError):
        GaudinSystem(superdim(1, 1), ["natural", "natural"], [0, 0])
    with pytest.raises(GaudinError):
        GaudinSystem(superdim(1, 1), ["natural"], [0, 1])
    with pytest.raises(GaudinError):
        build_L(superdim(1, 1), 2, [0, 1], K=[[0, 1], [0, 0]])


@pytest.mark.parametrize("mn", [(1, 1), (2, 1), (2, 0)])
@pytest.mark.parametrize("shift", [None, ["1/2", "-1/3", "2/5"]])
def test_commutativity(mn, shift):
    dim = superdim(*mn)
    system = GaudinSystem(dim, ["natural", "natural"], [0, 1], None if shift is None else shift[:dim.N])
    rep = commutativity_check(system, 3)
    assert rep["all_commute"] and rep["sigma_equals_b"] and rep["pairs_checked"] > 0


def test_even_K_shift_commutes():
    dim = superdim(2, 1)
    K = [[1, 2, 0], [3, -1, 0], [0, 0, 5]]
    system = GaudinSystem(dim, ["natural", "natural"], [0, 2], K=K)
    assert commutativity_check(system, 2)["all_commute"]


def test_negative_control():
    """Dropping the odd-row sign in L(z) destroys commutativity."""
    dim = superdim(1, 1)
    system = GaudinSystem(dim, ["natural", "natural", "natural"], [0, 1, 3])
    row = system.L[1]
    system.L[1] = [DiffOp({key: (f if key[0] == 1 else f.scale(-1)) for key, f in op.terms.items()},
                          system.points) for op in row]
    assert not commutativity_check(system, 2)["all_commute"]


@pytest.mark.parametrize("mn", [(1, 1), (2, 1), (2, 0)])
def test_residue_decomposition(mn):
    dim = superdim(*mn)
    system = GaudinSystem(dim, ["natural"] * 3, [0, 1, 3])
    res = residue_decomposition_check(system)
    assert res["decomposition"] and res["matches_s22"]
    assert res["casimir"] == [str(dim.m - dim.n + 1)] * 3
    assert quadratic_hamiltonian(system)
