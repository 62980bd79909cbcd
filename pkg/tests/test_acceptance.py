"""Acceptance suite: twelve criteria, exact arithmetic, zero tolerance.

Each criterion prints one PASS/FAIL line (collected again in the terminal
summary).  Criterion 6 does not hold for gl(1|1); it is run as stated and is
marked as a strict expected failure, so an unexpected pass is also reported.
Run standalone with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import sys

import pytest
import sympy

from supermanin.berezinian import MatrixSeries, expansion_identities, factorization_check
from supermanin.core import NCPoly, lam, superdim
from supermanin.gaudin import GaudinSystem, commutativity_check, residue_decomposition_check
from supermanin.pbw import FREE_MODE, PBW, is_generic_critical
from supermanin.quotient import QuadraticSpec, is_manin, macmahon_report, quotient
from supermanin.sugawara import (FAMILIES, FieldAction, SugawaraFamilies, _e_mode, annihilation_report,
                                 build_T, det_lambda_check, expected_linearization, fourier_modes,
                                 lambda_matrix_numeric, newton_rhs, numeric_weight, pairwise_supercommute,
                                 recover_generators, recurrence_residues, round_trip, route_a, route_b)
from supermanin.tensor import absorption_check, generic_matrix, h_direct, h_expansion, sigma_direct, sigma_expansion

RESULTS = {}

UP_TO_3 = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]
UP_TO_2 = [d for d in UP_TO_3 if sum(d) <= 2]
UP_TO_4 = [(m, N - m) for N in range(1, 5) for m in range(N, -1, -1)]
WEIGHTS = ["1/3", "-2/7", "5/11"]


def _record(num: int, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {num:2d}: {status}"
    if failures:
        line += "  " + "; ".join(str(f) for f in failures[:6])
    RESULTS[num] = line
    print(line)


def _generic(dim):
    return generic_matrix(dim), quotient(QuadraticSpec(dim)).ring()


def _T(dim):
    return build_T(dim), PBW(dim, FREE_MODE, window=8).ring()


# ------------------------------------------------------------------ criteria

def criterion_1():
    bad = []
    for mn in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]:
        for d in range(1, 5):
            r = macmahon_report(superdim(*mn), d, with_dims=False)
            if r["status"] != "pass":
                bad.append((mn, d, r["counterexample"]))
    return bad


def criterion_2():
    bad = []
    for mn in UP_TO_3:
        dim = superdim(*mn)
        Z, ring = _generic(dim)
        for k in range(1, 4):
            if absorption_check(Z, k, dim, ring) != {"antisymmetrizer": True, "symmetrizer": True}:
                bad.append((mn, k, "absorption"))
            for alt in (False, True):
                if ring.normalize(sigma_expansion(Z, k, dim, ring, alt) - sigma_direct(Z, k, dim, ring)):
                    bad.append((mn, k, "sigma", alt))
                if ring.normalize(h_expansion(Z, k, dim, ring, alt) - h_direct(Z, k, dim, ring)):
                    bad.append((mn, k, "h", alt))
    return bad


def _inputs():
    for mn in UP_TO_2:
        yield mn, "generic", 4, _generic(superdim(*mn))
    for mn in UP_TO_3:
        yield mn, "T", 3, _T(superdim(*mn))


def criterion_3():
    bad = []
    for mn, label, order, (Z, ring) in _inputs():
        res = expansion_identities(Z, superdim(*mn), order, ring)
        bad += [(mn, label, key) for key, ok in res.items() if not ok]
    return bad


def criterion_4():
    bad = []
    for mn, label, order, (Z, ring) in _inputs():
        res = factorization_check(MatrixSeries.one_plus_u(Z, superdim(*mn), order, ring))
        bad += [(mn, label, key) for key, ok in res.items() if not ok]
    return bad


def criterion_5():
    bad = []
    for mn in UP_TO_4:
        dim = superdim(*mn)
        if not is_manin(build_T(dim), dim, PBW(dim, FREE_MODE).ring()):
            bad.append(mn)
    return bad


_FAMILY_CACHE = {}


def _families(mn):
    if mn not in _FAMILY_CACHE:
        dim = superdim(*mn)
        F = SugawaraFamilies(dim)
        kmax = 4 if dim.N <= 2 else 3
        vecs = {}
        for fam in FAMILIES:
            for k in range(1, kmax + 1):
                for l, v in F.coefficients(fam, k).items():
                    vecs[(fam, k, l)] = v
        _FAMILY_CACHE[mn] = (F, kmax, vecs)
    return _FAMILY_CACHE[mn]


def criterion_6():
    bad = []
    for mn in UP_TO_3:
        dim = superdim(*mn)
        F, kmax, vecs = _families(mn)
        for key, v in sorted(vecs.items()):
            fails = [t for t, ok in annihilation_report(v, dim, dim.n - dim.m).items() if not ok]
            if fails:
                bad.append((mn, key, fails[0]))
        for k in range(1, kmax + 1):
            if F.coefficients("b", k) != F.coefficients("sigma", k):
                bad.append((mn, "b != sigma", k))
        if dim.N >= 2:
            rep = annihilation_report(F.member("s", 2, 2), dim, dim.n - dim.m + 1)
            if all(ok for (i, j, r), ok in rep.items() if r == 1):
                bad.append((mn, "no witness at shifted level"))
    return bad


def criterion_7():
    bad = []
    for mn in UP_TO_3:
        _, _, vecs = _families(mn)
        pairs, fails = pairwise_supercommute([v for _, v in sorted(vecs.items())], superdim(*mn))
        if fails:
            bad.append((mn, len(fails)))
    return bad


def criterion_8():
    bad = []
    for mn in UP_TO_3:
        dim = superdim(*mn)
        eng = FieldAction(dim, cap=3)
        for fam in ("sigma", "h"):
            for k in range(1, 4):
                if route_a(dim, fam, k, cap=3, engine=eng) != route_b(dim, fam, k, cap=3):
                    bad.append((mn, fam, k))
            modes = fourier_modes(route_b(dim, fam, 1, cap=3), 1)
            lsum = sum((NCPoly.gen(lam(i)) for i in dim.indices()), NCPoly())
            if modes.get((1, 0), NCPoly()) != lsum:
                bad.append((mn, fam, "x11[0]"))
            for r in range(-3, 0):
                if modes.get((1, r), NCPoly()) != sum((_e_mode(i, r) for i in dim.indices()), NCPoly()):
                    bad.append((mn, fam, f"x11[{r}]"))
    return bad


def criterion_9():
    return [mn for mn in [(1, 0), (0, 1), (2, 0), (1, 1), (2, 1), (1, 2), (2, 2)]
            if not det_lambda_check(superdim(*mn))]


def criterion_10():
    bad = []
    for mn in UP_TO_3:
        dim = superdim(*mn)
        w = WEIGHTS[:dim.N]
        if not is_generic_critical(w, dim):
            bad.append((mn, "weight not generic"))
            continue
        for fam in ("sigma", "h"):
            if dim.N >= 2:
                res = recurrence_residues(dim, fam, 3, numeric_weight(w), cap=3)
                if any(res.values()):
                    bad.append((mn, fam, "recurrence"))
            for r in range(-3, 0):
                if sympy.Matrix(lambda_matrix_numeric(dim, w, r)).det() == 0:
                    bad.append((mn, "singular Lambda", r))
            exprs, lins, modes = recover_generators(dim, fam, w, 3)
            if any(lins[r] != expected_linearization(dim, fam, w, r) for r in lins):
                bad.append((mn, fam, "linearization"))
            if not round_trip(exprs, modes):
                bad.append((mn, fam, "recovery"))
    return bad


def criterion_11():
    bad = []
    for mn in UP_TO_3:
        dim = superdim(*mn)
        eng = FieldAction(dim, cap=3)
        for k in range(1, 4):
            if route_a(dim, "s", k, cap=3, engine=eng) != newton_rhs(dim, k, cap=3):
                bad.append((mn, k))
    return bad


def criterion_12():
    bad = []
    for mn in [(1, 1), (2, 1), (2, 0)]:
        dim = superdim(*mn)
        for points in [(0, 1), (0, 1, 3)]:
            mods = ["natural"] * len(points)
            for shift in (None, ["1/2", "-1/3", "2/5"][:dim.N]):
                system = GaudinSystem(dim, mods, points, shift)
                rep = commutativity_check(system, 3)
                if not rep["all_commute"] or not rep["sigma_equals_b"]:
                    bad.append((mn, points, shift, rep["witnesses"][:1]))
                res = residue_decomposition_check(system)
                if not res["decomposition"] or res["casimir"] != [str(dim.m - dim.n + 1)] * len(points):
                    bad.append((mn, points, shift, "residues"))
    return bad


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}
EXPECTED_FAILURES = {6}


# --------------------------------------------------------------------- tests

def _run(num):
    failures = CRITERIA[num]()
    _record(num, failures)
    return failures


@pytest.mark.parametrize("num", [n for n in CRITERIA if n not in EXPECTED_FAILURES])
def test_criterion(num):
    assert _run(num) == []


@pytest.mark.xfail(strict=True, reason="m = n: e_ii[1] maps s_kk to -k(-1)^i s_(k-1)(k-1) in the vacuum module")
def test_criterion_6():
    assert _run(6) == []


def test_criterion_6_failure_set():
    """The only failures of criterion 6 are gl(1|1) annihilation checks by e_ii[1]."""
    failures = CRITERIA[6]()
    assert failures
    assert {f[0] for f in failures} == {(1, 1)}
    for mn, (fam, k, l), (i, j, r) in failures:
        assert i == j and r == 1 and k >= 2


def main() -> int:
    for num in CRITERIA:
        _run(num)
    return 0 if all(RESULTS[n].split()[2] == "PASS" for n in CRITERIA) else 1


if __name__ == "__main__":
    sys.exit(main())
