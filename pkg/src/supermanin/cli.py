"""Command-line front end: verification suites and expansion dumps.

Exit codes: 0 all checks pass, 1 some identity fails, 2 usage error.
Reports are JSON with ``schema: 1`` and contain no timings, so repeated
runs at a fixed configuration are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

from .core import NCPoly, SuperDim, qq, superdim, to_text

SCHEMA = 1
MAX_DEGREE = int(os.environ.get("SUPERMANIN_MAX_DEGREE", 6))
MAX_RANK = int(os.environ.get("SUPERMANIN_MAX_RANK", 4))
SUITES = ("mmm", "berezinian", "newton", "sugawara", "singular", "gaudin", "all")
DUMPS = ("bos", "ferm", "berezinian", "sugawara-family", "hc-images", "lambda-det")
DEFAULT_WEIGHTS = ("1/3", "-2/7", "5/11", "-3/13", "7/17")


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ helpers

def series_text(coeffs: Sequence[NCPoly], var: str = "u") -> str:
    """Canonical text of sum_k coeffs[k] var^k, e.g. ``1 - u*z[1,1]``."""
    parts: List[str] = []
    for k, p in enumerate(coeffs):
        for w, c in sorted(p.terms.items()):
            factors = []
            if k == 1:
                factors.append(var)
            elif k > 1:
                factors.append(f"{var}^{k}")
            if w:
                factors.append(".".join(str(s) for s in w))
            neg = c < 0
            a = -c if neg else c
            body = "*".join(factors)
            if not body:
                body = str(a)
            elif a != 1:
                body = f"{a}*{body}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
    return "".join(parts) or "0"


def _check(name: str, ok: bool, detail=None) -> dict:
    out = {"name": name, "status": "pass" if ok else "fail"}
    if detail is not None:
        out["detail"] = detail
    return out


def _dim(args) -> SuperDim:
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required")
    try:
        d = superdim(args.m, args.n)
    except ValueError as exc:
        raise UsageError(str(exc))
    if d.N > MAX_RANK:
        raise UsageError(f"m+n={d.N} exceeds the cap {MAX_RANK} (SUPERMANIN_MAX_RANK)")
    return d


def _cap(value: Optional[int], default: int, name: str) -> int:
    v = default if value is None else value
    if v < 0 or v > MAX_DEGREE:
        raise UsageError(f"{name}={v} outside 0..{MAX_DEGREE} (SUPERMANIN_MAX_DEGREE)")
    return v


def _rationals(text: Optional[str], name: str):
    if text is None:
        return None
    try:
        return [qq(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, TypeError, ZeroDivisionError):
        raise UsageError(f"--{name} expects comma-separated rationals")


def _points(args, count: int):
    pts = _rationals(args.points, "points")
    if pts is None:
        pts = [qq(i) for i in range(count)]
    if len(pts) != count:
        raise UsageError("one point per module is required")
    if len(set(pts)) != len(pts):
        raise UsageError("evaluation points must be pairwise distinct")
    return pts


def _weight(args, dim: SuperDim):
    w = _rationals(args.lam, "lambda")
    if w is None:
        return [qq(x) for x in DEFAULT_WEIGHTS[:dim.N]]
    if len(w) != dim.N:
        raise UsageError(f"--lambda needs {dim.N} components")
    return w


def _level(args, dim: SuperDim):
    if args.level in (None, "critical"):
        return qq(dim.n - dim.m)
    try:
        return qq(args.level)
    except (ValueError, TypeError):
        raise UsageError("--level expects 'critical' or a rational")


# ------------------------------------------------------------------ suites

def suite_mmm(dim: SuperDim, args) -> List[dict]:
    from .quotient import macmahon_report
    deg = _cap(args.deg, 4, "deg")
    out = []
    for d in range(1, deg + 1):
        r = macmahon_report(dim, d)
        out.append(_check(f"bos*ferm degree {d}", r["status"] == "pass",
                          {"counterexample": r["counterexample"], "dims": r["dims"]}))
    return out


def _generic_ring(dim: SuperDim):
    from .quotient import QuadraticSpec, quotient
    from .tensor import generic_matrix
    return generic_matrix(dim), quotient(QuadraticSpec(dim)).ring()


def _T_ring(dim: SuperDim):
    from .pbw import PBW, FREE_MODE
    from .sugawara import build_T
    # brackets inside T^k push modes down to about -2k
    return build_T(dim), PBW(dim, FREE_MODE, window=8).ring()


def _inputs(dim: SuperDim, order: int):
    yield "generic", order, _generic_ring(dim)
    yield "tau+E[-1]", min(order, 3), _T_ring(dim)


def suite_berezinian(dim: SuperDim, args) -> List[dict]:
    from .berezinian import MatrixSeries, factorization_check
    order = _cap(args.deg, 4 if dim.N <= 2 else 3, "deg")
    out = []
    for label, o, (Z, ring) in _inputs(dim, order):
        res = factorization_check(MatrixSeries.one_plus_u(Z, dim, o, ring))
        for key in ("gauss", "trailing", "product"):
            out.append(_check(f"{label} {key} to u^{o}", res[key]))
    return out


def suite_newton(dim: SuperDim, args) -> List[dict]:
    from .berezinian import expansion_identities
    order = _cap(args.deg, 4 if dim.N <= 2 else 3, "deg")
    out = []
    for label, o, (Z, ring) in _inputs(dim, order):
        res = expansion_identities(Z, dim, o, ring)
        for key in ("charferm", "charbos", "newton"):
            out.append(_check(f"{label} {key} to u^{o}", res[key]))
    return out


def suite_sugawara(dim: SuperDim, args) -> List[dict]:
    from .quotient import is_manin
    from .sugawara import FAMILIES, SugawaraFamilies, annihilation_report, pairwise_supercommute
    kmax = _cap(args.kmax, 4 if dim.N <= 2 else 3, "kmax")
    level = _level(args, dim)
    T, ring = _T_ring(dim)
    out = [_check("tau+E[-1] is a Manin matrix", is_manin(T, dim, ring))]
    F = SugawaraFamilies(dim)
    vecs = []
    for fam in FAMILIES:
        failures = []
        for k in range(1, kmax + 1):
            for l, v in sorted(F.coefficients(fam, k).items()):
                vecs.append(v)
                bad = sorted(key for key, ok in annihilation_report(v, dim, level).items() if not ok)
                if bad:
                    failures.append({"k": k, "l": l, "fails": [list(b) for b in bad]})
        out.append(_check(f"{fam} annihilated at level {level}", not failures, failures or None))
    out.append(_check("b = sigma", all(F.coefficients("b", k) == F.coefficients("sigma", k)
                                        for k in range(1, kmax + 1))))
    if dim.N >= 2:
        shifted = level + 1
        rep = annihilation_report(F.member("s", 2, 2), dim, shifted)
        out.append(_check(f"s22 fails some e[1] test at level {shifted}",
                          any(not ok for (i, j, r), ok in rep.items() if r == 1)))
    pairs, fails = pairwise_supercommute(vecs, dim)
    out.append(_check("pairwise supercommutativity", not fails, {"pairs_checked": pairs}))
    return out


def suite_singular(dim: SuperDim, args) -> List[dict]:
    from .core import NCPoly, lam
    from .pbw import is_generic_critical
    from .sugawara import (FieldAction, det_lambda_check, expected_linearization, fourier_modes,
                           newton_rhs, recover_generators, recurrence_residues, round_trip,
                           route_a, route_b)
    kmax = _cap(args.kmax, 3, "kmax")
    cap = 3
    out = []
    eng = FieldAction(dim, cap=cap)
    for fam in ("sigma", "h"):
        for k in range(1, kmax + 1):
            out.append(_check(f"{fam}_{k} route (a) = route (b)",
                              route_a(dim, fam, k, cap=cap, engine=eng) == route_b(dim, fam, k, cap=cap)))
    lsum = NCPoly()
    for i in dim.indices():
        lsum = lsum + NCPoly.gen(lam(i))
    s1 = fourier_modes(route_b(dim, "sigma", 1, cap=cap), 1)
    h1 = fourier_modes(route_b(dim, "h", 1, cap=cap), 1)
    out.append(_check("sigma11[0] = sum lambda", s1.get((1, 0), NCPoly()) == lsum))
    out.append(_check("h11[0] = sum lambda", h1.get((1, 0), NCPoly()) == lsum))
    from .sugawara import _e_mode
    ok = all(s1.get((1, r), NCPoly()) == sum((_e_mode(i, r) for i in dim.indices()), NCPoly())
             for r in range(-cap, 0))
    out.append(_check("sigma11[r] = sum e_ii[r], r<0", ok))
    ok = all(h1.get((1, r), NCPoly()) == sum((_e_mode(i, r) for i in dim.indices()), NCPoly())
             for r in range(-cap, 0))
    out.append(_check("h11[r] = sum e_ii[r], r<0", ok))
    out.append(_check("det Lambda = product", det_lambda_check(dim)))
    if dim.N >= 2:
        for fam in ("sigma", "h"):
            res = recurrence_residues(dim, fam, kmax, cap=cap)
            out.append(_check(f"{fam} recurrence", not any(res.values())))
    w = _weight(args, dim)
    generic = is_generic_critical(w, dim)
    out.append(_check("weight is generic critical", generic, [str(x) for x in w]))
    if generic:
        for fam in ("sigma", "h"):
            try:
                ex, lins, modes = recover_generators(dim, fam, w, cap)
            except ZeroDivisionError:
                out.append(_check(f"{fam} generators", False, "singular linearization"))
                continue
            out.append(_check(f"{fam} linearization = Lambda",
                              all(lins[r] == expected_linearization(dim, fam, w, r) for r in lins)))
            out.append(_check(f"{fam} generate e_ii[r], r >= -{cap}", round_trip(ex, modes)))
    for k in range(1, kmax + 1):
        out.append(_check(f"Newton relation k={k}",
                          route_a(dim, "s", k, cap=cap, engine=eng) == newton_rhs(dim, k, cap=cap)))
    return out


def gaudin_report(dim: SuperDim, args) -> dict:
    from .gaudin import GaudinError, GaudinSystem, commutativity_check, residue_decomposition_check
    mods = [m.strip() for m in (args.modules or "natural,natural").split(",") if m.strip()]
    pts = _points(args, len(mods))
    lam_ = _rationals(args.lam, "lambda")
    if lam_ is not None and len(lam_) != dim.N:
        raise UsageError(f"--lambda needs {dim.N} components")
    kmax = _cap(args.kmax, 3, "kmax")
    try:
        system = GaudinSystem(dim, mods, pts, lam_)
    except GaudinError as exc:
        raise UsageError(str(exc))
    rep = commutativity_check(system, kmax)
    res = residue_decomposition_check(system)
    return {"pairs_checked": rep["pairs_checked"], "all_commute": rep["all_commute"],
            "witnesses": rep["witnesses"], "sigma_equals_b": rep["sigma_equals_b"],
            "residue_decomposition": res["decomposition"], "casimir": res["casimir"]}


def suite_gaudin(dim: SuperDim, args) -> List[dict]:
    r = gaudin_report(dim, args)
    return [_check("Gaudin coefficients commute", r["all_commute"],
                   {"pairs_checked": r["pairs_checked"], "witnesses": r["witnesses"]}),
            _check("Sigma = B", bool(r["sigma_equals_b"])),
            _check("H(z) residue decomposition", r["residue_decomposition"], {"casimir": r["casimir"]})]


SUITE_FUNCS: Dict[str, Callable] = {
    "mmm": suite_mmm, "berezinian": suite_berezinian, "newton": suite_newton,
    "sugawara": suite_sugawara, "singular": suite_singular, "gaudin": suite_gaudin,
}


def cmd_verify(args) -> int:
    dim = _dim(args)
    names = list(SUITE_FUNCS) if args.suite == "all" else [args.suite]
    if "gaudin" in names:
        mods = [m for m in (args.modules or "natural,natural").split(",") if m.strip()]
        _points(args, len(mods))
    checks = []
    for name in names:
        for c in SUITE_FUNCS[name](dim, args):
            c["suite"] = name
            checks.append(c)
    ok = all(c["status"] == "pass" for c in checks)
    _emit({"schema": SCHEMA, "command": "verify", "suite": args.suite, "m": dim.m, "n": dim.n,
           "status": "pass" if ok else "fail", "checks": checks}, args)
    return 0 if ok else 1


# ------------------------------------------------------------------- dumps

def cmd_dump(args) -> int:
    dim = _dim(args)
    obj = args.object
    if obj in ("bos", "ferm"):
        from .quotient import bos_terms, ferm_terms
        deg = _cap(args.deg, 4, "deg")
        Z, ring = _generic_ring(dim)
        terms = (bos_terms if obj == "bos" else ferm_terms)(Z, dim, deg)
        _write(series_text([ring.normalize(t) for t in terms]), args)
    elif obj == "berezinian":
        from .berezinian import MatrixSeries, berezinian
        deg = _cap(args.deg, 3, "deg")
        Z, ring = _generic_ring(dim)
        ber = berezinian(MatrixSeries.one_plus_u(Z, dim, deg, ring))
        table = [{"order": k, "coefficient": to_text(c)} for k, c in enumerate(ber.coeffs)]
        _emit({"schema": SCHEMA, "m": dim.m, "n": dim.n, "berezinian": table}, args)
    elif obj == "sugawara-family":
        from .sugawara import FAMILIES, SugawaraFamilies
        fam = args.family or "s"
        if fam not in FAMILIES:
            raise UsageError(f"family must be one of {', '.join(FAMILIES)}")
        kmax = _cap(args.kmax, 2, "kmax")
        F = SugawaraFamilies(dim)
        lines = [f"{fam}{k}{l} = {to_text(v)}" for k in range(1, kmax + 1)
                 for l, v in sorted(F.coefficients(fam, k).items())]
        _write("\n".join(lines), args)
    elif obj == "hc-images":
        from .sugawara import fourier_modes, route_b
        kmax = _cap(args.kmax, 2, "kmax")
        lines = []
        for fam in ("sigma", "h"):
            for k in range(1, kmax + 1):
                for (l, r), v in sorted(fourier_modes(route_b(dim, fam, k, cap=3), k).items()):
                    lines.append(f"{fam}^λ{k}{l}[{r}] = {to_text(v)}")
        _write("\n".join(lines), args)
    elif obj == "lambda-det":
        from .sugawara import lambda_det
        _write(str(lambda_det(dim)), args)
    else:
        raise UsageError(f"unknown object {obj}")
    return 0


# --------------------------------------------------------- module commands

def cmd_sugawara(args) -> int:
    from .sugawara import FAMILIES, SugawaraFamilies, annihilation_report
    dim = _dim(args)
    kmax = _cap(args.kmax, 2, "kmax")
    level = _level(args, dim)
    F = SugawaraFamilies(dim)
    fams = [args.family] if args.family else list(FAMILIES)
    report = []
    ok = True
    for fam in fams:
        if fam not in FAMILIES:
            raise UsageError(f"family must be one of {', '.join(FAMILIES)}")
        for k in range(1, kmax + 1):
            for l, v in sorted(F.coefficients(fam, k).items()):
                ann = annihilation_report(v, dim, level)
                ok &= all(ann.values())
                report.append({"family": fam, "k": k, "l": l, "element": to_text(v),
                               "annihilation": {f"e[{i},{j}][{r}]": "pass" if good else "fail"
                                                for (i, j, r), good in sorted(ann.items())}})
    _emit({"schema": SCHEMA, "command": "sugawara", "m": dim.m, "n": dim.n, "level": str(level),
           "status": "pass" if ok else "fail", "members": report}, args)
    return 0 if ok else 1


def cmd_gaudin(args) -> int:
    dim = _dim(args)
    r = gaudin_report(dim, args)
    _emit(dict({"schema": SCHEMA, "command": "gaudin", "m": dim.m, "n": dim.n}, **r), args)
    return 0 if r["all_commute"] and r["residue_decomposition"] else 1


# ---------------------------------------------------------------- plumbing

def _write(text: str, args):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _emit(obj: dict, args):
    _write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False), args)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p):
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--deg", type=int)
    p.add_argument("--kmax", type=int)
    p.add_argument("--level")
    p.add_argument("--points")
    p.add_argument("--modules")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--out")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="supermanin", description="Exact checks for quantum superalgebra identities.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    _common(v)
    d = sub.add_parser("dump", help="print an expansion")
    d.add_argument("object", choices=DUMPS)
    d.add_argument("family", nargs="?")
    _common(d)
    s = sub.add_parser("sugawara", help="Segal-Sugawara annihilation report")
    s.add_argument("--family")
    _common(s)
    g = sub.add_parser("gaudin", help="Gaudin commutativity report")
    _common(g)
    return p


COMMANDS = {"verify": cmd_verify, "dump": cmd_dump, "sugawara": cmd_sugawara, "gaudin": cmd_gaudin}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
