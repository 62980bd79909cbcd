"""Segal-Sugawara vectors for the affine gl(m|n) and their Harish-Chandra images.

The four families are computed once in the free algebra on abstract letters
``z[i,j]`` and then transported to the enveloping algebra by substituting
the entries of ``tau + E[-1]`` and straightening.  Substitution is a parity
preserving homomorphism, so it commutes with every tensor construction.

Images of singular vectors are computed twice.  Route (a) applies the
normally ordered field of each word to the highest vector of a Verma module
and projects; route (b) expands the ordered product of first-order
differential operators attached to admissible multisets of indices.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import sympy

from .core import (E, LAM, NCPoly, ONE, Rational, SuperDim, TAU_SYM, Z, ZERO, GenSymbol,
                   cmul, commutative_normal_form, e as esym, lam, qq, superdim)
from .berezinian import MatrixSeries, berezinian
from .linalg import Echelon, inverse as rat_inverse
from .pbw import FREE_MODE, PBW, RAISING_FIRST, VACUUM, VERMA, hc_project, split_tau
from .tensor import FREE, generic_matrix, h_direct, matpow, matrix_supertrace, sigma_direct

FAMILIES = ("s", "sigma", "h", "b")


# ------------------------------------------------------------------ matrices

def build_T(dim: SuperDim) -> List[List[NCPoly]]:
    """tau + E[-1] with entries delta_ij tau + e_ij[-1] (-1)^i."""
    out = []
    for i in dim.indices():
        row = []
        for j in dim.indices():
            v = NCPoly.gen(esym(i, j, -1, dim), -1 if dim.parity(i) else 1)
            if i == j:
                v = v + NCPoly.gen(TAU_SYM)
            row.append(v)
        out.append(row)
    return out


def free_family(dim: SuperDim, family: str, k: int) -> NCPoly:
    """The family member of order k as a polynomial in abstract letters z[i,j]."""
    Z_ = generic_matrix(dim)
    if family == "s":
        return matrix_supertrace(matpow(Z_, k), dim) if k else NCPoly.const(1)
    if family == "sigma":
        return sigma_direct(Z_, k, dim)
    if family == "h":
        return h_direct(Z_, k, dim)
    if family == "b":
        return _free_ber(dim, k)[k]
    raise ValueError(f"unknown family {family}")


_BER_CACHE: Dict = {}


def _free_ber(dim: SuperDim, k: int):
    key = (dim, k)
    if key not in _BER_CACHE:
        Z_ = generic_matrix(dim)
        _BER_CACHE[key] = berezinian(MatrixSeries.one_plus_u(Z_, dim, max(k, 1))).coeffs
    return _BER_CACHE[key]


class Substitution:
    """Word-by-word image of free polynomials under z[i,j] -> image(i,j), straightened."""

    def __init__(self, pbw: PBW, images: Dict[GenSymbol, NCPoly]):
        self.pbw = pbw
        self.images = images
        self._suffix: Dict[Tuple, NCPoly] = {(): NCPoly.const(1)}

    def word(self, w: Tuple) -> NCPoly:
        hit = self._suffix.get(w)
        if hit is not None:
            return hit
        tail = self.word(w[1:])
        out = self.pbw.apply(self.images[w[0]], tail)
        self._suffix[w] = out
        return out

    def __call__(self, p: NCPoly) -> NCPoly:
        acc: Dict = {}
        for w, c in p.terms.items():
            for w2, c2 in self.word(w).terms.items():
                acc[w2] = acc.get(w2, ZERO) + c * c2
        return NCPoly({w: c for w, c in acc.items() if c}, _clean=True)


class SugawaraFamilies:
    """Coefficients s_kl, sigma_kl, h_kl, b_kl in U(t^-1 gl[t^-1])."""

    def __init__(self, dim: SuperDim, window: Optional[int] = None):
        self.dim = dim
        self.pbw = PBW(dim, FREE_MODE, window=window)
        T = build_T(dim)
        images = {GenSymbol(Z, 0, i, j, dim.parity(i) ^ dim.parity(j)): T[i - 1][j - 1]
                  for i in dim.indices() for j in dim.indices()}
        self.subst = Substitution(self.pbw, images)
        self._cache: Dict[Tuple[str, int], Dict[int, NCPoly]] = {}

    def expansion(self, family: str, k: int) -> NCPoly:
        """The full element with tau powers on the right."""
        return self.subst(free_family(self.dim, family, k))

    def coefficients(self, family: str, k: int) -> Dict[int, NCPoly]:
        """{l: x_kl} for l = 0..k."""
        key = (family, k)
        if key not in self._cache:
            parts = split_tau(self.expansion(family, k))
            self._cache[key] = {k - j: v for j, v in parts.items() if v}
            for l in range(k + 1):
                self._cache[key].setdefault(l, NCPoly())
        return self._cache[key]

    def member(self, family: str, k: int, l: int) -> NCPoly:
        return self.coefficients(family, k)[l]


# -------------------------------------------------------- invariance checks

def annihilation_report(v: NCPoly, dim: SuperDim, level=None, modes=(0, 1),
                        window: Optional[int] = None) -> Dict[Tuple[int, int, int], bool]:
    """Which e_ij[mode] kill v in the vacuum module at the given level."""
    vac = PBW(dim, VACUUM, level=level, window=window)
    vec = vac.normal_order(v)
    out = {}
    for r in modes:
        for i in dim.indices():
            for j in dim.indices():
                out[(i, j, r)] = not vac.apply(NCPoly.gen(esym(i, j, r, dim)), vec)
    return out


def is_segal_sugawara(v: NCPoly, dim: SuperDim, level=None) -> bool:
    return all(annihilation_report(v, dim, level).values())


def _e_degree(w) -> int:
    return -sum(x.r for x in w if x.family == E)


def pairwise_supercommute(vectors: Sequence[NCPoly], dim: SuperDim):
    """Check [x, y] = 0 on a basis of the span of the given vectors.

    The supercommutator is bilinear, so vanishing on a basis of the span is
    equivalent to vanishing on all pairs.  The mode window is widened to the
    largest product degree.  Returns (pairs checked, failures).
    """
    vecs = [v for v in vectors if v]
    top = max((_e_degree(w) for v in vecs for w in v.terms), default=0)
    pbw = PBW(dim, FREE_MODE, window=max(2 * top, 1))
    words = sorted({w for v in vecs for w in v.terms})
    ix = {w: n for n, w in enumerate(words)}
    ech = Echelon()
    basis = []
    for v in vecs:
        if ech.add({ix[w]: c for w, c in v.terms.items()}):
            basis.append(v)
    fails = []
    pairs = 0
    for a in range(len(basis)):
        for b in range(a, len(basis)):
            x, y = basis[a], basis[b]
            px, py = x.parity, y.parity
            xy = pbw.multiply(x, y)
            yx = pbw.multiply(y, x)
            comm = xy + yx if (px and py) else xy - yx
            pairs += 1
            if comm:
                fails.append((a, b, comm))
    return pairs, fails


# ---------------------------------------------------- differential operators

class ZOp:
    """Sum of c_{j,p} z^p d_z^j with coefficients in a commutative ring.

    Coefficients are NCPoly values whose words are sorted (commutative
    normal form).  Terms whose coefficient degree exceeds ``cap`` are
    dropped; degrees only grow under composition so truncation is exact.
    """

    __slots__ = ("terms", "cap")

    def __init__(self, terms: Dict[Tuple[int, int], NCPoly], cap: int):
        self.cap = cap
        self.terms = {k: v for k, v in terms.items() if v}

    @classmethod
    def one(cls, cap):
        return cls({(0, 0): NCPoly.const(1)}, cap)

    def __add__(self, other: "ZOp") -> "ZOp":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return ZOp(out, min(self.cap, other.cap))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ZOp":
        return ZOp({k: v.scale(c) for k, v in self.terms.items()}, self.cap)

    def compose(self, other: "ZOp") -> "ZOp":
        cap = min(self.cap, other.cap)
        out: Dict[Tuple[int, int], NCPoly] = {}
        for (j, p), a in self.terms.items():
            da = _coeff_degree(a)
            for (j2, p2), b in other.terms.items():
                if da + _coeff_degree(b) > cap:
                    continue
                ab = cmul(a, b)
                # d^j (z^p2 g) = sum_t C(j,t) (p2)_t z^(p2-t) d^(j-t) g
                ff = 1
                for t in range(j + 1):
                    if t:
                        ff *= (p2 - t + 1)
                    if ff == 0:
                        break
                    c = comb(j, t) * ff
                    key = (j - t + j2, p + p2 - t)
                    term = ab.scale(c)
                    out[key] = out[key] + term if key in out else term
        return ZOp(out, cap)

    __mul__ = compose

    def coefficient(self, j: int) -> Dict[int, NCPoly]:
        """{p: c_{j,p}}."""
        return {p: v for (jj, p), v in self.terms.items() if jj == j}

    def truncated(self, cap: int) -> "ZOp":
        return ZOp({k: v for k, v in self.terms.items() if _coeff_degree(v) <= cap}, cap)

    def normalized(self) -> "ZOp":
        return ZOp({k: commutative_normal_form(v) for k, v in self.terms.items()}, self.cap)

    def __eq__(self, other) -> bool:
        a, b = self.normalized().terms, other.normalized().terms
        return a == b

    def is_zero(self) -> bool:
        return not self.normalized().terms


def _coeff_degree(p: NCPoly) -> int:
    if not p:
        return 0
    return max(_e_degree(w) for w in p.terms)


def first_order(sign_d: int, i: int, weight, cap: int) -> ZOp:
    """sign_d * d_z + lam_i z^-1 + e_ii(z)_+ truncated at degree cap."""
    terms: Dict[Tuple[int, int], NCPoly] = {(1, 0): NCPoly.const(sign_d)}
    lv = weight(i)
    if lv:
        terms[(0, -1)] = lv
    for r in range(-1, -cap - 1, -1):
        terms[(0, -r - 1)] = NCPoly.gen(GenSymbol(E, r, i, i, 0))
    return ZOp(terms, cap)


def symbolic_weight(i: int) -> NCPoly:
    return NCPoly.gen(lam(i))


def numeric_weight(values: Sequence) -> Callable[[int], NCPoly]:
    vals = [qq(v) for v in values]
    return lambda i: NCPoly.const(vals[i - 1])


def proddz_sigma(indices: Sequence[int], parity: Callable[[int], int], k: int, weight, cap: int) -> ZOp:
    """Sum over multisets (odd part weakly decreasing first, then even part strictly decreasing)."""
    odd = sorted((i for i in indices if parity(i)), reverse=True)
    even = sorted((i for i in indices if not parity(i)), reverse=True)
    total = ZOp({}, cap)
    for l in range(k + 1):
        for o in itertools.combinations_with_replacement(odd, l):
            for ev in itertools.combinations(even, k - l):
                op = ZOp.one(cap)
                for i in o:
                    op = op * first_order(-1, i, weight, cap)
                for i in ev:
                    op = op * first_order(1, i, weight, cap)
                total = total + op
    return total


def proddz_h(indices: Sequence[int], parity: Callable[[int], int], k: int, weight, cap: int) -> ZOp:
    """Sum over multisets (even part weakly increasing first, then odd part strictly increasing)."""
    even = sorted(i for i in indices if not parity(i))
    odd = sorted(i for i in indices if parity(i))
    total = ZOp({}, cap)
    for l in range(k + 1):
        for ev in itertools.combinations_with_replacement(even, l):
            for o in itertools.combinations(odd, k - l):
                op = ZOp.one(cap)
                for i in ev:
                    op = op * first_order(1, i, weight, cap)
                for i in o:
                    op = op * first_order(-1, i, weight, cap)
                total = total + op
    return total


def route_b(dim: SuperDim, family: str, k: int, weight=symbolic_weight, cap: int = 3) -> ZOp:
    idx = list(dim.indices())
    if family == "sigma":
        return proddz_sigma(idx, dim.parity, k, weight, cap)
    if family == "h":
        return proddz_h(idx, dim.parity, k, weight, cap)
    raise ValueError("route (b) exists for the sigma and h families only")


# ------------------------------------------------------------------ route (a)

class FieldAction:
    """Normally ordered fields of words in T(z) = d_z + E(z) applied to 1_lambda.

    A state is a dict {(j, p): vector} standing for sum vector z^p f^(j) for
    a test function f.  All minus parts act before all plus parts along any
    path of the recursion, so truncating plus parts at vector degree ``cap``
    is exact.
    """

    def __init__(self, dim: SuperDim, weight: Optional[Sequence] = None, cap: int = 3,
                 order: str = RAISING_FIRST, window: Optional[int] = None):
        self.dim = dim
        self.cap = cap
        self.verma = PBW(dim, VERMA, weight=weight, order=order,
                         window=max(window or 0, cap + 1))
        self._memo: Dict = {}

    def _letter_data(self, s: GenSymbol):
        return s.i, s.j, (-1 if self.dim.parity(s.i) else 1), s.parity

    def _run(self, word: Tuple, mono: Tuple) -> Dict[Tuple[int, int, Tuple], Rational]:
        """Field of ``word`` applied to mono * f: {(j, p, vector): c} for vector z^p f^(j)."""
        key = (word, mono)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not word:
            res = {(0, 0, mono): ONE}
            self._memo[key] = res
            return res
        a, rest = word[0], word[1:]
        i, jj, sgn, par = self._letter_data(a)
        rest_par = 0
        for x in rest:
            rest_par ^= x.parity
        kos = -1 if (par and rest_par) else 1
        out: Dict = {}
        for (j2, p2, m2), c in self._run(rest, mono).items():
            if i == jj:
                if p2:
                    _add(out, (j2, p2 - 1, m2), c * p2)
                _add(out, (j2 + 1, p2, m2), c)
            deg = _e_degree(m2)
            for r in range(-1, -(self.cap - deg) - 1, -1):
                v = self.verma.apply(NCPoly.gen(esym(i, jj, r, self.dim)), NCPoly.word(m2))
                for w, c2 in v.terms.items():
                    _add(out, (j2, p2 - r - 1, w), c * c2 * sgn)
        # the annihilation part passes through the remaining fields; the
        # derivatives to its right do not act on its z-dependence
        for r in range(0, _e_degree(mono) + 1):
            v = self.verma.apply(NCPoly.gen(esym(i, jj, r, self.dim)), NCPoly.word(mono))
            for w, c2 in v.terms.items():
                for (j3, p3, m3), c3 in self._run(rest, w).items():
                    _add(out, (j3, p3 - r - 1, m3), c2 * c3 * sgn * kos)
        out = {k2: v for k2, v in out.items() if v}
        self._memo[key] = out
        return out

    def apply(self, p: NCPoly) -> Dict[Tuple[int, int], NCPoly]:
        """Field of the free polynomial p applied to 1_lambda: {(j, z power): vector}."""
        acc: Dict[Tuple[int, int, Tuple], Rational] = {}
        for w, c in p.terms.items():
            for k2, c2 in self._run(w, ()).items():
                _add(acc, k2, c * c2)
        out: Dict[Tuple[int, int], Dict] = {}
        for (j, pw, mono), c in acc.items():
            if c:
                out.setdefault((j, pw), {})[mono] = c
        return {k: NCPoly(v, _clean=True) for k, v in out.items()}

    def hc_operator(self, p: NCPoly) -> ZOp:
        """Harish-Chandra image of the field of p applied to 1_lambda, as a ZOp."""
        terms = {}
        for k, v in self.apply(p).items():
            h = commutative_normal_form(hc_project(v))
            if h:
                terms[k] = h
        return ZOp(terms, self.cap)


def _add(d: Dict, k, v):
    d[k] = d.get(k, ZERO) + v


def route_a(dim: SuperDim, family: str, k: int, weight: Optional[Sequence] = None, cap: int = 3,
            order: str = RAISING_FIRST, engine: Optional[FieldAction] = None) -> ZOp:
    engine = engine or FieldAction(dim, weight, cap, order)
    return engine.hc_operator(free_family(dim, family, k))


def fourier_modes(op: ZOp, k: int) -> Dict[Tuple[int, int], NCPoly]:
    """{(l, r): x_kl[r]} from x_kl(z) = sum_r x_kl[r] z^(-r-l)."""
    out = {}
    for (j, p), v in op.terms.items():
        l = k - j
        out[(l, -p - l)] = v
    return out


# -------------------------------------------------------- Newton relation

def newton_rhs(dim: SuperDim, k: int, weight=symbolic_weight, cap: int = 3) -> ZOp:
    """sum_l (-1)^l (l+1) h_{k-l-1}(z) sigma_{l+1}(z) as composed operators."""
    total = ZOp({}, cap)
    for l in range(k):
        h = route_b(dim, "h", k - l - 1, weight, cap) if k - l - 1 else ZOp.one(cap)
        s = route_b(dim, "sigma", l + 1, weight, cap)
        total = total + (h * s).scale((-1) ** l * (l + 1))
    return total


# ----------------------------------------------- shifted symmetric functions

def shifted_h(a: int, xs: Sequence) -> sympy.Expr:
    """sum over l >= i1 >= ... >= ia >= 1 of (x_i1 + a - 1) ... (x_i(a-1) + 1) x_ia."""
    if a == 0:
        return sympy.Integer(1)
    l = len(xs)
    total = sympy.Integer(0)
    for combo in itertools.combinations_with_replacement(range(l), a):
        idx = sorted(combo, reverse=True)
        term = sympy.Integer(1)
        for pos, i in enumerate(idx):
            term *= xs[i] + (a - 1 - pos)
        total += term
    return sympy.expand(total)


INCLUSIVE, EXCLUSIVE = "inclusive", "exclusive"


def shifted_e(a: int, xs: Sequence, reading: str = INCLUSIVE) -> sympy.Expr:
    """sum over l >= i1 > ... > ia >= 1 of (x_i1 - a + 1) ... (x_i(a-1) - 1) x_ia.

    The ``exclusive`` reading restricts to l > i1 and ia > 1.
    """
    if a == 0:
        return sympy.Integer(1)
    l = len(xs)
    lo, hi = (0, l) if reading == INCLUSIVE else (1, l - 1)
    total = sympy.Integer(0)
    for combo in itertools.combinations(range(lo, hi), a):
        idx = sorted(combo, reverse=True)
        term = sympy.Integer(1)
        for pos, i in enumerate(idx):
            term *= xs[i] - (a - 1 - pos)
        total += term
    return sympy.expand(total)


def lambda_symbols(N: int):
    return sympy.symbols(f"λ1:{N + 1}")


R_SYM = sympy.Symbol("r")


def lambda_matrix(dim: SuperDim, r=R_SYM, lams=None, reading: str = INCLUSIVE) -> sympy.Matrix:
    m, n = dim
    N = dim.N
    L = list(lams) if lams is not None else list(lambda_symbols(N))
    M = sympy.zeros(N, N)
    for k in range(1, N + 1):
        for i in range(1, N + 1):
            total = sympy.Integer(0)
            for a in range(k):
                for b in range(k - a):
                    c = k - 1 - a - b
                    if i <= m:
                        ha = shifted_h(a, [L[q - 1] + r + k - a for q in range(m + 1, N + 1)])
                        eb = shifted_e(b, [L[q - 1] - r - c - 1 for q in range(i + 1, m + 1)], reading)
                        ec = shifted_e(c, [L[q - 1] for q in range(1, i)], reading)
                        total += ha * eb * ec
                    else:
                        ha = shifted_h(a, [L[q - 1] + r + k - a for q in range(i, N + 1)])
                        hb = shifted_h(b, [L[q - 1] + c for q in range(m + 1, i + 1)])
                        ec = shifted_e(c, [L[q - 1] for q in range(1, m + 1)], reading)
                        total += ha * hb * ec
            M[k - 1, i - 1] = sympy.expand(total)
    return M


def det_product(dim: SuperDim, r=R_SYM, lams=None) -> sympy.Expr:
    m, n = dim
    N = dim.N
    L = list(lams) if lams is not None else list(lambda_symbols(N))
    out = sympy.Integer(1)
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            out *= L[i - 1] - L[j - 1] + j - i + r
    for i in range(m + 1, N + 1):
        for j in range(i + 1, N + 1):
            out *= L[j - 1] - L[i - 1] - j + i - r
    for i in range(1, m + 1):
        for j in range(m + 1, N + 1):
            out *= L[i - 1] + L[j - 1] - i - j + 2 * m + 1
    return sympy.expand(out)


def lambda_det(dim: SuperDim, reading: str = INCLUSIVE) -> sympy.Expr:
    return sympy.expand(lambda_matrix(dim, reading=reading).det(method="bareiss"))


def det_lambda_check(dim: SuperDim, reading: str = INCLUSIVE) -> bool:
    return sympy.expand(lambda_det(dim, reading) - det_product(dim)) == 0


def lambda_matrix_numeric(dim: SuperDim, weight: Sequence, r: int, reading: str = INCLUSIVE):
    M = lambda_matrix(dim, r=sympy.Integer(r), lams=[sympy.Rational(str(qq(w))) for w in weight],
                      reading=reading)
    return [[qq(str(M[a, b])) for b in range(dim.N)] for a in range(dim.N)]


# ------------------------------------------------------------ recurrences

def diagonal_modes(dim: SuperDim, family: str, k: int, weight=symbolic_weight, cap: int = 3,
                   indices: Optional[Sequence[int]] = None) -> Dict[int, NCPoly]:
    """{r: x_kk[r]} for -cap <= r <= 0, over a subset of indices if given."""
    idx = list(dim.indices()) if indices is None else list(indices)
    if k == 0:
        return {r: NCPoly.const(1 if r == 0 else 0) for r in range(-cap, 1)}
    build = proddz_sigma if family == "sigma" else proddz_h
    op = build(idx, dim.parity, k, weight, cap)
    out = {r: NCPoly() for r in range(-cap, 1)}
    for (j, p), v in op.terms.items():
        if j == 0 and -cap <= -p - k <= 0:
            out[-p - k] = commutative_normal_form(v)
    return out


def _e_mode(i: int, r: int) -> NCPoly:
    return NCPoly.gen(GenSymbol(E, r, i, i, 0))


def recurrence_residues(dim: SuperDim, family: str, kmax: int, weight=symbolic_weight,
                        cap: int = 3) -> Dict[Tuple[int, int], NCPoly]:
    """Residues of the one-index recurrences, keyed by (k, r); zero when they hold.

    sigma peels off index N and h peels off index 1.  For an odd peeled index
    the shift runs upwards (lambda + r + k - 1), for an even one downwards
    (lambda - r - k + 1).  A trailing-odd peel multiplies the full family
    of order k - 1, a trailing-even peel the reduced one.
    """
    N = dim.N
    if N < 2:
        raise ValueError("the recurrences need at least two indices")
    a = N if family == "sigma" else 1
    rest = [i for i in dim.indices() if i != a]
    odd = dim.parity(a) == 1
    # sigma removes the last index: full family when it is odd, reduced when even
    # h removes the first index: full family when it is even, reduced when odd
    use_full = odd if family == "sigma" else not odd
    lam_a = weight(a)
    out = {}
    for k in range(1, kmax + 1):
        full = diagonal_modes(dim, family, k, weight, cap)
        red = diagonal_modes(dim, family, k, weight, cap, rest)
        prev = diagonal_modes(dim, family, k - 1, weight, cap, None if use_full else rest)
        for r in range(-cap, 1):
            shift = (r + k - 1) if odd else -(r + k - 1)
            rhs = red[r] + cmul(lam_a + NCPoly.const(shift), prev[r])
            for p in range(r, 0):
                rhs = rhs + cmul(_e_mode(a, p), prev[r - p])
            out[(k, r)] = commutative_normal_form(full[r] - rhs)
    return out


# ------------------------------------------------------------- generators

def linear_part(v: NCPoly, r: int, N: int) -> List[Rational]:
    """Coefficients of e_ii[r] in v, i = 1..N."""
    out = [ZERO] * N
    for w, c in v.terms.items():
        if len(w) == 1 and w[0].family == E and w[0].r == r:
            out[w[0].i - 1] += c
    return out


def linearization(dim: SuperDim, family: str, weight: Sequence, r: int, cap: int = 3):
    wt = numeric_weight(weight)
    rows = []
    for k in range(1, dim.N + 1):
        rows.append(linear_part(diagonal_modes(dim, family, k, wt, cap)[r], r, dim.N))
    return rows


def dual_weight(weight: Sequence) -> List:
    """lambda'_i = -lambda_(N-i+1)."""
    return [-qq(x) for x in reversed(weight)]


def expected_linearization(dim: SuperDim, family: str, weight: Sequence, r: int):
    """Lambda(lambda, r), or its signed relabelling for the h family."""
    if family == "sigma":
        return lambda_matrix_numeric(dim, weight, r)
    m, n = dim
    N = dim.N
    L = lambda_matrix_numeric(superdim(n, m), dual_weight(weight), r)
    return [[L[k][N - 1 - i] * (1 if k % 2 == 0 else -1) for i in range(N)] for k in range(N)]


def generator_symbol(family: str, k: int, r: int) -> GenSymbol:
    """Placeholder letter for x_kk[r]; family 0 for sigma, 1 for h."""
    from .core import X
    return GenSymbol(X, r, k, 0 if family == "sigma" else 1, 0)


def recover_generators(dim: SuperDim, family: str, weight: Sequence, depth: int = 3):
    """Express e_ii[r], -depth <= r <= -1, through x_kk[s], s >= r.

    Returns ({(i, r): expression}, {r: linearization}) and raises
    ZeroDivisionError when a linearization is singular.
    """
    N = dim.N
    wt = numeric_weight(weight)
    modes = {k: diagonal_modes(dim, family, k, wt, depth) for k in range(1, N + 1)}
    exprs: Dict[Tuple[int, int], NCPoly] = {}
    lins = {}

    def subst(p: NCPoly) -> NCPoly:
        acc = NCPoly()
        for w, c in p.terms.items():
            t = NCPoly.const(c)
            for x in w:
                t = cmul(t, exprs[(x.i, x.r)])
            acc = acc + t
        return acc

    for r in range(-1, -depth - 1, -1):
        M = [linear_part(modes[k][r], r, N) for k in range(1, N + 1)]
        lins[r] = M
        Minv = rat_inverse(M)
        if Minv is None:
            raise ZeroDivisionError(f"singular linearization at r={r}")
        rhs = []
        for k in range(1, N + 1):
            lin = NCPoly({(GenSymbol(E, r, i, i, 0),): M[k - 1][i - 1]
                          for i in range(1, N + 1) if M[k - 1][i - 1]}, _clean=True)
            nonlin = modes[k][r] - lin - NCPoly.const(modes[k][r].constant())
            rhs.append(NCPoly.gen(generator_symbol(family, k, r))
                       - NCPoly.const(modes[k][r].constant()) - subst(nonlin))
        for i in range(1, N + 1):
            acc = NCPoly()
            for k in range(1, N + 1):
                if Minv[i - 1][k - 1]:
                    acc = acc + rhs[k - 1].scale(Minv[i - 1][k - 1])
            exprs[(i, r)] = commutative_normal_form(acc)
    return exprs, lins, modes


def round_trip(exprs, modes) -> bool:
    """Substituting x_kk[r] back must return e_ii[r]."""
    for (i, r), ex in exprs.items():
        acc = NCPoly()
        for w, c in ex.terms.items():
            t = NCPoly.const(c)
            for x in w:
                t = cmul(t, modes[x.i][x.r])
            acc = acc + t
        if commutative_normal_form(acc) != _e_mode(i, r):
            return False
    return True
