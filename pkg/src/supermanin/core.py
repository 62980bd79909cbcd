"""Exact rationals, graded generator symbols and sparse noncommutative polynomials.

Everything downstream (quotient algebras, the enveloping algebra, tensor
operators) stores its elements as :class:`NCPoly` values: finite maps from
words in :class:`GenSymbol` letters to exact rationals.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, NamedTuple, Tuple

import gmpy2

Rational = gmpy2.mpq
ZERO = Rational(0)
ONE = Rational(1)


def qq(x) -> Rational:
    """Coerce an int, Fraction, string or mpq into an exact rational."""
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not allowed")
    if isinstance(x, Fraction):
        return Rational(x.numerator, x.denominator)
    return Rational(x)


# family tags; the integer values fix the canonical order of generators
Z, Y, E, TAU, K, D, LAM, X, THETA = range(9)
FAMILY_NAMES = {Z: "z", Y: "y", E: "e", TAU: "tau", K: "K", D: "d",
                LAM: "lam", X: "x", THETA: "theta"}


class SuperDim(NamedTuple):
    m: int
    n: int

    @property
    def N(self) -> int:
        return self.m + self.n

    def parity(self, i: int) -> int:
        """Parity of the basis index ``i`` (1-based)."""
        if not 1 <= i <= self.m + self.n:
            raise IndexError(f"index {i} out of range for gl({self.m}|{self.n})")
        return 0 if i <= self.m else 1

    def indices(self) -> range:
        return range(1, self.m + self.n + 1)


def superdim(m: int, n: int) -> SuperDim:
    if m < 0 or n < 0 or m + n < 1:
        raise ValueError(f"invalid super dimension ({m}|{n})")
    return SuperDim(m, n)


class GenSymbol(NamedTuple):
    """A generator letter.

    Tuple order (family, r, i, j) is the canonical total order used for
    printing and hashing.  ``r`` is the series index z^{(r)} / y^{(r)}
    (0 for plain z_ij) or the loop mode of e_ij[r].
    """
    family: int
    r: int
    i: int
    j: int
    parity: int

    def __str__(self) -> str:
        f = self.family
        if f == Z:
            if self.r == 0:
                return f"z[{self.i},{self.j}]"
            return f"z{{{self.r}}}[{self.i},{self.j}]"
        if f in (Y, E):
            return f"{FAMILY_NAMES[f]}{{{self.r}}}[{self.i},{self.j}]"
        if f in (TAU, K, D):
            return FAMILY_NAMES[f]
        if self.r:
            return f"{FAMILY_NAMES[f]}{{{self.r}}}[{self.i}]"
        return f"{FAMILY_NAMES[f]}[{self.i}]"


def z(i: int, j: int, dim: SuperDim, r: int = 0) -> GenSymbol:
    return GenSymbol(Z, r, i, j, dim.parity(i) ^ dim.parity(j))


def y(i: int, j: int, dim: SuperDim, r: int) -> GenSymbol:
    return GenSymbol(Y, r, i, j, dim.parity(i) ^ dim.parity(j))


def e(i: int, j: int, r: int, dim: SuperDim) -> GenSymbol:
    return GenSymbol(E, r, i, j, dim.parity(i) ^ dim.parity(j))


TAU_SYM = GenSymbol(TAU, 0, 0, 0, 0)
K_SYM = GenSymbol(K, 0, 0, 0, 0)
D_SYM = GenSymbol(D, 0, 0, 0, 0)


def lam(i: int) -> GenSymbol:
    return GenSymbol(LAM, 0, i, 0, 0)


def even_sym(i: int, r: int = 0) -> GenSymbol:
    return GenSymbol(X, r, i, 0, 0)


def odd_sym(i: int, r: int = 0) -> GenSymbol:
    return GenSymbol(THETA, r, i, 0, 1)


def default_degree(s: GenSymbol) -> int:
    """u-degree for quantum generators, t-degree for currents."""
    f = s.family
    if f in (Z, Y):
        return s.r if s.r else 1
    if f == E:
        return s.r
    if f == TAU:
        return -1
    if f in (X, THETA):
        return 1
    return 0


Word = Tuple[GenSymbol, ...]


def word_parity(w: Word) -> int:
    p = 0
    for s in w:
        p ^= s.parity
    return p


class NCPoly:
    """Exact linear combination of words; immutable after construction."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Word, Rational] | None = None, *, _clean: bool = False):
        if terms is None:
            terms = {}
        elif not _clean:
            terms = {w: qq(c) for w, c in terms.items() if c}
        self.terms = terms
        self._hash = None

    # construction
    @classmethod
    def const(cls, c) -> "NCPoly":
        c = qq(c)
        return cls({(): c}, _clean=True) if c else cls()

    @classmethod
    def gen(cls, s: GenSymbol, c=1) -> "NCPoly":
        c = qq(c)
        return cls({(s,): c}, _clean=True) if c else cls()

    @classmethod
    def word(cls, w: Iterable[GenSymbol], c=1) -> "NCPoly":
        c = qq(c)
        return cls({tuple(w): c}, _clean=True) if c else cls()

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[Word, Rational]]) -> "NCPoly":
        acc: Dict[Word, Rational] = {}
        for w, c in items:
            acc[w] = acc.get(w, ZERO) + c
        return cls({w: c for w, c in acc.items() if c}, _clean=True)

    # arithmetic
    def __add__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            other = NCPoly.const(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, ZERO) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NCPoly(out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly({w: -c for w, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            other = NCPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "NCPoly":
        return (-self) + other

    def scale(self, c) -> "NCPoly":
        c = qq(c)
        if not c:
            return NCPoly()
        return NCPoly({w: v * c for w, v in self.terms.items()}, _clean=True)

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            if isinstance(other, (int, Fraction)) or type(other) is type(ONE):
                return self.scale(other)
            return NotImplemented
        out: Dict[Word, Rational] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w, ZERO) + c1 * c2
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return NCPoly(out, _clean=True)

    def __rmul__(self, other) -> "NCPoly":
        if isinstance(other, (int, Fraction)) or type(other) is type(ONE):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "NCPoly":
        out = NCPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    # comparison
    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            try:
                other = NCPoly.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Word, Rational]]:
        return iter(sorted(self.terms.items(), key=lambda t: word_key(t[0])))

    # structure
    def parity_components(self) -> Dict[int, "NCPoly"]:
        parts: Dict[int, Dict[Word, Rational]] = {}
        for w, c in self.terms.items():
            parts.setdefault(word_parity(w), {})[w] = c
        return {p: NCPoly(t, _clean=True) for p, t in parts.items()}

    @property
    def parity(self) -> int:
        """Parity of a homogeneous element (0 for the zero polynomial)."""
        ps = {word_parity(w) for w in self.terms}
        if len(ps) > 1:
            raise ValueError("polynomial is not parity-homogeneous")
        return ps.pop() if ps else 0

    def constant(self) -> Rational:
        return self.terms.get((), ZERO)

    def letters(self) -> set:
        return {s for w in self.terms for s in w}

    def map_words(self, f: Callable[[Word], "NCPoly"]) -> "NCPoly":
        """Linear extension of ``f`` defined on words."""
        acc: Dict[Word, Rational] = {}
        for w, c in self.terms.items():
            for w2, c2 in f(w).terms.items():
                acc[w2] = acc.get(w2, ZERO) + c * c2
        return NCPoly({w: c for w, c in acc.items() if c}, _clean=True)

    def substitute(self, images: Callable[[GenSymbol], "NCPoly"]) -> "NCPoly":
        """Apply the algebra homomorphism defined on letters by ``images``."""
        cache: Dict[GenSymbol, NCPoly] = {}

        def img(s):
            if s not in cache:
                cache[s] = images(s)
            return cache[s]

        def on_word(w):
            out = NCPoly.const(1)
            for s in w:
                out = out * img(s)
            return out

        return self.map_words(on_word)

    def __repr__(self) -> str:
        return f"NCPoly({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)


def word_key(w: Word):
    return (len(w), w)


def commutative_normal_form(p: NCPoly) -> NCPoly:
    """Sort the letters of every word; valid when all letters commute."""
    return NCPoly.from_terms((tuple(sorted(w)), c) for w, c in p.terms.items())


def supercommutative_normal_form(p: NCPoly) -> NCPoly:
    """Sort letters with Koszul signs; a repeated odd letter kills the word."""
    items = []
    for w, c in p.terms.items():
        letters = list(w)
        sign = 1
        for a in range(1, len(letters)):
            b = a
            while b > 0 and letters[b] < letters[b - 1]:
                if letters[b].parity and letters[b - 1].parity:
                    sign = -sign
                letters[b - 1], letters[b] = letters[b], letters[b - 1]
                b -= 1
        if any(x.parity and x == y for x, y in zip(letters, letters[1:])):
            continue
        items.append((tuple(letters), c if sign > 0 else -c))
    return NCPoly.from_terms(items)


def cmul(a: NCPoly, b: NCPoly) -> NCPoly:
    """Product in the commutative polynomial ring on sorted words."""
    return commutative_normal_form(a * b)


def supercommutator(x: NCPoly, y: NCPoly) -> NCPoly:
    """xy - (-1)^{|x||y|} yx, extended bilinearly over parity components."""
    out = NCPoly()
    for p, xp in x.parity_components().items():
        for q, yq in y.parity_components().items():
            if p & q:
                out = out + xp * yq + yq * xp
            else:
                out = out + xp * yq - yq * xp
    return out


def word_degree(w: Word, grading: Callable[[GenSymbol], int] = default_degree) -> int:
    return sum(grading(s) for s in w)


def graded_component(p: NCPoly, d, grading: Callable[[GenSymbol], int] = default_degree) -> NCPoly:
    """Terms of ``p`` whose degree under ``grading`` equals ``d``.

    ``grading`` may return a tuple for multidegrees, in which case letter
    degrees are added componentwise.
    """
    out = {}
    for w, c in p.terms.items():
        if _multideg(w, grading) == d:
            out[w] = c
    return NCPoly(out, _clean=True)


def homogeneous_components(p: NCPoly, grading=default_degree) -> Dict[object, NCPoly]:
    parts: Dict[object, Dict[Word, Rational]] = {}
    for w, c in p.terms.items():
        parts.setdefault(_multideg(w, grading), {})[w] = c
    return {d: NCPoly(t, _clean=True) for d, t in parts.items()}


def _multideg(w: Word, grading):
    acc = None
    for s in w:
        g = grading(s)
        if acc is None:
            acc = g
        elif isinstance(g, tuple):
            acc = tuple(a + b for a, b in zip(acc, g))
        else:
            acc += g
    if acc is None:
        probe = grading(TAU_SYM)
        return tuple(0 for _ in probe) if isinstance(probe, tuple) else 0
    return acc


# ---------------------------------------------------------------- text format

def _coeff_text(c: Rational) -> str:
    return str(c)


def to_text(p: NCPoly) -> str:
    """Canonical text form, e.g. ``z[1,1].z[2,2] - 1/2*e{-1}[1,1] + 3``."""
    if not p.terms:
        return "0"
    parts = []
    for w, c in p:
        neg = c < 0
        a = -c if neg else c
        body = ".".join(str(s) for s in w)
        if not body:
            term = _coeff_text(a)
        elif a == 1:
            term = body
        else:
            term = f"{_coeff_text(a)}*{body}"
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append((" - " if neg else " + ") + term)
    return "".join(parts)


_SYM_RE = re.compile(
    r"(?P<fam>z|y|e)(?:\{(?P<r>-?\d+)\})?\[(?P<i>\d+),(?P<j>\d+)\]"
    r"|(?P<named>tau|K|d)(?![\w\[{])"
    r"|(?P<fam1>lam|x|theta)(?:\{(?P<r1>-?\d+)\})?\[(?P<k>\d+)\]"
)


def parse_symbol(text: str, dim: SuperDim | None = None) -> GenSymbol:
    mt = _SYM_RE.fullmatch(text.strip())
    if not mt:
        raise ValueError(f"cannot parse generator {text!r}")
    if mt.group("named"):
        return {"tau": TAU_SYM, "K": K_SYM, "d": D_SYM}[mt.group("named")]
    if mt.group("fam1"):
        k = int(mt.group("k"))
        r1 = int(mt.group("r1") or 0)
        fam1 = mt.group("fam1")
        if fam1 == "lam":
            if r1:
                raise ValueError(f"lam takes no mode: {text!r}")
            return lam(k)
        return (even_sym if fam1 == "x" else odd_sym)(k, r1)
    if dim is None:
        raise ValueError("a super dimension is needed to parse indexed generators")
    fam = mt.group("fam")
    i, j = int(mt.group("i")), int(mt.group("j"))
    r = mt.group("r")
    if fam == "z":
        return z(i, j, dim, int(r) if r is not None else 0)
    if r is None:
        raise ValueError(f"{fam} generators need a mode: {text!r}")
    if fam == "y":
        return y(i, j, dim, int(r))
    return e(i, j, int(r), dim)


_TERM_SPLIT = re.compile(r"\s+([+-])\s+")


def from_text(text: str, dim: SuperDim | None = None) -> NCPoly:
    """Inverse of :func:`to_text`."""
    text = text.strip()
    if text == "0":
        return NCPoly()
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    pieces = _TERM_SPLIT.split(text)
    signs = [sign] + [1 if s == "+" else -1 for s in pieces[1::2]]
    items = []
    for sg, term in zip(signs, pieces[0::2]):
        term = term.strip()
        coeff = ONE
        if "*" in term:
            ctext, term = term.split("*", 1)
            coeff = qq(ctext.strip())
        elif re.fullmatch(r"\d+(/\d+)?", term):
            items.append(((), sg * qq(term)))
            continue
        w = tuple(parse_symbol(tok, dim) for tok in term.split("."))
        items.append((w, sg * coeff))
    return NCPoly.from_terms(items)
