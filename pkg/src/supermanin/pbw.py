"""Straightening in the enveloping superalgebra of the affine gl(m|n).

One engine serves three settings.  In the free enveloping algebra every
generator is a creation letter.  In the vacuum module the nonnegative modes
annihilate the vacuum and ``K`` acts by the level.  In a Verma module the
letters of the opposite nilpotent part create, the zero modes of the Cartan
part act by the weight and the remaining letters annihilate the highest
vector.  Vectors are :class:`NCPoly` values whose words are ordered
monomials, optionally preceded by central letters (``K`` in the free algebra,
``lam[i]`` for a symbolic weight).
"""
from __future__ import annotations

import os
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (D, D_SYM, E, K, K_SYM, LAM, NCPoly, ONE, Rational, SuperDim, TAU, TAU_SYM,
                   GenSymbol, ZERO, e as esym, lam, qq)

FREE_MODE, VACUUM, VERMA = "free", "vacuum", "verma"
RAISING_FIRST, LOWERING_FIRST = "raising-first", "lowering-first"

CREATE, ANNIHILATE, CARTAN, CENTRAL = range(4)


class WindowError(ValueError):
    pass


def default_window(dim: SuperDim) -> int:
    env = os.environ.get("SUPERMANIN_WINDOW")
    if env:
        return int(env)
    return 6 if dim.N <= 2 else 4


def _sgn(p: int) -> int:
    return -1 if p % 2 else 1


def bracket(x: GenSymbol, y: GenSymbol, dim: SuperDim) -> NCPoly:
    """Supercommutator of two generators of the affine algebra with tau and d."""
    fx, fy = x.family, y.family
    if fx in (K, LAM) or fy in (K, LAM):
        return NCPoly()
    if fx == E and fy == E:
        i, j, r = x.i, x.j, x.r
        k, l, s = y.i, y.j, y.r
        p = dim.parity
        out = NCPoly()
        if k == j:
            out = out + NCPoly.gen(esym(i, l, r + s, dim))
        if i == l:
            out = out - NCPoly.gen(esym(k, j, r + s, dim)).scale(_sgn((p(i) + p(j)) * (p(k) + p(l))))
        if r + s == 0 and r != 0:
            c = ZERO
            if k == j and i == l:
                c += _sgn(p(i))
            if i == j and k == l and dim.m != dim.n:
                c -= Rational(_sgn(p(i) + p(k)), dim.m - dim.n)
            if c:
                out = out + NCPoly.gen(K_SYM, c * r)
        return out
    if fx == TAU and fy == E:
        return NCPoly.gen(esym(y.i, y.j, y.r - 1, dim), -y.r) if y.r else NCPoly()
    if fx == E and fy == TAU:
        return NCPoly.gen(esym(x.i, x.j, x.r - 1, dim), x.r) if x.r else NCPoly()
    if fx == D and fy == E:
        return NCPoly.gen(y, y.r) if y.r else NCPoly()
    if fx == E and fy == D:
        return NCPoly.gen(x, -x.r) if x.r else NCPoly()
    if fx == fy and fx in (TAU, D):
        return NCPoly()
    raise ValueError(f"no bracket defined between {x} and {y}")


class PBW:
    """Normal ordering in U, or the action on a vacuum or Verma module.

    ``weight`` gives the highest weight components; ``None`` entries are
    symbolic and become central ``lam[i]`` letters.  ``order`` selects the
    order of creation letters in a Verma module.
    """

    def __init__(self, dim: SuperDim, mode: str = FREE_MODE, level=None,
                 weight: Optional[Sequence] = None, delta=0, order: str = RAISING_FIRST,
                 window: Optional[int] = None):
        if mode not in (FREE_MODE, VACUUM, VERMA):
            raise ValueError(f"unknown mode {mode}")
        self.dim = dim
        self.mode = mode
        self.level = None if level is None else qq(level)
        if mode != FREE_MODE and self.level is None:
            self.level = Rational(dim.n - dim.m)
        if weight is None:
            weight = [None] * dim.N
        if len(weight) != dim.N:
            raise ValueError("weight has the wrong length")
        self.weight = [None if w is None else qq(w) for w in weight]
        self.delta = qq(delta)
        self.order = order
        self.window = default_window(dim) if window is None else window
        self._memo: Dict[Tuple[GenSymbol, Tuple], Dict] = {}
        self._brackets: Dict[Tuple[GenSymbol, GenSymbol], NCPoly] = {}

    # ------------------------------------------------------ classification
    def classify(self, x: GenSymbol) -> int:
        f = x.family
        if f == LAM:
            return CENTRAL
        if f == K:
            return CENTRAL if self.mode == FREE_MODE else CARTAN
        if self.mode == FREE_MODE:
            return CREATE
        if self.mode == VACUUM:
            if f == TAU:
                return CREATE
            if f == E:
                return CREATE if x.r < 0 else ANNIHILATE
            raise ValueError(f"{x} does not act on the vacuum module")
        if f == D:
            return CARTAN
        if f != E:
            raise ValueError(f"{x} does not act on a Verma module")
        if x.r < 0 or (x.r == 0 and x.i > x.j):
            return CREATE
        if x.r == 0 and x.i == x.j:
            return CARTAN
        return ANNIHILATE

    def key(self, x: GenSymbol):
        f = x.family
        if self.mode in (FREE_MODE, VACUUM):
            if f == E:
                group = 0 if x.r < 0 else 2
            elif f == TAU:
                group = 1
            else:
                group = 3
            return (group, x.r, x.i, x.j)
        upper, diag = x.i < x.j, x.i == x.j
        if self.order == RAISING_FIRST:
            group = 0 if upper else (1 if diag else 2)
        else:
            group = 2 if upper else (1 if diag else 0)
        return (group, x.r, x.i, x.j)

    def cartan_value(self, x: GenSymbol):
        """Scalar (or central letter) by which a Cartan letter acts at the end."""
        if x.family == K:
            return NCPoly.const(self.level)
        if x.family == D:
            return NCPoly.const(self.delta)
        w = self.weight[x.i - 1]
        return NCPoly.gen(lam(x.i)) if w is None else NCPoly.const(w)

    def _check(self, x: GenSymbol):
        if x.family == E and abs(x.r) > self.window:
            raise WindowError(f"{x} lies outside the mode window of size {self.window}")

    def _bracket(self, x, y) -> NCPoly:
        k = (x, y)
        b = self._brackets.get(k)
        if b is None:
            b = bracket(x, y, self.dim)
            self._brackets[k] = b
        return b

    # -------------------------------------------------------------- engine
    def _act(self, x: GenSymbol, body: Tuple) -> Dict:
        """x applied to an ordered monomial; returns {(central, body): coeff}."""
        mk = (x, body)
        hit = self._memo.get(mk)
        if hit is not None:
            return hit
        cls = self.classify(x)
        out: Dict = {}
        if cls == CENTRAL:
            out[((x,), body)] = ONE
        elif not body and cls in (CARTAN, ANNIHILATE):
            if cls == CARTAN:
                v = self.cartan_value(x)
                for w, c in v.terms.items():
                    out[(w, ())] = c
        elif cls == CREATE and (not body or self.key(x) < self.key(body[0])):
            out[((), (x,) + body)] = ONE
        elif cls == CREATE and x == body[0] and not x.parity:
            out[((), (x,) + body)] = ONE
        elif cls == CREATE and x == body[0]:
            # x odd: x x = [x, x] / 2
            half = self._bracket(x, x).scale(Rational(1, 2))
            _accumulate(out, self._act_poly(half, body[1:]))
        else:
            b, rest = body[0], body[1:]
            sign = -1 if (x.parity and b.parity) else 1
            inner = self._act(x, rest)
            for (cent, bd), c in inner.items():
                for (cent2, bd2), c2 in self._act(b, bd).items():
                    key = (tuple(sorted(cent + cent2)), bd2)
                    out[key] = out.get(key, ZERO) + sign * c * c2
            _accumulate(out, self._act_poly(self._bracket(x, b), rest))
        out = {k: v for k, v in out.items() if v}
        self._memo[mk] = out
        return out

    def _act_poly(self, p: NCPoly, body: Tuple) -> Dict:
        """p applied to an ordered monomial, p a polynomial in letters."""
        out: Dict = {}
        for w, c in p.terms.items():
            cur = {((), body): c}
            for x in reversed(w):
                self._check(x)
                nxt: Dict = {}
                for (cent, bd), cc in cur.items():
                    for (cent2, bd2), c2 in self._act(x, bd).items():
                        key = (tuple(sorted(cent + cent2)), bd2)
                        nxt[key] = nxt.get(key, ZERO) + cc * c2
                cur = nxt
            _accumulate(out, cur)
        return out

    # ------------------------------------------------------------- public
    def _to_poly(self, d: Dict) -> NCPoly:
        return NCPoly.from_terms((cent + bd, c) for (cent, bd), c in d.items() if c)

    def _split(self, w) -> Tuple[Tuple, Tuple]:
        cent = tuple(x for x in w if self.classify(x) == CENTRAL)
        body = tuple(x for x in w if self.classify(x) != CENTRAL)
        return cent, body

    def apply(self, x: NCPoly, v: NCPoly) -> NCPoly:
        """x . v, where v is already in normal form."""
        out: Dict = {}
        for w, c in v.terms.items():
            cent, body = self._split(w)
            for (cent2, bd), c2 in self._act_poly(x, body).items():
                key = (tuple(sorted(cent + cent2)), bd)
                out[key] = out.get(key, ZERO) + c * c2
        return self._to_poly(out)

    def normal_order(self, p: NCPoly) -> NCPoly:
        """Ordered form of p (in a module: p applied to the cyclic vector)."""
        for s in p.letters():
            self._check(s)
        return self._to_poly(self._act_poly(p, ()))

    __call__ = normal_order

    def is_normal(self, p: NCPoly) -> bool:
        return self.normal_order(p) == p

    def multiply(self, a: NCPoly, b: NCPoly) -> NCPoly:
        """Product of two normal forms in the free enveloping algebra."""
        if self.mode != FREE_MODE:
            raise ValueError("multiplication is only defined in the free mode")
        return self.apply(a, b)

    def ring(self):
        from .tensor import ncpoly_ring
        return ncpoly_ring(normalize=self.normal_order, name=f"pbw:{self.mode}:{id(self)}")


def _accumulate(out: Dict, more: Dict):
    for k, v in more.items():
        out[k] = out.get(k, ZERO) + v


# ------------------------------------------------------------ projections

def hc_project(v: NCPoly) -> NCPoly:
    """Keep the monomials built from diagonal negative modes only.

    Central weight letters are kept.  With the raising-first order this is
    the projection along the kernel described by the triangular
    decomposition.
    """
    out = {}
    for w, c in v.terms.items():
        ok = True
        for x in w:
            if x.family == LAM:
                continue
            if x.family != E:
                raise ValueError(f"{x} is not an element of the opposite nilpotent part")
            if x.i != x.j:
                ok = False
                break
            if x.r >= 0:
                raise ValueError(f"{x} is not an element of the opposite nilpotent part")
        if ok:
            out[w] = c
    return NCPoly(out, _clean=True)


def split_tau(p: NCPoly) -> Dict[int, NCPoly]:
    """Coefficients of tau^j for a normal form whose words end in tau powers."""
    out: Dict[int, Dict] = {}
    for w, c in p.terms.items():
        j = 0
        while j < len(w) and w[len(w) - 1 - j] == TAU_SYM:
            j += 1
        body = w[:len(w) - j]
        if TAU_SYM in body:
            raise ValueError("tau is not ordered last")
        out.setdefault(j, {})[body] = c
    return {j: NCPoly(t, _clean=True) for j, t in out.items()}


# ------------------------------------------------------------- weights

def rho(dim: SuperDim) -> List[int]:
    m = dim.m
    return [m - i if i <= m else m + 1 - i for i in dim.indices()]


def is_generic_critical(weight: Sequence, dim: SuperDim, bound: int = 10) -> bool:
    """Scan the positive real roots k*delta + e_i - e_j with k, p <= bound."""
    lam_ = [qq(x) for x in weight]
    rh = rho(dim)
    s = [1 if dim.parity(i) == 0 else -1 for i in dim.indices()]
    N = dim.N
    shifted = [s[i] * (lam_[i] + rh[i]) for i in range(N)]
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            # (lam + rho, delta) = 0 at the critical level, so the
            # imaginary part k*delta of a real root does not enter
            pair = shifted[i] - shifted[j]
            norm = s[i] + s[j]
            for p in range(1, bound + 1):
                if pair == Rational(p * norm, 2):
                    return False
    return True
