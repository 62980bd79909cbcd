"""Calculus of End(C^{m|n})^{(x)k} (x) R.

A :class:`TensorOperator` is a sparse map ``(I, J) -> coefficient`` standing
for ``sum e_{i1 j1} (x) ... (x) e_{ik jk} (x) a_{IJ}``.  Products use the
Koszul sign rule for the graded tensor product; the coefficient ring is
anything exposing ``+``, ``*`` and scalar multiplication, described by a
:class:`Ring`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from .core import NCPoly, ONE, Rational, SuperDim, qq, supercommutative_normal_form

Multi = Tuple[int, ...]


@dataclass(frozen=True)
class Ring:
    """Coefficient ring description used by tensor and series code."""
    zero: Callable[[], object]
    one: Callable[[], object]
    parity: Callable[[object], int]
    is_zero: Callable[[object], bool]
    normalize: Callable[[object], object] = field(default=lambda x: x)
    name: str = "ring"


def _ncpoly_parity(x) -> int:
    return x.parity if isinstance(x, NCPoly) else 0


def ncpoly_ring(normalize=None, name="free") -> Ring:
    return Ring(zero=NCPoly, one=lambda: NCPoly.const(1), parity=_ncpoly_parity,
                is_zero=lambda x: not x, normalize=normalize or (lambda x: x), name=name)


FREE = ncpoly_ring()
SUPERCOMMUTATIVE = ncpoly_ring(supercommutative_normal_form, name="supercommutative")
RATIONALS = Ring(zero=lambda: Rational(0), one=lambda: ONE, parity=lambda x: 0,
                 is_zero=lambda x: x == 0, name="QQ")


def parity_of(dim: SuperDim, idx: Multi) -> int:
    p = 0
    for i in idx:
        p ^= dim.parity(i)
    return p


class TensorOperator:
    """Sparse even element of End(C^{m|n})^{(x)k} (x) R."""

    __slots__ = ("dim", "k", "ring", "entries")

    def __init__(self, dim: SuperDim, k: int, entries: Dict[Tuple[Multi, Multi], object],
                 ring: Ring = FREE, check: bool = False):
        self.dim, self.k, self.ring = dim, k, ring
        self.entries = {key: c for key, c in entries.items() if not ring.is_zero(c)}
        if check:
            self.check_even()

    def check_even(self):
        for (I, J), c in self.entries.items():
            want = parity_of(self.dim, I) ^ parity_of(self.dim, J)
            if self.ring.parity(c) != want:
                raise ValueError(f"entry {(I, J)} has parity {self.ring.parity(c)}, expected {want}")

    # arithmetic
    def _combine(self, other, sign):
        out = dict(self.entries)
        for key, c in other.entries.items():
            out[key] = out[key] + c * sign if key in out else c * sign
        return TensorOperator(self.dim, self.k, out, self.ring)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = qq(c)
        return TensorOperator(self.dim, self.k, {key: v * c for key, v in self.entries.items()}, self.ring)

    def __mul__(self, other: "TensorOperator") -> "TensorOperator":
        if not isinstance(other, TensorOperator):
            return self.scale(other)
        if other.k != self.k:
            raise ValueError("tensor length mismatch")
        dim, ring = self.dim, self.ring
        par = dim.parity
        by_row: Dict[Multi, List] = {}
        for (J, K), b in other.entries.items():
            by_row.setdefault(J, []).append((K, b))
        out: Dict[Tuple[Multi, Multi], object] = {}
        k = self.k
        for (I, J), a in self.entries.items():
            rows = by_row.get(J)
            if not rows:
                continue
            xpar = [par(i) ^ par(j) for i, j in zip(I, J)]
            apar = ring.parity(a)
            # suffix sums of x parities plus the coefficient parity
            suffix = [0] * (k + 1)
            suffix[k] = apar
            for p in range(k - 1, -1, -1):
                suffix[p] = suffix[p + 1] ^ xpar[p]
            for K, b in rows:
                s = 0
                for p in range(k):
                    if (par(J[p]) ^ par(K[p])) and suffix[p + 1]:
                        s ^= 1
                term = a * b
                if s:
                    term = -term
                key = (I, K)
                if key in out:
                    out[key] = out[key] + term
                else:
                    out[key] = term
        return TensorOperator(dim, k, out, ring)

    def __rmul__(self, c):
        return self.scale(c)

    def normalize(self) -> "TensorOperator":
        f = self.ring.normalize
        return TensorOperator(self.dim, self.k, {key: f(v) for key, v in self.entries.items()}, self.ring)

    def is_zero(self) -> bool:
        return not self.entries

    def nonzero_entries(self):
        return sorted(self.entries.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorOperator) and (self - other).is_zero()

    def __repr__(self):
        return f"TensorOperator(k={self.k}, nnz={len(self.entries)})"


def identity_op(dim: SuperDim, k: int, ring: Ring = FREE) -> TensorOperator:
    one = ring.one()
    return TensorOperator(dim, k, {(I, I): one for I in itertools.product(dim.indices(), repeat=k)}, ring)


def unit_op(dim: SuperDim, I: Multi, J: Multi, coeff=None, ring: Ring = FREE) -> TensorOperator:
    return TensorOperator(dim, len(I), {(tuple(I), tuple(J)): ring.one() if coeff is None else coeff}, ring)


# --------------------------------------------------------------- permutations

def transposition(dim: SuperDim, k: int, a: int, b: int, ring: Ring = FREE) -> TensorOperator:
    """P_ab = sum e_ij (x) e_ji (-1)^{j} placed in factors a < b (1-based)."""
    if not 1 <= a < b <= k:
        raise ValueError("need 1 <= a < b <= k")
    one = ring.one()
    out = {}
    for rest in itertools.product(dim.indices(), repeat=k - 2):
        for i in dim.indices():
            for j in dim.indices():
                I = list(rest[:a - 1]) + [i] + list(rest[a - 1:b - 2]) + [j] + list(rest[b - 2:])
                J = list(I)
                J[a - 1], J[b - 1] = j, i
                c = -one if dim.parity(j) else one
                out[(tuple(I), tuple(J))] = c
    return TensorOperator(dim, k, out, ring)


def compose(s: Sequence[int], t: Sequence[int]) -> Tuple[int, ...]:
    """(s o t)(p) = s(t(p)); permutations in 0-based one-line notation."""
    return tuple(s[t[p]] for p in range(len(t)))


def inverse_perm(s: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(s)
    for p, q in enumerate(s):
        inv[q] = p
    return tuple(inv)


def sign_of(s: Sequence[int]) -> int:
    inv = sum(1 for a in range(len(s)) for b in range(a + 1, len(s)) if s[a] > s[b])
    return -1 if inv % 2 else 1


def adjacent_word(s: Sequence[int]) -> List[int]:
    """Reduced word: s = s_{w0} o s_{w1} o ... with s_i = (i, i+1), 0-based."""
    w = list(s)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                # w o s_i swaps entries i and i+1 of the one-line notation
                w[i], w[i + 1] = w[i + 1], w[i]
                word.append(i)
                changed = True
    # s o s_{a1} o ... o s_{aL} = id, hence s = s_{aL} o ... o s_{a1}
    return word[::-1]


_PERM_CACHE: Dict = {}


def perm_op(sigma: Sequence[int], dim: SuperDim, ring: Ring = FREE) -> TensorOperator:
    """P_sigma for sigma in S_k (0-based one-line notation)."""
    sigma = tuple(sigma)
    key = (sigma, dim, ring.name)
    hit = _PERM_CACHE.get(key)
    if hit is not None and hit.ring is ring:
        return hit
    k = len(sigma)
    op = identity_op(dim, k, ring)
    for i in adjacent_word(sigma):
        op = op * transposition(dim, k, i + 1, i + 2, ring)
    _PERM_CACHE[key] = op
    return op


def symmetrizer(k: int, dim: SuperDim, ring: Ring = FREE, factors: Sequence[int] | None = None,
                total: int | None = None) -> TensorOperator:
    return _sym(k, dim, ring, factors, total, antisym=False)


def antisymmetrizer(k: int, dim: SuperDim, ring: Ring = FREE, factors: Sequence[int] | None = None,
                    total: int | None = None) -> TensorOperator:
    return _sym(k, dim, ring, factors, total, antisym=True)


def _sym(k, dim, ring, factors, total, antisym):
    """(Anti)symmetrizer over ``factors`` (1-based) inside ``total`` copies."""
    if k < 1:
        raise ValueError("k must be positive")
    if factors is None:
        factors = list(range(1, k + 1))
    total = total or max(factors)
    pos = [f - 1 for f in factors]
    acc = None
    for p in itertools.permutations(range(k)):
        full = list(range(total))
        for a, b in enumerate(p):
            full[pos[a]] = pos[b]
        op = perm_op(full, dim, ring)
        if antisym and sign_of(p) < 0:
            op = -op
        acc = op if acc is None else acc + op
    return acc.scale(Rational(1, factorial(k)))


# ------------------------------------------------------------------ matrices

def matrix_sign(dim: SuperDim, i: int, j: int) -> int:
    pi, pj = dim.parity(i), dim.parity(j)
    return -1 if (pi * pj + pj) % 2 else 1


def embed_matrix(Z: Sequence[Sequence[object]], a: int, k: int, dim: SuperDim,
                 ring: Ring = FREE, check: bool = True) -> TensorOperator:
    """Z_a = sum 1 (x) e_ij (x) 1 (x) z_ij (-1)^{i j + j} in copy a of k."""
    N = dim.N
    if check:
        for i in dim.indices():
            for j in dim.indices():
                c = Z[i - 1][j - 1]
                if not ring.is_zero(c) and ring.parity(c) != dim.parity(i) ^ dim.parity(j):
                    raise ValueError(f"matrix entry ({i},{j}) has the wrong parity")
    out = {}
    for rest in itertools.product(dim.indices(), repeat=k - 1):
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                c = Z[i - 1][j - 1]
                if ring.is_zero(c):
                    continue
                I = rest[:a - 1] + (i,) + rest[a - 1:]
                J = rest[:a - 1] + (j,) + rest[a - 1:]
                out[(I, J)] = c if matrix_sign(dim, i, j) > 0 else -c
    return TensorOperator(dim, k, out, ring)


def unembed(op: TensorOperator) -> List[List[object]]:
    """Inverse of :func:`embed_matrix` for k = 1."""
    if op.k != 1:
        raise ValueError("only single-factor operators unembed")
    dim, ring = op.dim, op.ring
    Z = [[ring.zero() for _ in dim.indices()] for _ in dim.indices()]
    for ((i,), (j,)), c in op.entries.items():
        Z[i - 1][j - 1] = c if matrix_sign(dim, i, j) > 0 else -c
    return Z


def partial_supertrace(op: TensorOperator, factors: Iterable[int]) -> TensorOperator:
    """Contract the given copies (1-based) with weights (-1)^i."""
    fs = sorted(set(factors))
    if any(not 1 <= f <= op.k for f in fs):
        raise ValueError("factor out of range")
    keep = [p for p in range(op.k) if p + 1 not in fs]
    dim, ring = op.dim, op.ring
    out: Dict[Tuple[Multi, Multi], object] = {}
    for (I, J), c in op.entries.items():
        sgn = 1
        ok = True
        for f in fs:
            if I[f - 1] != J[f - 1]:
                ok = False
                break
            if dim.parity(I[f - 1]):
                sgn = -sgn
        if not ok:
            continue
        key = (tuple(I[p] for p in keep), tuple(J[p] for p in keep))
        term = c if sgn > 0 else -c
        out[key] = out[key] + term if key in out else term
    return TensorOperator(dim, len(keep), out, ring)


def full_supertrace(op: TensorOperator):
    t = partial_supertrace(op, range(1, op.k + 1))
    return t.entries.get(((), ()), op.ring.zero())


def matmul(A, B, ring: Ring = FREE):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.zero()
            for l in range(n):
                a, b = A[i][l], B[l][j]
                if ring.is_zero(a) or ring.is_zero(b):
                    continue
                acc = acc + a * b
            row.append(ring.normalize(acc))
        out.append(row)
    return out


def matpow(Z, k: int, ring: Ring = FREE):
    n = len(Z)
    out = [[ring.one() if i == j else ring.zero() for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = matmul(out, Z, ring)
    return out


def matrix_supertrace(Z, dim: SuperDim, ring: Ring = FREE):
    acc = ring.zero()
    for i in dim.indices():
        c = Z[i - 1][i - 1]
        acc = acc - c if dim.parity(i) else acc + c
    return acc


def product_op(Z, k: int, dim: SuperDim, ring: Ring = FREE) -> TensorOperator:
    """Z_1 Z_2 ... Z_k built from the closed form of its entries."""
    out = {}
    idx = list(dim.indices())
    for I in itertools.product(idx, repeat=k):
        for J in itertools.product(idx, repeat=k):
            c = _product_entry(Z, I, J, dim, ring)
            if c is not None:
                out[(I, J)] = c
    return TensorOperator(dim, k, out, ring)


def _product_entry(Z, I, J, dim, ring):
    c = ring.one()
    for i, j in zip(I, J):
        z = Z[i - 1][j - 1]
        if ring.is_zero(z):
            return None
        c = c * z
    s = sign_gamma(I, J, dim) + sum(dim.parity(j) for j in J)
    return -c if s % 2 else c


# -------------------------------------------------------------------- signs

def sign_gamma(I: Multi, J: Multi, dim: SuperDim) -> int:
    """gamma(I, J) modulo 2."""
    p = dim.parity
    s = sum(p(i) * p(j) for i, j in zip(I, J))
    par = [p(i) ^ p(j) for i, j in zip(I, J)]
    acc = 0
    for x in par:
        if x:
            s += acc
        acc += x
    return s % 2


def _koszul(I_left: Multi, J_left: Multi, I_right: Multi, J_right: Multi, dim: SuperDim) -> int:
    """Sign of (e_{I_left J_left})(e_{I_right J_right}) with scalar coefficients."""
    p = dim.parity
    k = len(I_left)
    xpar = [p(i) ^ p(j) for i, j in zip(I_left, J_left)]
    s = 0
    for a in range(k):
        if p(I_right[a]) ^ p(J_right[a]):
            s += sum(xpar[a + 1:])
    return -1 if s % 2 else 1


def _perm_rows(sigma: Sequence[int], dim: SuperDim) -> Dict[Multi, Tuple[Multi, int]]:
    """For P_sigma over QQ: row multi-index I -> (J, sign)."""
    op = perm_op(sigma, dim, RATIONALS)
    rows = {}
    for (I, J), c in op.entries.items():
        rows[I] = (J, int(c))
    return rows


def sign_phi(sigma: Sequence[int], I: Multi, J: Multi, dim: SuperDim) -> int:
    """P_sigma (e_{i1 j1} (x) ...) = phi * e_{i_{s^-1(1)} j1} (x) ..."""
    k = len(sigma)
    sinv = inverse_perm(sigma)
    target = tuple(I[sinv[a]] for a in range(k))
    rows = _perm_rows(sigma, dim)
    Jp, c = rows[target]
    if Jp != tuple(I):
        raise AssertionError("permutation operator does not move indices as expected")
    return c * _koszul(target, Jp, tuple(I), tuple(J), dim)


def sign_psi(sigma: Sequence[int], I: Multi, J: Multi, dim: SuperDim) -> int:
    """(e_{i1 j1} (x) ...) P_{sigma^-1} = psi * e_{i1 j_{s^-1(1)}} (x) ..."""
    k = len(sigma)
    sinv = inverse_perm(sigma)
    rows = _perm_rows(sinv, dim)
    target = tuple(J[sinv[a]] for a in range(k))
    Jp, c = rows[tuple(J)]
    if Jp != target:
        raise AssertionError("permutation operator does not move indices as expected")
    return c * _koszul(tuple(I), tuple(J), tuple(J), Jp, dim)


# ------------------------------------------------------- supertrace shortcuts

def str_perm_product(Z, sigma: Sequence[int], dim: SuperDim, ring: Ring = FREE):
    """str_{1..k} P_sigma Z_1 ... Z_k without forming the full operator."""
    rows = _perm_rows(sigma, dim)
    acc = ring.zero()
    for I, (J, c) in rows.items():
        entry = _product_entry(Z, J, I, dim, ring)
        if entry is None:
            continue
        s = c * _koszul(I, J, J, I, dim)
        if parity_of(dim, I):
            s = -s
        acc = acc + entry if s > 0 else acc - entry
    return acc


def sigma_direct(Z, k: int, dim: SuperDim, ring: Ring = FREE):
    """str A_k Z_1 ... Z_k by contraction."""
    if k == 0:
        return ring.one()
    acc = ring.zero()
    for p in itertools.permutations(range(k)):
        t = str_perm_product(Z, p, dim, ring)
        acc = acc + t if sign_of(p) > 0 else acc - t
    return ring.normalize(acc * Rational(1, factorial(k)))


def h_direct(Z, k: int, dim: SuperDim, ring: Ring = FREE):
    """str H_k Z_1 ... Z_k by contraction."""
    if k == 0:
        return ring.one()
    acc = ring.zero()
    for p in itertools.permutations(range(k)):
        acc = acc + str_perm_product(Z, p, dim, ring)
    return ring.normalize(acc * Rational(1, factorial(k)))


# ------------------------------------------------------ multiset expansions

def _multisets_sigma(dim: SuperDim, k: int, alternative: bool):
    """Index sequences for the antisymmetrizer expansion."""
    odd = list(range(dim.m + 1, dim.N + 1))
    even = list(range(1, dim.m + 1))
    for l in range(k + 1):
        for o in itertools.combinations_with_replacement(odd, l):
            for e in itertools.combinations(even, k - l):
                if alternative:
                    yield tuple(e) + tuple(o)
                else:
                    yield tuple(sorted(o, reverse=True)) + tuple(sorted(e, reverse=True))


def _multisets_h(dim: SuperDim, k: int, alternative: bool):
    odd = list(range(dim.m + 1, dim.N + 1))
    even = list(range(1, dim.m + 1))
    for l in range(k + 1):
        for e in itertools.combinations_with_replacement(even, l):
            for o in itertools.combinations(odd, k - l):
                if alternative:
                    yield tuple(sorted(o, reverse=True)) + tuple(sorted(e, reverse=True))
                else:
                    yield tuple(e) + tuple(o)


def _multiplicity_factor(I: Multi, which) -> Rational:
    out = 1
    for i in set(I):
        if which(i):
            out *= factorial(I.count(i))
    return Rational(1, out)


def sigma_expansion(Z, k: int, dim: SuperDim, ring: Ring = FREE, alternative: bool = False):
    """Explicit multiset formula for str A_k Z_1 ... Z_k."""
    if k == 0:
        return ring.one()
    acc = ring.zero()
    for I in _multisets_sigma(dim, k, alternative):
        pref = _multiplicity_factor(I, lambda i: dim.parity(i) == 1)
        for s in itertools.permutations(range(k)):
            sI = tuple(I[s[a]] for a in range(k))
            term = ring.one()
            for a in range(k):
                term = term * Z[sI[a] - 1][I[a] - 1]
            if ring.is_zero(term):
                continue
            sgn = sign_of(s) * sign_phi(s, sI, I, dim)
            if sign_gamma(sI, I, dim):
                sgn = -sgn
            acc = acc + term * (pref * sgn)
    return ring.normalize(acc)


def h_expansion(Z, k: int, dim: SuperDim, ring: Ring = FREE, alternative: bool = False):
    """Explicit multiset formula for str Z_1 ... Z_k H_k."""
    if k == 0:
        return ring.one()
    acc = ring.zero()
    for I in _multisets_h(dim, k, alternative):
        pref = _multiplicity_factor(I, lambda i: dim.parity(i) == 0)
        for s in itertools.permutations(range(k)):
            sI = tuple(I[s[a]] for a in range(k))
            term = ring.one()
            for a in range(k):
                term = term * Z[I[a] - 1][sI[a] - 1]
            if ring.is_zero(term):
                continue
            sgn = sign_psi(s, I, sI, dim)
            if sign_gamma(I, sI, dim):
                sgn = -sgn
            acc = acc + term * (pref * sgn)
    return ring.normalize(acc)


def generic_matrix(dim: SuperDim, r: int = 0):
    """The matrix [z_ij] (or [z^{(r)}_ij]) of free generators."""
    from .core import z as zsym
    return [[NCPoly.gen(zsym(i, j, dim, r)) for j in dim.indices()] for i in dim.indices()]


def absorption_check(Z, k: int, dim: SuperDim, ring: Ring = FREE) -> dict:
    """A_k Z_1...Z_k A_k = A_k Z_1...Z_k and H_k Z_1...Z_k H_k = Z_1...Z_k H_k."""
    prod = product_op(Z, k, dim, ring)
    A = antisymmetrizer(k, dim, ring)
    H = symmetrizer(k, dim, ring)
    left = A * prod
    right = prod * H
    return {"antisymmetrizer": (left * A - left).normalize().is_zero(),
            "symmetrizer": (H * right - right).normalize().is_zero()}
