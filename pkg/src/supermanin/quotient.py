"""Normal forms in right and left quantum superalgebras by exact linear algebra.

The defining relations are quadratic and homogeneous with respect to the
multiset of row indices, the multiset of column indices and the total
u-degree of a word.  The free algebra therefore splits into finite blocks
indexed by these data, and the two-sided ideal splits accordingly.  Each
block is reduced independently and only when a polynomial actually touches
it.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .core import (NCPoly, Rational, SuperDim, GenSymbol, Word, Y, Z, ZERO,
                   supercommutator, to_text, word_degree, y as ysym, z as zsym)
from .linalg import Echelon
from .tensor import Ring, ncpoly_ring, embed_matrix, transposition, FREE

DIM_GUARD = int(os.environ.get("SUPERMANIN_DIM_GUARD", 2_000_000))

RIGHT = "right"
AFFINE_RIGHT = "affine-right"
AFFINE_LEFT = "affine-left"
VARIANTS = (RIGHT, AFFINE_RIGHT, AFFINE_LEFT)


class CapExceeded(RuntimeError):
    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: dimension {size} exceeds the guard {cap}")
        self.size = size
        self.cap = cap


class QuadraticSpec(NamedTuple):
    dim: SuperDim
    variant: str = RIGHT

    @property
    def family(self) -> int:
        return Y if self.variant == AFFINE_LEFT else Z

    @property
    def affine(self) -> bool:
        return self.variant != RIGHT

    def letter(self, i: int, j: int, r: int = 0) -> GenSymbol:
        if self.variant == AFFINE_LEFT:
            return ysym(i, j, self.dim, r)
        return zsym(i, j, self.dim, r if self.affine else 0)

    def label(self) -> str:
        return f"{self.variant}({self.dim.m}|{self.dim.n})"


def relation_sign(dim: SuperDim, i: int, j: int, k: int) -> int:
    p = dim.parity
    e = p(i) * p(j) + p(i) * p(k) + p(j) * p(k)
    return -1 if e % 2 else 1


def relations(spec: QuadraticSpec, p: int = 1) -> List[NCPoly]:
    """All defining relations of degree ``p`` (any ``p`` for the plain case)."""
    dim = spec.dim
    idx = list(dim.indices())
    gen = lambda i, j, r: NCPoly.gen(spec.letter(i, j, r))
    pairs = [(1, 1)] if not spec.affine else [(r, p - r) for r in range(1, p)]
    out = []
    for i, j, k, l in itertools.product(idx, repeat=4):
        acc = NCPoly()
        for r, s in pairs:
            lhs = supercommutator(gen(i, j, r), gen(k, l, s))
            rhs = supercommutator(gen(k, j, r), gen(i, l, s))
            sg = relation_sign(dim, i, j, k)
            if spec.variant == AFFINE_LEFT:
                acc = acc + lhs + rhs.scale(sg)
            else:
                acc = acc + lhs - rhs.scale(sg)
        if acc:
            out.append(acc)
    return out


BlockKey = Tuple[int, int, Tuple[int, ...], Tuple[int, ...], int]


def block_key(w: Word) -> BlockKey:
    fam = w[0].family if w else -1
    return (len(w), fam, tuple(sorted(s.i for s in w)), tuple(sorted(s.j for s in w)),
            word_degree(w))


def _distinct_perms(ms: Tuple[int, ...]):
    return sorted(set(itertools.permutations(ms)))


def _compositions(d: int, parts: int):
    if parts == 0:
        if d == 0:
            yield ()
        return
    for first in range(1, d - parts + 2):
        for rest in _compositions(d - first, parts - 1):
            yield (first,) + rest


@dataclass
class Block:
    key: BlockKey
    words: List[Word]
    index: Dict[Word, int]
    echelon: Echelon
    n_relations: int

    @property
    def quotient_dim(self) -> int:
        return len(self.words) - len(self.echelon)


class GradedNormalForm(NamedTuple):
    degree: int
    basis: List[Word]
    words: int
    relations: int
    blocks: int


class ManinQuotient:
    """Lazy block-wise normal form for one quadratic spec."""

    def __init__(self, spec: QuadraticSpec, guard: int = DIM_GUARD):
        self.spec = spec
        self.guard = guard
        self._blocks: Dict[BlockKey, Block] = {}
        self._rel2: Dict[BlockKey, List[Dict[Word, Rational]]] = {}
        self._rel_done: set = set()

    # -------------------------------------------------------------- blocks
    def _block_words(self, key: BlockKey) -> List[Word]:
        L, fam, rows, cols, d = key
        spec = self.spec
        out = []
        degs = [tuple([0] * L)] if not spec.affine else list(_compositions(d, L))
        for R in _distinct_perms(rows):
            for C in _distinct_perms(cols):
                for D in degs:
                    out.append(tuple(spec.letter(i, j, r) for i, j, r in zip(R, C, D)))
        out.sort()
        return out

    def _relations_for(self, key2: BlockKey) -> List[Dict[Word, Rational]]:
        """Independent relations spanning the ideal in a length-two block."""
        p = key2[4]
        if p not in self._rel_done:
            self._rel_done.add(p)
            groups: Dict[BlockKey, List[NCPoly]] = {}
            for rel in relations(self.spec, p):
                k = block_key(next(iter(rel.terms)))
                groups.setdefault(k, []).append(rel)
            for k, rels in groups.items():
                ech = Echelon()
                words = sorted({w for r in rels for w in r.terms})
                ix = {w: n for n, w in enumerate(words)}
                basis = []
                for r in rels:
                    if ech.add({ix[w]: c for w, c in r.terms.items()}):
                        basis.append(dict(r.terms))
                self._rel2[k] = basis
        return self._rel2.get(key2, [])

    def block(self, key: BlockKey) -> Block:
        b = self._blocks.get(key)
        if b is not None:
            return b
        words = self._block_words(key)
        index = {w: n for n, w in enumerate(words)}
        ech = Echelon()
        seen = set()
        nrel = 0
        L = key[0]
        for w in words:
            for p in range(L - 1):
                pre, mid, suf = w[:p], w[p:p + 2], w[p + 2:]
                k2 = block_key(mid)
                tag = (pre, k2, suf)
                if tag in seen:
                    continue
                seen.add(tag)
                for rel in self._relations_for(k2):
                    vec = {}
                    for m, c in rel.items():
                        col = index[pre + m + suf]
                        vec[col] = vec.get(col, ZERO) + c
                    nrel += 1
                    ech.add(vec)
                    if len(ech) == len(words):
                        break
            size = len(words) * len(ech)
            if size > self.guard:
                raise CapExceeded(f"block {key}", size, self.guard)
        b = Block(key, words, index, ech, nrel)
        self._blocks[key] = b
        return b

    # ----------------------------------------------------------- reduction
    def reduce(self, p: NCPoly) -> NCPoly:
        groups: Dict[BlockKey, Dict[Word, Rational]] = {}
        for w, c in p.terms.items():
            groups.setdefault(block_key(w), {})[w] = c
        out: Dict[Word, Rational] = {}
        for key, terms in groups.items():
            if key[0] < 2:
                out.update(terms)
                continue
            b = self.block(key)
            vec = {b.index[w]: c for w, c in terms.items()}
            for col, c in b.echelon.reduce(vec).items():
                out[b.words[col]] = c
        return NCPoly(out, _clean=True)

    def is_zero(self, p: NCPoly) -> bool:
        return not self.reduce(p)

    def ring(self) -> Ring:
        return ncpoly_ring(normalize=self.reduce, name=f"quotient:{self.spec.label()}")

    # ---------------------------------------------------------- full bases
    def build_graded_basis(self, d: int) -> GradedNormalForm:
        """Enumerate every block of total degree ``d``."""
        spec = self.spec
        N = spec.dim.N
        keys = set()
        lengths = [d] if not spec.affine else range(1, d + 1)
        for L in lengths:
            for rows in itertools.combinations_with_replacement(range(1, N + 1), L):
                for cols in itertools.combinations_with_replacement(range(1, N + 1), L):
                    keys.add((L, spec.family, rows, cols, d))
        basis, words, rels = [], 0, 0
        for key in sorted(keys):
            if key[0] < 2:
                ws = self._block_words(key)
                basis.extend(ws)
                words += len(ws)
                continue
            b = self.block(key)
            piv = set(b.echelon.rows)
            basis.extend(w for n, w in enumerate(b.words) if n not in piv)
            words += len(b.words)
            rels += b.n_relations
        return GradedNormalForm(d, basis, words, rels, len(keys))


_QUOTIENTS: Dict[Tuple[QuadraticSpec, int], ManinQuotient] = {}


def quotient(spec: QuadraticSpec, guard: int = DIM_GUARD) -> ManinQuotient:
    key = (spec, guard)
    if key not in _QUOTIENTS:
        _QUOTIENTS[key] = ManinQuotient(spec, guard)
    return _QUOTIENTS[key]


def report(spec: QuadraticSpec, degree: int, identity: str, residue: NCPoly,
           q: Optional[ManinQuotient] = None, dims: Optional[GradedNormalForm] = None) -> dict:
    """JSON-ready record of one identity check."""
    out = {
        "spec": spec.label(),
        "degree": degree,
        "identity": identity,
        "status": "pass" if not residue else "fail",
        "counterexample": None if not residue else to_text(residue),
        "dims": None,
    }
    if dims is not None:
        out["dims"] = {"words": dims.words, "relations": dims.relations,
                       "quotient": len(dims.basis)}
    return out


# -------------------------------------------------------- matrix relations

def manin_defect(Z, dim: SuperDim, ring: Ring = FREE):
    """(1 - P12)[Z1, Z2] as a tensor operator, entries normalized."""
    Z1 = embed_matrix(Z, 1, 2, dim, ring)
    Z2 = embed_matrix(Z, 2, 2, dim, ring)
    P = transposition(dim, 2, 1, 2, ring)
    comm = Z1 * Z2 - Z2 * Z1
    return (comm - P * comm).normalize()


def left_defect(Y_, dim: SuperDim, ring: Ring = FREE):
    """[Y1, Y2](1 - P12)."""
    Y1 = embed_matrix(Y_, 1, 2, dim, ring)
    Y2 = embed_matrix(Y_, 2, 2, dim, ring)
    P = transposition(dim, 2, 1, 2, ring)
    comm = Y1 * Y2 - Y2 * Y1
    return (comm - comm * P).normalize()


def is_manin(Z, dim: SuperDim, ring: Ring = FREE) -> bool:
    return manin_defect(Z, dim, ring).is_zero()


def is_left_quantum(Y_, dim: SuperDim, ring: Ring = FREE) -> bool:
    return left_defect(Y_, dim, ring).is_zero()


# --------------------------------------------------------- affine algebra

def affine_matrix_series(dim: SuperDim, cap: int, ring: Ring):
    """Z(u) = 1 + z^(1) u + ... + z^(cap) u^cap over the given ring."""
    from .berezinian import MatrixSeries
    N = dim.N
    mats = [[[NCPoly.const(1 if i == j else 0) for j in range(N)] for i in range(N)]]
    for r in range(1, cap + 1):
        mats.append([[NCPoly.gen(zsym(i, j, dim, r)) for j in dim.indices()] for i in dim.indices()])
    return MatrixSeries.from_coefficients(dim, mats, ring)


def _series_supercommutator(a, b, pa: int, pb: int):
    return a * b - b * a if not (pa and pb) else a * b + b * a


def series_relation_defects(W, dim: SuperDim, left: bool = False) -> List[Tuple[Tuple[int, int, int, int], int, NCPoly]]:
    """Nonzero coefficients of the right (or left) relations for a matrix of series.

    Right: [w_ij, w_kl] - [w_kj, w_il] s;  left: [w_ij, w_kl] + [w_kj, w_il] s,
    with s = (-1)^{ij + ik + jk} computed from the parities of ``dim``.
    """
    out = []
    idx = list(dim.indices())
    par = lambda i, j: dim.parity(i) ^ dim.parity(j)
    for i, j, k, l in itertools.product(idx, repeat=4):
        lhs = _series_supercommutator(W[i - 1, j - 1], W[k - 1, l - 1], par(i, j), par(k, l))
        rhs = _series_supercommutator(W[k - 1, j - 1], W[i - 1, l - 1], par(k, j), par(i, l))
        s = relation_sign(dim, i, j, k)
        tot = lhs + rhs.scale(s) if left else lhs - rhs.scale(s)
        for p, c in enumerate(tot.normalize().coeffs):
            if c:
                out.append(((i, j, k, l), p, c))
    return out


def verify_evaluation_embedding(dim: SuperDim, cap: int = 4) -> dict:
    """z_ij(u) -> delta_ij + z_ij u kills affine relations; z_ij -> z^(1)_ij respects the plain ones."""
    aff = QuadraticSpec(dim, AFFINE_RIGHT)
    plain = quotient(QuadraticSpec(dim, RIGHT))
    ev = lambda s: NCPoly.gen(zsym(s.i, s.j, dim)) if s.r == 1 else NCPoly()
    bad = []
    for p in range(2, cap + 1):
        for rel in relations(aff, p):
            img = plain.reduce(rel.substitute(ev))
            if img:
                bad.append(("evaluation", p, img))
    affq = quotient(aff)
    emb = lambda s: NCPoly.gen(zsym(s.i, s.j, dim, 1))
    for rel in relations(QuadraticSpec(dim, RIGHT)):
        img = affq.reduce(rel.substitute(emb))
        if img:
            bad.append(("embedding", 2, img))
    ident = all(NCPoly.gen(zsym(i, j, dim, 1)).substitute(ev) == NCPoly.gen(zsym(i, j, dim))
                for i in dim.indices() for j in dim.indices())
    return {"spec": aff.label(), "degree": cap, "identity": "evaluation-embedding",
            "status": "pass" if not bad and ident else "fail",
            "counterexample": None if not bad else f"{bad[0][0]} p={bad[0][1]}: {to_text(bad[0][2])}",
            "dims": None}


def omega_images(dim: SuperDim, cap: int):
    """W(u) = Z(-u)^{-1} over the affine quotient and the map z^(r)_ij -> W^(r)_ij."""
    q = quotient(QuadraticSpec(dim, AFFINE_RIGHT))
    ring = q.ring()
    Z = affine_matrix_series(dim, cap, ring)
    Zneg = type(Z).from_coefficients(
        dim, [[[c.scale((-1) ** r) for c in row] for row in Z.coefficient(r)] for r in range(cap + 1)], ring)
    W = Zneg.invert()
    images = {}
    for r in range(1, cap + 1):
        C = W.coefficient(r)
        for i in dim.indices():
            for j in dim.indices():
                images[zsym(i, j, dim, r)] = C[i - 1][j - 1]
    return W, images, q


def verify_omega(dim: SuperDim, cap: int = 3) -> dict:
    """omega: Z(u) -> Z^{-1}(-u) preserves the relations and squares to the identity."""
    W, images, q = omega_images(dim, cap)
    defects = series_relation_defects(W, dim)
    bad = None
    if defects:
        (ijkl, p, c) = defects[0]
        bad = f"relation {ijkl} at u^{p}: {to_text(c)}"
    else:
        for s, img in sorted(images.items()):
            back = q.reduce(img.substitute(lambda x: images[x]))
            if back != NCPoly.gen(s):
                bad = f"omega^2({s}) = {to_text(back)}"
                break
    return {"spec": QuadraticSpec(dim, AFFINE_RIGHT).label(), "degree": cap, "identity": "omega",
            "status": "pass" if bad is None else "fail", "counterexample": bad, "dims": None}


def verify_zeta(dim: SuperDim, cap: int = 3) -> dict:
    """y_ij(u) -> z'_{N-i+1,N-j+1}(u) sends the left relations of (n|m) to zero in the affine (m|n) quotient."""
    from .berezinian import MatrixSeries
    from .core import superdim
    q = quotient(QuadraticSpec(dim, AFFINE_RIGHT))
    ring = q.ring()
    Zinv = affine_matrix_series(dim, cap, ring).invert()
    N = dim.N
    rows = [[Zinv[N - i, N - j] for j in range(1, N + 1)] for i in range(1, N + 1)]
    dual = superdim(dim.n, dim.m)
    Y = MatrixSeries(dual, rows, ring)
    defects = series_relation_defects(Y, dual, left=True)
    bad = None
    if defects:
        (ijkl, p, c) = defects[0]
        bad = f"left relation {ijkl} at u^{p}: {to_text(c)}"
    return {"spec": QuadraticSpec(dual, AFFINE_LEFT).label(), "degree": cap, "identity": "zeta",
            "status": "pass" if bad is None else "fail", "counterexample": bad, "dims": None}


def power_commutator_defect(Z, dim: SuperDim, r: int, ring: Ring = FREE):
    """(1 - P12) sum_{k+l=r} [Z1^k, Z2^l], entries normalized."""
    Z1 = embed_matrix(Z, 1, 2, dim, ring)
    Z2 = embed_matrix(Z, 2, 2, dim, ring)
    P = transposition(dim, 2, 1, 2, ring)
    p1 = [None, Z1]
    p2 = [None, Z2]
    for _ in range(2, r):
        p1.append(p1[-1] * Z1)
        p2.append(p2[-1] * Z2)
    acc = None
    for k in range(1, r):
        c = p1[k] * p2[r - k] - p2[r - k] * p1[k]
        acc = c if acc is None else acc + c
    if acc is None:
        return None
    return (acc - P * acc).normalize()


# ----------------------------------------------------------------- MacMahon

def bos_terms(Z, dim: SuperDim, dmax: int, ring: Ring = FREE) -> List[NCPoly]:
    """str H_k Z_1 ... Z_k for k = 0..dmax."""
    from .tensor import h_direct
    return [h_direct(Z, k, dim, ring) for k in range(dmax + 1)]


def ferm_terms(Z, dim: SuperDim, dmax: int, ring: Ring = FREE) -> List[NCPoly]:
    """(-1)^k str A_k Z_1 ... Z_k for k = 0..dmax."""
    from .tensor import sigma_direct
    return [sigma_direct(Z, k, dim, ring) * ((-1) ** k) for k in range(dmax + 1)]


def macmahon_component(dim: SuperDim, d: int, q: Optional[ManinQuotient] = None) -> NCPoly:
    """Reduced degree-d component of Bos x Ferm minus its constant 1."""
    from .tensor import generic_matrix
    q = q or quotient(QuadraticSpec(dim))
    Z = generic_matrix(dim)
    bos = bos_terms(Z, dim, d)
    ferm = ferm_terms(Z, dim, d)
    acc = NCPoly()
    for a in range(d + 1):
        acc = acc + bos[a] * ferm[d - a]
    if d == 0:
        acc = acc - NCPoly.const(1)
    return q.reduce(acc)


def macmahon_report(dim: SuperDim, d: int, with_dims: bool = True) -> dict:
    spec = QuadraticSpec(dim)
    q = quotient(spec)
    res = macmahon_component(dim, d, q)
    dims = q.build_graded_basis(d) if with_dims and d >= 2 else None
    return report(spec, d, "bos*ferm=1", res, q, dims)
