"""Higher Gaudin Hamiltonians for gl(m|n) on tensor products of evaluation modules.

The entries of L(z) become first-order differential operators

    l_ij(z) = delta_ij d_z - (-1)^i (delta_ij lambda_i + K_ij + sum_r E^(r)_ij / (z - a_r)),

whose coefficients are polynomials in site letters E^(r)_ij with scalar
rational functions of z.  Rational functions are kept in partial fractions
over the distinct points, a canonical form, so equality is exact
coefficientwise comparison.  Words in the site letters are turned into
matrices only at the end.
"""
from __future__ import annotations

import itertools
from functools import reduce
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import NCPoly, Rational, SuperDim, ZERO, ONE, qq
from .linalg import Echelon
from .sugawara import FAMILIES, free_family

CONST = (-1, 0)
PFKey = Tuple[int, int]          # (site, order) for (z - a_site)^(-order); CONST for 1


class GaudinError(ValueError):
    """Invalid module or point configuration."""


# ---------------------------------------------------------- partial fractions

class PF:
    """Scalar rational function c + sum c_{r,e} (z - a_r)^(-e) over fixed distinct points."""

    __slots__ = ("terms", "points")

    def __init__(self, terms: Dict[PFKey, Rational], points: Tuple[Rational, ...]):
        self.terms = {k: v for k, v in terms.items() if v}
        self.points = points

    @classmethod
    def const(cls, c, points):
        return cls({CONST: qq(c)}, points)

    @classmethod
    def pole(cls, r: int, e: int, points, c=1):
        return cls({(r, e): qq(c)}, points)

    def __add__(self, other: "PF") -> "PF":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return PF(out, self.points)

    def scale(self, c) -> "PF":
        c = qq(c)
        return PF({k: v * c for k, v in self.terms.items()}, self.points)

    def __mul__(self, other: "PF") -> "PF":
        out: Dict[PFKey, Rational] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                for k, c in _pf_product(k1, k2, self.points).items():
                    out[k] = out.get(k, ZERO) + c * c1 * c2
        return PF(out, self.points)

    def derivative(self) -> "PF":
        return PF({(r, e + 1): -e * c for (r, e), c in self.terms.items() if r >= 0}, self.points)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, PF) and self.terms == other.terms

    def __repr__(self):
        parts = []
        for (r, e), c in sorted(self.terms.items()):
            parts.append(str(c) if r < 0 else f"{c}/(z-{self.points[r]})^{e}")
        return " + ".join(parts) or "0"


def _pf_product(k1: PFKey, k2: PFKey, points) -> Dict[PFKey, Rational]:
    if k1 == CONST:
        return {k2: ONE}
    if k2 == CONST:
        return {k1: ONE}
    (a, e), (b, f) = k1, k2
    if a == b:
        return {(a, e + f): ONE}
    d = points[a] - points[b]
    out: Dict[PFKey, Rational] = {}
    # expand (z-b)^(-f) around z = a, and symmetrically
    for i in range(1, e + 1):
        out[(a, i)] = (-1) ** (e - i) * comb(f + e - i - 1, e - i) / d ** (f + e - i)
    for j in range(1, f + 1):
        out[(b, j)] = (-1) ** (f - j) * comb(e + f - j - 1, f - j) / (-d) ** (e + f - j)
    return out


# ------------------------------------------------------------------ modules

class Module:
    """A finite-dimensional gl(m|n)-module: basis parities and matrices of e_ij."""

    def __init__(self, dim: SuperDim, parities: Sequence[int], action: Dict[Tuple[int, int], Dict]):
        self.dim = dim
        self.parities = tuple(parities)
        self.action = action

    @property
    def size(self) -> int:
        return len(self.parities)


def natural_module(dim: SuperDim) -> Module:
    """C^{m|n} with e_ij acting as the matrix unit E_ij."""
    N = dim.N
    act = {(i, j): {(i - 1, j - 1): ONE} for i in dim.indices() for j in dim.indices()}
    return Module(dim, [dim.parity(i) for i in range(1, N + 1)], act)


MODULES = {"natural": natural_module}


def _sparse_mul(A: Dict, B: Dict) -> Dict:
    rows: Dict[int, List] = {}
    for (k, j), c in B.items():
        rows.setdefault(k, []).append((j, c))
    out: Dict = {}
    for (i, k), a in A.items():
        for j, b in rows.get(k, ()):
            out[(i, j)] = out.get((i, j), ZERO) + a * b
    return {k: v for k, v in out.items() if v}


def _sparse_add(A: Dict, B: Dict, c=1) -> Dict:
    out = dict(A)
    for k, v in B.items():
        out[k] = out.get(k, ZERO) + c * v
    return {k: v for k, v in out.items() if v}


def gl_bracket(dim: SuperDim, a: Tuple[int, int], b: Tuple[int, int]) -> Dict[Tuple[int, int], int]:
    (i, j), (k, l) = a, b
    p = dim.parity
    out: Dict[Tuple[int, int], int] = {}
    if k == j:
        out[(i, l)] = out.get((i, l), 0) + 1
    if i == l:
        s = -1 if ((p(i) + p(j)) * (p(k) + p(l))) % 2 else 1
        out[(k, j)] = out.get((k, j), 0) - s
    return {x: c for x, c in out.items() if c}


def check_module(mod: Module) -> bool:
    """Supercommutators of the assigned matrices follow the gl(m|n) bracket."""
    dim = mod.dim
    idx = list(dim.indices())
    for a in itertools.product(idx, idx):
        for b in itertools.product(idx, idx):
            pa = dim.parity(a[0]) ^ dim.parity(a[1])
            pb = dim.parity(b[0]) ^ dim.parity(b[1])
            A, B = mod.action[a], mod.action[b]
            lhs = _sparse_add(_sparse_mul(A, B), _sparse_mul(B, A), 1 if (pa and pb) else -1)
            rhs: Dict = {}
            for x, c in gl_bracket(dim, a, b).items():
                rhs = _sparse_add(rhs, mod.action[x], c)
            if lhs != rhs:
                return False
    return True


class TensorModule:
    """Tensor product of modules with the coproduct action and Koszul signs."""

    def __init__(self, modules: Sequence[Module]):
        if not modules:
            raise GaudinError("at least one module is required")
        self.modules = list(modules)
        self.dim = modules[0].dim
        self.basis = list(itertools.product(*[range(m.size) for m in modules]))
        self.index = {b: n for n, b in enumerate(self.basis)}
        self._site: Dict[Tuple[int, int, int], Dict] = {}

    @property
    def size(self) -> int:
        return len(self.basis)

    def site(self, r: int, i: int, j: int) -> Dict:
        """Sparse matrix of E^(r)_ij, e_ij acting in factor r (0-based)."""
        key = (r, i, j)
        if key in self._site:
            return self._site[key]
        p = self.dim.parity(i) ^ self.dim.parity(j)
        local = self.modules[r].action[(i, j)]
        out = {}
        for col, b in enumerate(self.basis):
            pre = sum(self.modules[s].parities[b[s]] for s in range(r)) % 2
            sign = -1 if (p and pre) else 1
            for (x, y), c in local.items():
                if y != b[r]:
                    continue
                nb = b[:r] + (x,) + b[r + 1:]
                out[(self.index[nb], col)] = out.get((self.index[nb], col), ZERO) + sign * c
        self._site[key] = out
        return out

    def action(self, i: int, j: int) -> Dict:
        return reduce(lambda A, r: _sparse_add(A, self.site(r, i, j)), range(len(self.modules)), {})


def tensor_action(modules: Sequence[Module], i: int, j: int) -> Dict:
    return TensorModule(modules).action(i, j)


# -------------------------------------------------------- differential ops

SiteWord = Tuple[Tuple[int, int, int], ...]


class DiffOp:
    """sum over (j, word) of PF(z) * E-word * d_z^j; site letters commute with z."""

    __slots__ = ("terms", "points")

    def __init__(self, terms: Dict[Tuple[int, SiteWord], PF], points):
        self.terms = {k: v for k, v in terms.items() if v}
        self.points = points

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return DiffOp(out, self.points)

    def scale(self, c) -> "DiffOp":
        return DiffOp({k: v.scale(c) for k, v in self.terms.items()}, self.points)

    def __mul__(self, other: "DiffOp") -> "DiffOp":
        out: Dict[Tuple[int, SiteWord], PF] = {}
        for (j, w), f in self.terms.items():
            for (j2, w2), g in other.terms.items():
                dg = g
                for t in range(j + 1):
                    if t:
                        dg = dg.derivative()
                    if not dg:
                        break
                    key = (j - t + j2, w + w2)
                    term = (f * dg).scale(comb(j, t))
                    out[key] = out[key] + term if key in out else term
        return DiffOp(out, self.points)


def _validate_points(points) -> Tuple[Rational, ...]:
    pts = tuple(qq(a) for a in points)
    if len(set(pts)) != len(pts):
        raise GaudinError("evaluation points must be pairwise distinct")
    return pts


def build_L(dim: SuperDim, n_sites: int, points, lam: Optional[Sequence] = None,
            K: Optional[Sequence[Sequence]] = None) -> List[List[DiffOp]]:
    """The matrix [l_ij(z)] with optional lambda and constant K shifts.

    K must be supported on pairs of equal parity: a scalar shift of an odd
    entry would break the grading.
    """
    pts = _validate_points(points)
    if len(pts) != n_sites:
        raise GaudinError("one point per module is required")
    N = dim.N
    out = []
    for i in dim.indices():
        row = []
        for j in dim.indices():
            sgn = -1 if dim.parity(i) else 1
            terms: Dict[Tuple[int, SiteWord], PF] = {}
            c = ZERO
            if i == j and lam is not None:
                c += qq(lam[i - 1])
            if K is not None and K[i - 1][j - 1]:
                if dim.parity(i) != dim.parity(j):
                    raise GaudinError("K must vanish on odd entries")
                c += qq(K[i - 1][j - 1])
            if i == j:
                terms[(1, ())] = PF.const(1, pts)
            if c:
                terms[(0, ())] = PF.const(-sgn * c, pts)
            for r in range(n_sites):
                terms[(0, ((r, i, j),))] = PF.pole(r, 1, pts, -sgn)
            row.append(DiffOp(terms, pts))
        out.append(row)
    return out


class GaudinSystem:
    """Tensor module, points and shifts; produces the coefficient families."""

    def __init__(self, dim: SuperDim, modules: Sequence[str], points, lam=None, K=None):
        if len(modules) != len(points):
            raise GaudinError("one point per module is required")
        mods = []
        for name in modules:
            if name not in MODULES:
                raise GaudinError(f"unknown module {name}")
            mods.append(MODULES[name](dim))
        self.dim = dim
        self.points = _validate_points(points)
        self.space = TensorModule(mods)
        self.L = build_L(dim, len(mods), self.points, lam, K)
        self._suffix: Dict[Tuple, DiffOp] = {}
        self._word_mat: Dict[SiteWord, Dict] = {(): {(n, n): ONE for n in range(self.space.size)}}
        self._families: Dict[Tuple[str, int], Dict[int, Dict[PFKey, Dict]]] = {}

    # free polynomial -> differential operator
    def _word(self, w: Tuple) -> DiffOp:
        if not w:
            return DiffOp({(0, ()): PF.const(1, self.points)}, self.points)
        hit = self._suffix.get(w)
        if hit is None:
            s = w[0]
            hit = self.L[s.i - 1][s.j - 1] * self._word(w[1:])
            self._suffix[w] = hit
        return hit

    def operator(self, p: NCPoly) -> DiffOp:
        acc = DiffOp({}, self.points)
        for w, c in p.terms.items():
            acc = acc + self._word(w).scale(c)
        return acc

    def word_matrix(self, w: SiteWord) -> Dict:
        hit = self._word_mat.get(w)
        if hit is None:
            hit = _sparse_mul(self.space.site(*w[0]), self.word_matrix(w[1:]))
            self._word_mat[w] = hit
        return hit

    def coefficients(self, family: str, k: int) -> Dict[int, Dict[PFKey, Dict]]:
        """{l: {pf key: sparse matrix}} with X_kl(z) = sum_key key(z) * matrix."""
        key = (family, k)
        if key in self._families:
            return self._families[key]
        op = self.operator(free_family(self.dim, family, k))
        out: Dict[int, Dict[PFKey, Dict]] = {l: {} for l in range(k + 1)}
        for (j, w), f in op.terms.items():
            l = k - j
            M = self.word_matrix(w)
            for pk, c in f.terms.items():
                cur = out[l].get(pk, {})
                out[l][pk] = _sparse_add(cur, M, c)
        for l in out:
            out[l] = {pk: M for pk, M in out[l].items() if M}
        self._families[key] = out
        return out

    def matrix(self, sparse: Dict) -> np.ndarray:
        n = self.space.size
        A = np.full((n, n), ZERO, dtype=object)
        for (i, j), c in sparse.items():
            A[i, j] = c
        return A


# ------------------------------------------------------ quadratic Hamiltonian

def casimir_value(mod: Module) -> Optional[Rational]:
    """Scalar of sum e_ij e_ji (-1)^j + sum e_ii on the module, or None."""
    dim = mod.dim
    acc: Dict = {}
    for i in dim.indices():
        for j in dim.indices():
            s = -1 if dim.parity(j) else 1
            acc = _sparse_add(acc, _sparse_mul(mod.action[(i, j)], mod.action[(j, i)]), s)
        acc = _sparse_add(acc, mod.action[(i, i)])
    vals = {acc.get((n, n), ZERO) for n in range(mod.size)}
    if len(vals) != 1 or any(i != j for (i, j) in acc):
        return None
    return vals.pop()


def quadratic_hamiltonian(system: GaudinSystem) -> Dict[PFKey, Dict]:
    """H(z) from the explicit double sum, in partial fractions."""
    dim, sp, pts = system.dim, system.space, system.points
    n = len(pts)
    out: Dict[PFKey, Dict] = {}

    def add(pf: PF, M: Dict):
        for k, c in pf.terms.items():
            out[k] = _sparse_add(out.get(k, {}), M, c)

    for r in range(n):
        for s in range(n):
            pf = PF.pole(r, 1, pts) * PF.pole(s, 1, pts)
            M: Dict = {}
            for i in dim.indices():
                for j in dim.indices():
                    sg = -1 if dim.parity(j) else 1
                    M = _sparse_add(M, _sparse_mul(sp.site(r, i, j), sp.site(s, j, i)), sg)
            add(pf, M)
        M = {}
        for i in dim.indices():
            M = _sparse_add(M, sp.site(r, i, i))
        add(PF.pole(r, 2, pts), M)
    return {k: v for k, v in out.items() if v}


def h_r_operators(system: GaudinSystem) -> List[Dict]:
    dim, sp, pts = system.dim, system.space, system.points
    out = []
    for r in range(len(pts)):
        M: Dict = {}
        for s in range(len(pts)):
            if s == r:
                continue
            for i in dim.indices():
                for j in dim.indices():
                    sg = -1 if dim.parity(j) else 1
                    M = _sparse_add(M, _sparse_mul(sp.site(r, i, j), sp.site(s, j, i)),
                                    sg / (pts[r] - pts[s]))
        out.append(M)
    return out


def residue_decomposition_check(system: GaudinSystem) -> dict:
    """H(z) = 2 sum H^(r)/(z-a_r) + sum Delta^(r)/(z-a_r)^2, and H(z) = S_22(z)."""
    H = quadratic_hamiltonian(system)
    Hr = h_r_operators(system)
    deltas = [casimir_value(m) for m in system.space.modules]
    n = system.space.size
    rhs: Dict[PFKey, Dict] = {}
    for r, M in enumerate(Hr):
        if M:
            rhs[(r, 1)] = {k: 2 * v for k, v in M.items()}
        rhs[(r, 2)] = {(x, x): deltas[r] for x in range(n)} if deltas[r] else {}
    rhs = {k: v for k, v in rhs.items() if v}
    s22 = system.coefficients("s", 2)[2]
    return {"decomposition": H == rhs, "matches_s22": H == s22,
            "casimir": [None if d is None else str(d) for d in deltas]}


# ------------------------------------------------------------ commutativity

def _mat_key_vector(sparse: Dict, n: int) -> Dict[int, Rational]:
    return {i * n + j: c for (i, j), c in sparse.items()}


def higher_hamiltonians(system: GaudinSystem, kmax: int, families: Sequence[str] = FAMILIES):
    """All extracted coefficient matrices, labelled by (family, k, l, pole key)."""
    out = []
    for fam in families:
        for k in range(1, kmax + 1):
            for l, parts in sorted(system.coefficients(fam, k).items()):
                for pk, M in sorted(parts.items()):
                    out.append(((fam, k, l, pk), M))
    return out


def commutativity_check(system: GaudinSystem, kmax: int, families: Sequence[str] = FAMILIES) -> dict:
    """Commutators on a basis of the span of every extracted coefficient.

    Functions 1 and (z - a_r)^(-e) are linearly independent, so the series
    coefficients commute for all z, w iff these matrices commute; bilinearity
    reduces all pairs to pairs of basis elements.
    """
    n = system.space.size
    items = higher_hamiltonians(system, kmax, families)
    ech = Echelon()
    basis = []
    for label, M in items:
        if ech.add(_mat_key_vector(M, n)):
            basis.append((label, system.matrix(M)))
    witnesses = []
    pairs = 0
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            A, B = basis[a][1], basis[b][1]
            pairs += 1
            C = A.dot(B) - B.dot(A)
            if any(x != 0 for x in C.flat):
                witnesses.append({"x": _label(basis[a][0]), "y": _label(basis[b][0])})
    sb = all(system.coefficients("sigma", k) == system.coefficients("b", k)
             for k in range(1, kmax + 1)) if "b" in families and "sigma" in families else None
    return {"coefficients": len(items), "basis": len(basis), "pairs_checked": pairs,
            "all_commute": not witnesses, "witnesses": witnesses[:10], "sigma_equals_b": sb}


def _label(lab) -> str:
    fam, k, l, (r, e) = lab
    f = "1" if r < 0 else f"(z-a{r + 1})^-{e}"
    return f"{fam}[{k},{l}]:{f}"
