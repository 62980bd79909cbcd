"""Truncated matrix power series, quasideterminants and Berezinians.

A :class:`Series` stores the coefficients ``c_0 .. c_N`` of a power series
in ``u`` over a coefficient ring; ``N`` is its order and every product is
truncated at the smaller order of its operands.  A :class:`MatrixSeries` is
a square matrix of such series.
"""
from __future__ import annotations

import itertools
from typing import List, NamedTuple, Sequence

from .core import NCPoly, Rational, SuperDim
from .linalg import inverse as rat_inverse
from .tensor import (FREE, Ring, embed_matrix, full_supertrace, h_direct, matrix_supertrace,
                     matpow, partial_supertrace, perm_op, sigma_direct, sign_of,
                     symmetrizer, transposition, identity_op, TensorOperator)


class NotInvertible(ValueError):
    pass


def _const_value(c):
    """Rational value of a constant ring element, or None."""
    if isinstance(c, NCPoly):
        if not c:
            return Rational(0)
        if set(c.terms) == {()}:
            return c.constant()
        return None
    return Rational(c)


class Series:
    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs: Sequence, ring: Ring = FREE):
        self.coeffs = list(coeffs)
        self.ring = ring

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def const(cls, c, order: int, ring: Ring = FREE) -> "Series":
        c = c if isinstance(c, NCPoly) else NCPoly.const(c)
        return cls([c] + [ring.zero() for _ in range(order)], ring)

    def __getitem__(self, k):
        return self.coeffs[k]

    def truncate(self, order: int) -> "Series":
        return Series(self.coeffs[:order + 1], self.ring)

    def __add__(self, other: "Series") -> "Series":
        N = min(self.order, other.order)
        return Series([self.coeffs[k] + other.coeffs[k] for k in range(N + 1)], self.ring)

    def __sub__(self, other: "Series") -> "Series":
        N = min(self.order, other.order)
        return Series([self.coeffs[k] - other.coeffs[k] for k in range(N + 1)], self.ring)

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.ring)

    def scale(self, c) -> "Series":
        return Series([x * Rational(c) for x in self.coeffs], self.ring)

    def __mul__(self, other: "Series") -> "Series":
        N = min(self.order, other.order)
        ring = self.ring
        out = []
        for p in range(N + 1):
            acc = ring.zero()
            for q in range(p + 1):
                a, b = self.coeffs[q], other.coeffs[p - q]
                if ring.is_zero(a) or ring.is_zero(b):
                    continue
                acc = acc + a * b
            out.append(ring.normalize(acc))
        return Series(out, ring)

    def inverse(self) -> "Series":
        c0 = _const_value(self.coeffs[0])
        if c0 != 1:
            raise NotInvertible("only series with constant term 1 are inverted")
        inv0 = 1 / c0
        ring = self.ring
        out = [NCPoly.const(inv0)]
        for p in range(1, self.order + 1):
            acc = ring.zero()
            for q in range(1, p + 1):
                a = self.coeffs[q]
                if ring.is_zero(a):
                    continue
                acc = acc + out[p - q] * a
            out.append(ring.normalize(acc * (-inv0)))
        return Series(out, ring)

    def derivative(self) -> "Series":
        """d/du, order drops by one."""
        return Series([self.coeffs[k] * k for k in range(1, len(self.coeffs))], self.ring)

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(self.ring.normalize(c)) for c in self.coeffs)

    def normalize(self) -> "Series":
        return Series([self.ring.normalize(c) for c in self.coeffs], self.ring)

    def __repr__(self):
        return f"Series(order={self.order})"


def series_product(factors: Sequence[Series]) -> Series:
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


class MatrixSeries:
    """Square matrix of truncated series over a common ring."""

    def __init__(self, dim: SuperDim, entries: List[List[Series]], ring: Ring = FREE):
        self.dim = dim
        self.entries = entries
        self.ring = ring

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def order(self) -> int:
        return min(s.order for row in self.entries for s in row)

    @classmethod
    def one_plus_u(cls, Z, dim: SuperDim, order: int, ring: Ring = FREE, sign: int = 1) -> "MatrixSeries":
        """The matrix 1 + sign*u*Z."""
        N = len(Z)
        rows = []
        for i in range(N):
            row = []
            for j in range(N):
                c = [NCPoly.const(1 if i == j else 0), Z[i][j] * sign] + [ring.zero()] * (order - 1)
                row.append(Series(c[:order + 1], ring))
            rows.append(row)
        return cls(dim, rows, ring)

    @classmethod
    def from_coefficients(cls, dim: SuperDim, coeff_mats, ring: Ring = FREE) -> "MatrixSeries":
        """``coeff_mats[r][i][j]`` is the u^r coefficient of entry (i,j)."""
        N = len(coeff_mats[0])
        rows = [[Series([cm[i][j] for cm in coeff_mats], ring) for j in range(N)] for i in range(N)]
        return cls(dim, rows, ring)

    def coefficient(self, r: int):
        return [[s[r] for s in row] for row in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __mul__(self, other: "MatrixSeries") -> "MatrixSeries":
        N = self.size
        out = []
        for i in range(N):
            row = []
            for j in range(N):
                acc = None
                for l in range(N):
                    t = self.entries[i][l] * other.entries[l][j]
                    acc = t if acc is None else acc + t
                row.append(acc)
            out.append(row)
        return MatrixSeries(self.dim, out, self.ring)

    def submatrix(self, idx: Sequence[int]) -> "MatrixSeries":
        """Rows and columns ``idx`` (0-based), keeping the original parities."""
        return MatrixSeries(self.dim, [[self.entries[i][j] for j in idx] for i in idx], self.ring)

    def invert(self) -> "MatrixSeries":
        N, order, ring = self.size, self.order, self.ring
        c0 = [[_const_value(self.entries[i][j][0]) for j in range(N)] for i in range(N)]
        if any(v is None for row in c0 for v in row):
            raise NotInvertible("constant term is not a scalar matrix")
        inv0 = rat_inverse(c0)
        if inv0 is None:
            raise NotInvertible("constant term is singular")
        # W_0 = C^{-1}, W_p = -C^{-1} sum_{q>=1} Z_q W_{p-q}
        W = [[[NCPoly.const(inv0[i][j]) for j in range(N)] for i in range(N)]]
        for p in range(1, order + 1):
            S = [[ring.zero() for _ in range(N)] for _ in range(N)]
            for q in range(1, p + 1):
                Zq = self.coefficient(q)
                Wr = W[p - q]
                for i in range(N):
                    for l in range(N):
                        a = Zq[i][l]
                        if ring.is_zero(a):
                            continue
                        for j in range(N):
                            b = Wr[l][j]
                            if not ring.is_zero(b):
                                S[i][j] = S[i][j] + a * b
            Wp = []
            for i in range(N):
                row = []
                for j in range(N):
                    acc = ring.zero()
                    for l in range(N):
                        if inv0[i][l] and not ring.is_zero(S[l][j]):
                            acc = acc + S[l][j] * (-inv0[i][l])
                    row.append(ring.normalize(acc))
                Wp.append(row)
            W.append(Wp)
        return MatrixSeries.from_coefficients(self.dim, W, ring)

    def is_identity(self) -> bool:
        N = self.size
        for i in range(N):
            for j in range(N):
                s = self.entries[i][j]
                target = Series.const(1 if i == j else 0, s.order, self.ring)
                if not (s - target).is_zero():
                    return False
        return True


# ------------------------------------------------------------ quasideterminants

def quasideterminant(A: MatrixSeries, i: int, j: int) -> Series:
    """|A|_{ij} = ((A^{-1})_{ji})^{-1}, indices 1-based."""
    inv = A.invert()
    try:
        return inv.entries[j - 1][i - 1].inverse()
    except NotInvertible as exc:
        raise NotInvertible(f"entry ({j},{i}) of the inverse is not invertible") from exc


class GaussFactors(NamedTuple):
    F: MatrixSeries
    D: List[Series]
    E: MatrixSeries


def leading_quasideterminants(Z: MatrixSeries) -> List[Series]:
    """d_i(u): the (i,i) quasideterminant of the leading i x i submatrix."""
    return [quasideterminant(Z.submatrix(range(i)), i, i) for i in range(1, Z.size + 1)]


def trailing_quasideterminants(Z: MatrixSeries) -> List[Series]:
    """dbar_i(u): top-left quasideterminant of rows/columns i..N."""
    N = Z.size
    return [quasideterminant(Z.submatrix(range(i - 1, N)), 1, 1) for i in range(1, N + 1)]


def gauss_decompose(Z: MatrixSeries) -> GaussFactors:
    """Z = F D E with F unipotent lower, D diagonal, E unipotent upper."""
    N, ring, order = Z.size, Z.ring, Z.order
    zero = Series.const(0, order, ring)
    one = Series.const(1, order, ring)
    F = [[one if i == j else zero for j in range(N)] for i in range(N)]
    E = [[one if i == j else zero for j in range(N)] for i in range(N)]
    D = []
    # row-by-row elimination: Z_ij = sum_{l <= min(i,j)} F_il d_l E_lj
    for k in range(N):
        acc = Z.entries[k][k]
        for l in range(k):
            acc = acc - F[k][l] * D[l] * E[l][k]
        D.append(acc.normalize())
        dinv = acc.inverse()
        for j in range(k + 1, N):
            s = Z.entries[k][j]
            for l in range(k):
                s = s - F[k][l] * D[l] * E[l][j]
            E[k][j] = (dinv * s).normalize()
        for i in range(k + 1, N):
            s = Z.entries[i][k]
            for l in range(k):
                s = s - F[i][l] * D[l] * E[l][k]
            F[i][k] = (s * dinv).normalize()
    return GaussFactors(MatrixSeries(Z.dim, F, ring), D, MatrixSeries(Z.dim, E, ring))


def diagonal_matrix(dim: SuperDim, D: Sequence[Series], ring: Ring) -> MatrixSeries:
    N = len(D)
    order = min(s.order for s in D)
    zero = Series.const(0, order, ring)
    return MatrixSeries(dim, [[D[i] if i == j else zero for j in range(N)] for i in range(N)], ring)


# ------------------------------------------------------------------ Berezinian

def _det_sum(entry, m: int, offset_row: int, offset_col: int, order: int, ring: Ring,
             transpose: bool) -> Series:
    """sum sgn(s) x_{s(1)1} ... x_{s(m)m} (transpose) or x_{1 s(1)} ... x_{m s(m)}."""
    acc = Series.const(0, order, ring)
    if m == 0:
        return Series.const(1, order, ring)
    for s in itertools.permutations(range(m)):
        factors = []
        for a in range(m):
            i, j = (s[a], a) if transpose else (a, s[a])
            factors.append(entry(offset_row + i, offset_col + j))
        t = series_product(factors)
        acc = acc + t if sign_of(s) > 0 else acc - t
    return acc


def berezinian(Z: MatrixSeries) -> Series:
    """Column determinant of the even block times row determinant of the odd block of Z^{-1}."""
    m, n = Z.dim
    ring, order = Z.ring, Z.order
    inv = Z.invert()
    first = _det_sum(lambda i, j: Z.entries[i][j], m, 0, 0, order, ring, transpose=True)
    second = _det_sum(lambda i, j: inv.entries[i][j], n, m, m, order, ring, transpose=False)
    return (first * second).normalize()


def berezinian_alt(Z: MatrixSeries) -> Series:
    """The dual expression, equal to the inverse of the Berezinian."""
    m, n = Z.dim
    ring, order = Z.ring, Z.order
    inv = Z.invert()
    first = _det_sum(lambda i, j: inv.entries[i][j], m, 0, 0, order, ring, transpose=True)
    second = _det_sum(lambda i, j: Z.entries[i][j], n, m, m, order, ring, transpose=False)
    return (first * second).normalize()


def ber_from_gauss(Z: MatrixSeries) -> Series:
    m, n = Z.dim
    ds = leading_quasideterminants(Z)
    factors = ds[:m] + [d.inverse() for d in ds[m:]]
    return series_product(factors).normalize()


def inverse_ber_from_trailing(Z: MatrixSeries) -> Series:
    m, n = Z.dim
    ds = trailing_quasideterminants(Z)
    factors = [d.inverse() for d in ds[:m]] + ds[m:]
    return series_product(factors).normalize()


def factorization_check(Z: MatrixSeries) -> dict:
    """Both quasideterminant factorizations and Ber * Ber_alt = 1."""
    ber = berezinian(Z)
    alt = berezinian_alt(Z)
    one = Series.const(1, Z.order, Z.ring)
    return {
        "gauss": (ber - ber_from_gauss(Z)).is_zero(),
        "trailing": (alt - inverse_ber_from_trailing(Z)).is_zero(),
        "product": (ber * alt - one).is_zero(),
    }


# ------------------------------------------------------- expansion identities

def sigma_series(Z, dim: SuperDim, order: int, ring: Ring = FREE, sign: int = 1) -> Series:
    """sum_k (sign u)^k str A_k Z_1...Z_k."""
    return Series([ring.normalize(sigma_direct(Z, k, dim, ring) * (sign ** k))
                   for k in range(order + 1)], ring)


def h_series(Z, dim: SuperDim, order: int, ring: Ring = FREE, sign: int = 1) -> Series:
    return Series([ring.normalize(h_direct(Z, k, dim, ring) * (sign ** k))
                   for k in range(order + 1)], ring)


def power_trace_series(Z, dim: SuperDim, order: int, ring: Ring = FREE) -> Series:
    """sum_k (-u)^k str Z^{k+1}."""
    out = []
    P = Z
    for k in range(order + 1):
        out.append(ring.normalize(matrix_supertrace(P, dim, ring) * ((-1) ** k)))
        from .tensor import matmul
        P = matmul(P, Z, ring)
    return Series(out, ring)


def expansion_identities(Z, dim: SuperDim, kmax: int, ring: Ring = FREE) -> dict:
    """The three Berezinian expansions of a Manin matrix up to u^kmax."""
    plus = MatrixSeries.one_plus_u(Z, dim, kmax + 1, ring, sign=1)
    minus = MatrixSeries.one_plus_u(Z, dim, kmax, ring, sign=-1)
    ber_plus = berezinian(plus)
    charferm = (ber_plus.truncate(kmax) - sigma_series(Z, dim, kmax, ring)).is_zero()
    charbos = (berezinian(minus).inverse() - h_series(Z, dim, kmax, ring)).is_zero()
    lhs = ber_plus.truncate(kmax).inverse() * ber_plus.derivative()
    newton = (lhs - power_trace_series(Z, dim, kmax, ring)).is_zero()
    return {"charferm": charferm, "charbos": charbos, "newton": newton}


def potr_check(Z, dim: SuperDim, k: int, ring: Ring = FREE) -> bool:
    """Z_1^k = str_{2..k} Z_1...Z_k P_{k-1,k}...P_12."""
    ops = [embed_matrix(Z, a, k, dim, ring) for a in range(1, k + 1)]
    prod = ops[0]
    for op in ops[1:]:
        prod = prod * op
    for a in range(k - 1, 0, -1):
        prod = prod * transposition(dim, k, a, a + 1, ring)
    rhs = partial_supertrace(prod, range(2, k + 1)).normalize()
    Z1 = embed_matrix(Z, 1, 1, dim, ring)
    lhs = identity_op(dim, 1, ring)
    for _ in range(k):
        lhs = lhs * Z1
    return (lhs.normalize() - rhs).normalize().is_zero()


def trace_lemma_check(Z, dim: SuperDim, r: int, ring: Ring = FREE) -> bool:
    """sum_{k=1}^r Z_1^k h_{r-k}(Z) = r str_{2..r} Z_1...Z_r H_r."""
    Z1 = embed_matrix(Z, 1, 1, dim, ring)
    lhs = None
    power = identity_op(dim, 1, ring)
    for k in range(1, r + 1):
        power = power * Z1
        h = h_direct(Z, r - k, dim, ring)
        term = TensorOperator(dim, 1, {key: v * h for key, v in power.entries.items()}, ring)
        lhs = term if lhs is None else lhs + term
    ops = [embed_matrix(Z, a, r, dim, ring) for a in range(1, r + 1)]
    prod = ops[0]
    for op in ops[1:]:
        prod = prod * op
    prod = prod * symmetrizer(r, dim, ring)
    rhs = partial_supertrace(prod, range(2, r + 1)).scale(r)
    return (lhs - rhs).normalize().is_zero()


def classical_berezinian(Z: MatrixSeries) -> Series:
    """det(A - B D^{-1} C) det(D)^{-1} for supercommutative entries."""
    m, n = Z.dim
    N = m + n
    ring, order = Z.ring, Z.order
    if n == 0:
        return _det_sum(lambda i, j: Z.entries[i][j], m, 0, 0, order, ring, transpose=True)
    Dm = Z.submatrix(range(m, N))
    Dinv = Dm.invert()
    if m == 0:
        return _det_sum(lambda i, j: Dm.entries[i][j], n, 0, 0, order, ring, transpose=True).inverse()
    schur = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = Z.entries[i][j]
            for a in range(n):
                for b in range(n):
                    acc = acc - Z.entries[i][m + a] * Dinv.entries[a][b] * Z.entries[m + b][j]
            row.append(acc)
        schur.append(row)
    detA = _det_sum(lambda i, j: schur[i][j], m, 0, 0, order, ring, transpose=True)
    detD = _det_sum(lambda i, j: Dm.entries[i][j], n, 0, 0, order, ring, transpose=True)
    return (detA * detD.inverse()).normalize()
