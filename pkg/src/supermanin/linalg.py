"""Sparse exact row reduction over the rationals.

Vectors are dicts ``column -> mpq`` with integer columns.  A row's pivot is
its smallest column.  Reduction of a vector eliminates pivot columns in
increasing order; since each row only has columns at or after its pivot the
process terminates and the result has no pivot columns, which makes it a
canonical representative of the coset modulo the row space.
"""
from __future__ import annotations

import heapq
from typing import Dict, Iterable, List, Optional

from .core import ONE, Rational

Vector = Dict[int, Rational]


class Echelon:
    __slots__ = ("rows",)

    def __init__(self):
        self.rows: Dict[int, Vector] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def reduce(self, vec: Vector) -> Vector:
        v = {c: x for c, x in vec.items() if x}
        rows = self.rows
        heap = [c for c in v if c in rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            x = v.get(c)
            if not x:
                continue
            row = rows[c]
            for col, y in row.items():
                nv = v.get(col, 0) - x * y
                if nv:
                    if col not in v and col in rows:
                        heapq.heappush(heap, col)
                    v[col] = nv
                else:
                    v.pop(col, None)
        return v

    def add(self, vec: Vector) -> bool:
        """Insert ``vec`` into the row space; return True if the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = ONE / v[p]
        self.rows[p] = {c: x * inv for c, x in v.items()}
        return True

    def extend(self, vecs: Iterable[Vector]) -> int:
        return sum(1 for v in vecs if self.add(v))

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)


def rank(vectors: Iterable[Vector]) -> int:
    e = Echelon()
    return e.extend(vectors)


def independent_subset(vectors: List[Vector]) -> List[int]:
    """Indices of a maximal linearly independent subset, greedy in order."""
    e = Echelon()
    return [i for i, v in enumerate(vectors) if e.add(v)]


def solve_square(mat: List[List[Rational]], rhs: List[Rational]) -> Optional[List[Rational]]:
    """Solve ``mat x = rhs`` exactly; None when the matrix is singular."""
    n = len(mat)
    a = [list(row) + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = ONE / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def inverse(mat: List[List[Rational]]) -> Optional[List[List[Rational]]]:
    n = len(mat)
    cols = []
    for j in range(n):
        e = [ONE if i == j else Rational(0) for i in range(n)]
        x = solve_square(mat, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]
