"""Exact linear algebra over the rationals.

Dense routines (lists of Fraction lists) cover the small fixed-size jobs:
action matrices, orbit ranks, nilpotent exponentials.  The sparse solver
handles the larger feasibility systems from the invariant computations,
where rows are dicts keyed by column index.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Optional

Vector = List[Fraction]
Matrix = List[List[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return [sum((row[j] * v[j] for j in range(len(v)) if v[j]), Fraction(0))
            for row in a]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for p in range(k):
            c = ai[p]
            if c == 0:
                continue
            bp = b[p]
            for j in range(m):
                if bp[j]:
                    oi[j] += c * bp[j]
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: Fraction) -> Matrix:
    return [[x * c for x in row] for row in a]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(matrix: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form with the pivot column list."""
    a = [list(row) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(matrix: Matrix) -> int:
    if not matrix:
        return 0
    return len(rref(matrix)[1])


def nullspace(matrix: Matrix) -> List[Vector]:
    """Basis of the right kernel, one vector per free column."""
    if not matrix:
        return []
    cols = len(matrix[0])
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    basis: List[Vector] = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][free]
        basis.append(v)
    return basis


def solve_dense(a: Matrix, b: Sequence[Fraction]) -> Optional[Vector]:
    """Any solution of a x = b, or None when inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [list(a[i]) + [Fraction(b[i])] for i in range(rows)]
    reduced, pivots = rref(aug)
    for row in reduced:
        if all(x == 0 for x in row[:cols]) and row[cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        if pc == cols:
            return None
        x[pc] = reduced[r][cols]
    return x


def nilpotent_exp(a: Matrix, s: Fraction) -> Matrix:
    """Exact exp(s a) for nilpotent a (finite sum; error if it never dies)."""
    n = len(a)
    out = identity(n)
    term = identity(n)
    k = 0
    while True:
        term = mat_scale(mat_mul(term, a), Fraction(s, k + 1))
        k += 1
        if is_zero_matrix(term):
            return out
        out = mat_add(out, term)
        if k > n:
            raise ValueError("matrix is not nilpotent")


class SparseSystem:
    """Incremental exact solver for a sparse affine system.

    Rows are dicts {column: coefficient} with a rational right-hand side.
    Feasibility is tracked as rows arrive; ``solution()`` returns one
    solution with free variables set to zero, or None when inconsistent.
    """

    def __init__(self):
        # pivot column -> (normalized row dict, rhs)
        self.echelon: Dict[int, Tuple[Dict[int, Fraction], Fraction]] = {}
        self.inconsistent = False

    def add_row(self, row: Dict[int, Fraction], rhs: Fraction) -> None:
        if self.inconsistent:
            return
        row = {c: v for c, v in row.items() if v != 0}
        rhs = Fraction(rhs)
        while row:
            col = min(row)
            hit = self.echelon.get(col)
            if hit is None:
                inv = 1 / row[col]
                norm = {c: v * inv for c, v in row.items()}
                self.echelon[col] = (norm, rhs * inv)
                return
            factor = row[col]
            prow, prhs = hit
            for c, v in prow.items():
                nv = row.get(c, Fraction(0)) - factor * v
                if nv == 0:
                    row.pop(c, None)
                else:
                    row[c] = nv
            rhs -= factor * prhs
        if rhs != 0:
            self.inconsistent = True

    def solution(self) -> Optional[Dict[int, Fraction]]:
        if self.inconsistent:
            return None
        values: Dict[int, Fraction] = {}
        for col in sorted(self.echelon, reverse=True):
            row, rhs = self.echelon[col]
            acc = rhs
            for c, v in row.items():
                if c != col:
                    acc -= v * values.get(c, Fraction(0))
            values[col] = acc
        return values

    def feasible(self) -> bool:
        return not self.inconsistent
