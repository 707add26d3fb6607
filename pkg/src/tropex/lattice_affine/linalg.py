"""Exact rational linear algebra on lists of Fractions.

Vectors are tuples of Fractions and matrices are lists of row tuples. The
routines here are small Gaussian eliminations; all dimensions in this
library are tiny, so clarity wins over speed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Vector = tuple
Matrix = list


def vec(values) -> tuple:
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u, v) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v) -> tuple:
    return tuple(c * a for a in v)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns:
        ``(reduced_rows, pivot_columns)`` where zero rows are dropped.
    """
    m = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of ``{x : row . x = 0 for every row}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int):
    """Solve ``A x = b``.

    Returns:
        ``(particular_solution, nullspace_basis)`` or ``None`` when the system
        is inconsistent.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not aug:
        return tuple([Fraction(0)] * ncols), nullspace([], ncols)
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x), nullspace([r[:ncols] for r in red], ncols)


def solve_unique(rows, rhs, ncols: int):
    """Unique solution of ``A x = b`` or ``None``."""
    res = solve(rows, rhs, ncols)
    if res is None or res[1]:
        return None
    return res[0]


def inverse(rows: Sequence[Sequence]) -> list:
    n = len(rows)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [tuple(r[n:]) for r in red]


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def matmul(a, b) -> list:
    bt = list(zip(*b))
    return [tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a]


def transpose(a) -> list:
    return [tuple(r) for r in zip(*a)]


def primitive(v: Sequence) -> tuple:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def independent_rows(rows):
    """A maximal linearly independent subset of rows, in order."""
    kept = []
    for r in rows:
        if rank(kept + [r]) > len(kept):
            kept.append(r)
    return kept
