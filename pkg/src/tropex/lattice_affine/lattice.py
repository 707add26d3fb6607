"""Integer lattice algebra: Smith normal form, indices and saturation."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

from ..errors import RankDeficient
from .linalg import det, inverse, rank


class IntMatrix(tuple):
    """An immutable rectangular integer matrix stored as a tuple of row tuples."""

    def __new__(cls, rows, ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("matrix rows have different lengths")
        self = super().__new__(cls, rows)
        self._ncols = widths.pop() if widths else (ncols or 0)
        return self

    @property
    def nrows(self) -> int:
        return len(self)

    @property
    def ncols(self) -> int:
        return self._ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns, nrows: int) -> "IntMatrix":
        columns = [tuple(c) for c in columns]
        return cls([[c[i] for c in columns] for i in range(nrows)], ncols=len(columns))

    def columns(self) -> list:
        return [tuple(r[j] for r in self) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.columns(), ncols=self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        cols = other.columns()
        return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self],
                         ncols=other.ncols)


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for r in A:
        r[i], r[j] = r[j], r[i]


def _add_row(A, src, dst, q):
    """``row dst += q * row src``."""
    A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]


def _add_col(A, src, dst, q):
    for r in A:
        r[dst] += q * r[src]


def smith_normal_form(M) -> tuple:
    """Smith normal form ``U M V = D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with each invariant
    factor dividing the next. Every row operation on ``M`` is mirrored on
    ``U`` and every column operation on ``V``.

    Returns:
        ``(U, D, V)`` as :class:`IntMatrix` values.
    """
    M = M if isinstance(M, IntMatrix) else IntMatrix(M)
    m, n = M.nrows, M.ncols
    A = [list(r) for r in M]
    U = [list(r) for r in IntMatrix.identity(m)]
    V = [list(r) for r in IntMatrix.identity(n)]
    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            _swap_rows(A, t, i)
            _swap_rows(U, t, i)
            _swap_cols(A, t, j)
            _swap_cols(V, t, j)
            p = A[t][t]
            for i in range(t + 1, m):
                q = -(A[i][t] // p)
                if q:
                    _add_row(A, t, i, q)
                    _add_row(U, t, i, q)
            for j in range(t + 1, n):
                q = -(A[t][j] // p)
                if q:
                    _add_col(A, t, j, q)
                    _add_col(V, t, j, q)
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            # Pull a non-multiple into row t; the next pass lowers the pivot.
            _add_row(A, bad, t, 1)
            _add_row(U, bad, t, 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return IntMatrix(U, ncols=m), IntMatrix(A, ncols=n), IntMatrix(V, ncols=n)


def invariant_factors(M) -> list:
    """Nonzero diagonal entries of the Smith normal form."""
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(D.nrows, D.ncols)) if D[i][i] != 0]


def int_rank(M) -> int:
    M = M if isinstance(M, IntMatrix) else IntMatrix(M)
    return rank([tuple(Fraction(x) for x in r) for r in M], M.ncols) if M.nrows else 0


def lattice_index(M) -> int:
    """Index of the column lattice of a full column rank matrix.

    This is the gcd of all maximal minors, equivalently the index of the
    column lattice inside its saturation.

    Raises:
        RankDeficient: the columns are linearly dependent.
    """
    M = M if isinstance(M, IntMatrix) else IntMatrix(M)
    n = M.ncols
    if int_rank(M) < n:
        raise RankDeficient(f"rank {int_rank(M)} is less than the column count {n}")
    g = 0
    for rows in combinations(range(M.nrows), n):
        g = gcd(g, int(det([M[i] for i in rows])))
    return g


def is_saturated(M) -> bool:
    """Whether the column lattice equals its real span intersected with the integer lattice."""
    M = M if isinstance(M, IntMatrix) else IntMatrix(M)
    if M.ncols == 0 or M.nrows == 0:
        return True
    return all(d == 1 for d in invariant_factors(M))


def saturated_basis(vectors, dim: int) -> list:
    """A basis of the saturation of the lattice spanned by integer ``vectors``.

    The result spans ``span(vectors) ∩ Z^dim`` and has ``rank(vectors)``
    elements.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors]
    if not vectors:
        return []
    M = IntMatrix(vectors, ncols=dim)
    U, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(D.nrows, D.ncols)) if D[i][i] != 0)
    # Rows of M span the same rational space as the first r rows of V^{-1}.
    Vinv = inverse([tuple(Fraction(x) for x in row) for row in V])
    return [tuple(int(x) for x in Vinv[i]) for i in range(r)]


def integer_kernel(M) -> list:
    """A basis of the integer kernel ``{x in Z^n : M x = 0}``."""
    M = M if isinstance(M, IntMatrix) else IntMatrix(M)
    n = M.ncols
    if M.nrows == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    U, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(D.nrows, D.ncols)) if D[i][i] != 0)
    cols = V.columns()
    return [tuple(c) for c in cols[r:]]


def hermite_rows(vectors) -> list:
    """Row-style Hermite normal form of an integer lattice basis.

    The result is a canonical basis of the lattice spanned by ``vectors``:
    echelon form, positive pivots, entries above each pivot reduced into
    ``[0, pivot)``.
    """
    rows = [list(int(x) for x in v) for v in vectors]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        # Euclid on column c among rows r..end.
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[p] = rows[p], rows[r]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c] != 0:
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
            r += 1
            if r == len(rows):
                break
    return [tuple(row) for row in rows[:r] if any(row)]


def ext_gcd_solution(phi) -> tuple:
    """An integer vector ``y`` with ``phi . y = gcd(phi)``."""
    phi = [int(x) for x in phi]
    y = [0] * len(phi)
    g = 0
    for i, a in enumerate(phi):
        if a == 0:
            continue
        if g == 0:
            g = abs(a)
            y[i] = 1 if a > 0 else -1
            continue
        # Combine g (realized by y) with a.
        old_r, r = g, a
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r != 0:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        y = [old_s * v for v in y]
        y[i] = old_t
        g = old_r
    return tuple(y)
