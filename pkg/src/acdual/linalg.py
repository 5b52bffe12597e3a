"""Sparse exact linear maps, exact rank, inversion and Smith normal form."""

from __future__ import annotations

from fractions import Fraction

from .rings import specialize


class LinMap:
    """A matrix stored column-wise: ``cols[j]`` maps row index -> nonzero scalar.

    Columns are indexed by the source basis and rows by the target basis, so
    ``A @ B`` is the composite "first B, then A".
    """

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]

    @classmethod
    def zero(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{j: 1} for j in range(n)])

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets):
        m = cls(nrows, ncols)
        for i, j, v in triplets:
            m.add_entry(i, j, v)
        return m

    @classmethod
    def from_dense(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.cols[j][i] = v
        return m

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def add_entry(self, i, j, v):
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry ({i}, {j}) outside {self.shape}")
        col = self.cols[j]
        w = col.get(i, 0) + v
        if w:
            col[i] = w
        else:
            col.pop(i, None)

    def get(self, i, j):
        return self.cols[j].get(i, 0)

    def entries(self):
        """Nonzero entries as (row, col, value), sorted by (col, row)."""
        for j, col in enumerate(self.cols):
            for i in sorted(col):
                yield i, j, col[i]

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for j, c in vec.items():
            for i, a in self.cols[j].items():
                v = out.get(i, 0) + a * c
                if v:
                    out[i] = v
                else:
                    out.pop(i, None)
        return out

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} after {other.shape}")
        return LinMap(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        cols = []
        for a, b in zip(self.cols, other.cols):
            out = dict(a)
            for i, v in b.items():
                w = out.get(i, 0) + sign * v
                if w:
                    out[i] = w
                else:
                    out.pop(i, None)
            cols.append(out)
        return LinMap(self.nrows, self.ncols, cols)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return LinMap(self.nrows, self.ncols, [{i: -v for i, v in c.items()} for c in self.cols])

    def scale(self, c):
        if not c:
            return LinMap.zero(self.nrows, self.ncols)
        return LinMap(self.nrows, self.ncols, [{i: v * c for i, v in col.items()} for col in self.cols])

    def transpose(self):
        t = LinMap(self.ncols, self.nrows)
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                t.cols[i][j] = v
        return t

    def is_zero(self):
        return not any(self.cols)

    def __eq__(self, other):
        return isinstance(other, LinMap) and self.shape == other.shape and self.cols == other.cols

    def map_entries(self, f):
        cols = []
        for col in self.cols:
            out = {}
            for i, v in col.items():
                w = f(v)
                if w:
                    out[i] = w
            cols.append(out)
        return LinMap(self.nrows, self.ncols, cols)

    def specialize(self, values):
        return self.map_entries(lambda v: specialize(v, values))

    def rows(self):
        rows = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries():
            out[i][j] = v
        return out

    def restrict(self, rows, cols):
        """Submatrix on the given row/column index lists (renumbered)."""
        rpos = {r: k for k, r in enumerate(rows)}
        out = LinMap(len(rows), len(cols))
        for k, j in enumerate(cols):
            out.cols[k] = {rpos[i]: v for i, v in self.cols[j].items() if i in rpos}
        return out

    def first_difference(self, other):
        """First (row, col) where two same-shaped maps differ, or None."""
        for j, (a, b) in enumerate(zip(self.cols, other.cols)):
            if a != b:
                for i in sorted(set(a) | set(b)):
                    if a.get(i, 0) != b.get(i, 0):
                        return i, j
        return None

    def __repr__(self):
        return f"LinMap({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# rank -----------------------------------------------------------------------


def rank(m: LinMap) -> int:
    """Exact rank over Q of a map with integer or rational entries."""
    return _rank_rows([{j: Fraction(v) for j, v in r.items()} for r in m.rows() if r])


def _rank_rows(rows) -> int:
    # incremental sparse echelon form; pivots normalised to 1
    pivots: dict[int, dict] = {}
    rows = sorted(rows, key=len)
    for row in rows:
        row = dict(row)
        while row:
            hit = None
            for c in row:
                if c in pivots:
                    hit = c
                    break
            if hit is None:
                break
            f = row[hit]
            for c, v in pivots[hit].items():
                w = row.get(c, 0) - f * v
                if w:
                    row[c] = w
                else:
                    row.pop(c, None)
        if row:
            c = min(row)
            inv = 1 / row[c]
            pivots[c] = {k: v * inv for k, v in row.items()}
    return len(pivots)


def rank_mod_p(m: LinMap, p: int = (1 << 61) - 1) -> int:
    """Rank over GF(p) of a map whose entries are p-integral rationals.

    This is a lower bound for the rank over Q.
    """
    rows = []
    for r in m.rows():
        if r:
            rows.append({j: _mod(v, p) for j, v in r.items() if _mod(v, p)})
    pivots: dict[int, dict] = {}
    for row in sorted(rows, key=len):
        while row:
            hit = next((c for c in row if c in pivots), None)
            if hit is None:
                break
            f = row[hit]
            for c, v in pivots[hit].items():
                w = (row.get(c, 0) - f * v) % p
                if w:
                    row[c] = w
                else:
                    row.pop(c, None)
        if row:
            c = min(row)
            inv = pow(row[c], -1, p)
            pivots[c] = {k: v * inv % p for k, v in row.items()}
    return len(pivots)


def _mod(v, p):
    v = Fraction(v)
    return v.numerator * pow(v.denominator, -1, p) % p


def inverse(m: LinMap) -> LinMap | None:
    """Exact inverse over Q by Gauss-Jordan; None if singular."""
    n = m.nrows
    if m.ncols != n:
        raise ValueError("inverse of a non-square map")
    rows = [{j: Fraction(v) for j, v in r.items()} for r in m.rows()]
    aug = [dict() for _ in range(n)]
    for i in range(n):
        aug[i][i] = Fraction(1)
    pivot_row_of: dict[int, int] = {}
    used = set()
    for col in range(n):
        best = None
        for i in range(n):
            if i not in used and rows[i].get(col):
                if best is None or len(rows[i]) < len(rows[best]):
                    best = i
        if best is None:
            return None
        used.add(best)
        pivot_row_of[col] = best
        inv = 1 / rows[best][col]
        rows[best] = {k: v * inv for k, v in rows[best].items()}
        aug[best] = {k: v * inv for k, v in aug[best].items()}
        for i in range(n):
            if i != best and col in rows[i]:
                f = rows[i][col]
                for src, dst in ((rows[best], rows[i]), (aug[best], aug[i])):
                    for k, v in src.items():
                        w = dst.get(k, 0) - f * v
                        if w:
                            dst[k] = w
                        else:
                            dst.pop(k, None)
    out = LinMap(n, n)
    for col, r in pivot_row_of.items():
        # row r of aug is row `col` of the inverse
        for k, v in aug[r].items():
            out.add_entry(col, k, _demote(v))
    return out


def _demote(v: Fraction):
    return v.numerator if v.denominator == 1 else v


# Smith normal form ------------------------------------------------------------


def smith_normal_form(a, transforms: bool = False, limit: int = 500):
    """Smith normal form of an integer matrix (list of rows).

    Returns the list of nonzero invariant factors d_1 | d_2 | ...; with
    ``transforms=True`` returns ``(factors, U, V)`` where U*A*V is diagonal and
    U, V are unimodular.  Pivot choice is the entry of least absolute value.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m > limit or n > limit:
        raise ValueError(f"matrix {m}x{n} exceeds the dense Smith form limit {limit}")
    A = [list(map(int, row)) for row in a]
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst -= f * row src
        rs, rd = A[src], A[dst]
        for k in range(n):
            if rs[k]:
                rd[k] -= f * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] -= f * us[k]

    def add_col(dst, src, f):  # col dst -= f * col src
        for row in A:
            if row[src]:
                row[dst] -= f * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= f * row[src]

    factors = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    if A[t][j]:
                        dirty = True
            if not dirty:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, -1)
                dirty = True
            # move the smallest nonzero entry of row/col t to the pivot
            best = (abs(A[t][t]), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        factors.append(A[t][t])
        t += 1
    if transforms:
        return factors, U, V
    return factors


def int_det(a) -> int:
    """Determinant of a small square integer matrix by fraction-free elimination."""
    n = len(a)
    M = [list(map(int, r)) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1
