"""Exact integer linear algebra: sparse matrices and Smith normal form.

Two independent routes compute invariant factors.  ``sparse_divisors`` does
pivoted elimination on a dict-of-rows matrix and never tracks transforms; it
is what homology uses on large nerve boundaries.  ``smith_form`` is a dense
reduction that also returns the unimodular transforms, needed whenever
homology classes have to be named (induced maps on homology).
"""

from __future__ import annotations

from math import gcd

DENSE_COLUMN_LIMIT = 200


class IntMatrix:
    """Sparse integer matrix stored column-wise as ``{row: value}`` dicts.

    Entries are Python ints, so nothing ever overflows.
    """

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        self.cols: list[dict[int, int]] = cols

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, rows):
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, ncols, cols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def to_dense(self):
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def rows(self):
        """Row-wise copy as a list of ``{col: value}`` dicts."""
        out = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def column(self, j):
        return self.cols[j]

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        """Multiply by a sparse column vector."""
        out: dict[int, int] = {}
        for j, a in vec.items():
            for i, v in self.cols[j].items():
                s = out.get(i, 0) + a * v
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, v in b.items():
                s = c.get(i, 0) + sign * v
                if s:
                    c[i] = s
                else:
                    c.pop(i, None)
            cols.append(c)
        return IntMatrix(self.nrows, self.ncols, cols)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return IntMatrix(self.nrows, self.ncols,
                         [{i: -v for i, v in c.items()} for c in self.cols])

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and all(a == b for a, b in zip(self.cols, other.cols))

    __hash__ = None

    def is_zero(self):
        return not any(self.cols)

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def block(top_left, top_right, bottom_left, bottom_right):
    """Assemble a 2x2 block matrix; blocks must have compatible shapes."""
    r0, r1 = top_left.nrows, bottom_left.nrows
    c0, c1 = top_left.ncols, top_right.ncols
    assert top_right.nrows == r0 and bottom_right.nrows == r1
    assert bottom_left.ncols == c0 and bottom_right.ncols == c1
    cols = []
    for j in range(c0):
        c = dict(top_left.cols[j])
        c.update({r0 + i: v for i, v in bottom_left.cols[j].items()})
        cols.append(c)
    for j in range(c1):
        c = dict(top_right.cols[j])
        c.update({r0 + i: v for i, v in bottom_right.cols[j].items()})
        cols.append(c)
    return IntMatrix(r0 + r1, c0 + c1, cols)


def invariant_factors(diagonal) -> list[int]:
    """Turn any list of nonzero diagonal entries into a divisibility chain.

    Units are dropped from the torsion part but still counted by the caller
    toward the rank.
    """
    d = sorted(abs(x) for x in diagonal if abs(x) > 1)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return [x for x in d if x > 1]


def sparse_divisors(m: IntMatrix) -> list[int]:
    """Absolute values of the diagonal reached by sparse pivoted elimination.

    The list has one entry per unit of rank; feed it to ``invariant_factors``
    for the canonical torsion chain.  Pivots are chosen by minimal absolute
    value, preferring units, with ties broken by scan order.
    """
    rows: dict[int, dict[int, int]] = {}
    colidx: dict[int, set[int]] = {}
    for j, col in enumerate(m.cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
            colidx.setdefault(j, set()).add(i)

    def set_entry(i, j, v):
        if v:
            rows[i][j] = v
            colidx.setdefault(j, set()).add(i)
        else:
            rows[i].pop(j, None)
            s = colidx.get(j)
            if s is not None:
                s.discard(i)
                if not s:
                    del colidx[j]

    def find_pivot():
        best = None
        for i, row in rows.items():
            for j, v in row.items():
                a = abs(v)
                if a == 1:
                    return i, j
                if best is None or a < best[0]:
                    best = (a, i, j)
        return None if best is None else best[1:]

    diag = []
    while True:
        # drop emptied rows so the pivot scan stays proportional to nnz
        for i in [i for i, r in rows.items() if not r]:
            del rows[i]
        piv = find_pivot()
        if piv is None:
            break
        r, c = piv
        while True:
            p = rows[r][c]
            # clear column c with row operations
            for i in sorted(colidx[c] - {r}):
                q = rows[i][c] // p
                if q:
                    for j, v in list(rows[r].items()):
                        set_entry(i, j, rows[i].get(j, 0) - q * v)
            rest = [i for i in colidx[c] if i != r]
            if rest:
                i = min(rest, key=lambda i: (abs(rows[i][c]), i))
                r = i
                continue
            # column c now only meets row r; column ops touch row r alone
            for j in list(rows[r]):
                if j == c:
                    continue
                q = rows[r][j] // p
                if q:
                    set_entry(r, j, rows[r][j] - q * p)
            rest = [j for j in rows[r] if j != c]
            if rest:
                c = min(rest, key=lambda j: (abs(rows[r][j]), j))
                continue
            break
        diag.append(abs(rows[r][c]))
        set_entry(r, c, 0)
        del rows[r]
    return diag


def smith_form(a):
    """Dense Smith normal form with transforms.

    ``a`` is an IntMatrix or a list of rows.  Returns ``(d, U, Uinv, V, Vinv)``
    where ``d`` is the list of nonzero diagonal entries (positive, each
    dividing the next) and ``U @ a @ V`` is diagonal with ``d`` in its
    leading positions.  All matrices are dense lists of rows.
    """
    A = a.to_dense() if isinstance(a, IntMatrix) else [list(r) for r in a]
    m = len(A)
    n = len(A[0]) if m else (a.ncols if isinstance(a, IntMatrix) else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i, j, c):  # row_i += c row_j
        if not c:
            return
        A[i] = [x + c * y for x, y in zip(A[i], A[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
        for row in Ui:  # Ui <- Ui E^-1: col_j -= c col_i
            row[j] -= c * row[i]

    def row_swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def col_add(i, j, c):  # col_i += c col_j
        if not c:
            return
        for row in A:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]
        Vi[j] = [x - c * y for x, y in zip(Vi[j], Vi[i])]

    def col_swap(i, j):
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    d = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // p))
                    dirty = dirty or bool(A[i][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // p))
                    dirty = dirty or bool(A[t][j])
            if dirty:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, t)
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), t, j)
                row_swap(t, best[1])
                col_swap(t, best[2])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            row_neg(t)
        d.append(A[t][t])
        t += 1
    return d, U, Ui, V, Vi


def divisors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal of some diagonal form of ``m`` (one entry per rank unit).

    Dense reduction below ``DENSE_COLUMN_LIMIT`` columns, sparse elimination
    above it.
    """
    if m.nrows == 0 or m.ncols == 0 or m.is_zero():
        return []
    if m.ncols < DENSE_COLUMN_LIMIT:
        return smith_form(m)[0]
    return sparse_divisors(m)


def rank(m: IntMatrix) -> int:
    return len(divisors(m))


def matmul_dense(a, b):
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]
