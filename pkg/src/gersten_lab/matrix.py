"""Immutable dense matrices over a DVR or its residue field.

Entries are stored row-major as a tuple of row tuples.  Zero-row and
zero-column matrices are legal everywhere.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gersten_lab.errors import DimensionMismatch, NotInRing, NotInvertible


class Matrix:
    __slots__ = ("domain", "rows", "cols", "entries", "_hash")

    def __init__(self, domain, rows: int, cols: int, entries: Iterable[Sequence] | None = None):
        self.domain = domain
        self.rows = rows
        self.cols = cols
        if entries is None:
            z = domain.zero
            self.entries = tuple((z,) * cols for _ in range(rows))
        else:
            ents = tuple(tuple(r) for r in entries)
            if len(ents) != rows or any(len(r) != cols for r in ents):
                raise DimensionMismatch(f"entries do not form a {rows}x{cols} matrix")
            self.entries = ents
        self._hash = None

    # construction
    @classmethod
    def from_rows(cls, domain, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [[domain.coerce(x) for x in r] for r in rows]
        ncols = len(rows[0]) if rows else (cols or 0)
        return cls(domain, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, domain, rows: int, cols: int) -> "Matrix":
        return cls(domain, rows, cols)

    @classmethod
    def identity(cls, domain, n: int) -> "Matrix":
        z, o = domain.zero, domain.one
        return cls(domain, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, domain, n: int, c) -> "Matrix":
        z = domain.zero
        return cls(domain, n, n, [[c if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, domain, values: Sequence) -> "Matrix":
        n = len(values)
        z = domain.zero
        return cls(domain, n, n, [[values[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block row/column must agree in size."""
        if not grid:
            raise DimensionMismatch("empty block grid")
        domain = grid[0][0].domain
        heights = [row[0].rows for row in grid]
        widths = [b.cols for b in grid[0]]
        out = []
        for r, row in enumerate(grid):
            if len(row) != len(widths):
                raise DimensionMismatch("ragged block grid")
            for c, b in enumerate(row):
                if b.rows != heights[r] or b.cols != widths[c]:
                    raise DimensionMismatch(
                        f"block ({r},{c}) is {b.rows}x{b.cols}, expected {heights[r]}x{widths[c]}"
                    )
            for i in range(heights[r]):
                line = []
                for b in row:
                    line.extend(b.entries[i])
                out.append(line)
        return cls(domain, sum(heights), sum(widths), out)

    @classmethod
    def hstack(cls, *mats: "Matrix") -> "Matrix":
        return cls.block([list(mats)])

    @classmethod
    def vstack(cls, *mats: "Matrix") -> "Matrix":
        return cls.block([[m] for m in mats])

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix(self.domain, r1 - r0, c1 - c0, [row[c0:c1] for row in self.entries[r0:r1]])

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.domain, self.cols, self.rows, list(zip(*self.entries)) if self.rows else [() for _ in range(self.cols)])

    # arithmetic
    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        c = self.domain.canon
        return Matrix(
            self.domain, self.rows, self.cols,
            [[c(a + b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        c = self.domain.canon
        return Matrix(
            self.domain, self.rows, self.cols,
            [[c(a - b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
        )

    def __neg__(self) -> "Matrix":
        c = self.domain.canon
        return Matrix(self.domain, self.rows, self.cols, [[c(-a) for a in r] for r in self.entries])

    def scale(self, k) -> "Matrix":
        c = self.domain.canon
        return Matrix(self.domain, self.rows, self.cols, [[c(k * a) for a in r] for r in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)

    def map(self, fn, domain=None) -> "Matrix":
        domain = domain or self.domain
        return Matrix(domain, self.rows, self.cols, [[fn(x) for x in r] for r in self.entries])

    def residue(self) -> "Matrix":
        """Entrywise image in the residue field."""
        ring = self.domain
        return self.map(ring.residue, ring.residue_field)

    def lift(self, ring) -> "Matrix":
        """Canonical entrywise lift from the residue field to ``ring``."""
        return self.map(ring.lift, ring)

    def divide_by(self, c) -> "Matrix":
        """Exact entrywise division; raises NotInRing when an entry is not divisible."""
        ring = self.domain
        return self.map(lambda x: ring.divide(x, c))

    def __repr__(self):
        fmt = self.domain.format
        body = "; ".join(", ".join(fmt(x) for x in r) for r in self.entries)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    dom = a.domain
    canon = dom.canon
    zero = dom.zero
    cols = list(zip(*b.entries)) if b.rows else [()] * b.cols
    out = []
    for r in a.entries:
        nz = [(k, x) for k, x in enumerate(r) if x]
        line = []
        for col in cols:
            s = zero
            for k, x in nz:
                y = col[k]
                if y:
                    s = s + x * y
            line.append(canon(s))
        out.append(line)
    return Matrix(dom, a.rows, b.cols, out)


def _pivot(dom, m, col: int, start: int):
    """Row index of a minimum-valuation non-zero entry in column ``col``."""
    best = None
    for r in range(start, len(m)):
        x = m[r][col]
        if x:
            key = dom.pivot_key(x)
            if best is None or key < best[0]:
                best = (key, r)
                if key == 0:
                    break
    return best


def mat_det(a: Matrix):
    """Exact determinant by fraction-field elimination."""
    if a.rows != a.cols:
        raise DimensionMismatch("determinant of a non-square matrix")
    dom = a.domain
    canon = dom.canon
    m = [list(r) for r in a.entries]
    n = a.rows
    det = dom.one
    for col in range(n):
        best = _pivot(dom, m, col, col)
        if best is None:
            return dom.zero
        r = best[1]
        if r != col:
            m[col], m[r] = m[r], m[col]
            det = canon(-det)
        piv = m[col][col]
        det = canon(det * piv)
        for rr in range(col + 1, n):
            x = m[rr][col]
            if x:
                f = dom.div(x, piv)
                m[rr] = [canon(y - f * z) for y, z in zip(m[rr], m[col])]
    return det


def mat_invert(a: Matrix) -> Matrix:
    """Exact inverse over the matrix's own domain (unit determinant over a DVR)."""
    if a.rows != a.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    dom = a.domain
    canon = dom.canon
    n = a.rows
    m = [list(r) for r in a.entries]
    inv = [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        best = _pivot(dom, m, col, col)
        if best is None or best[0] != 0:
            raise NotInvertible(f"determinant {dom.format(mat_det(a))} is not a unit")
        r = best[1]
        m[col], m[r] = m[r], m[col]
        inv[col], inv[r] = inv[r], inv[col]
        pinv = dom.inverse(m[col][col])
        m[col] = [canon(z * pinv) for z in m[col]]
        inv[col] = [canon(z * pinv) for z in inv[col]]
        for rr in range(n):
            if rr != col:
                f = m[rr][col]
                if f:
                    m[rr] = [canon(y - f * z) for y, z in zip(m[rr], m[col])]
                    inv[rr] = [canon(y - f * z) for y, z in zip(inv[rr], inv[col])]
    return Matrix(dom, n, n, inv)


def is_invertible(a: Matrix) -> bool:
    if a.rows != a.cols:
        return False
    det = mat_det(a)
    if a.domain.is_field:
        return bool(det)
    return a.domain.is_unit(det)


def field_rank(a: Matrix) -> int:
    """Rank over the field of fractions (over the residue field for residue matrices)."""
    dom = a.domain
    m = [list(r) for r in a.entries]
    rank = 0
    rows = a.rows
    for col in range(a.cols):
        piv = None
        for r in range(rank, rows):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, rows):
            x = m[r][col]
            if x:
                f = dom.div(x, p)
                m[r] = [dom.canon(y - f * z) for y, z in zip(m[r], m[rank])]
        rank += 1
    return rank


def field_right_inverse(a: Matrix) -> Matrix:
    """X with a @ X = identity, for a surjective matrix over a field."""
    dom = a.domain
    if not dom.is_field:
        raise NotInvertible("right inverses are only computed over fields")
    r, c = a.rows, a.cols
    # row reduce [a | I]
    m = [list(a.entries[i]) + [dom.one if i == j else dom.zero for j in range(r)] for i in range(r)]
    pivots = []
    rank = 0
    for col in range(c):
        piv = next((i for i in range(rank, r) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pinv = dom.inverse(m[rank][col])
        m[rank] = [dom.canon(x * pinv) for x in m[rank]]
        for i in range(r):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [dom.canon(x - f * y) for x, y in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    if rank < r:
        raise NotInvertible("matrix is not surjective")
    # rows of m: (reduced a | E) with reduced a = E a; pick X with pivot rows of E
    x = [[dom.zero] * r for _ in range(c)]
    for i, col in enumerate(pivots):
        x[col] = m[i][c:]
    return Matrix(dom, c, r, x)


def require_in_ring(a: Matrix) -> Matrix:
    ring = a.domain
    for r in a.entries:
        for x in r:
            if not ring.contains(x):
                raise NotInRing(f"entry {ring.format(x)} is not in {ring}")
    return a
