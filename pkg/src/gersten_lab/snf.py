"""Smith normal form over a DVR and the linear algebra built on it."""

from __future__ import annotations

from dataclasses import dataclass

from gersten_lab.matrix import Matrix


@dataclass(frozen=True)
class SNFResult:
    """M = U @ D @ V with D = diag(g^a_1, ..., g^a_r, 0, ...), a_1 <= ... <= a_r."""

    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    exponents: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.exponents)


def smith_normal_form(m: Matrix) -> SNFResult:
    ring = m.domain
    canon = ring.canon
    r, c = m.rows, m.cols
    one, zero = ring.one, ring.zero
    a = [list(row) for row in m.entries]
    U = [[one if i == j else zero for j in range(r)] for i in range(r)]
    Ui = [row[:] for row in U]
    V = [[one if i == j else zero for j in range(c)] for i in range(c)]
    Vi = [row[:] for row in V]
    exps: list[int] = []

    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x:
                    v = ring.valuation(x)
                    if best is None or v < best[0]:
                        best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            Ui[t], Ui[pi] = Ui[pi], Ui[t]
            for row in U:
                row[t], row[pi] = row[pi], row[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            for row in Vi:
                row[t], row[pj] = row[pj], row[t]
            V[t], V[pj] = V[pj], V[t]
        unit = ring.unit_part(a[t][t])
        if unit != one:
            s = 1 / unit
            a[t] = [canon(x * s) for x in a[t]]
            Ui[t] = [canon(x * s) for x in Ui[t]]
            for row in U:
                row[t] = canon(row[t] * unit)
        piv = a[t][t]
        for i in range(t + 1, r):
            x = a[i][t]
            if x:
                f = x / piv
                a[i] = [canon(y - f * z) for y, z in zip(a[i], a[t])]
                Ui[i] = [canon(y - f * z) for y, z in zip(Ui[i], Ui[t])]
                for row in U:
                    row[t] = canon(row[t] + f * row[i])
        for j in range(t + 1, c):
            x = a[t][j]
            if x:
                f = x / piv
                for row in a:
                    row[j] = canon(row[j] - f * row[t])
                for row in Vi:
                    row[j] = canon(row[j] - f * row[t])
                V[t] = [canon(y + f * z) for y, z in zip(V[t], V[j])]
        exps.append(v)

    d = [[zero] * c for _ in range(r)]
    for i, e in enumerate(exps):
        d[i][i] = ring.g_power(e)
    return SNFResult(
        U=Matrix(ring, r, r, U),
        D=Matrix(ring, r, c, d),
        V=Matrix(ring, c, c, V),
        U_inv=Matrix(ring, r, r, Ui),
        V_inv=Matrix(ring, c, c, Vi),
        exponents=tuple(exps),
    )


def rank(m: Matrix) -> int:
    return smith_normal_form(m).rank


def kernel_basis(m: Matrix, snf: SNFResult | None = None) -> Matrix:
    """Columns form a basis of {x : m x = 0} over the ring (a direct summand)."""
    snf = snf or smith_normal_form(m)
    return snf.V_inv.submatrix(0, m.cols, snf.rank, m.cols)


def solve(m: Matrix, rhs: Matrix, snf: SNFResult | None = None) -> Matrix | None:
    """Some X over the ring with m @ X = rhs, or None when no such X exists."""
    ring = m.domain
    snf = snf or smith_normal_form(m)
    w = snf.U_inv @ rhs
    y = [[ring.zero] * rhs.cols for _ in range(m.cols)]
    for i in range(m.rows):
        for j in range(rhs.cols):
            x = w.entries[i][j]
            if i < snf.rank:
                e = snf.exponents[i]
                if x and ring.valuation(x) < e:
                    return None
                y[i][j] = x / ring.g_power(e) if x else ring.zero
            elif x:
                return None
    return snf.V_inv @ Matrix(ring, m.cols, rhs.cols, y)


def column_span_contains(span: Matrix, vectors: Matrix) -> bool:
    return solve(span, vectors) is not None
