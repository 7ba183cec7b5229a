"""Bounded chain complexes of finite free modules over a DVR.

Homological indexing: ``d(n)`` maps degree ``n`` to degree ``n - 1`` and is
stored as a ``rank(n-1) x rank(n)`` matrix.  Cones, the canonical maps
``iota`` and ``r``, C-homotopies and the star pasting law for homotopy
commutative squares live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from gersten_lab.errors import (
    BlockMismatch,
    NotAChainMap,
    NotAComplex,
    NotAHomotopy,
    ShapeMismatch,
)
from gersten_lab.matrix import Matrix
from gersten_lab.snf import smith_normal_form


class ChainComplex:
    __slots__ = ("ring", "_ranks", "_d", "_hash")

    def __init__(self, ring, ranks: Mapping[int, int], d: Mapping[int, Matrix] | None = None):
        self.ring = ring
        self._ranks = {int(n): int(r) for n, r in ranks.items() if r}
        if any(r < 0 for r in self._ranks.values()):
            raise ShapeMismatch("ranks must be non-negative")
        self._d = {}
        for n, m in (d or {}).items():
            n = int(n)
            if m.shape != (self.rank(n - 1), self.rank(n)):
                raise ShapeMismatch(
                    f"d_{n} has shape {m.shape}, expected {(self.rank(n - 1), self.rank(n))}"
                )
            if not m.is_zero():
                self._d[n] = m
        self._hash = None

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    def d(self, n: int) -> Matrix:
        m = self._d.get(n)
        if m is None:
            return Matrix.zeros(self.ring, self.rank(n - 1), self.rank(n))
        return m

    @property
    def ranks(self) -> dict[int, int]:
        return dict(self._ranks)

    @property
    def boundaries(self) -> dict[int, Matrix]:
        return dict(self._d)

    @property
    def lo(self) -> int:
        return min(self._ranks, default=0)

    @property
    def hi(self) -> int:
        return max(self._ranks, default=-1)

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def is_zero(self) -> bool:
        return not self._ranks

    def check(self) -> "ChainComplex":
        for n in range(self.lo + 1, self.hi + 1):
            if n - 1 in self._d and n in self._d and not (self._d[n - 1] @ self._d[n]).is_zero():
                raise NotAComplex(f"d_{n - 1} d_{n} != 0")
        return self

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.ring == other.ring and self._ranks == other._ranks and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self._ranks.items())), tuple(sorted(self._d.items(), key=lambda kv: kv[0]))))
        return self._hash

    def __repr__(self):
        return f"ChainComplex(ranks={dict(sorted(self._ranks.items()))})"


def make_complex(ring, ranks: Mapping[int, int], boundaries: Mapping[int, Matrix]) -> ChainComplex:
    """Validated complex; raises ShapeMismatch or NotAComplex."""
    return ChainComplex(ring, ranks, boundaries).check()


def _degree_span(*cs: ChainComplex) -> range:
    lo = min((c.lo for c in cs if not c.is_zero()), default=0)
    hi = max((c.hi for c in cs if not c.is_zero()), default=-1)
    return range(lo, hi + 1)


class ChainMap:
    """Degreewise matrices ``comp(n): source_n -> target_n``."""

    __slots__ = ("source", "target", "_c")

    def __init__(self, source: ChainComplex, target: ChainComplex, comps: Mapping[int, Matrix] | None = None):
        self.source = source
        self.target = target
        self._c = {}
        for n, m in (comps or {}).items():
            n = int(n)
            if m.shape != (target.rank(n), source.rank(n)):
                raise ShapeMismatch(
                    f"component {n} has shape {m.shape}, expected {(target.rank(n), source.rank(n))}"
                )
            if not m.is_zero():
                self._c[n] = m

    def comp(self, n: int) -> Matrix:
        m = self._c.get(n)
        if m is None:
            return Matrix.zeros(self.source.ring, self.target.rank(n), self.source.rank(n))
        return m

    @property
    def components(self) -> dict[int, Matrix]:
        return dict(self._c)

    def degrees(self) -> range:
        return _degree_span(self.source, self.target)

    def is_chain_map(self) -> bool:
        x, y = self.source, self.target
        for n in range(x.lo, x.hi + 1):
            if y.d(n) @ self.comp(n) != self.comp(n - 1) @ x.d(n):
                return False
        return True

    def check(self) -> "ChainMap":
        if not self.is_chain_map():
            raise NotAChainMap("map does not commute with the boundaries")
        return self

    def is_zero(self) -> bool:
        return not self._c

    def _same_ends(self, other: "ChainMap"):
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("chain maps have different endpoints")

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {n: self.comp(n) + other.comp(n) for n in self.degrees()})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._same_ends(other)
        return ChainMap(self.source, self.target, {n: self.comp(n) - other.comp(n) for n in self.degrees()})

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -m for n, m in self._c.items()})

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: m.scale(c) for n, m in self._c.items()})

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition ``self after other``."""
        if other.target != self.source:
            raise ShapeMismatch("chain maps are not composable")
        return ChainMap(
            other.source, self.target,
            {n: self.comp(n) @ other.comp(n) for n in other.source.degrees() if self.target.rank(n)},
        )

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items(), key=lambda kv: kv[0])))

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r}, {len(self._c)} non-zero components)"


def identity(x: ChainComplex) -> ChainMap:
    return ChainMap(x, x, {n: Matrix.identity(x.ring, x.rank(n)) for n in x.degrees()})


def zero_map(x: ChainComplex, y: ChainComplex) -> ChainMap:
    return ChainMap(x, y, {})


def compose(*maps: ChainMap) -> ChainMap:
    """compose(h, g, f) = h g f."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = m @ out
    return out


def _grid(ring, heights: Sequence[int], widths: Sequence[int], blocks: Mapping[tuple[int, int], Matrix]) -> Matrix:
    rows = []
    for i, h in enumerate(heights):
        rows.append([blocks.get((i, j)) or Matrix.zeros(ring, h, w) for j, w in enumerate(widths)])
    if not heights or not widths:
        return Matrix.zeros(ring, sum(heights), sum(widths))
    return Matrix.block(rows)


@lru_cache(maxsize=4096)
def direct_sum(*xs: ChainComplex) -> ChainComplex:
    ring = xs[0].ring
    span = _degree_span(*xs)
    ranks = {n: sum(x.rank(n) for x in xs) for n in span}
    d = {}
    for n in span:
        blocks = {(i, i): x.d(n) for i, x in enumerate(xs)}
        d[n] = _grid(ring, [x.rank(n - 1) for x in xs], [x.rank(n) for x in xs], blocks)
    return ChainComplex(ring, ranks, d)


def sum_map(
    sources: Sequence[ChainComplex],
    targets: Sequence[ChainComplex],
    grid: Sequence[Sequence[ChainMap | None]],
) -> ChainMap:
    """Block map from the direct sum of ``sources`` to that of ``targets``.

    ``grid[i][j]`` maps ``sources[j]`` to ``targets[i]``; ``None`` is zero.
    """
    ring = (sources or targets)[0].ring
    src = direct_sum(*sources)
    tgt = direct_sum(*targets)
    comps = {}
    for n in _degree_span(src, tgt):
        blocks = {}
        for i, row in enumerate(grid):
            for j, m in enumerate(row):
                if m is not None:
                    if m.source != sources[j] or m.target != targets[i]:
                        raise ShapeMismatch(f"block ({i},{j}) has the wrong endpoints")
                    blocks[(i, j)] = m.comp(n)
        comps[n] = _grid(ring, [t.rank(n) for t in targets], [s.rank(n) for s in sources], blocks)
    return ChainMap(src, tgt, comps)


# cones


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone(f)_n = x_{n-1} + y_n with boundary (-d^x_{n-1}, 0; -f_{n-1}, d^y_n)."""
    x, y = f.source, f.target
    ring = x.ring
    span = _degree_span(x, y)
    if len(span):
        span = range(span.start, span.stop + 1)
    ranks = {n: x.rank(n - 1) + y.rank(n) for n in span}
    d = {}
    for n in span:
        d[n] = _grid(
            ring,
            [x.rank(n - 2), y.rank(n - 1)],
            [x.rank(n - 1), y.rank(n)],
            {(0, 0): -x.d(n - 1), (1, 0): -f.comp(n - 1), (1, 1): y.d(n)},
        )
    return ChainComplex(ring, ranks, d)


@lru_cache(maxsize=4096)
def cone(x: ChainComplex) -> ChainComplex:
    """The cone of the identity: (Cx)_n = x_{n-1} + x_n."""
    return mapping_cone(identity(x))


@lru_cache(maxsize=4096)
def iota(x: ChainComplex) -> ChainMap:
    """iota_x: x -> Cx, componentwise (0; id)."""
    cx = cone(x)
    ring = x.ring
    return ChainMap(x, cx, {
        n: _grid(ring, [x.rank(n - 1), x.rank(n)], [x.rank(n)], {(1, 0): Matrix.identity(ring, x.rank(n))})
        for n in x.degrees()
    })


@lru_cache(maxsize=1024)
def r_map(x: ChainComplex) -> ChainMap:
    """r_x: CCx -> Cx, componentwise (0, id, id, 0; 0, 0, 0, id)."""
    cx = cone(x)
    ccx = cone(cx)
    ring = x.ring
    comps = {}
    for n in ccx.degrees():
        a, b, c = x.rank(n - 2), x.rank(n - 1), x.rank(n)
        # source blocks: x_{n-2}, x_{n-1} | x_{n-1}, x_n ; target blocks: x_{n-1}, x_n
        comps[n] = _grid(ring, [b, c], [a, b, b, c], {
            (0, 1): Matrix.identity(ring, b),
            (0, 2): Matrix.identity(ring, b),
            (1, 3): Matrix.identity(ring, c),
        })
    return ChainMap(ccx, cx, comps)


def cone_map(a: ChainMap) -> ChainMap:
    """C(a): Cx -> Cy, componentwise diag(a_{n-1}, a_n)."""
    x, y = a.source, a.target
    cx, cy = cone(x), cone(y)
    comps = {}
    for n in _degree_span(cx, cy):
        comps[n] = _grid(
            x.ring, [y.rank(n - 1), y.rank(n)], [x.rank(n - 1), x.rank(n)],
            {(0, 0): a.comp(n - 1), (1, 1): a.comp(n)},
        )
    return ChainMap(cx, cy, comps)


# homotopies


@dataclass(frozen=True, eq=False)
class ChainHomotopy:
    """h_n: x_n -> y_{n+1} with d h + h d = f - g."""

    f: ChainMap
    g: ChainMap
    h: Mapping[int, Matrix]

    def comp(self, n: int) -> Matrix:
        x, y = self.f.source, self.f.target
        m = self.h.get(n)
        if m is None:
            return Matrix.zeros(x.ring, y.rank(n + 1), x.rank(n))
        return m

    def is_valid(self) -> bool:
        x, y = self.f.source, self.f.target
        if self.g.source != x or self.g.target != y:
            return False
        for n, m in self.h.items():
            if m.shape != (y.rank(n + 1), x.rank(n)):
                return False
        for n in _degree_span(x, y):
            lhs = y.d(n + 1) @ self.comp(n) + self.comp(n - 1) @ x.d(n)
            if lhs != self.f.comp(n) - self.g.comp(n):
                return False
        return True

    def check(self) -> "ChainHomotopy":
        if not self.is_valid():
            raise NotAHomotopy("d h + h d != f - g")
        return self

    def __eq__(self, other):
        if not isinstance(other, ChainHomotopy):
            return NotImplemented
        span = _degree_span(self.f.source, self.f.target)
        return (
            self.f == other.f and self.g == other.g
            and all(self.comp(n) == other.comp(n) for n in range(span.start - 1, span.stop))
        )


@dataclass(frozen=True, eq=False)
class CHomotopy:
    """A chain map H: Cx -> y with H iota_x = f - g (a C-homotopy from f to g)."""

    H: ChainMap
    f: ChainMap
    g: ChainMap

    def is_valid(self) -> bool:
        x = self.f.source
        if self.H.source != cone(x) or self.H.target != self.f.target:
            return False
        return self.H.is_chain_map() and self.H @ iota(x) == self.f - self.g

    def check(self) -> "CHomotopy":
        if not self.is_valid():
            raise NotAHomotopy("H is not a C-homotopy from f to g")
        return self


def homotopy_to_H(h: ChainHomotopy) -> CHomotopy:
    """H_n = (-h_{n-1}, f_n - g_n)."""
    h.check()
    f, g = h.f, h.g
    x, y = f.source, f.target
    cx = cone(x)
    comps = {}
    for n in cx.degrees():
        comps[n] = Matrix.hstack(-h.comp(n - 1), f.comp(n) - g.comp(n))
    return CHomotopy(ChainMap(cx, y, comps), f, g)


def H_to_homotopy(c: CHomotopy) -> ChainHomotopy:
    """Read h_{n-1} off the first block of H_n."""
    f, g = c.f, c.g
    x = f.source
    if not c.H.is_chain_map():
        raise NotAChainMap("H is not a chain map Cx -> y")
    h = {}
    cx = cone(x)
    for n in cx.degrees():
        Hn = c.H.comp(n)
        split = x.rank(n - 1)
        first = Hn.submatrix(0, Hn.rows, 0, split)
        second = Hn.submatrix(0, Hn.rows, split, Hn.cols)
        if second != f.comp(n) - g.comp(n):
            raise BlockMismatch(f"second block of H_{n} is not f_{n} - g_{n}")
        if not first.is_zero():
            h[n - 1] = -first
    return ChainHomotopy(f, g, h)


@dataclass(frozen=True, eq=False)
class HSquare:
    """(a, b, H) from [f: x -> x'] to [g: y -> y'] with H iota_x = g a - b f."""

    f: ChainMap
    g: ChainMap
    a: ChainMap
    b: ChainMap
    H: ChainMap

    def is_valid(self) -> bool:
        f, g, a, b, H = self.f, self.g, self.a, self.b, self.H
        x = f.source
        if a.source != x or a.target != g.source or b.source != f.target or b.target != g.target:
            return False
        if H.source != cone(x) or H.target != g.target or not H.is_chain_map():
            return False
        return H @ iota(x) == g @ a - b @ f

    def check(self) -> "HSquare":
        if not self.is_valid():
            raise NotAHomotopy("H iota != g a - b f")
        return self


def star(H_prime: ChainMap, H: ChainMap, a: ChainMap, b_prime: ChainMap) -> ChainMap:
    """H' * H = b' H + H' C(a)."""
    if b_prime.source != H.target or H_prime.source != cone(a.target) or H.source != cone(a.source):
        raise ShapeMismatch("star: maps are not composable")
    return b_prime @ H + H_prime @ cone_map(a)


def compose_squares(second: HSquare, first: HSquare) -> HSquare:
    """(a', b', H')(a, b, H) = (a'a, b'b, H' * H)."""
    if first.g != second.f:
        raise ShapeMismatch("squares are not composable")
    return HSquare(
        first.f, second.g, second.a @ first.a, second.b @ first.b,
        star(second.H, first.H, first.a, second.b),
    )


# homology


def homology(x: ChainComplex) -> list[tuple[int, int, list[int]]]:
    """(degree, free rank, torsion exponents) for each degree of the support."""
    out = []
    snfs = {n: smith_normal_form(x.d(n)) for n in range(x.lo, x.hi + 2)}
    for n in x.degrees():
        rk_out = snfs[n].rank
        inc = snfs[n + 1]
        free = x.rank(n) - rk_out - inc.rank
        torsion = [e for e in inc.exponents if e > 0]
        out.append((n, free, torsion))
    return out


def is_acyclic(x: ChainComplex) -> bool:
    return all(free == 0 and not tors for _, free, tors in homology(x))


def is_quasi_iso(f: ChainMap) -> bool:
    """f induces isomorphisms on all homology iff its mapping cone is acyclic."""
    return is_acyclic(mapping_cone(f))
