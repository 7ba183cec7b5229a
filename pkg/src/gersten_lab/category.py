"""The category of standard two-term complexes (n, m)_B.

An object ``(n, m)`` is the complex ``B^{n+m} -> B^{n+m}`` with boundary
``diag(g E_n, E_m)`` in degrees 1 -> 0.  A morphism is stored as its four
blocks ``nn, nm, mn, mm``; the underlying chain map is

    phi_1 = (nn, nm; g mn, mm),   phi_0 = (nn, g nm; mn, mm).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from gersten_lab.chain import ChainComplex, ChainMap
from gersten_lab.errors import (
    BlockNotInvertible,
    NotAComplexPair,
    NotAMorphismOfC,
    NotInC,
    NotInjective,
    NotInvertible,
    RankMismatch,
    ResidueNotExact,
    ShapeMismatch,
)
from gersten_lab.matrix import (
    Matrix,
    field_rank,
    field_right_inverse,
    is_invertible,
    mat_invert,
)
from gersten_lab.snf import smith_normal_form


@dataclass(frozen=True)
class CObject:
    n: int
    m: int
    ring: object

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ShapeMismatch("(n, m) must be non-negative")

    @property
    def size(self) -> int:
        return self.n + self.m

    @cached_property
    def boundary(self) -> Matrix:
        ring = self.ring
        return Matrix.diag(ring, [ring.g] * self.n + [ring.one] * self.m)

    @cached_property
    def complex(self) -> ChainComplex:
        return ChainComplex(self.ring, {1: self.size, 0: self.size}, {1: self.boundary})

    def __repr__(self):
        return f"({self.n},{self.m})_{self.ring}"


@dataclass(frozen=True)
class CMorphism:
    source: CObject
    target: CObject
    nn: Matrix
    nm: Matrix
    mn: Matrix
    mm: Matrix

    def __post_init__(self):
        s, t = self.source, self.target
        expected = {
            "nn": (t.n, s.n), "nm": (t.n, s.m), "mn": (t.m, s.n), "mm": (t.m, s.m),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ShapeMismatch(f"block {name} has shape {getattr(self, name).shape}, expected {shape}")

    @property
    def ring(self):
        return self.source.ring

    @property
    def blocks(self) -> tuple[Matrix, Matrix, Matrix, Matrix]:
        return (self.nn, self.nm, self.mn, self.mm)

    def __matmul__(self, other: "CMorphism") -> "CMorphism":
        return compose(self, other)

    def __repr__(self):
        return f"CMorphism({self.source} -> {self.target}, nn={self.nn}, nm={self.nm}, mn={self.mn}, mm={self.mm})"


def standard_object(n: int, m: int, ring) -> CObject:
    return CObject(n, m, ring)


def c_identity(x: CObject) -> CMorphism:
    r = x.ring
    return CMorphism(
        x, x, Matrix.identity(r, x.n), Matrix.zeros(r, x.n, x.m),
        Matrix.zeros(r, x.m, x.n), Matrix.identity(r, x.m),
    )


def c_zero(x: CObject, y: CObject) -> CMorphism:
    r = x.ring
    return CMorphism(
        x, y, Matrix.zeros(r, y.n, x.n), Matrix.zeros(r, y.n, x.m),
        Matrix.zeros(r, y.m, x.n), Matrix.zeros(r, y.m, x.m),
    )


def compose(psi: CMorphism, phi: CMorphism) -> CMorphism:
    """psi after phi, computed blockwise (g enters the nn and mm corners)."""
    if phi.target != psi.source:
        raise ShapeMismatch(f"cannot compose {psi.source} <- {phi.target}")
    g = phi.ring.g
    nn = psi.nn @ phi.nn + (psi.nm @ phi.mn).scale(g)
    nm = psi.nn @ phi.nm + psi.nm @ phi.mm
    mn = psi.mn @ phi.nn + psi.mm @ phi.mn
    mm = (psi.mn @ phi.nm).scale(g) + psi.mm @ phi.mm
    return CMorphism(phi.source, psi.target, nn, nm, mn, mm)


def to_chain_map(phi: CMorphism) -> ChainMap:
    g = phi.ring.g
    one = Matrix.block([[phi.nn, phi.nm], [phi.mn.scale(g), phi.mm]])
    zero = Matrix.block([[phi.nn, phi.nm.scale(g)], [phi.mn, phi.mm]])
    return ChainMap(phi.source.complex, phi.target.complex, {1: one, 0: zero})


def from_chain_map(f: ChainMap, source: CObject, target: CObject) -> CMorphism:
    """Recover the blocks of a chain map between standard complexes."""
    ring = source.ring
    if f.source != source.complex or f.target != target.complex:
        raise NotAMorphismOfC("chain map endpoints are not the given standard complexes")
    n, m, n2, m2 = source.n, source.m, target.n, target.m
    f1, f0 = f.comp(1), f.comp(0)

    def blk(a, r0, r1, c0, c1):
        return a.submatrix(r0, r1, c0, c1)

    nn1, nn0 = blk(f1, 0, n2, 0, n), blk(f0, 0, n2, 0, n)
    nm1, gnm0 = blk(f1, 0, n2, n, n + m), blk(f0, 0, n2, n, n + m)
    gmn1, mn0 = blk(f1, n2, n2 + m2, 0, n), blk(f0, n2, n2 + m2, 0, n)
    mm1, mm0 = blk(f1, n2, n2 + m2, n, n + m), blk(f0, n2, n2 + m2, n, n + m)
    g = ring.g
    if nn1 != nn0 or mm1 != mm0 or nm1.scale(g) != gnm0 or mn0.scale(g) != gmn1:
        raise NotAMorphismOfC("components are not of the form (nn, nm; g mn, mm), (nn, g nm; mn, mm)")
    return CMorphism(source, target, nn1, nm1, mn0, mm1)


def is_upper_triangular(phi: CMorphism) -> bool:
    return phi.mn.is_zero()


def is_lower_triangular(phi: CMorphism) -> bool:
    return phi.nm.is_zero()


def ud_obj(x: CObject) -> CObject:
    return CObject(x.m, x.n, x.ring)


def ud_mor(phi: CMorphism) -> CMorphism:
    """Upside-down involution: swap the g-part and the unit part."""
    return CMorphism(ud_obj(phi.source), ud_obj(phi.target), phi.mm, phi.mn, phi.nm, phi.nn)


def ut(phi: CMorphism) -> CMorphism:
    """Upper triangulation (E_n, 0; -mm^{-1} mn, E_m); phi @ ut(phi) is upper triangular."""
    if phi.source != phi.target:
        raise ShapeMismatch("upper triangulation needs an endomorphism")
    x = phi.source
    r = x.ring
    try:
        mm_inv = mat_invert(phi.mm)
    except NotInvertible as exc:
        raise BlockNotInvertible("the (m,m) block is not invertible") from exc
    return CMorphism(
        x, x, Matrix.identity(r, x.n), Matrix.zeros(r, x.n, x.m),
        -(mm_inv @ phi.mn), Matrix.identity(r, x.m),
    )


def triangulated_form(phi: CMorphism) -> CMorphism:
    """The closed form of phi @ ut(phi): (nn - g nm mm^{-1} mn, nm; 0, mm)."""
    x = phi.source
    mm_inv = mat_invert(phi.mm)
    nn = phi.nn - (phi.nm @ mm_inv @ phi.mn).scale(x.ring.g)
    return CMorphism(x, x, nn, phi.nm, Matrix.zeros(x.ring, x.m, x.n), phi.mm)


def is_isomorphism(phi: CMorphism) -> tuple[bool, CMorphism | None]:
    """(True, inverse) when both chain components are invertible over B."""
    if phi.source.size != phi.target.size:
        return False, None
    f = to_chain_map(phi)
    if phi.source.size == 0:
        return True, c_identity(phi.source) if phi.source == phi.target else c_zero(phi.target, phi.source)
    try:
        inv1 = mat_invert(f.comp(1))
        inv0 = mat_invert(f.comp(0))
    except NotInvertible:
        return False, None
    inv = ChainMap(phi.target.complex, phi.source.complex, {1: inv1, 0: inv0})
    return True, from_chain_map(inv, phi.target, phi.source)


def h0_obj(x: CObject) -> int:
    """Rank over B/gB of the cokernel of diag(g E_n, E_m)."""
    return x.n


def h0_mor(phi: CMorphism) -> Matrix:
    return phi.nn.residue()


# classification


@dataclass(frozen=True)
class Classification:
    """x is isomorphic to (n, m)_B via the chain map (w1, w0)."""

    obj: CObject
    w1: Matrix
    w0: Matrix
    exponents: tuple[int, ...]

    def witness(self, x: ChainComplex) -> ChainMap:
        return ChainMap(x, self.obj.complex, {1: self.w1, 0: self.w0})

    def verify(self, x: ChainComplex) -> bool:
        """w0 d^x = std w1 with both components invertible."""
        return (
            self.obj.boundary @ self.w1 == self.w0 @ x.d(1)
            and is_invertible(self.w1) and is_invertible(self.w0)
        )


def classify(x: ChainComplex) -> Classification:
    ring = x.ring
    if any(n not in (0, 1) for n in x.ranks):
        raise NotInC("complex is not concentrated in degrees 1, 0")
    r1, r0 = x.rank(1), x.rank(0)
    if r1 != r0:
        raise RankMismatch(f"ranks {r1} != {r0}")
    d = x.d(1)
    snf = smith_normal_form(d)
    if snf.rank < r1:
        raise NotInjective("boundary has a kernel")
    if any(e >= 2 for e in snf.exponents):
        raise NotInC("H_0 is not annihilated by g")
    ones = [i for i, e in enumerate(snf.exponents) if e == 1]
    zeros = [i for i, e in enumerate(snf.exponents) if e == 0]
    order = ones + zeros  # standard form lists the g-part first
    perm = Matrix(ring, r0, r0, [[ring.one if j == order[i] else ring.zero for j in range(r0)] for i in range(r0)])
    w0 = perm @ snf.U_inv
    w1 = perm @ snf.V
    return Classification(CObject(len(ones), len(zeros), ring), w1, w0, snf.exponents)


# split exactness


@dataclass(frozen=True)
class SplitWitness:
    """gamma is a section of beta, rho a retraction of alpha, iso = (alpha | gamma)."""

    gamma: CMorphism
    rho: CMorphism
    iso: Matrix


def split_exactness(alpha: CMorphism, beta: CMorphism) -> SplitWitness:
    ring = alpha.ring
    for phi in (alpha, beta):
        if phi.source.m or phi.target.m:
            raise ShapeMismatch("split_exactness works on objects of the form (n, 0)")
    if alpha.target != beta.source:
        raise ShapeMismatch("alpha and beta are not composable")
    if not compose(beta, alpha).nn.is_zero():
        raise NotAComplexPair("beta alpha != 0")
    n, n1, n2 = alpha.source.n, alpha.target.n, beta.target.n
    a_bar, b_bar = h0_mor(alpha), h0_mor(beta)
    if field_rank(a_bar) != n or field_rank(b_bar) != n2 or n1 != n + n2:
        raise ResidueNotExact("the residue sequence is not short exact")
    if n2:
        gamma_bar = field_right_inverse(b_bar)
        gamma = gamma_bar.lift(ring)
        bg = beta.nn @ gamma
        gamma = gamma @ mat_invert(bg)
    else:
        gamma = Matrix.zeros(ring, n1, 0)
    iso = Matrix.hstack(alpha.nn, gamma) if n1 else Matrix.zeros(ring, 0, 0)
    iso_inv = mat_invert(iso)
    rho = iso_inv.submatrix(0, n, 0, n1)
    src, mid, tgt = alpha.source, alpha.target, beta.target

    def mk(a, b, blk):
        return CMorphism(a, b, blk, Matrix.zeros(ring, b.n, 0), Matrix.zeros(ring, 0, a.n), Matrix.zeros(ring, 0, 0))

    return SplitWitness(gamma=mk(tgt, mid, gamma), rho=mk(mid, src, rho), iso=iso)


# section of H_0


@dataclass(frozen=True)
class Section:
    """The complex [0 -> (B/gB)^r] with its module given by the presentation g E_r."""

    rank: int
    ring: object

    @property
    def presentation(self) -> Matrix:
        return Matrix.scalar(self.ring, self.rank, self.ring.g)

    def h0_rank(self) -> int:
        snf = smith_normal_form(self.presentation)
        return sum(1 for e in snf.exponents if e == 1)

    def resolution(self) -> CObject:
        """A free two-term replacement in the category: (r, 0)_B."""
        return CObject(self.rank, 0, self.ring)


def section_of_h0(rank: int, ring) -> Section:
    if rank < 0:
        raise ShapeMismatch("rank must be non-negative")
    return Section(rank, ring)
