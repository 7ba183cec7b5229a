"""Block extraction maps, the projection delta and rectification of iso chains.

``mu1`` and ``mu2`` keep only the ``nn`` block of a morphism and land in
complexes of the form (n, 0) and (0, n).  They are not functors, but they
are on triangular morphisms, which is what the checks below exercise.
"""

from __future__ import annotations

from dataclasses import dataclass

from gersten_lab.category import (
    CMorphism,
    CObject,
    c_identity,
    compose,
    is_isomorphism,
    is_lower_triangular,
    is_upper_triangular,
    to_chain_map,
    ut,
)
from gersten_lab.chain import ChainComplex, ChainHomotopy, ChainMap
from gersten_lab.errors import (
    NotTriangular,
    ObjectsNotEqual,
    PreconditionViolated,
    ShapeMismatch,
)
from gersten_lab.matrix import Matrix


def _unit_complex(n: int, ring) -> ChainComplex:
    """[B^n --E_n--> B^n] in degrees 1, 0."""
    return ChainComplex(ring, {1: n, 0: n}, {1: Matrix.identity(ring, n)})


def mu1(phi: CMorphism) -> ChainMap:
    ring = phi.ring
    src, tgt = CObject(phi.source.n, 0, ring), CObject(phi.target.n, 0, ring)
    return ChainMap(src.complex, tgt.complex, {1: phi.nn, 0: phi.nn})


def mu2(phi: CMorphism) -> ChainMap:
    ring = phi.ring
    src, tgt = _unit_complex(phi.source.n, ring), _unit_complex(phi.target.n, ring)
    return ChainMap(src, tgt, {1: phi.nn, 0: phi.nn})


def degreewise_data(f: ChainMap) -> tuple:
    """What survives after forgetting the boundaries: ranks and components in degrees 1, 0."""
    return tuple((f.source.rank(k), f.target.rank(k), f.comp(k)) for k in (1, 0))


def s1s2_equality_check(phi: CMorphism) -> bool:
    return degreewise_data(mu1(phi)) == degreewise_data(mu2(phi))


# the projection delta


def delta(x: CObject) -> ChainMap:
    """Projection (E_n 0) in both degrees from (n, m) onto (n, 0)."""
    ring = x.ring
    proj = Matrix.hstack(Matrix.identity(ring, x.n), Matrix.zeros(ring, x.n, x.m))
    return ChainMap(x.complex, CObject(x.n, 0, ring).complex, {1: proj, 0: proj})


def delta_inclusion(x: CObject) -> ChainMap:
    ring = x.ring
    inc = Matrix.vstack(Matrix.identity(ring, x.n), Matrix.zeros(ring, x.m, x.n))
    return ChainMap(CObject(x.n, 0, ring).complex, x.complex, {1: inc, 0: inc})


@dataclass(frozen=True)
class DeltaEquivalence:
    """delta with its homotopy inverse and the two homotopies."""

    proj: ChainMap
    incl: ChainMap
    left: ChainHomotopy  # proj incl - id, always zero
    right: ChainHomotopy  # id - incl proj

    def is_valid(self) -> bool:
        return (
            self.proj.is_chain_map() and self.incl.is_chain_map()
            and self.left.is_valid() and self.right.is_valid()
        )


def delta_equivalence(x: CObject) -> DeltaEquivalence:
    ring = x.ring
    p, i = delta(x), delta_inclusion(x)
    src = x.complex
    idx = ChainMap(src, src, {1: Matrix.identity(ring, x.size), 0: Matrix.identity(ring, x.size)})
    small = p.target
    id_small = ChainMap(small, small, {1: Matrix.identity(ring, x.n), 0: Matrix.identity(ring, x.n)})
    h = Matrix.diag(ring, [ring.zero] * x.n + [ring.one] * x.m)
    return DeltaEquivalence(
        proj=p,
        incl=i,
        left=ChainHomotopy(p @ i, id_small, {}),
        right=ChainHomotopy(idx, i @ p, {0: h}),
    )


@dataclass(frozen=True)
class DeltaSquare:
    """Compares mu1(phi) delta with delta phi; ``h`` is None when they agree strictly."""

    lhs: ChainMap
    rhs: ChainMap
    homotopy: ChainHomotopy | None

    def difference(self) -> ChainMap:
        return self.lhs - self.rhs

    def is_valid(self) -> bool:
        if self.homotopy is None:
            return self.lhs == self.rhs
        return self.homotopy.is_valid()


def delta_naturality(phi: CMorphism) -> DeltaSquare:
    lower, upper = is_lower_triangular(phi), is_upper_triangular(phi)
    if not (lower or upper):
        raise NotTriangular("morphism is neither upper nor lower triangular")
    lhs = mu1(phi) @ delta(phi.source)
    rhs = delta(phi.target) @ to_chain_map(phi)
    if lower:
        return DeltaSquare(lhs, rhs, None)
    ring = phi.ring
    h0 = Matrix.hstack(Matrix.zeros(ring, phi.target.n, phi.source.n), -phi.nm)
    return DeltaSquare(lhs, rhs, ChainHomotopy(lhs, rhs, {0: h0}))


def expected_delta_difference(phi: CMorphism) -> dict[int, Matrix]:
    """The closed form (0, -nm) in degree 1 and (0, -g nm) in degree 0."""
    ring = phi.ring
    z = Matrix.zeros(ring, phi.target.n, phi.source.n)
    return {1: Matrix.hstack(z, -phi.nm), 0: Matrix.hstack(z, -phi.nm.scale(ring.g))}


# iso chains and rectification


@dataclass(frozen=True)
class IsoChain:
    """x(0) -> x(1) -> ... -> x(n) with every arrow an isomorphism of standard objects."""

    objects: tuple[CObject, ...]
    arrows: tuple[CMorphism, ...]

    def __post_init__(self):
        if len(self.arrows) != len(self.objects) - 1:
            raise ShapeMismatch("a chain of length n needs n + 1 objects and n arrows")
        for i, a in enumerate(self.arrows):
            if a.source != self.objects[i] or a.target != self.objects[i + 1]:
                raise ShapeMismatch(f"arrow {i} has the wrong endpoints")

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def flags(self) -> tuple[bool, ...]:
        """Whether each arrow is an upper triangular isomorphism."""
        return tuple(is_upper_triangular(a) for a in self.arrows)

    def is_valid(self) -> bool:
        return all(is_isomorphism(a)[0] for a in self.arrows)

    def level(self) -> int:
        """Smallest k such that every arrow from index k on is upper triangular."""
        k = self.length
        while k > 0 and self.flags[k - 1]:
            k -= 1
        return k


@dataclass(frozen=True)
class ChainMorphism:
    """Componentwise maps theta(i): x(i) -> y(i) commuting with the arrows."""

    source: IsoChain
    target: IsoChain
    comps: tuple[CMorphism, ...]

    def is_valid(self) -> bool:
        x, y = self.source, self.target
        if len(self.comps) != len(x.objects) or len(y.objects) != len(x.objects):
            return False
        return all(
            compose(y.arrows[i], self.comps[i]) == compose(self.comps[i + 1], x.arrows[i])
            for i in range(x.length)
        )


@dataclass(frozen=True)
class Rectification:
    """q_k applied to a chain, with gamma^k: j_k q_k -> id and the (trivial) object transport."""

    k: int
    source: IsoChain
    result: IsoChain
    alpha: CMorphism
    alpha_inv: CMorphism
    gamma: tuple[CMorphism, ...]
    transport: tuple[CMorphism, ...]

    def gamma_is_natural(self) -> bool:
        x, q = self.source, self.result
        return all(
            compose(x.arrows[i], self.gamma[i]) == compose(self.gamma[i + 1], q.arrows[i])
            for i in range(x.length)
        )


def _check_rectifiable(chain: IsoChain, k: int):
    if not 0 <= k < chain.length:
        raise PreconditionViolated(f"k = {k} out of range for a chain of length {chain.length}")
    first = chain.objects[0]
    if any(o != first for o in chain.objects):
        raise ObjectsNotEqual("objects of the chain differ; classify them first")
    for i in range(k + 1, chain.length):
        if not is_upper_triangular(chain.arrows[i]):
            raise PreconditionViolated(f"arrow {i} is not upper triangular")


def rectify(chain: IsoChain, k: int) -> Rectification:
    _check_rectifiable(chain, k)
    arrows = list(chain.arrows)
    alpha = ut(arrows[k])
    ok, alpha_inv = is_isomorphism(alpha)
    assert ok
    if k > 0:
        arrows[k - 1] = compose(alpha_inv, arrows[k - 1])
    arrows[k] = compose(arrows[k], alpha)
    gamma = tuple(alpha if i == k else c_identity(o) for i, o in enumerate(chain.objects))
    transport = tuple(c_identity(o) for o in chain.objects)
    result = IsoChain(chain.objects, tuple(arrows))
    return Rectification(k, chain, result, alpha, alpha_inv, gamma, transport)


def rectify_morphism(theta: ChainMorphism, k: int) -> ChainMorphism:
    """q_k(theta): conjugate the k-th component by the two alphas."""
    rx, ry = rectify(theta.source, k), rectify(theta.target, k)
    comps = list(theta.comps)
    comps[k] = compose(ry.alpha_inv, compose(comps[k], rx.alpha))
    return ChainMorphism(rx.result, ry.result, tuple(comps))


def in_smaller_class(chain: IsoChain, k: int) -> bool:
    """Every arrow from index k on is upper triangular."""
    return all(chain.flags[k:])
