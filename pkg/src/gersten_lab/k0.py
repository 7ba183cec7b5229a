"""Finitely generated modules over a DVR, short exact sequences and K_0 bookkeeping.

A module is the cokernel of its presentation matrix (generators x
relations).  Over a DVR, K_0 of all finitely generated modules is Z via the
free rank, and K_0 of finite length modules is Z via the length; both
identifications are certified here by explicit short exact sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gersten_lab.errors import NotExact, NotTorsion, UnitElement, ZeroElement
from gersten_lab.matrix import Matrix
from gersten_lab.snf import kernel_basis, smith_normal_form, solve


@dataclass(frozen=True)
class FLModule:
    presentation: Matrix
    exponents: tuple[int, ...]
    free_rank: int

    @property
    def ring(self):
        return self.presentation.domain

    @property
    def generators(self) -> int:
        return self.presentation.rows

    @property
    def is_torsion(self) -> bool:
        return self.free_rank == 0

    @property
    def length(self) -> int:
        """Length of the torsion part (sum of the invariant factor exponents)."""
        return sum(self.exponents)


def classify_module(presentation: Matrix) -> FLModule:
    snf = smith_normal_form(presentation)
    exps = tuple(e for e in snf.exponents if e > 0)
    return FLModule(presentation, exps, presentation.rows - snf.rank)


def module(ring, rows, cols: int | None = None) -> FLModule:
    """Shorthand: classify the presentation given as nested lists."""
    return classify_module(Matrix.from_rows(ring, rows, cols))


def cyclic(ring, a: int) -> FLModule:
    """R / g^a."""
    return classify_module(Matrix.from_rows(ring, [[ring.g_power(a)]]))


def free(ring, r: int) -> FLModule:
    return classify_module(Matrix.zeros(ring, r, 0))


def k0_class(m: FLModule) -> int:
    return m.free_rank


def _in_span(span: Matrix, vectors: Matrix) -> bool:
    if vectors.cols == 0:
        return True
    if span.cols == 0:
        return vectors.is_zero()
    return solve(span, vectors) is not None


@dataclass(frozen=True)
class SESWitness:
    """0 -> A --alpha--> B --beta--> C -> 0 with maps given on generators."""

    A: FLModule
    B: FLModule
    C: FLModule
    alpha: Matrix
    beta: Matrix
    certificate: dict = field(default_factory=dict, compare=False)

    def certify(self) -> dict:
        A, B, C, al, be = self.A, self.B, self.C, self.alpha, self.beta
        ring = B.ring
        RA, RB, RC = A.presentation, B.presentation, C.presentation
        cert = {}
        cert["alpha_well_defined"] = _in_span(RB, al @ RA)
        cert["beta_well_defined"] = _in_span(RC, be @ RB)
        cert["composite_zero"] = _in_span(RC, be @ al)
        cert["beta_surjective"] = _in_span(Matrix.hstack(be, RC), Matrix.identity(ring, C.generators))
        # alpha x in im R_B  =>  x in im R_A
        pair = Matrix.hstack(al, RB)
        k = kernel_basis(pair) if pair.cols else Matrix.zeros(ring, 0, 0)
        xs = k.submatrix(0, A.generators, 0, k.cols)
        cert["alpha_injective"] = _in_span(RA, xs)
        # beta z in im R_C  =>  z in im alpha + im R_B
        pair = Matrix.hstack(be, RC)
        k = kernel_basis(pair) if pair.cols else Matrix.zeros(ring, 0, 0)
        zs = k.submatrix(0, B.generators, 0, k.cols)
        cert["exact_in_middle"] = _in_span(Matrix.hstack(al, RB), zs)
        return cert

    def is_exact(self) -> bool:
        return all(self.certify().values())

    def check(self) -> "SESWitness":
        cert = self.certify()
        bad = [k for k, v in cert.items() if not v]
        if bad:
            raise NotExact("short exact sequence fails: " + ", ".join(bad))
        return SESWitness(self.A, self.B, self.C, self.alpha, self.beta, cert)

    def k0_additive(self) -> bool:
        return k0_class(self.B) == k0_class(self.A) + k0_class(self.C)

    def length_additive(self) -> bool:
        return self.B.length == self.A.length + self.C.length


def direct_sum_ses(A: FLModule, C: FLModule) -> SESWitness:
    """0 -> A -> A + C -> C -> 0 with the block inclusion and projection."""
    ring = A.ring
    a, c = A.generators, C.generators
    RA, RC = A.presentation, C.presentation
    RB = Matrix.block([
        [RA, Matrix.zeros(ring, a, RC.cols)],
        [Matrix.zeros(ring, c, RA.cols), RC],
    ]) if (a + c) else Matrix.zeros(ring, 0, 0)
    B = classify_module(RB)
    alpha = Matrix.vstack(Matrix.identity(ring, a), Matrix.zeros(ring, c, a)) if a + c else Matrix.zeros(ring, 0, a)
    beta = Matrix.hstack(Matrix.zeros(ring, c, a), Matrix.identity(ring, c)) if c else Matrix.zeros(ring, 0, a + c)
    return SESWitness(A, B, C, alpha, beta).check()


def telescope_witness(ring, f) -> SESWitness:
    """0 -> R --f--> R -> R/(f) -> 0."""
    f = ring.coerce(f) if hasattr(ring, "coerce") else f
    if not f:
        raise ZeroElement("f = 0")
    if ring.is_unit(f):
        raise UnitElement(f"{ring.format(f)} is a unit")
    R = free(ring, 1)
    Rf = classify_module(Matrix.from_rows(ring, [[f]]))
    return SESWitness(R, R, Rf, Matrix.from_rows(ring, [[f]]), Matrix.identity(ring, 1)).check()


def cyclic_step(ring, a: int) -> SESWitness:
    """0 -> R/g --g^(a-1)--> R/g^a -> R/g^(a-1) -> 0, for a >= 2."""
    return SESWitness(
        cyclic(ring, 1), cyclic(ring, a), cyclic(ring, a - 1),
        Matrix.from_rows(ring, [[ring.g_power(a - 1)]]), Matrix.identity(ring, 1),
    ).check()


@dataclass(frozen=True)
class Decomposition:
    """[M] = sum_i [R/g^a_i] = (sum_i a_i) [R/g], each step certified."""

    module: FLModule
    exponents: tuple[int, ...]
    chains: tuple[tuple[SESWitness, ...], ...]
    U: Matrix
    V: Matrix

    @property
    def multiple(self) -> int:
        return sum(self.exponents)

    def formal_sum(self) -> dict[str, int]:
        return {"R/g": self.multiple}

    def is_valid(self) -> bool:
        for a, chain in zip(self.exponents, self.chains):
            if len(chain) != a - 1:
                return False
            if not all(s.is_exact() and s.length_additive() for s in chain):
                return False
        return True


def generator_decompose(m: FLModule) -> Decomposition:
    if not m.is_torsion:
        raise NotTorsion(f"module has free rank {m.free_rank}")
    ring = m.ring
    snf = smith_normal_form(m.presentation)
    chains = tuple(tuple(cyclic_step(ring, k) for k in range(a, 1, -1)) for a in m.exponents)
    return Decomposition(m, m.exponents, chains, snf.U, snf.V)
