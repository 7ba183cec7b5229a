import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gersten_lab import category as C
from gersten_lab.chain import ChainComplex, ChainMap, is_quasi_iso
from gersten_lab.errors import (
    BlockNotInvertible,
    NotAComplexPair,
    NotAMorphismOfC,
    NotInC,
    NotInjective,
    RankMismatch,
    ResidueNotExact,
    ShapeMismatch,
)
from gersten_lab.matrix import Matrix, is_invertible, mat_invert
from gersten_lab.random_gen import (
    planted_two_term,
    random_c_iso,
    random_c_morphism,
    random_upper_iso,
)
from gersten_lab.rings import make_ring

Z5 = make_ring("Z@5")


def M(rows, ring=Z5):
    return Matrix.from_rows(ring, rows)


def mor(x, y, nn, nm, mn, mm):
    R = x.ring

    def blk(rows, r, c):
        return Matrix.from_rows(R, rows, c) if r and c else Matrix.zeros(R, r, c)

    return C.CMorphism(x, y, blk(nn, y.n, x.n), blk(nm, y.n, x.m), blk(mn, y.m, x.n), blk(mm, y.m, x.m))


X11 = C.CObject(1, 1, Z5)
ONES = mor(X11, X11, [[1]], [[1]], [[1]], [[1]])


def test_identity_laws(ring, rng):
    for _ in range(10):
        x, y = C.CObject(rng.randint(0, 3), rng.randint(0, 3), ring), C.CObject(rng.randint(0, 3), rng.randint(0, 3), ring)
        phi = random_c_morphism(ring, rng, x, y)
        assert C.compose(C.c_identity(y), phi) == phi == C.compose(phi, C.c_identity(x))


def test_composition_top_left():
    assert C.compose(ONES, ONES).nn == M([[6]])


def test_to_chain_map_formula():
    f = C.to_chain_map(ONES)
    assert f.comp(1) == M([[1, 1], [5, 1]])
    assert f.comp(0) == M([[1, 5], [1, 1]])
    assert f.is_chain_map()


def test_from_chain_map_roundtrip(ring, rng):
    for _ in range(100):
        x = C.CObject(rng.randint(0, 3), rng.randint(0, 3), ring)
        y = C.CObject(rng.randint(0, 3), rng.randint(0, 3), ring)
        phi = random_c_morphism(ring, rng, x, y)
        assert C.from_chain_map(C.to_chain_map(phi), x, y) == phi
    x = C.CObject(2, 1, ring)
    assert C.from_chain_map(C.to_chain_map(C.c_identity(x)), x, x) == C.c_identity(x)


def test_from_chain_map_rejects_non_chain_map():
    cx = X11.complex
    f = ChainMap(cx, cx, {1: M([[1, 0], [1, 1]]), 0: M([[1, 0], [0, 1]])})
    with pytest.raises(NotAMorphismOfC):
        C.from_chain_map(f, X11, X11)


def test_composition_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        C.compose(ONES, C.c_identity(C.CObject(2, 0, Z5)))


def test_triangularity_flags():
    e = C.c_identity(X11)
    assert C.is_upper_triangular(e) and C.is_lower_triangular(e)
    low = mor(X11, X11, [[1]], [[0]], [[1]], [[1]])
    assert C.is_lower_triangular(low) and not C.is_upper_triangular(low)
    assert not C.is_upper_triangular(ONES) and not C.is_lower_triangular(ONES)


def test_upside_down_examples(ring, rng):
    assert C.ud_obj(C.CObject(2, 1, Z5)) == C.CObject(1, 2, Z5)
    x = C.CObject(2, 1, ring)
    assert C.ud_mor(C.c_identity(x)) == C.c_identity(C.ud_obj(x))
    for _ in range(30):
        a, b, c = (C.CObject(rng.randint(0, 3), rng.randint(0, 3), ring) for _ in range(3))
        phi, psi = random_c_morphism(ring, rng, a, b), random_c_morphism(ring, rng, b, c)
        assert C.ud_mor(C.ud_mor(phi)) == phi
        assert C.ud_mor(C.compose(psi, phi)) == C.compose(C.ud_mor(psi), C.ud_mor(phi))


def test_upside_down_matches_inverse_boundary(rng):
    """UD on complexes: [x1 -d-> x0] becomes [x0 -g d^-1-> x1]; the block swap is that functor."""
    for _ in range(20):
        x = C.CObject(rng.randint(0, 3), rng.randint(0, 3), Z5)
        y = C.CObject(rng.randint(0, 3), rng.randint(0, 3), Z5)
        phi = random_c_morphism(Z5, rng, x, y)
        f = C.to_chain_map(phi)
        u = C.to_chain_map(C.ud_mor(phi))
        # UD sends (phi_1, phi_0) to (phi_0, phi_1) read in the swapped bases
        def swap(obj):
            R = obj.ring
            p = Matrix(R, obj.size, obj.size, [[R.one if j == (i + obj.n) % obj.size else R.zero
                                                for j in range(obj.size)] for i in range(obj.size)])
            return p
        px, py = swap(x), swap(y)
        assert u.comp(1) == py @ f.comp(0) @ mat_invert(px)
        assert u.comp(0) == py @ f.comp(1) @ mat_invert(px)


def test_ut_examples():
    assert C.ut(C.c_identity(X11)) == C.c_identity(X11)
    phi = mor(X11, X11, [[1]], [[0]], [[1]], [[1]])
    assert C.ut(phi) == mor(X11, X11, [[1]], [[0]], [[-1]], [[1]])
    t = C.compose(phi, C.ut(phi))
    assert C.is_upper_triangular(t)
    assert t.nn == M([[1]])


def test_ut_requires_invertible_block():
    phi = mor(X11, X11, [[1]], [[1]], [[1]], [[5]])
    with pytest.raises(BlockNotInvertible):
        C.ut(phi)


@given(st.integers(0, 2**32))
def test_triangulation_property(seed):
    rng = random.Random(seed)
    x = C.CObject(rng.randint(0, 3), rng.randint(1, 3), Z5)
    phi = random_c_iso(Z5, rng, x)
    t = C.compose(phi, C.ut(phi))
    assert C.is_upper_triangular(t)
    assert t == C.triangulated_form(phi)
    up = random_upper_iso(Z5, rng, x)
    assert C.ut(up) == C.c_identity(x)
    ok, inv = C.is_isomorphism(phi)
    assert ok and is_invertible(phi.nn) and is_invertible(phi.mm)
    assert C.compose(inv, phi) == C.c_identity(x) == C.compose(phi, inv)


def test_is_isomorphism_examples():
    ok, inv = C.is_isomorphism(C.c_identity(X11))
    assert ok and inv == C.c_identity(X11)
    x10 = C.CObject(1, 0, Z5)
    five = mor(x10, x10, [[5]], [], [], [])
    assert C.is_isomorphism(five) == (False, None)


def test_quasi_iso_iff_iso(rng):
    for _ in range(60):
        n = rng.randint(1, 3)
        x = C.CObject(n, 0, Z5)
        a = Matrix(Z5, n, n, [[Z5.coerce(rng.choice([0, 1, 2, 5, 10, 3])) for _ in range(n)] for _ in range(n)])
        phi = C.CMorphism(x, x, a, Matrix.zeros(Z5, n, 0), Matrix.zeros(Z5, 0, n), Matrix.zeros(Z5, 0, 0))
        assert is_quasi_iso(C.to_chain_map(phi)) == C.is_isomorphism(phi)[0]


def test_h0():
    assert C.h0_obj(C.CObject(3, 2, Z5)) == 3
    assert C.h0_mor(C.c_identity(C.CObject(2, 1, Z5))) == Matrix.identity(Z5.residue_field, 2)


def test_h0_functorial(rng):
    for _ in range(40):
        a, b, c = (C.CObject(rng.randint(0, 3), rng.randint(0, 3), Z5) for _ in range(3))
        phi, psi = random_c_morphism(Z5, rng, a, b), random_c_morphism(Z5, rng, b, c)
        assert C.h0_mor(C.compose(psi, phi)) == C.h0_mor(psi) @ C.h0_mor(phi)


def test_classify_standard():
    c = C.classify(X11.complex)
    assert c.obj == X11
    assert c.w1 == Matrix.identity(Z5, 2) and c.w0 == Matrix.identity(Z5, 2)


def test_classify_row_swap():
    x = ChainComplex(Z5, {1: 2, 0: 2}, {1: M([[0, 1], [5, 0]])})
    c = C.classify(x)
    assert c.obj == X11 and c.verify(x)
    assert c.w0 == M([[0, 1], [1, 0]]) and c.w1 == Matrix.identity(Z5, 2)


def test_classify_errors():
    with pytest.raises(NotInC):
        C.classify(ChainComplex(Z5, {1: 1, 0: 1}, {1: M([[25]])}))
    with pytest.raises(NotInjective):
        C.classify(ChainComplex(Z5, {1: 1, 0: 1}, {}))
    with pytest.raises(RankMismatch):
        C.classify(ChainComplex(Z5, {1: 1, 0: 2}, {1: M([[1], [0]])}))
    with pytest.raises(NotInC):
        C.classify(ChainComplex(Z5, {2: 1, 1: 1}, {2: M([[5]])}))


def test_classify_planted(ring, rng):
    for _ in range(30):
        n, m = rng.randint(0, 3), rng.randint(0, 3)
        x = planted_two_term(ring, rng, n, m)
        c = C.classify(x)
        assert (c.obj.n, c.obj.m) == (n, m)
        assert c.verify(x)
        w = c.witness(x)
        assert w.comp(0) @ x.d(1) @ mat_invert(w.comp(1)) == c.obj.boundary


def test_split_exactness_examples():
    x1, x2 = C.CObject(1, 0, Z5), C.CObject(2, 0, Z5)
    alpha = mor(x1, x2, [[1], [0]], [[], []], [], [])
    beta = mor(x2, x1, [[0, 1]], [[]], [], [])
    w = C.split_exactness(alpha, beta)
    assert w.gamma.nn == M([[0], [1]])
    alpha = mor(x1, x2, [[1], [5]], [[], []], [], [])
    beta = mor(x2, x1, [[-5, 1]], [[]], [], [])
    w = C.split_exactness(alpha, beta)
    assert C.compose(beta, w.gamma) == C.c_identity(x1)
    assert C.compose(w.rho, alpha) == C.c_identity(x1)
    assert w.gamma.nn == M([[0], [1]])


def test_split_exactness_errors():
    x1, x2 = C.CObject(1, 0, Z5), C.CObject(2, 0, Z5)
    alpha = mor(x1, x2, [[1], [1]], [[], []], [], [])
    beta = mor(x2, x1, [[0, 1]], [[]], [], [])
    with pytest.raises(NotAComplexPair):
        C.split_exactness(alpha, beta)
    alpha = mor(x1, x2, [[5], [0]], [[], []], [], [])
    with pytest.raises(ResidueNotExact):
        C.split_exactness(alpha, beta)


def test_section_of_h0():
    assert C.section_of_h0(0, Z5).h0_rank() == 0
    assert C.section_of_h0(0, Z5).resolution().size == 0
    s = C.section_of_h0(2, Z5)
    assert s.h0_rank() == 2 and C.h0_obj(s.resolution()) == 2
