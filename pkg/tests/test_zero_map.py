import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gersten_lab import category as C
from gersten_lab import zero_map as Z
from gersten_lab.errors import NotTriangular, ObjectsNotEqual, PreconditionViolated
from gersten_lab.matrix import Matrix
from gersten_lab.random_gen import (
    random_c_morphism,
    random_iso_chain,
    random_triangular,
)
from gersten_lab.rings import make_ring

Z5 = make_ring("Z@5")
X11 = C.CObject(1, 1, Z5)


def one(v):
    return Matrix.from_rows(Z5, [[v]])


def test_mu_on_identity():
    e = C.c_identity(X11)
    assert Z.mu1(e).comp(1) == one(1) and Z.mu1(e).comp(0) == one(1)
    assert Z.mu2(e).comp(1) == one(1) and Z.mu2(e).comp(0) == one(1)
    assert Z.s1s2_equality_check(e)
    # the two targets differ as complexes even though the degreewise data agree
    assert Z.mu1(e).target != Z.mu2(e).target
    assert Z.mu1(e).target.d(1) == one(5) and Z.mu2(e).target.d(1) == one(1)


def test_mu_functorial_on_triangular(ring, rng):
    for kind in ("upper", "lower"):
        for _ in range(20):
            a, b, c = (C.CObject(rng.randint(0, 3), rng.randint(0, 3), ring) for _ in range(3))
            phi = random_triangular(ring, rng, a, b, kind=kind)
            psi = random_triangular(ring, rng, b, c, kind=kind)
            comp = C.compose(psi, phi)
            assert Z.mu1(comp) == Z.mu1(psi) @ Z.mu1(phi)
            assert Z.mu2(comp) == Z.mu2(psi) @ Z.mu2(phi)
            assert Z.mu1(phi).is_chain_map() and Z.mu2(phi).is_chain_map()


def test_mu_not_functorial_in_general():
    ones = C.CMorphism(X11, X11, one(1), one(1), one(1), one(1))
    assert Z.mu1(C.compose(ones, ones)).comp(1) == one(6)
    assert (Z.mu1(ones) @ Z.mu1(ones)).comp(1) == one(1)


def test_delta_shapes():
    d = Z.delta(C.CObject(2, 0, Z5))
    assert d.comp(1) == Matrix.identity(Z5, 2)
    d = Z.delta(C.CObject(0, 2, Z5))
    assert d.target.ranks.get(1, 0) == 0 and d.comp(1).shape == (0, 2)
    d = Z.delta(X11)
    assert d.comp(0) == Matrix.from_rows(Z5, [[1, 0]]) and d.is_chain_map()


def test_delta_equivalence(ring):
    for n in range(3):
        for m in range(3):
            assert Z.delta_equivalence(C.CObject(n, m, ring)).is_valid()


def test_delta_naturality_identity():
    sq = Z.delta_naturality(C.c_identity(X11))
    assert sq.homotopy is None or sq.difference().comp(1).is_zero()
    assert sq.is_valid()


def test_delta_naturality_upper_example():
    phi = C.CMorphism(X11, X11, one(1), one(1), Matrix.zeros(Z5, 1, 1), one(1))
    sq = Z.delta_naturality(phi)
    assert sq.homotopy is not None and sq.is_valid()
    assert sq.homotopy.h[0] == Matrix.from_rows(Z5, [[0, -1]])
    assert sq.difference().comp(1) == Matrix.from_rows(Z5, [[0, -1]])
    assert sq.difference().comp(0) == Matrix.from_rows(Z5, [[0, -5]])


def test_delta_naturality_rejects_full():
    ones = C.CMorphism(X11, X11, one(1), one(1), one(1), one(1))
    with pytest.raises(NotTriangular):
        Z.delta_naturality(ones)


@given(st.integers(0, 2**32))
def test_delta_difference_closed_form(seed):
    rng = random.Random(seed)
    a = C.CObject(rng.randint(0, 3), rng.randint(0, 3), Z5)
    b = C.CObject(rng.randint(0, 3), rng.randint(0, 3), Z5)
    phi = random_triangular(Z5, rng, a, b)
    sq = Z.delta_naturality(phi)
    assert sq.is_valid()
    diff = sq.difference()
    exp = Z.expected_delta_difference(phi)
    assert diff.comp(1) == exp[1] and diff.comp(0) == exp[0]


def test_rectify_identity_chain():
    e = C.c_identity(X11)
    ch = Z.IsoChain((X11, X11, X11), (e, e))
    r = Z.rectify(ch, 0)
    assert r.result == ch and r.alpha == e and r.gamma_is_natural()


def test_rectify_single_arrow():
    low = C.CMorphism(X11, X11, one(1), Matrix.zeros(Z5, 1, 1), one(1), one(1))
    ch = Z.IsoChain((X11, X11), (low,))
    assert ch.level() == 1
    r = Z.rectify(ch, 0)
    assert r.result.flags == (True,)
    assert r.result.level() == 0
    assert r.gamma_is_natural()
    assert r.alpha.mn == one(-1)


def test_rectify_random(ring, rng):
    for _ in range(20):
        x = C.CObject(rng.randint(0, 2), rng.randint(1, 2), ring)
        length = rng.randint(1, 4)
        k = rng.randrange(length)
        ch = random_iso_chain(ring, rng, x, length, k)
        assert ch.is_valid() and Z.in_smaller_class(ch, k + 1)
        r = Z.rectify(ch, k)
        assert r.result.is_valid() and r.gamma_is_natural()
        assert Z.in_smaller_class(r.result, k)
        # idempotent: a second pass changes nothing
        assert Z.rectify(r.result, k).result == r.result


def test_rectify_preconditions():
    e = C.c_identity(X11)
    low = C.CMorphism(X11, X11, one(1), Matrix.zeros(Z5, 1, 1), one(1), one(1))
    with pytest.raises(PreconditionViolated):
        Z.rectify(Z.IsoChain((X11, X11, X11), (e, low)), 0)
    with pytest.raises(PreconditionViolated):
        Z.rectify(Z.IsoChain((X11, X11), (e,)), 3)
    y = C.CObject(2, 0, Z5)
    swap = C.CMorphism(X11, y, Matrix.from_rows(Z5, [[1], [0]]), Matrix.from_rows(Z5, [[0], [1]]),
                       Matrix.zeros(Z5, 0, 1), Matrix.zeros(Z5, 0, 1))
    with pytest.raises(ObjectsNotEqual):
        Z.rectify(Z.IsoChain((X11, y), (swap,)), 0)


def test_rectify_morphism(rng):
    from gersten_lab.random_gen import random_chain_morphism
    for _ in range(10):
        x = C.CObject(rng.randint(0, 2), rng.randint(1, 2), Z5)
        ch = random_iso_chain(Z5, rng, x, 2, 0)
        theta = random_chain_morphism(Z5, rng, ch, 0)
        assert theta.is_valid()
        assert Z.rectify_morphism(theta, 0).is_valid()


def test_random_morphism_generator_sanity(rng):
    a, b = C.CObject(2, 1, Z5), C.CObject(1, 2, Z5)
    assert random_c_morphism(Z5, rng, a, b).source == a
