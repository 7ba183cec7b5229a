import random

import pytest

from gersten_lab import category as C
from gersten_lab import chain as ch
from gersten_lab import hnat as hn
from gersten_lab import suites
from gersten_lab import zero_map as Z
from gersten_lab.errors import (
    CoherenceFailure,
    ComponentNotEquivalence,
    LevelIncompatible,
    NotAHomotopy,
    NotFree,
    ShapeMismatch,
)
from gersten_lab.matrix import Matrix
from gersten_lab.random_gen import random_coherent_hnat
from gersten_lab.rings import make_ring
from gersten_lab.simplicial import (
    all_monotone,
    break_level,
    constant_family,
    degeneracy_extended,
    simplicial_levels_check,
)

Z5 = make_ring("Z@5")


def five():
    return ch.ChainComplex(Z5, {1: 1, 0: 1}, {1: Matrix.from_rows(Z5, [[5]])})


def constant_diagram(cat, x):
    return hn.diagram_from_generators(cat, {i: x for i in cat.objects}, {a: ch.identity(x) for a in cat.generators})


def ctx(ring=Z5):
    return suites.Ctx(ring, 3, 2, 2, ())


def test_path_category_shape():
    cat = hn.path_category(3)
    assert len(cat.arrows) == 4 + 3 + 2 + 1
    assert cat.compose[("a3", "a2.a1")] == "a3.a2.a1"
    assert cat.factorisation("a3.a2.a1") == ("a1", "a2", "a3")
    cat.check()


def test_free_category_rejects_cycles():
    with pytest.raises(NotFree):
        hn.free_category(["0", "1"], [("a", "0", "1"), ("b", "1", "0")])
    with pytest.raises(ShapeMismatch):
        hn.free_category(["0"], [("a.b", "0", "0")])


def test_strict_transformation_is_coherent():
    cat = hn.path_category(2)
    f = constant_diagram(cat, five())
    theta = hn.strict_as_hnat(hn.identity_nat(f))
    assert hn.validate_hnat(theta) is theta
    zz = hn.zigzag(theta)
    assert zz.Y.is_functorial() and zz.J1.is_natural() and zz.J2.is_natural()


def test_extension_matches_both_bracketings(ring, rng):
    cat = hn.path_category(3)
    theta = random_coherent_hnat(ring, rng, cat, 2, 2).theta
    hn.validate_hnat(theta)
    left = theta.star_of("a3", "a2.a1")
    right = theta.star_of("a3.a2", "a1")
    assert left == right == theta.theta_arr["a3.a2.a1"]


def test_extension_needs_generators():
    cat = hn.path_category(1)
    f = constant_diagram(cat, five())
    with pytest.raises(NotFree):
        hn.extend_from_generators(cat, f, f, {i: ch.identity(five()) for i in cat.objects}, {})


def test_nonzero_identity_witness_rejected(rng):
    for _ in range(20):
        theta = suites._coherent(ctx(), rng, hn.path_category(2), length=3)
        K = suites._anti_chain_perturbation(ctx(), rng, theta.f.obj["0"], theta.g.obj["0"])
        if not K.is_zero():
            break
    arr = dict(theta.theta_arr)
    arr["id_0"] = arr["id_0"] + K
    bad = hn.HNat(theta.f, theta.g, theta.theta_obj, arr)
    assert bad.witness_ok("id_0")
    with pytest.raises(CoherenceFailure):
        hn.validate_hnat(bad)


def test_wrong_witness_rejected(rng):
    cat = hn.path_category(1)
    x = five()
    f = constant_diagram(cat, x)
    theta = hn.strict_as_hnat(hn.identity_nat(f))
    obj = dict(theta.theta_obj)
    obj["1"] = obj["1"].scale(Z5.coerce(2))
    # the zero witness no longer covers theta_1 f_a - g_a theta_0 = id
    with pytest.raises(NotAHomotopy):
        hn.validate_hnat(hn.HNat(f, f, obj, theta.theta_arr))


def test_negative_control_breaks_coherence(ring, rng):
    out = suites._gen_broken(ctx(ring), rng)
    theta = out["theta"]
    assert theta is not None
    assert all(theta.witness_ok(a) for a in theta.cat.arrows)
    with pytest.raises(CoherenceFailure):
        hn.validate_hnat(theta)
    assert not hn.Y_of(theta).is_functorial()


def test_compose_mixed_identities(ring, rng):
    theta = random_coherent_hnat(ring, rng, hn.path_category(2), 2, 2).theta
    assert hn.hnat_equal(hn.compose_mixed(hn.identity_nat(theta.f), theta), theta)
    assert hn.hnat_equal(hn.compose_mixed2(theta, hn.identity_nat(theta.g)), theta)
    hn.validate_hnat(hn.compose_mixed(hn.identity_nat(theta.f), theta))


def test_cylinder_and_zigzag(ring, rng):
    for _ in range(5):
        inst = random_coherent_hnat(ring, rng, hn.path_category(rng.randint(1, 3)), 2, 2)
        theta = hn.validate_hnat(inst.theta)
        Y = hn.Y_of(theta)
        assert Y.is_functorial()
        assert hn.J1(theta).is_natural() and hn.J2(theta).is_natural()
        hn.zigzag(theta)


def test_y_pieces_for_single_map(rng):
    x = five()
    f = ch.ChainMap(x, x, {1: Matrix.from_rows(Z5, [[2]]), 0: Matrix.from_rows(Z5, [[2]])})
    assert hn.p_map(f) @ hn.j2(f) == ch.identity(x)
    assert ch.is_quasi_iso(hn.p_map(f)) and ch.is_quasi_iso(hn.j2(f))
    assert hn.p_map(f) @ hn.j1(f) == f


def test_zigzag_rejects_non_equivalences():
    cat = hn.path_category(1)
    x = five()
    f = constant_diagram(cat, x)
    zero = hn.StrictNat(f, f, {i: ch.zero_map(x, x) for i in cat.objects})
    assert zero.is_natural()
    with pytest.raises(ComponentNotEquivalence):
        hn.zigzag(hn.validate_hnat(hn.strict_as_hnat(zero)))


def test_delta_based_transformation():
    """theta_i = delta over one upper triangular arrow, witness from the delta homotopy."""
    x, y = C.CObject(1, 1, Z5), C.CObject(1, 1, Z5)
    one = Matrix.from_rows(Z5, [[1]])
    phi = C.CMorphism(x, y, one, one, Matrix.zeros(Z5, 1, 1), one)
    cat = hn.path_category(1)
    f = hn.diagram_from_generators(cat, {"0": x.complex, "1": y.complex}, {"a1": C.to_chain_map(phi)})
    g = hn.diagram_from_generators(cat, {"0": Z.mu1(phi).source, "1": Z.mu1(phi).target}, {"a1": Z.mu1(phi)})
    sq = Z.delta_naturality(phi)
    neg = {k: -m for k, m in sq.homotopy.h.items()}
    H = ch.homotopy_to_H(ch.ChainHomotopy(sq.rhs, sq.lhs, neg)).H
    theta = hn.extend_from_generators(cat, f, g, {"0": Z.delta(x), "1": Z.delta(y)}, {"a1": H})
    hn.validate_hnat(theta)
    hn.zigzag(theta)


def test_epsilon_p_strict_square():
    x = five()
    f = ch.identity(x)
    sq = ch.HSquare(f, f, f, f, ch.zero_map(ch.cone(x), x))
    rep = hn.epsilon_p_instance(sq)
    assert all(rep.values()), rep


def test_epsilon_p_random(ring, rng):
    squares = suites._square_chain(ctx(ring), rng, 2)
    rep = hn.epsilon_p_instance(squares)
    assert all(rep.values()), rep


def test_monotone_count():
    # maps [m] -> [n] for m, n <= 3: sum of binomial(m + n + 1, m + 1)
    assert len(all_monotone(1)) == 1 + 2 + 1 + 3


def test_simplicial_constant_and_extended(rng):
    theta = random_coherent_hnat(Z5, rng, hn.path_category(1), 2, 2).theta
    rep = simplicial_levels_check(constant_family(theta, 2))
    assert all(v is not False for v in rep.values())
    data = degeneracy_extended(theta, 2)
    rep = simplicial_levels_check(data)
    assert rep["maps_checked"] == len(all_monotone(2))
    assert all(v is not False for v in rep.values())
    with pytest.raises(LevelIncompatible):
        simplicial_levels_check(break_level(data, 1, Z5.coerce(6)))


def test_simplicial_level_cap():
    theta = hn.strict_as_hnat(hn.identity_nat(constant_diagram(hn.path_category(1), five())))
    with pytest.raises(ShapeMismatch):
        simplicial_levels_check(constant_family(theta, 4))


def test_break_level_by_one_is_harmless():
    theta = hn.strict_as_hnat(hn.identity_nat(constant_diagram(hn.path_category(1), five())))
    data = break_level(degeneracy_extended(theta, 1), 1, Z5.one)
    simplicial_levels_check(data)


def test_generator_is_reproducible():
    a = random_coherent_hnat(Z5, random.Random(3), hn.path_category(2), 2, 2).theta
    b = random_coherent_hnat(Z5, random.Random(3), hn.path_category(2), 2, 2).theta
    assert hn.hnat_equal(a, b)
