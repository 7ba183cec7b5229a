import random

import pytest

from gersten_lab import category as C
from gersten_lab import hnat as hn
from gersten_lab import k0, suites
from gersten_lab import serialize as S
from gersten_lab.errors import ParseError
from gersten_lab.random_gen import (
    random_c_morphism,
    random_chain_morphism,
    random_coherent_hnat,
    random_complex,
    random_iso_chain,
)


def test_dumps_is_canonical():
    assert S.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_loads_rejects_garbage():
    with pytest.raises(ParseError):
        S.loads("{not json")
    with pytest.raises(ParseError):
        S.decode_value({"nope": 1}, None)


def roundtrip(enc, dec, v, ring):
    d = S.loads(S.dumps(enc(v)))
    return dec(d, ring)


def test_complex_map_roundtrip(ring, rng):
    x = random_complex(ring, rng, 3, 3)
    assert roundtrip(S.complex_to_json, S.complex_from_json, x, ring) == x
    phi = random_c_morphism(ring, rng, C.CObject(2, 1, ring), C.CObject(1, 2, ring))
    assert roundtrip(S.cmorphism_to_json, S.cmorphism_from_json, phi, ring) == phi
    f = C.to_chain_map(phi)
    assert roundtrip(S.map_to_json, S.map_from_json, f, ring) == f


def test_chain_morphism_roundtrip(ring, rng):
    x = C.CObject(1, 1, ring)
    chain = random_iso_chain(ring, rng, x, 2, 0)
    theta = random_chain_morphism(ring, rng, chain, 0)
    back = roundtrip(S.chain_morphism_to_json, S.chain_morphism_from_json, theta, ring)
    assert back == theta


def test_hnat_roundtrip(ring, rng):
    theta = random_coherent_hnat(ring, rng, hn.path_category(2), 2, 2).theta
    back = roundtrip(S.hnat_to_json, S.hnat_from_json, theta, ring)
    assert hn.hnat_equal(back, theta)
    assert S.cat_from_json(S.cat_to_json(theta.cat)) == theta.cat


def test_module_roundtrip(ring):
    m = k0.module(ring, [[ring.g, 0], [0, 0]])
    back = roundtrip(S.module_to_json, S.module_from_json, m, ring)
    assert back == m
    assert S.ses_to_json(k0.telescope_witness(ring, ring.g))["certificate"]["exact_in_middle"] is True


def test_tagged_values_roundtrip(ring):
    rng = random.Random(5)
    ctx = suites.Ctx(ring, 3, 2, 1, ())
    for chk in suites.CHECKS:
        values = chk.gen(ctx, rng)
        enc = S.encode_value(values, ring)
        dec = S.decode_value(S.loads(S.dumps(enc)), ring)
        assert S.dumps(S.encode_value(dec, ring)) == S.dumps(enc), chk.anchor
