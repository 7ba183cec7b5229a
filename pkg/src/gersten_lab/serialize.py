"""JSON codecs.  Elements travel as canonical strings, everything else as plain dicts.

Every ``*_to_json`` has a matching ``*_from_json`` and the pair round-trips
exactly.  Decoders take the ring explicitly unless the payload names one.
"""

from __future__ import annotations

import json
from typing import Any

from gersten_lab.category import CMorphism, CObject
from gersten_lab.chain import ChainComplex, ChainHomotopy, ChainMap, HSquare
from gersten_lab.errors import ParseError
from gersten_lab.hnat import Diagram, FiniteCat, HNat
from gersten_lab.k0 import FLModule, SESWitness, classify_module
from gersten_lab.matrix import Matrix
from gersten_lab.rings import make_ring
from gersten_lab.zero_map import ChainMorphism, IsoChain


def dumps(obj: Any) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e


def _need(d: dict, key: str):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"missing key {key!r}")
    return d[key]


def ring_of(d: dict, default=None):
    spec = d.get("ring") if isinstance(d, dict) else None
    if spec is None:
        if default is None:
            raise ParseError("no ring given")
        return default
    return make_ring(spec)


# matrices


def matrix_to_json(m: Matrix) -> dict:
    fmt = m.domain.format
    return {"rows": m.rows, "cols": m.cols, "entries": [fmt(x) for row in m.entries for x in row]}


def matrix_from_json(d: dict, ring) -> Matrix:
    rows, cols, ents = int(_need(d, "rows")), int(_need(d, "cols")), _need(d, "entries")
    if len(ents) != rows * cols:
        raise ParseError(f"{len(ents)} entries for a {rows}x{cols} matrix")
    vals = [ring.parse(str(e)) for e in ents]
    return Matrix(ring, rows, cols, [vals[i * cols:(i + 1) * cols] for i in range(rows)])


# complexes, maps, homotopies


def complex_to_json(x: ChainComplex) -> dict:
    return {
        "ring": x.ring.spec,
        "ranks": {str(k): r for k, r in sorted(x.ranks.items())},
        "d": {str(k): matrix_to_json(m) for k, m in sorted(x.boundaries.items())},
    }


def complex_from_json(d: dict, ring=None) -> ChainComplex:
    ring = ring_of(d, ring)
    try:
        ranks = {int(k): int(v) for k, v in _need(d, "ranks").items()}
        bd = {int(k): matrix_from_json(v, ring) for k, v in d.get("d", {}).items()}
    except (AttributeError, TypeError, ValueError) as e:
        raise ParseError(f"malformed complex: {e}") from e
    return ChainComplex(ring, ranks, bd).check()


def map_to_json(f: ChainMap) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "components": {str(k): matrix_to_json(f.comp(k)) for k in f.degrees() if not f.comp(k).is_zero()},
    }


def map_from_json(d: dict, ring=None) -> ChainMap:
    src = complex_from_json(_need(d, "source"), ring)
    tgt = complex_from_json(_need(d, "target"), src.ring)
    comps = {int(k): matrix_from_json(v, src.ring) for k, v in d.get("components", {}).items()}
    return ChainMap(src, tgt, comps)


def homotopy_to_json(h: ChainHomotopy) -> dict:
    return {
        "f": map_to_json(h.f),
        "g": map_to_json(h.g),
        "h": {str(k): matrix_to_json(m) for k, m in sorted(h.h.items())},
    }


def homotopy_from_json(d: dict, ring=None) -> ChainHomotopy:
    f = map_from_json(_need(d, "f"), ring)
    g = map_from_json(_need(d, "g"), f.source.ring)
    h = {int(k): matrix_from_json(v, f.source.ring) for k, v in d.get("h", {}).items()}
    return ChainHomotopy(f, g, h)


# the category of standard two-term complexes


def cobject_to_json(x: CObject) -> dict:
    return {"n": x.n, "m": x.m, "ring": x.ring.spec}


def cobject_from_json(d: dict, ring=None) -> CObject:
    return CObject(int(_need(d, "n")), int(_need(d, "m")), ring_of(d, ring))


def cmorphism_to_json(phi: CMorphism) -> dict:
    return {
        "source": cobject_to_json(phi.source),
        "target": cobject_to_json(phi.target),
        "blocks": {k: matrix_to_json(getattr(phi, k)) for k in ("nn", "nm", "mn", "mm")},
    }


def cmorphism_from_json(d: dict, ring=None) -> CMorphism:
    s = cobject_from_json(_need(d, "source"), ring)
    t = cobject_from_json(_need(d, "target"), s.ring)
    b = _need(d, "blocks")
    return CMorphism(s, t, *(matrix_from_json(_need(b, k), s.ring) for k in ("nn", "nm", "mn", "mm")))


def isochain_to_json(c: IsoChain) -> dict:
    return {
        "objects": [cobject_to_json(o) for o in c.objects],
        "arrows": [cmorphism_to_json(a) for a in c.arrows],
        "flags": list(c.flags),
    }


def isochain_from_json(d: dict, ring=None) -> IsoChain:
    objs = tuple(cobject_from_json(o, ring) for o in _need(d, "objects"))
    arrows = tuple(cmorphism_from_json(a, ring) for a in _need(d, "arrows"))
    return IsoChain(objs, arrows)


# index categories and transformations


def cat_to_json(c: FiniteCat) -> dict:
    return {
        "objects": list(c.objects),
        "arrows": {a: list(st) for a, st in sorted(c.arrows.items())},
        "compose": sorted([b, a, ba] for (b, a), ba in c.compose.items()),
        "identities": dict(sorted(c.identities.items())),
        "generators": list(c.generators),
    }


def cat_from_json(d: dict) -> FiniteCat:
    return FiniteCat(
        tuple(_need(d, "objects")),
        {a: tuple(st) for a, st in _need(d, "arrows").items()},
        {(b, a): ba for b, a, ba in _need(d, "compose")},
        dict(_need(d, "identities")),
        tuple(d.get("generators", ())),
    ).check()


def diagram_to_json(f: Diagram) -> dict:
    return {
        "cat": cat_to_json(f.cat),
        "obj": {i: complex_to_json(x) for i, x in sorted(f.obj.items())},
        "arr": {a: map_to_json(m) for a, m in sorted(f.arr.items())},
    }


def diagram_from_json(d: dict, ring=None) -> Diagram:
    cat = cat_from_json(_need(d, "cat"))
    obj = {i: complex_from_json(x, ring) for i, x in _need(d, "obj").items()}
    arr = {a: map_from_json(m, ring) for a, m in _need(d, "arr").items()}
    return Diagram(cat, obj, arr)


def hnat_to_json(t: HNat) -> dict:
    return {
        "f": diagram_to_json(t.f),
        "g": diagram_to_json(t.g),
        "theta_obj": {i: map_to_json(m) for i, m in sorted(t.theta_obj.items())},
        "theta_arr": {a: map_to_json(m) for a, m in sorted(t.theta_arr.items())},
    }


def hnat_from_json(d: dict, ring=None) -> HNat:
    return HNat(
        diagram_from_json(_need(d, "f"), ring),
        diagram_from_json(_need(d, "g"), ring),
        {i: map_from_json(m, ring) for i, m in _need(d, "theta_obj").items()},
        {a: map_from_json(m, ring) for a, m in _need(d, "theta_arr").items()},
    )


# modules


def module_to_json(m: FLModule) -> dict:
    return {
        "ring": m.ring.spec,
        "generators": m.generators,
        "relations": matrix_to_json(m.presentation),
        "exponents": list(m.exponents),
        "free_rank": m.free_rank,
    }


def module_from_json(d: dict, ring=None) -> FLModule:
    ring = ring_of(d, ring)
    rel = matrix_from_json(_need(d, "relations"), ring)
    if rel.rows != int(_need(d, "generators")):
        raise ParseError("relations matrix must have one row per generator")
    return classify_module(rel)


def ses_to_json(s: SESWitness) -> dict:
    return {
        "A": module_to_json(s.A),
        "B": module_to_json(s.B),
        "C": module_to_json(s.C),
        "alpha": matrix_to_json(s.alpha),
        "beta": matrix_to_json(s.beta),
        "certificate": dict(s.certificate or s.certify()),
    }


def square_to_json(sq: HSquare) -> dict:
    return {k: map_to_json(getattr(sq, k)) for k in ("f", "g", "a", "b", "H")}


def square_from_json(d: dict, ring=None) -> HSquare:
    return HSquare(*(map_from_json(_need(d, k), ring) for k in ("f", "g", "a", "b", "H")))


def chain_morphism_to_json(t: ChainMorphism) -> dict:
    return {
        "source": isochain_to_json(t.source),
        "target": isochain_to_json(t.target),
        "components": [cmorphism_to_json(c) for c in t.comps],
    }


def chain_morphism_from_json(d: dict, ring=None) -> ChainMorphism:
    return ChainMorphism(
        isochain_from_json(_need(d, "source"), ring),
        isochain_from_json(_need(d, "target"), ring),
        tuple(cmorphism_from_json(c, ring) for c in _need(d, "components")),
    )


# tagged values, used for counterexamples

_CODECS = [
    ("matrix", Matrix, matrix_to_json, matrix_from_json),
    ("complex", ChainComplex, complex_to_json, complex_from_json),
    ("map", ChainMap, map_to_json, map_from_json),
    ("homotopy", ChainHomotopy, homotopy_to_json, homotopy_from_json),
    ("square", HSquare, square_to_json, square_from_json),
    ("cobject", CObject, cobject_to_json, cobject_from_json),
    ("cmorphism", CMorphism, cmorphism_to_json, cmorphism_from_json),
    ("isochain", IsoChain, isochain_to_json, isochain_from_json),
    ("chain_morphism", ChainMorphism, chain_morphism_to_json, chain_morphism_from_json),
    ("hnat", HNat, hnat_to_json, hnat_from_json),
    ("module", FLModule, module_to_json, module_from_json),
]


def encode_value(v, ring):
    """JSON for a value of any supported type; ring elements become {"element": str}."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, (list, tuple)):
        return {"list": [encode_value(x, ring) for x in v]}
    if isinstance(v, dict):
        return {"dict": {str(k): encode_value(x, ring) for k, x in v.items()}}
    if isinstance(v, FiniteCat):
        return {"cat": cat_to_json(v)}
    for tag, cls, enc, _dec in _CODECS:
        if isinstance(v, cls):
            return {tag: enc(v)}
    return {"element": ring.format(v)}


def decode_value(d, ring):
    if d is None or isinstance(d, (bool, int, str)):
        return d
    if not isinstance(d, dict) or len(d) != 1:
        raise ParseError(f"not a tagged value: {d!r}")
    (tag, body), = d.items()
    if tag == "list":
        return [decode_value(x, ring) for x in body]
    if tag == "dict":
        return {k: decode_value(x, ring) for k, x in body.items()}
    if tag == "element":
        return ring.parse(body)
    if tag == "cat":
        return cat_from_json(body)
    for t, _cls, _enc, dec in _CODECS:
        if t == tag:
            return dec(body, ring)
    raise ParseError(f"unknown tag {tag!r}")
