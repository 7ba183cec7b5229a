"""Randomized verification suites behind ``gersten-lab verify``.

Each check generates instances from its own RNG stream, seeded by
``"{seed}:{anchor}:{index}"``, so any single instance can be regenerated
without running the others.  A failing instance is serialized in full and
can be re-run with :func:`replay`.

Sabotage flags swap one operation for a deliberately broken variant; they
exist to show that the checks can fail.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

from gersten_lab import category as cat_c
from gersten_lab import chain as ch
from gersten_lab import hnat as hn
from gersten_lab import k0
from gersten_lab import random_gen as rg
from gersten_lab import zero_map as zm
from gersten_lab.errors import (
    ConfigInvalid,
    GerstenLabError,
    LevelIncompatible,
    NotInC,
    UnknownRingKind,
)
from gersten_lab.matrix import Matrix, is_invertible, mat_det, mat_invert
from gersten_lab.rings import make_ring, random_element
from gersten_lab.serialize import decode_value, encode_value
from gersten_lab.simplicial import (
    break_level,
    degeneracy_extended,
    simplicial_levels_check,
)
from gersten_lab.snf import smith_normal_form

SABOTAGE = {
    "compose-g": "drop the factor g from the nn block of composition",
    "ut-sign": "flip the sign of the correction block in upper triangulation",
    "star-sign": "subtract instead of add the second term of the star product",
    "delta-sign": "flip the sign of the delta naturality homotopy",
    "coherence": "perturb the witness on a composite arrow",
    "k0-rank": "count all generators instead of the free rank",
}


@dataclass(frozen=True)
class SuiteConfig:
    ring: str = "Z@5"
    seed: int = 42
    count: int = 200
    max_dim: int = 4
    max_val: int = 3
    format: str = "json"
    level: int = 3
    sabotage: tuple[str, ...] = ()
    only: tuple[str, ...] = ()
    counts: Mapping[str, int] = field(default_factory=dict)
    timings: bool = False

    def validate(self) -> "SuiteConfig":
        try:
            make_ring(self.ring)
        except (UnknownRingKind, GerstenLabError) as e:
            raise ConfigInvalid(f"bad ring {self.ring!r}: {e}") from e
        if self.count < 1 or any(c < 1 for c in self.counts.values()):
            raise ConfigInvalid("instance counts must be at least 1")
        if self.max_dim < 1:
            raise ConfigInvalid("max_dim must be at least 1")
        if self.max_val < 0:
            raise ConfigInvalid("max_val must be non-negative")
        if self.format not in ("json", "markdown"):
            raise ConfigInvalid(f"unknown format {self.format!r}")
        if not 0 <= self.level <= 3:
            raise ConfigInvalid("level must lie in 0..3")
        unknown = [s for s in self.sabotage if s not in SABOTAGE]
        if unknown:
            raise ConfigInvalid(f"unknown sabotage flag(s): {', '.join(unknown)}")
        anchors = {c.anchor for c in CHECKS}
        bad = [a for a in (*self.only, *self.counts) if a not in anchors]
        if bad:
            raise ConfigInvalid(f"unknown check(s): {', '.join(bad)}")
        return self

    def to_json(self) -> dict:
        return {
            "ring": self.ring, "seed": self.seed, "count": self.count, "max_dim": self.max_dim,
            "max_val": self.max_val, "level": self.level, "sabotage": sorted(self.sabotage),
            "only": sorted(self.only), "counts": dict(sorted(self.counts.items())),
        }


@dataclass(frozen=True)
class Ctx:
    ring: object
    dim: int
    val: int
    level: int
    sabotage: frozenset

    def broken(self, flag: str) -> bool:
        return flag in self.sabotage


@dataclass(frozen=True)
class Check:
    anchor: str
    module: str
    gen: Callable  # (ctx, rng) -> dict of named values
    run: Callable  # (ctx, **values) -> None on success, else a reason
    cost: int = 1  # the configured count is divided by this


CHECKS: list[Check] = []


def check(anchor: str, module: str, cost: int = 1):
    def wrap(gen):
        def register(run):
            CHECKS.append(Check(anchor, module, gen, run, cost))
            return run
        return register
    return wrap


def _small(rng, ctx, lo: int = 0) -> int:
    return rng.randint(lo, ctx.dim)


def _obj(ctx, rng, lo: int = 0):
    return cat_c.CObject(_small(rng, ctx, lo), _small(rng, ctx, lo), ctx.ring)


def _half_obj(ctx, rng):
    """Summand for a split sequence; two of them stay within max_dim per block."""
    half = max(1, ctx.dim // 2)
    return cat_c.CObject(rng.randint(0, half), rng.randint(0, half), ctx.ring)


def _pos_obj(ctx, rng):
    while True:
        x = _obj(ctx, rng)
        if x.size:
            return x


def _expect(cond: bool, reason: str):
    return None if cond else reason


def _first(*results):
    for r in results:
        if r:
            return r
    return None


# exact algebra


def _gen_pair(ctx, rng):
    return {"a": random_element(ctx.ring, rng, ctx.val), "b": random_element(ctx.ring, rng, ctx.val)}


@check("algebra.valuation", "exact-algebra")(_gen_pair)
def _valuation(ctx, a, b):
    R = ctx.ring
    va, vb = R.valuation(a), R.valuation(b)
    return _first(
        _expect(R.valuation(a * b) == va + vb, "v(ab) != v(a) + v(b)"),
        _expect(R.valuation(a + b) >= min(va, vb), "v(a + b) < min(v(a), v(b))"),
    )


@check("algebra.residue-homomorphism", "exact-algebra")(_gen_pair)
def _residue(ctx, a, b):
    R = ctx.ring
    F = R.residue_field
    ra, rb = R.residue(a), R.residue(b)
    return _first(
        _expect(F.canon(R.residue(a + b)) == F.canon(ra + rb), "residue(a + b) != residue(a) + residue(b)"),
        _expect(F.canon(R.residue(a * b)) == F.canon(ra * rb), "residue(ab) != residue(a) residue(b)"),
        _expect(F.canon(R.residue(R.g)) == F.zero, "residue(g) != 0"),
    )


def _gen_matrix(ctx, rng):
    return {"m": rg.random_matrix(ctx.ring, rng, rng.randint(0, ctx.dim), rng.randint(0, ctx.dim), ctx.val)}


@check("algebra.smith-normal-form", "exact-algebra")(_gen_matrix)
def _snf(ctx, m):
    R = ctx.ring
    s = smith_normal_form(m)
    diag_ok = all(
        s.D[i, j] == (R.g_power(s.exponents[i]) if i == j and i < s.rank else R.zero)
        for i in range(s.D.rows) for j in range(s.D.cols)
    )
    return _first(
        _expect(s.U @ s.D @ s.V == m, "U D V != M"),
        _expect(R.is_unit(mat_det(s.U)) and R.is_unit(mat_det(s.V)), "U or V is not invertible"),
        _expect(list(s.exponents) == sorted(s.exponents), "exponents not ascending"),
        _expect(diag_ok, "D is not diag(g^a_i)"),
    )


def _gen_square_matrix(ctx, rng):
    n = rng.randint(0, ctx.dim)
    if rng.random() < 0.5:
        return {"m": rg.random_invertible(ctx.ring, rng, n, ctx.val)[0]}
    return {"m": rg.random_matrix(ctx.ring, rng, n, n, ctx.val)}


@check("algebra.inverse", "exact-algebra")(_gen_square_matrix)
def _inverse(ctx, m):
    if not is_invertible(m):
        return None
    inv = mat_invert(m)
    e = Matrix.identity(ctx.ring, m.rows)
    return _expect(inv @ m == e and m @ inv == e, "inverse fails on one side")


# chain calculus


def _complex(ctx, rng, length: int = 3):
    return rg.random_presented(ctx.ring, rng, ctx.dim, rng.randint(1, length), min(ctx.val, 2))


@check("chain.d-squared-zero", "chain-calculus")(lambda ctx, rng: {"x": _complex(ctx, rng).x})
def _dd(ctx, x):
    return _expect(all((x.d(n) @ x.d(n + 1)).is_zero() for n in range(x.lo, x.hi + 1)), "d d != 0")


def _gen_homotopy(ctx, rng):
    sx, sy = _complex(ctx, rng), _complex(ctx, rng)
    return {"h": rg.random_homotopy(ctx.ring, rng, sx, sy, min(ctx.val, 2))}


@check("chain.homotopy-roundtrip", "chain-calculus")(_gen_homotopy)
def _roundtrip(ctx, h):
    H = ch.homotopy_to_H(h)
    return _first(
        _expect(H.is_valid(), "H iota != f - g"),
        _expect(ch.H_to_homotopy(H) == h, "round trip changes the homotopy"),
    )


@check("chain.cone-contraction", "chain-calculus")(lambda ctx, rng: {"x": _complex(ctx, rng).x})
def _contraction(ctx, x):
    cx = ch.cone(x)
    c = ch.CHomotopy(ch.r_map(x), ch.identity(cx), ch.zero_map(cx, cx))
    return _expect(c.is_valid(), "r_x is not a C-homotopy from id to 0")


def _star(ctx):
    if ctx.broken("star-sign"):
        return lambda Hp, H, a, bp: bp @ H - Hp @ ch.cone_map(a)
    return ch.star


def _compose_squares(ctx, second, first):
    return ch.HSquare(
        first.f, second.g, second.a @ first.a, second.b @ first.b,
        _star(ctx)(second.H, first.H, first.a, second.b),
    )


def _square_chain(ctx, rng, k: int):
    val = min(ctx.val, 2)
    dim = min(ctx.dim, 3)
    sx = rg.random_presented(ctx.ring, rng, dim, 2, val)
    sq, pp = rg.random_square(ctx.ring, rng, sx, dim, val)
    out = [sq]
    for _ in range(k - 1):
        sq, pp = rg.random_square(ctx.ring, rng, None, dim, val, start=sq.g, start_presented=pp)
        out.append(sq)
    return out


@check("chain.star-contract", "chain-calculus")(lambda ctx, rng: {"squares": _square_chain(ctx, rng, 2)})
def _star_contract(ctx, squares):
    s1, s2 = squares
    comp = _compose_squares(ctx, s2, s1)
    star = _star(ctx)
    x, y = s1.f.source, s1.g.target
    zero1 = ch.zero_map(ch.cone(x), y)
    zero2 = ch.zero_map(ch.cone(s2.f.source), s2.g.target)
    return _first(
        _expect(comp.is_valid(), "composite square witness is invalid"),
        _expect(star(zero2, s1.H, s1.a, s2.b) == s2.b @ s1.H, "strict second square: H' * H != b' H"),
        _expect(star(s2.H, zero1, s1.a, s2.b) == s2.H @ ch.cone_map(s1.a), "strict first square: H' * H != H' C(a)"),
    )


@check("homotopy-nat.star-associative", "homotopy-nat")(lambda ctx, rng: {"squares": _square_chain(ctx, rng, 3)})
def _star_assoc(ctx, squares):
    s1, s2, s3 = squares
    left = _compose_squares(ctx, s3, _compose_squares(ctx, s2, s1))
    right = _compose_squares(ctx, _compose_squares(ctx, s3, s2), s1)
    return _expect(left.H == right.H, "(H'' * H') * H != H'' * (H' * H)")


def _gen_composable_maps(ctx, rng):
    val = min(ctx.val, 2)
    sx, sy, sz = (_complex(ctx, rng) for _ in range(3))
    return {"a": rg.random_chain_map(ctx.ring, rng, sx, sy, val), "b": rg.random_chain_map(ctx.ring, rng, sy, sz, val)}


@check("chain.cone-functorial", "chain-calculus")(_gen_composable_maps)
def _cone_functorial(ctx, a, b):
    x = a.source
    return _first(
        _expect(ch.cone_map(ch.identity(x)) == ch.identity(ch.cone(x)), "C(id) != id"),
        _expect(ch.cone_map(b @ a) == ch.cone_map(b) @ ch.cone_map(a), "C(ba) != C(b) C(a)"),
    )


# the category C


def _compose(ctx):
    if not ctx.broken("compose-g"):
        return cat_c.compose

    def broken(psi, phi):
        good = cat_c.compose(psi, phi)
        return cat_c.CMorphism(phi.source, psi.target, psi.nn @ phi.nn + psi.nm @ phi.mn, good.nm, good.mn, good.mm)
    return broken


def _gen_composable_c(ctx, rng):
    x, y, z = _obj(ctx, rng), _obj(ctx, rng), _obj(ctx, rng)
    return {
        "phi": rg.random_c_morphism(ctx.ring, rng, x, y, ctx.val),
        "psi": rg.random_c_morphism(ctx.ring, rng, y, z, ctx.val),
    }


@check("category.composition", "category-c")(_gen_composable_c)
def _composition(ctx, phi, psi):
    got = cat_c.to_chain_map(_compose(ctx)(psi, phi))
    return _expect(got == cat_c.to_chain_map(psi) @ cat_c.to_chain_map(phi),
                   "block composition differs from chain map composition")


def _ut(ctx):
    if not ctx.broken("ut-sign"):
        return cat_c.ut
    return lambda phi: (lambda u: cat_c.CMorphism(u.source, u.target, u.nn, u.nm, -u.mn, u.mm))(cat_c.ut(phi))


def _gen_iso(ctx, rng):
    x = _pos_obj(ctx, rng)
    return {"phi": rg.random_c_iso(ctx.ring, rng, x, min(ctx.val, 2)),
            "upper": rg.random_upper_iso(ctx.ring, rng, x, min(ctx.val, 2))}


@check("category.triangulation", "category-c")(_gen_iso)
def _triangulation(ctx, phi, upper):
    ut = _ut(ctx)
    t = cat_c.compose(phi, ut(phi))
    return _first(
        _expect(cat_c.is_upper_triangular(t), "phi UT(phi) is not upper triangular"),
        _expect(t == cat_c.triangulated_form(phi), "phi UT(phi) differs from the closed triangulated form"),
        _expect(ut(upper) == cat_c.c_identity(upper.source), "UT(upper triangular) != id"),
    )


@check("category.iso-diagonal-blocks", "category-c")(_gen_iso)
def _iso_blocks(ctx, phi, upper):
    ok, inv = cat_c.is_isomorphism(phi)
    return _first(
        _expect(ok, "generated isomorphism is not invertible"),
        _expect(is_invertible(phi.nn) and is_invertible(phi.mm), "diagonal blocks of an isomorphism not invertible"),
        _expect(ok and cat_c.compose(inv, phi) == cat_c.c_identity(phi.source), "inverse is wrong"),
    )


def _eye(R, rows: int, cols: int, offset: int) -> Matrix:
    """Rows offset .. offset + cols of the identity, as a rows x cols block."""
    return Matrix(R, rows, cols, [[R.one if i == offset + j else R.zero for j in range(cols)] for i in range(rows)])


def _block_triple(R, x1, x2):
    """Inclusions and projections of x1 + x2 as (alpha, beta, gamma, rho)."""
    mid = cat_c.CObject(x1.n + x2.n, x1.m + x2.m, R)

    def inc(x, on_n, on_m):
        return cat_c.CMorphism(x, mid, _eye(R, mid.n, x.n, on_n), Matrix.zeros(R, mid.n, x.m),
                               Matrix.zeros(R, mid.m, x.n), _eye(R, mid.m, x.m, on_m))

    def proj(x, on_n, on_m):
        return cat_c.CMorphism(mid, x, _eye(R, mid.n, x.n, on_n).T, Matrix.zeros(R, x.n, mid.m),
                               Matrix.zeros(R, x.m, mid.n), _eye(R, mid.m, x.m, on_m).T)

    return inc(x1, 0, 0), proj(x2, x1.n, x1.m), inc(x2, x1.n, x1.m), proj(x1, 0, 0)


def _split_triple(ctx, rng, x1, x2, lower_only: bool = False):
    """The block triple conjugated by a random isomorphism of the middle object."""
    alpha, beta, gamma, rho = _block_triple(ctx.ring, x1, x2)
    mid = alpha.target
    val = min(ctx.val, 2)
    if lower_only:
        theta = cat_c.compose(rg.elementary_lower(ctx.ring, rng, mid, val), rg.random_block_diagonal_iso(ctx.ring, rng, mid, val))
    else:
        theta = rg.random_c_iso(ctx.ring, rng, mid, val)
    tinv = cat_c.is_isomorphism(theta)[1]
    c = cat_c.compose
    return c(theta, alpha), c(beta, tinv), c(theta, gamma), c(rho, tinv)


def _split_ok(alpha, beta, gamma, rho) -> bool:
    c = cat_c.compose
    mid = alpha.target
    return (
        c(beta, alpha) == cat_c.c_zero(alpha.source, beta.target)
        and c(beta, gamma) == cat_c.c_identity(beta.target)
        and c(rho, alpha) == cat_c.c_identity(alpha.source)
        and cat_c.to_chain_map(c(alpha, rho)) + cat_c.to_chain_map(c(gamma, beta)) == cat_c.to_chain_map(cat_c.c_identity(mid))
    )


def _gen_ud(ctx, rng):
    out = _gen_composable_c(ctx, rng)
    out["split"] = list(_split_triple(ctx, rng, _half_obj(ctx, rng), _half_obj(ctx, rng)))
    return out


@check("category.upside-down", "category-c")(_gen_ud)
def _ud(ctx, phi, psi, split):
    ud = cat_c.ud_mor
    c = _compose(ctx)
    return _first(
        _expect(ud(ud(phi)) == phi, "UD UD != id"),
        _expect(ud(c(psi, phi)) == c(ud(psi), ud(phi)), "UD(psi phi) != UD(psi) UD(phi)"),
        _expect(_split_ok(*split), "generated split sequence is not split"),
        _expect(_split_ok(*(ud(m) for m in split)), "UD destroys a split sequence"),
    )


def _gen_endo(ctx, rng):
    n = rng.randint(1, ctx.dim)
    if rng.random() < 0.5:
        a = rg.random_invertible(ctx.ring, rng, n, ctx.val)[0]
    else:
        a = rg.random_matrix(ctx.ring, rng, n, n, ctx.val)
    x = cat_c.CObject(n, 0, ctx.ring)
    z = Matrix.zeros(ctx.ring, 0, 0)
    return {"a": cat_c.CMorphism(x, x, a, Matrix.zeros(ctx.ring, n, 0), Matrix.zeros(ctx.ring, 0, n), z)}


@check("category.quasi-iso-iff-iso", "category-c")(_gen_endo)
def _qi_iff_iso(ctx, a):
    return _expect(ch.is_quasi_iso(cat_c.to_chain_map(a)) == cat_c.is_isomorphism(a)[0],
                   "quasi-isomorphism and isomorphism disagree")


def _gen_planted(ctx, rng, extra: int = 0):
    n, m = rng.randint(0, ctx.dim), rng.randint(0, ctx.dim)
    if extra and n + m == 0:
        n = 1
    return {"n": n, "m": m, "x": rg.planted_two_term(ctx.ring, rng, n, m, extra, min(ctx.val, 2))}


@check("category.classify-roundtrip", "category-c")(_gen_planted)
def _classify(ctx, n, m, x):
    c = cat_c.classify(x)
    w = c.witness(x)
    std = c.obj.complex
    return _first(
        _expect((c.obj.n, c.obj.m) == (n, m), f"classified as ({c.obj.n},{c.obj.m}), planted ({n},{m})"),
        _expect(c.verify(x) and w.is_chain_map(), "witness is not an isomorphism of complexes"),
        _expect(w.comp(0) @ x.d(1) @ mat_invert(w.comp(1)) == std.d(1), "witness does not carry x onto the standard object"),
    )


@check("category.classify-rejects", "category-c")(lambda ctx, rng: _gen_planted(ctx, rng, extra=1))
def _classify_rejects(ctx, n, m, x):
    try:
        cat_c.classify(x)
    except NotInC:
        return None
    return "complex with an exponent 2 summand was classified"


def _gen_split_exact(ctx, rng):
    R = ctx.ring
    half = max(1, ctx.dim // 2)
    n1, n2 = rng.randint(0, half), rng.randint(0, half)
    x1, x2 = cat_c.CObject(n1, 0, R), cat_c.CObject(n2, 0, R)
    alpha, beta, _gamma, _rho = _split_triple(ctx, rng, x1, x2)
    return {"alpha": alpha, "beta": beta}


@check("category.split-exact", "category-c")(_gen_split_exact)
def _split_exact(ctx, alpha, beta):
    w = cat_c.split_exactness(alpha, beta)
    c = cat_c.compose
    return _first(
        _expect(c(beta, w.gamma) == cat_c.c_identity(beta.target), "beta gamma != id"),
        _expect(c(w.rho, alpha) == cat_c.c_identity(alpha.source), "rho alpha != id"),
        _expect(cat_c.h0_obj(alpha.target) == cat_c.h0_obj(alpha.source) + cat_c.h0_obj(beta.target),
                "h0 ranks do not add"),
    )


# block extraction, delta, rectification


@check("zero-map.mu-data", "zero-map-engine")(lambda ctx, rng: {"phi": _gen_composable_c(ctx, rng)["phi"]})
def _mu_data(ctx, phi):
    return _expect(zm.s1s2_equality_check(phi), "mu1 and mu2 images carry different matrices")


def _gen_triangular_pair(ctx, rng):
    kind = rng.choice(("upper", "lower"))
    x, y, z = _obj(ctx, rng), _obj(ctx, rng), _obj(ctx, rng)
    return {
        "phi": rg.random_triangular(ctx.ring, rng, x, y, ctx.val, kind),
        "psi": rg.random_triangular(ctx.ring, rng, y, z, ctx.val, kind),
        "split": list(_split_triple(ctx, rng, _half_obj(ctx, rng), _half_obj(ctx, rng), lower_only=True)),
    }


def _mu_as_c(phi):
    """mu1(phi) as a morphism between objects (n, 0)."""
    R = phi.ring
    s, t = cat_c.CObject(phi.source.n, 0, R), cat_c.CObject(phi.target.n, 0, R)
    return cat_c.CMorphism(s, t, phi.nn, Matrix.zeros(R, t.n, 0), Matrix.zeros(R, 0, s.n), Matrix.zeros(R, 0, 0))


@check("zero-map.mu-functorial", "zero-map-engine")(_gen_triangular_pair)
def _mu_functorial(ctx, phi, psi, split):
    c = _compose(ctx)
    return _first(
        _expect(all(cat_c.is_lower_triangular(m) for m in split), "split triple is not lower triangular"),
        _expect(zm.mu1(c(psi, phi)) == zm.mu1(psi) @ zm.mu1(phi), "mu1 does not preserve composition"),
        _expect(zm.mu2(c(psi, phi)) == zm.mu2(psi) @ zm.mu2(phi), "mu2 does not preserve composition"),
        _expect(_split_ok(*(_mu_as_c(m) for m in split)), "mu1 image of a split sequence is not split"),
    )


def _gen_iso_only(ctx, rng):
    return {"phi": rg.random_c_iso(ctx.ring, rng, _pos_obj(ctx, rng), min(ctx.val, 2))}


@check("zero-map.mu-iso", "zero-map-engine")(_gen_iso_only)
def _mu_iso(ctx, phi):
    m1, m2 = zm.mu1(phi), zm.mu2(phi)
    return _expect(
        all(is_invertible(f.comp(k)) for f in (m1, m2) for k in (1, 0)),
        "mu image of an isomorphism is not an isomorphism",
    )


@check("zero-map.delta-equivalence", "zero-map-engine")(lambda ctx, rng: {"x": _obj(ctx, rng)})
def _delta_eq(ctx, x):
    return _expect(zm.delta_equivalence(x).is_valid(), "delta is not a homotopy equivalence")


def _gen_triangular(ctx, rng):
    x, y = _obj(ctx, rng), _obj(ctx, rng)
    return {"phi": rg.random_triangular(ctx.ring, rng, x, y, ctx.val)}


@check("zero-map.delta-naturality", "zero-map-engine")(_gen_triangular)
def _delta_nat(ctx, phi):
    sq = zm.delta_naturality(phi)
    if ctx.broken("delta-sign") and sq.homotopy is not None:
        flipped = {k: -m for k, m in sq.homotopy.h.items()}
        sq = zm.DeltaSquare(sq.lhs, sq.rhs, ch.ChainHomotopy(sq.lhs, sq.rhs, flipped))
    if cat_c.is_lower_triangular(phi):
        return _expect(sq.lhs == sq.rhs, "lower triangular: mu1(phi) delta != delta phi")
    want = Matrix.hstack(Matrix.zeros(ctx.ring, phi.target.n, phi.source.n), -phi.nm)
    diff = sq.difference()
    exp = zm.expected_delta_difference(phi)
    return _first(
        _expect(sq.is_valid(), "homotopy does not witness mu1(phi) delta ~ delta phi"),
        _expect(sq.homotopy.comp(0) == want, "homotopy differs from (0, -nm)"),
        _expect(all(diff.comp(k) == exp[k] for k in (1, 0)), "difference differs from the closed form"),
    )


def _gen_iso_chain(ctx, rng):
    x = _pos_obj(ctx, rng)
    length = rng.randint(1, 3)
    k = rng.randrange(length)
    val = min(ctx.val, 2)
    chain = rg.random_iso_chain(ctx.ring, rng, x, length, k, val)
    return {"k": k, "theta": rg.random_chain_morphism(ctx.ring, rng, chain, k, val)}


@check("zero-map.rectification", "zero-map-engine")(_gen_iso_chain)
def _rectify(ctx, k, theta):
    chain = theta.source
    r = zm.rectify(chain, k)
    again = zm.rectify(r.result, k)
    qt = zm.rectify_morphism(theta, k)
    return _first(
        _expect(chain.is_valid() and theta.is_valid(), "generated data is not a chain morphism of iso chains"),
        _expect(zm.in_smaller_class(r.result, k), "q_k output is not in the smaller class"),
        _expect(all(cat_c.is_lower_triangular(gm) for gm in r.gamma), "gamma has a non lower triangular component"),
        _expect(r.gamma_is_natural(), "gamma is not natural"),
        _expect(again.result == r.result, "rectification is not idempotent"),
        _expect(again.alpha == cat_c.c_identity(chain.objects[0]), "q_k j_k != id"),
        _expect(qt.is_valid(), "q_k(theta) is not a chain morphism"),
    )


# homotopy natural transformations


def _coherent(ctx, rng, cat=None, length: int = 2):
    cat = cat or rg.random_quiver_category(rng)
    return rg.random_coherent_hnat(ctx.ring, rng, cat, min(ctx.dim, 3), min(ctx.val, 2), length=length).theta


def _anti_chain_perturbation(ctx, rng, x, y) -> ch.ChainMap:
    """K = (L, 0): Cx -> y with L = d s - s d, so K is a chain map and K iota = 0."""
    R = ctx.ring
    w = rg.random_homotopy_maps(R, rng, x, y, min(ctx.val, 2), shift=2)
    cx = ch.cone(x)
    comps = {}
    for n in cx.degrees():
        if not y.rank(n):
            continue
        a = w.get(n - 1, Matrix.zeros(R, y.rank(n + 1), x.rank(n - 1)))
        b = w.get(n - 2, Matrix.zeros(R, y.rank(n), x.rank(n - 2)))
        L = y.d(n + 1) @ a - b @ x.d(n - 1)
        comps[n] = Matrix.hstack(L, Matrix.zeros(R, y.rank(n), x.rank(n)))
    return ch.ChainMap(cx, y, comps)


def _break_coherence(ctx, rng, theta):
    """Add a nonzero K with K iota = 0 to the witness of a composite arrow."""
    cat = theta.cat
    gens, ids = set(cat.generators), set(cat.identities.values())
    composite = sorted(a for a in cat.arrows if a not in gens and a not in ids)
    if not composite:
        return None
    a = composite[0]
    s, t = cat.arrows[a]
    for _ in range(20):
        K = _anti_chain_perturbation(ctx, rng, theta.f.obj[s], theta.g.obj[t])
        if not K.is_zero():
            arr = dict(theta.theta_arr)
            arr[a] = arr[a] + K
            return hn.HNat(theta.f, theta.g, theta.theta_obj, arr)
    return None


def _gen_cylinder(ctx, rng):
    if ctx.broken("coherence"):
        return _gen_broken(ctx, rng)
    return {"theta": _coherent(ctx, rng)}


@check("homotopy-nat.cylinder", "homotopy-nat", cost=2)(lambda ctx, rng: _gen_cylinder(ctx, rng))
def _cylinder(ctx, theta):
    if theta is None:
        return "no instance"
    hn.validate_hnat(theta)
    zz = hn.zigzag(theta)
    return _first(
        _expect(hn.Y_of(theta).is_functorial(), "Y(theta) is not functorial"),
        _expect(hn.J1(theta).is_natural(), "J1 is not natural"),
        _expect(hn.J2(theta).is_natural(), "J2 is not natural"),
        _expect(zz is not None, "zig-zag failed"),
    )


def _gen_broken(ctx, rng):
    cat = hn.path_category(rng.randint(2, 3))
    for _ in range(20):
        theta = _coherent(ctx, rng, cat, length=3)
        broken = _break_coherence(ctx, rng, theta)
        if broken is not None:
            return {"theta": broken}
    return {"theta": None}


@check("homotopy-nat.coherence-negative-control", "homotopy-nat", cost=2)(_gen_broken)
def _negative(ctx, theta):
    if theta is None:
        return "could not build a coherence violating perturbation"
    return _first(
        _expect(all(theta.witness_ok(a) for a in theta.cat.arrows), "perturbation broke a witness"),
        _expect(bool(theta.coherence_failures()), "perturbed theta is still coherent"),
        _expect(not hn.Y_of(theta).is_functorial(), "Y of an incoherent theta is functorial"),
    )


def _gen_map(ctx, rng):
    return {"f": _gen_composable_maps(ctx, rng)["a"]}


@check("homotopy-nat.quasi-isomorphisms", "homotopy-nat")(_gen_map)
def _quasi_isos(ctx, f):
    return _first(
        _expect(ch.is_acyclic(ch.cone(f.source)), "Cx is not acyclic"),
        _expect(ch.is_quasi_iso(hn.p_map(f)), "p_f is not a quasi-isomorphism"),
        _expect(ch.is_quasi_iso(hn.j2(f)), "j2_f is not a quasi-isomorphism"),
        _expect(hn.p_map(f) @ hn.j2(f) == ch.identity(f.target), "p_f j2_f != id"),
    )


def _gen_square_path(ctx, rng):
    return {"squares": _square_chain(ctx, rng, rng.randint(1, 3))}


@check("homotopy-nat.epsilon-p", "homotopy-nat", cost=2)(_gen_square_path)
def _eps_p(ctx, squares):
    rep = hn.epsilon_p_instance(squares)
    bad = sorted(k for k, v in rep.items() if not v)
    return _expect(not bad, "failed: " + ", ".join(bad))


@check("homotopy-nat.simplicial-levels", "homotopy-nat", cost=100)(
    lambda ctx, rng: {"theta": _coherent(ctx, rng, hn.path_category(1))})
def _simplicial(ctx, theta):
    data = degeneracy_extended(theta, ctx.level)
    rep = simplicial_levels_check(data)
    bad = sorted(k for k, v in rep.items() if v is False)
    if bad:
        return "failed: " + ", ".join(bad)
    if ctx.level == 0:
        return None
    try:
        simplicial_levels_check(break_level(data, ctx.level, ctx.ring.g + 1))
    except LevelIncompatible:
        return None
    return "a rescaled level was not detected"


# K_0


def _k0_class(ctx):
    if ctx.broken("k0-rank"):
        return lambda m: m.generators
    return k0.k0_class


def _gen_nonunit(ctx, rng):
    R = ctx.ring
    return {"f": R.random_unit(rng) * R.g_power(rng.randint(1, max(ctx.val, 1)))}


@check("k0.telescope", "k0-checker")(_gen_nonunit)
def _telescope(ctx, f):
    w = k0.telescope_witness(ctx.ring, f)
    cls = _k0_class(ctx)
    return _first(
        _expect(w.is_exact(), "telescope sequence is not exact"),
        _expect(cls(w.C) == 0, "R/(f) has non-zero class"),
        _expect(cls(w.B) == cls(w.A) + cls(w.C), "class is not additive on the telescope"),
    )


def _gen_modules(ctx, rng):
    def one():
        gens = rng.randint(0, ctx.dim)
        return k0.classify_module(rg.random_matrix(ctx.ring, rng, gens, rng.randint(0, ctx.dim), ctx.val))
    return {"A": one(), "C": one()}


@check("k0.additivity", "k0-checker")(_gen_modules)
def _additivity(ctx, A, C):
    s = k0.direct_sum_ses(A, C)
    cls = _k0_class(ctx)
    return _first(
        _expect(cls(s.B) == cls(s.A) + cls(s.C), "class is not additive"),
        _expect(s.length_additive() or not (A.is_torsion and C.is_torsion), "length is not additive"),
    )


def _gen_torsion(ctx, rng):
    n = rng.randint(1, ctx.dim)
    R = ctx.ring
    p, _ = rg.random_invertible(R, rng, n, min(ctx.val, 2))
    q, _ = rg.random_invertible(R, rng, n, min(ctx.val, 2))
    exps = [rng.randint(0, 5) for _ in range(n)]
    return {"m": k0.classify_module(p @ Matrix.diag(R, [R.g_power(e) for e in exps]) @ q), "exps": sorted(exps)}


@check("k0.generator-decompose", "k0-checker")(_gen_torsion)
def _decompose(ctx, m, exps):
    d = k0.generator_decompose(m)
    return _first(
        _expect(list(d.exponents) == [e for e in exps if e], "invariant factors differ from the planted ones"),
        _expect(d.is_valid(), "a step of the cyclic chain is not exact"),
        _expect(d.multiple == sum(exps), "multiple of [R/g] differs from the length"),
    )


# running


def _ctx(config: SuiteConfig) -> Ctx:
    return Ctx(make_ring(config.ring), config.max_dim, config.max_val, config.level, frozenset(config.sabotage))


def instance_count(chk: Check, config: SuiteConfig) -> int:
    if chk.anchor in config.counts:
        return config.counts[chk.anchor]
    return max(1, math.ceil(config.count / chk.cost))


def _run_one(chk: Check, ctx: Ctx, values: dict):
    try:
        return chk.run(ctx, **values)
    except GerstenLabError as e:
        return f"{type(e).__name__}: {e}"


def run_check(chk: Check, config: SuiteConfig, ctx: Ctx | None = None) -> dict:
    ctx = ctx or _ctx(config)
    n = instance_count(chk, config)
    start = time.perf_counter()
    counter = None
    for i in range(n):
        key = f"{config.seed}:{chk.anchor}:{i}"
        values = chk.gen(ctx, random.Random(key))
        reason = _run_one(chk, ctx, values)
        if reason:
            counter = {
                "instance": i,
                "rng_key": key,
                "reason": reason,
                "input": {k: encode_value(v, ctx.ring) for k, v in sorted(values.items())},
            }
            break
    out = {
        "anchor": chk.anchor,
        "module": chk.module,
        "instances": n,
        "passed": counter is None,
        "counterexample": counter,
    }
    if config.timings:
        out["seconds"] = round(time.perf_counter() - start, 3)
    return out


def selected(config: SuiteConfig) -> list[Check]:
    chosen = [c for c in CHECKS if not config.only or c.anchor in config.only]
    return sorted(chosen, key=lambda c: c.anchor)


def run_suites(config: SuiteConfig) -> dict:
    config.validate()
    ctx = _ctx(config)
    checks = [run_check(c, config, ctx) for c in selected(config)]
    return {
        "config": config.to_json(),
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def find_check(anchor: str) -> Check:
    for c in CHECKS:
        if c.anchor == anchor:
            return c
    raise ConfigInvalid(f"unknown check {anchor!r}")


def replay(anchor: str, counterexample: dict, config: SuiteConfig) -> str | None:
    """Re-run a serialized instance; returns the failure reason or None."""
    ctx = _ctx(config)
    values = {k: decode_value(v, ctx.ring) for k, v in counterexample["input"].items()}
    return _run_one(find_check(anchor), ctx, values)


def to_markdown(report: dict) -> str:
    cfg = report["config"]
    lines = [
        "# Verification report",
        "",
        f"ring `{cfg['ring']}`, seed {cfg['seed']}, count {cfg['count']}, "
        f"max_dim {cfg['max_dim']}, max_val {cfg['max_val']}, level {cfg['level']}"
        + (f", sabotage {', '.join(cfg['sabotage'])}" if cfg["sabotage"] else ""),
        "",
        "| check | module | instances | result |",
        "|---|---|---|---|",
    ]
    for c in report["checks"]:
        res = "pass" if c["passed"] else f"FAIL at {c['counterexample']['instance']}: {c['counterexample']['reason']}"
        lines.append(f"| {c['anchor']} | {c['module']} | {c['instances']} | {res} |")
    lines += ["", "all checks pass" if report["passed"] else "some checks FAIL", ""]
    return "\n".join(lines)
