"""Random instances for the property checks.

Everything takes an explicit ``random.Random`` so that a (seed, config) pair
reproduces the same instances.  Complexes are generated in a known normal
form (a sum of pieces [B --g^a--> B] and lone copies of B) and then
conjugated by random invertible matrices; keeping the normal form around
makes it cheap to produce chain maps between them.
"""

from __future__ import annotations

from dataclasses import dataclass

from gersten_lab.category import CMorphism, CObject, compose, is_isomorphism
from gersten_lab.chain import (
    ChainComplex,
    ChainHomotopy,
    ChainMap,
    HSquare,
    homotopy_to_H,
    iota,
)
from gersten_lab.hnat import (
    FiniteCat,
    HNat,
    StrictNat,
    diagram_from_generators,
    extend_from_generators,
    free_category,
)
from gersten_lab.matrix import Matrix, mat_invert
from gersten_lab.rings import random_element
from gersten_lab.zero_map import ChainMorphism, IsoChain


def random_matrix(ring, rng, rows: int, cols: int, max_val: int = 3, zero_prob: float = 0.3) -> Matrix:
    return Matrix(ring, rows, cols, [
        [random_element(ring, rng, max_val, zero_prob) for _ in range(cols)] for _ in range(rows)
    ])


def random_unit(ring, rng):
    return ring.random_unit(rng)


def random_invertible(ring, rng, n: int, max_val: int = 2) -> tuple[Matrix, Matrix]:
    """(P, P^-1) with P a permuted product of unitriangular factors and a unit diagonal."""
    z, one = ring.zero, ring.one
    low = [[one if i == j else (random_element(ring, rng, max_val, 0.4) if i > j else z) for j in range(n)] for i in range(n)]
    up = [[random_unit(ring, rng) if i == j else (random_element(ring, rng, max_val, 0.4) if i < j else z) for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    pm = [[one if j == perm[i] else z for j in range(n)] for i in range(n)]
    p = Matrix(ring, n, n, pm) @ Matrix(ring, n, n, low) @ Matrix(ring, n, n, up)
    return p, mat_invert(p)


# the category of standard objects


def random_c_object(ring, rng, max_dim: int = 3) -> CObject:
    return CObject(rng.randint(0, max_dim), rng.randint(0, max_dim), ring)


def random_c_morphism(ring, rng, src: CObject, tgt: CObject, max_val: int = 3) -> CMorphism:
    return CMorphism(
        src, tgt,
        random_matrix(ring, rng, tgt.n, src.n, max_val),
        random_matrix(ring, rng, tgt.n, src.m, max_val),
        random_matrix(ring, rng, tgt.m, src.n, max_val),
        random_matrix(ring, rng, tgt.m, src.m, max_val),
    )


def _block_diag(x: CObject, nn: Matrix, mm: Matrix) -> CMorphism:
    r = x.ring
    return CMorphism(x, x, nn, Matrix.zeros(r, x.n, x.m), Matrix.zeros(r, x.m, x.n), mm)


def elementary_lower(ring, rng, x: CObject, max_val: int = 2) -> CMorphism:
    r = ring
    return CMorphism(x, x, Matrix.identity(r, x.n), Matrix.zeros(r, x.n, x.m),
                     random_matrix(r, rng, x.m, x.n, max_val), Matrix.identity(r, x.m))


def elementary_upper(ring, rng, x: CObject, max_val: int = 2) -> CMorphism:
    r = ring
    return CMorphism(x, x, Matrix.identity(r, x.n), random_matrix(r, rng, x.n, x.m, max_val),
                     Matrix.zeros(r, x.m, x.n), Matrix.identity(r, x.m))


def random_block_diagonal_iso(ring, rng, x: CObject, max_val: int = 2) -> CMorphism:
    return _block_diag(x, random_invertible(ring, rng, x.n, max_val)[0], random_invertible(ring, rng, x.m, max_val)[0])


def random_c_iso(ring, rng, x: CObject, max_val: int = 2, factors: int | None = None) -> CMorphism:
    """Product of elementary triangular and block diagonal isomorphisms."""
    factors = factors if factors is not None else rng.randint(1, 4)
    out = random_block_diagonal_iso(ring, rng, x, max_val)
    for _ in range(factors):
        kind = rng.choice(("lower", "upper", "diag"))
        if kind == "lower":
            e = elementary_lower(ring, rng, x, max_val)
        elif kind == "upper":
            e = elementary_upper(ring, rng, x, max_val)
        else:
            e = random_block_diagonal_iso(ring, rng, x, max_val)
        out = compose(e, out)
    return out


def random_upper_iso(ring, rng, x: CObject, max_val: int = 2) -> CMorphism:
    return compose(elementary_upper(ring, rng, x, max_val), random_block_diagonal_iso(ring, rng, x, max_val))


def random_triangular(ring, rng, src: CObject, tgt: CObject, max_val: int = 3, kind: str | None = None) -> CMorphism:
    phi = random_c_morphism(ring, rng, src, tgt, max_val)
    kind = kind or rng.choice(("upper", "lower"))
    if kind == "upper":
        return CMorphism(src, tgt, phi.nn, phi.nm, Matrix.zeros(ring, tgt.m, src.n), phi.mm)
    return CMorphism(src, tgt, phi.nn, Matrix.zeros(ring, tgt.n, src.m), phi.mn, phi.mm)


def planted_two_term(ring, rng, n: int, m: int, extra: int = 0, max_val: int = 2):
    """P diag(g^a) Q with n exponents 1, m exponents 0 and ``extra`` exponents 2, shuffled."""
    exps = [1] * n + [0] * m + [2] * extra
    rng.shuffle(exps)
    size = len(exps)
    p, _ = random_invertible(ring, rng, size, max_val)
    q, _ = random_invertible(ring, rng, size, max_val)
    d = p @ Matrix.diag(ring, [ring.g_power(e) for e in exps]) @ q
    return ChainComplex(ring, {1: size, 0: size}, {1: d})


def random_iso_chain(ring, rng, x: CObject, length: int, k: int, max_val: int = 2) -> IsoChain:
    """Arrows with index > k are upper triangular, the others arbitrary isomorphisms."""
    arrows = []
    for i in range(length):
        arrows.append(random_upper_iso(ring, rng, x, max_val) if i > k else random_c_iso(ring, rng, x, max_val))
    return IsoChain(tuple([x] * (length + 1)), tuple(arrows))


def random_chain_morphism(ring, rng, chain: IsoChain, k: int, max_val: int = 2) -> ChainMorphism:
    """theta: chain -> y where y is chain conjugated by theta; components past k are upper."""
    comps = []
    for i, o in enumerate(chain.objects):
        comps.append(random_upper_iso(ring, rng, o, max_val) if i > k else random_c_iso(ring, rng, o, max_val))
    inv = [is_isomorphism(c)[1] for c in comps]
    arrows = tuple(compose(comps[i + 1], compose(a, inv[i])) for i, a in enumerate(chain.arrows))
    target = IsoChain(chain.objects, arrows)
    return ChainMorphism(chain, target, tuple(comps))


# complexes in normal form


@dataclass(frozen=True)
class Presented:
    """A complex together with its normal form and the conjugating matrices.

    ``pieces[n]`` lists (summand index, role) with role one of "top",
    "bottom", "free"; ``x.d(n) = P[n-1] @ std.d(n) @ Pinv[n]``.
    """

    x: ChainComplex
    std: ChainComplex
    summands: tuple
    pieces: dict
    P: dict
    Pinv: dict


def random_presented(ring, rng, max_rank: int = 4, length: int = 3, max_val: int = 2, lo: int = 0) -> Presented:
    """Complex supported in degrees lo .. lo + length - 1."""
    hi = lo + length - 1
    budget = {n: rng.randint(0, max_rank) for n in range(lo, hi + 1)}
    used = {n: 0 for n in budget}
    summands = []
    for _ in range(2 * max_rank * length):
        n = rng.randint(lo, hi)
        if n > lo and rng.random() < 0.6:
            if used[n] < budget[n] and used[n - 1] < budget[n - 1]:
                summands.append(("E", n, rng.randint(0, max_val)))
                used[n] += 1
                used[n - 1] += 1
        elif used[n] < budget[n]:
            summands.append(("F", n, 0))
            used[n] += 1
    pieces = {n: [] for n in range(lo, hi + 1)}
    for i, (kind, n, _a) in enumerate(summands):
        if kind == "E":
            pieces[n].append((i, "top"))
            pieces[n - 1].append((i, "bottom"))
        else:
            pieces[n].append((i, "free"))
    ranks = {n: len(p) for n, p in pieces.items()}
    d_std = {}
    for n in range(lo + 1, hi + 1):
        rows = [[ring.zero] * ranks[n] for _ in range(ranks[n - 1])]
        for c, (i, role) in enumerate(pieces[n]):
            if role == "top":
                r = pieces[n - 1].index((i, "bottom"))
                rows[r][c] = ring.g_power(summands[i][2])
        d_std[n] = Matrix(ring, ranks[n - 1], ranks[n], rows)
    std = ChainComplex(ring, ranks, d_std)
    P, Pinv = {}, {}
    for n, r in ranks.items():
        P[n], Pinv[n] = random_invertible(ring, rng, r, max_val)
    d = {n: P[n - 1] @ m @ Pinv[n] for n, m in d_std.items()}
    x = ChainComplex(ring, ranks, d)
    return Presented(x, std, tuple(summands), pieces, P, Pinv)


def random_complex(ring, rng, max_rank: int = 4, length: int = 3, max_val: int = 2) -> ChainComplex:
    return random_presented(ring, rng, max_rank, length, max_val).x


def random_homotopy_maps(ring, rng, x: ChainComplex, y: ChainComplex, max_val: int = 2, shift: int = 1) -> dict:
    """Random degreewise maps x_n -> y_{n + shift}."""
    out = {}
    for n in range(x.lo, x.hi + 1):
        if x.rank(n) and y.rank(n + shift):
            out[n] = random_matrix(ring, rng, y.rank(n + shift), x.rank(n), max_val, 0.4)
    return out


def null_homotopic(x: ChainComplex, y: ChainComplex, h: dict) -> ChainMap:
    """d h + h d."""
    ring = x.ring
    comps = {}
    for n in range(min(x.lo, y.lo) - 1, max(x.hi, y.hi) + 2):
        hn = h.get(n, Matrix.zeros(ring, y.rank(n + 1), x.rank(n)))
        hm = h.get(n - 1, Matrix.zeros(ring, y.rank(n), x.rank(n - 1)))
        if y.rank(n) and x.rank(n):
            comps[n] = y.d(n + 1) @ hn + hm @ x.d(n)
    return ChainMap(x, y, comps)


def random_chain_map(ring, rng, sx: Presented, sy: Presented, max_val: int = 2, homotopic_part: bool = True) -> ChainMap:
    """Structured part read off the normal forms plus a null-homotopic part."""
    x, y = sx.x, sy.x
    comps = {}
    degrees = sorted(set(sx.pieces) & set(sy.pieces))
    coupled = {}
    for n in degrees:
        rows = [[ring.zero] * len(sx.pieces[n]) for _ in range(len(sy.pieces[n]))]
        # a top or free piece may map anywhere into a bottom or free piece
        for c, (_, rs) in enumerate(sx.pieces[n]):
            for r, (_, rt) in enumerate(sy.pieces[n]):
                if rs != "bottom" and rt != "top":
                    rows[r][c] = random_element(ring, rng, max_val, 0.4)
        # E(n, a) -> E(n, b): top entry p, bottom entry q with g^b p = q g^a
        for c, (i, rs) in enumerate(sx.pieces[n]):
            if rs != "top":
                continue
            for r, (j, rt) in enumerate(sy.pieces[n]):
                if rt != "top" or rng.random() < 0.5:
                    continue
                a, b = sx.summands[i][2], sy.summands[j][2]
                val = random_element(ring, rng, max_val, 0.2)
                if b >= a:
                    p, q = val, val * ring.g_power(b - a)
                else:
                    p, q = val * ring.g_power(a - b), val
                rows[r][c] = ring.canon(p)
                coupled[(n - 1, i, j)] = ring.canon(q)
        comps[n] = rows
    for (n, i, j), q in coupled.items():
        if n in comps:
            c = sx.pieces[n].index((i, "bottom"))
            r = sy.pieces[n].index((j, "bottom"))
            comps[n][r][c] = q
    mats = {}
    for n, rows in comps.items():
        std = Matrix(ring, len(sy.pieces[n]), len(sx.pieces[n]), rows)
        mats[n] = sy.P[n] @ std @ sx.Pinv[n]
    f = ChainMap(x, y, mats)
    if homotopic_part:
        f = f + null_homotopic(x, y, random_homotopy_maps(ring, rng, x, y, max_val))
    return f


def random_homotopy(ring, rng, sx: Presented, sy: Presented, max_val: int = 2) -> ChainHomotopy:
    """A random f with g = f - (d h + h d); h is returned as the witness."""
    f = random_chain_map(ring, rng, sx, sy, max_val)
    h = random_homotopy_maps(ring, rng, sx.x, sy.x, max_val)
    g = f - null_homotopic(sx.x, sy.x, h)
    return ChainHomotopy(f, g, h)


def random_C_homotopy_map(ring, rng, x: ChainComplex, y: ChainComplex, max_val: int = 2) -> ChainMap:
    """A random chain map Cx -> y; all of them have this form."""
    h = random_homotopy_maps(ring, rng, x, y, max_val)
    g_zero = ChainMap(x, y, {})
    f = null_homotopic(x, y, h)
    return homotopy_to_H(ChainHomotopy(f, g_zero, h)).H


def random_square(ring, rng, sx: Presented, max_rank: int = 3, max_val: int = 2, start: ChainMap | None = None,
                  start_presented: tuple | None = None) -> tuple[HSquare, tuple]:
    """A homotopy commutative square out of [f: x -> x'].

    With ``start`` given the square begins at that chain map (a is a unit
    multiple of the identity); otherwise f is a unit multiple of the
    identity and a, g are random.  Returns the square and the presented
    target pair for chaining.
    """
    c = random_unit(ring, rng)
    cinv = 1 / c
    if start is None:
        x = sx.x
        f = ChainMap(x, x, {n: Matrix.scalar(ring, x.rank(n), c) for n in x.degrees()})
        sy = random_presented(ring, rng, max_rank, 3, max_val)
        sy2 = random_presented(ring, rng, max_rank, 3, max_val)
        a = random_chain_map(ring, rng, sx, sy, max_val)
        g = random_chain_map(ring, rng, sy, sy2, max_val)
        H = random_C_homotopy_map(ring, rng, x, sy2.x, max_val)
        b = (g @ a - H @ iota(x)).scale(cinv)
        sq = HSquare(f, g, a, b, H)
        return sq, (sy, sy2)
    sx_src, sx_tgt = start_presented
    f = start
    x = f.source
    a = ChainMap(x, x, {n: Matrix.scalar(ring, x.rank(n), c) for n in x.degrees()})
    sy2 = random_presented(ring, rng, max_rank, 3, max_val)
    b = random_chain_map(ring, rng, sx_tgt, sy2, max_val)
    H = random_C_homotopy_map(ring, rng, x, sy2.x, max_val)
    g = (b @ f + H @ iota(x)).scale(cinv)
    return HSquare(f, g, a, b, H), (sx_src, sy2)


# coherent homotopy natural transformations


QUIVERS = {
    "path1": (["0", "1"], [("a1", "0", "1")]),
    "path2": (["0", "1", "2"], [("a1", "0", "1"), ("a2", "1", "2")]),
    "path3": (["0", "1", "2", "3"], [("a1", "0", "1"), ("a2", "1", "2"), ("a3", "2", "3")]),
    "span": (["0", "1", "2"], [("a1", "0", "1"), ("a2", "0", "2")]),
    "square": (["0", "1", "2", "3"], [("a1", "0", "1"), ("a2", "1", "3"), ("b1", "0", "2"), ("b2", "2", "3")]),
}


def random_quiver_category(rng, max_path: int = 3) -> FiniteCat:
    names = [f"path{k}" for k in range(1, max_path + 1)] + ["span"]
    objs, edges = QUIVERS[rng.choice(names)]
    return free_category(objs, edges)


def _hget(h: dict, n: int, rows: int, cols: int, ring) -> Matrix:
    m = h.get(n)
    return m if m is not None else Matrix.zeros(ring, rows, cols)


def _conjugate(x: ChainComplex, u: dict) -> tuple[ChainComplex, dict]:
    """The complex u x u^-1 and the inverses of the u_n."""
    ring = x.ring
    uinv = {n: mat_invert(m) for n, m in u.items()}
    d = {n: u[n - 1] @ x.d(n) @ uinv[n] for n in x.degrees() if n - 1 in u}
    return ChainComplex(ring, x.ranks, d), uinv


@dataclass(frozen=True)
class HNatInstance:
    theta: HNat
    alpha: StrictNat  # the strict transformation theta was perturbed from
    presented: dict


def random_coherent_hnat(ring, rng, cat: FiniteCat, max_rank: int = 3, max_val: int = 2,
                         unit_scalar: bool = True, length: int = 2) -> HNatInstance:
    """theta_i = c u_i + (d k_i + k_i d) over a free category, witnesses by star.

    f is random on the generators, g is f conjugated by random isomorphisms
    u_i, and the witness on a generator a: i -> j comes from the homotopy
    k_j f_a - g_a k_i plus a term d w - w d that cancels in the boundary.
    """
    pres = {i: random_presented(ring, rng, max_rank, length, max_val) for i in cat.objects}
    fobj = {i: p.x for i, p in pres.items()}
    fgen = {}
    for label in cat.generators:
        s, t = cat.arrows[label]
        fgen[label] = random_chain_map(ring, rng, pres[s], pres[t], max_val)
    f = diagram_from_generators(cat, fobj, fgen)
    u, gobj = {}, {}
    for i, x in fobj.items():
        ui = {n: random_invertible(ring, rng, x.rank(n), max_val)[0] for n in x.degrees()}
        gobj[i], uinv = _conjugate(x, ui)
        u[i] = (ChainMap(x, gobj[i], ui), ChainMap(gobj[i], x, uinv))
    ggen = {}
    for label in cat.generators:
        s, t = cat.arrows[label]
        ggen[label] = u[t][0] @ fgen[label] @ u[s][1]
    g = diagram_from_generators(cat, gobj, ggen)
    alpha = StrictNat(f, g, {i: u[i][0] for i in cat.objects})
    c = random_unit(ring, rng) if unit_scalar else random_element(ring, rng, max_val, 0.0)
    k = {i: random_homotopy_maps(ring, rng, fobj[i], gobj[i], max_val) for i in cat.objects}
    theta_obj = {i: u[i][0].scale(c) + null_homotopic(fobj[i], gobj[i], k[i]) for i in cat.objects}
    theta_gen = {}
    for label in cat.generators:
        s, t = cat.arrows[label]
        x, y = fobj[s], gobj[t]
        fa, ga = f.arr[label], g.arr[label]
        w = random_homotopy_maps(ring, rng, x, y, max_val, shift=2)
        h = {}
        for n in range(x.lo, x.hi + 1):
            if not y.rank(n + 1) or not x.rank(n):
                continue
            kt = _hget(k[t], n, y.rank(n + 1), fobj[t].rank(n), ring)
            ks = _hget(k[s], n, gobj[s].rank(n + 1), x.rank(n), ring)
            wn = _hget(w, n, y.rank(n + 2), x.rank(n), ring)
            wm = _hget(w, n - 1, y.rank(n + 1), x.rank(n - 1), ring)
            h[n] = kt @ fa.comp(n) - ga.comp(n + 1) @ ks + y.d(n + 2) @ wn - wm @ x.d(n)
        hom = ChainHomotopy(theta_obj[t] @ fa, ga @ theta_obj[s], h)
        theta_gen[label] = homotopy_to_H(hom).H
    theta = extend_from_generators(cat, f, g, theta_obj, theta_gen)
    return HNatInstance(theta, alpha, pres)
