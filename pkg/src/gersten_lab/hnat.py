"""Homotopy natural transformations over finite index categories.

Sign convention: the witness attached to an arrow a: i -> j is a chain map
theta_a: C(f_i) -> g_j with

    theta_a iota = theta_j f_a - g_a theta_i,

so (f_a, g_a, theta_a) is a homotopy commutative square from [theta_i] to
[theta_j] and coherence reads theta_{ba} = theta_b * theta_a.  With this
convention the cylinder Y(theta)_a = (g_a, -theta_a; 0, C f_a) and the maps
j1 = (theta; -iota), j2 = (id; 0) are strict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from gersten_lab.chain import (
    ChainComplex,
    ChainMap,
    _grid,
    cone,
    cone_map,
    direct_sum,
    identity,
    iota,
    is_quasi_iso,
    r_map,
    star,
    sum_map,
    zero_map,
)
from gersten_lab.errors import (
    CoherenceFailure,
    ComponentNotEquivalence,
    NotAHomotopy,
    NotFree,
    NotFunctorial,
    ShapeMismatch,
)

# index categories


@dataclass(frozen=True)
class FiniteCat:
    """Objects, labelled arrows and a full composition table.

    ``compose[(b, a)]`` is the label of b after a.  Identities are arrows
    like any other; ``identities[i]`` names the one on object i.
    """

    objects: tuple[str, ...]
    arrows: Mapping[str, tuple[str, str]]
    compose: Mapping[tuple[str, str], str]
    identities: Mapping[str, str]
    generators: tuple[str, ...] = ()

    def src(self, a: str) -> str:
        return self.arrows[a][0]

    def dst(self, a: str) -> str:
        return self.arrows[a][1]

    def composable_pairs(self) -> list[tuple[str, str]]:
        return [(b, a) for a in self.arrows for b in self.arrows if self.src(b) == self.dst(a)]

    def non_identity_arrows(self) -> list[str]:
        ids = set(self.identities.values())
        return [a for a in self.arrows if a not in ids]

    def check(self) -> "FiniteCat":
        """Closure, unit and associativity of the table."""
        for i in self.objects:
            e = self.identities.get(i)
            if e is None or self.arrows.get(e) != (i, i):
                raise ShapeMismatch(f"object {i} lacks an identity")
        for b, a in self.composable_pairs():
            ba = self.compose.get((b, a))
            if ba is None:
                raise ShapeMismatch(f"composite {b} after {a} missing from the table")
            if self.arrows[ba] != (self.src(a), self.dst(b)):
                raise ShapeMismatch(f"composite {ba} has the wrong endpoints")
        for a in self.arrows:
            if self.compose[(self.identities[self.dst(a)], a)] != a or self.compose[(a, self.identities[self.src(a)])] != a:
                raise ShapeMismatch(f"identities do not act trivially on {a}")
        for a in self.arrows:
            for b in self.arrows:
                if self.src(b) != self.dst(a):
                    continue
                for c in self.arrows:
                    if self.src(c) != self.dst(b):
                        continue
                    if self.compose[(c, self.compose[(b, a)])] != self.compose[(self.compose[(c, b)], a)]:
                        raise ShapeMismatch(f"composition is not associative on {c}, {b}, {a}")
        return self

    def factorisation(self, a: str) -> tuple[str, ...]:
        """Generators whose composite is ``a``, in order of application (free categories only)."""
        return tuple(a.split(".")[::-1]) if a not in self.identities.values() else ()


def free_category(objects: Sequence[str], quiver: Sequence[tuple[str, str, str]]) -> FiniteCat:
    """All paths of an acyclic quiver given as (label, src, dst).

    A path of generators a1, ..., ak (applied in that order) is labelled
    ``"ak. ... .a1"``.  Cycles make the category infinite and raise NotFree.
    """
    objects = tuple(objects)
    out: dict[str, list[tuple[str, str]]] = {o: [] for o in objects}
    for label, s, t in quiver:
        if "." in label or label.startswith("id_"):
            raise ShapeMismatch(f"reserved generator label {label!r}")
        if s not in out or t not in out:
            raise ShapeMismatch(f"generator {label} has unknown endpoints")
        out[s].append((label, t))

    state: dict[str, int] = {}

    def visit(v):
        state[v] = 1
        for _, w in out[v]:
            if state.get(w) == 1:
                raise NotFree("quiver has a cycle, the free category is infinite")
            if w not in state:
                visit(w)
        state[v] = 2

    for o in objects:
        if o not in state:
            visit(o)

    arrows: dict[str, tuple[str, str]] = {}
    paths: dict[str, tuple[str, ...]] = {}
    identities = {o: f"id_{o}" for o in objects}
    for o in objects:
        arrows[identities[o]] = (o, o)
        paths[identities[o]] = ()

    def extend(start, here, seq):
        for label, t in out[here]:
            nseq = seq + (label,)
            name = ".".join(reversed(nseq))
            arrows[name] = (start, t)
            paths[name] = nseq
            extend(start, t, nseq)

    for o in objects:
        extend(o, o, ())

    by_path = {(arrows[k][0], p): k for k, p in paths.items()}
    comp = {}
    for a, (s, m) in arrows.items():
        for b, (m2, t) in arrows.items():
            if m2 == m:
                comp[(b, a)] = by_path[(s, paths[a] + paths[b])]
    return FiniteCat(objects, arrows, comp, identities, tuple(label for label, _, _ in quiver))


def path_category(length: int) -> FiniteCat:
    """0 -> 1 -> ... -> length with generators a1, ..., a_length."""
    objs = [str(i) for i in range(length + 1)]
    return free_category(objs, [(f"a{i + 1}", str(i), str(i + 1)) for i in range(length)])


# functors and transformations


@dataclass(frozen=True)
class Diagram:
    """Functor data: a complex per object, a chain map per arrow."""

    cat: FiniteCat
    obj: Mapping[str, ChainComplex]
    arr: Mapping[str, ChainMap]

    def check(self) -> "Diagram":
        for a, (s, t) in self.cat.arrows.items():
            f = self.arr.get(a)
            if f is None or f.source != self.obj[s] or f.target != self.obj[t]:
                raise NotFunctorial(f"arrow {a} is not mapped between the images of its endpoints")
            if not f.is_chain_map():
                raise NotFunctorial(f"image of {a} is not a chain map")
        for i, e in self.cat.identities.items():
            if self.arr[e] != identity(self.obj[i]):
                raise NotFunctorial(f"identity of {i} is not preserved")
        for (b, a), ba in self.cat.compose.items():
            if self.arr[ba] != self.arr[b] @ self.arr[a]:
                raise NotFunctorial(f"composite {b} after {a} is not preserved")
        return self

    def is_functorial(self) -> bool:
        try:
            self.check()
        except NotFunctorial:
            return False
        return True


def diagram_from_generators(cat: FiniteCat, obj: Mapping[str, ChainComplex], gens: Mapping[str, ChainMap]) -> Diagram:
    """Extend generator images over a free category by composition."""
    arr = {}
    for a in cat.arrows:
        s = cat.src(a)
        f = identity(obj[s])
        for gen in cat.factorisation(a):
            f = gens[gen] @ f
        arr[a] = f
    return Diagram(cat, dict(obj), arr)


@dataclass(frozen=True)
class StrictNat:
    """Componentwise chain maps alpha_i: f_i -> g_i with g_a alpha_i = alpha_j f_a."""

    source: Diagram
    target: Diagram
    comps: Mapping[str, ChainMap]

    def failures(self) -> list[str]:
        bad = []
        for a, (s, t) in self.source.cat.arrows.items():
            if self.target.arr[a] @ self.comps[s] != self.comps[t] @ self.source.arr[a]:
                bad.append(a)
        return bad

    def is_natural(self) -> bool:
        return not self.failures()


def identity_nat(f: Diagram) -> StrictNat:
    return StrictNat(f, f, {i: identity(x) for i, x in f.obj.items()})


@dataclass(frozen=True)
class HNat:
    """theta_i: f_i -> g_i and theta_a: C(f_i) -> g_j for every arrow a: i -> j."""

    f: Diagram
    g: Diagram
    theta_obj: Mapping[str, ChainMap]
    theta_arr: Mapping[str, ChainMap]

    @property
    def cat(self) -> FiniteCat:
        return self.f.cat

    def witness_ok(self, a: str) -> bool:
        s, t = self.cat.arrows[a]
        H = self.theta_arr[a]
        x = self.f.obj[s]
        if H.source != cone(x) or H.target != self.g.obj[t] or not H.is_chain_map():
            return False
        return H @ iota(x) == self.theta_obj[t] @ self.f.arr[a] - self.g.arr[a] @ self.theta_obj[s]

    def star_of(self, b: str, a: str) -> ChainMap:
        return star(self.theta_arr[b], self.theta_arr[a], self.f.arr[a], self.g.arr[b])

    def coherence_failures(self) -> list[tuple[str, str]]:
        bad = []
        for e in self.cat.identities.values():
            if not self.theta_arr[e].is_zero():
                bad.append((e, e))
        for (b, a), ba in self.cat.compose.items():
            if self.theta_arr[ba] != self.star_of(b, a):
                bad.append((b, a))
        return bad


def strict_as_hnat(alpha: StrictNat) -> HNat:
    """A strict transformation with zero witnesses on every arrow."""
    f, g = alpha.source, alpha.target
    arr = {a: zero_map(cone(f.obj[s]), g.obj[t]) for a, (s, t) in f.cat.arrows.items()}
    return HNat(f, g, dict(alpha.comps), arr)


def validate_hnat(theta: HNat) -> HNat:
    theta.f.check()
    theta.g.check()
    if theta.f.cat != theta.g.cat:
        raise ShapeMismatch("f and g live on different index categories")
    for i in theta.cat.objects:
        m = theta.theta_obj.get(i)
        if m is None or m.source != theta.f.obj[i] or m.target != theta.g.obj[i] or not m.is_chain_map():
            raise ShapeMismatch(f"theta_{i} is not a chain map f_{i} -> g_{i}")
    for a in theta.cat.arrows:
        if a not in theta.theta_arr or not theta.witness_ok(a):
            raise NotAHomotopy(f"theta_{a} does not witness its square")
    bad = theta.coherence_failures()
    if bad:
        b, a = bad[0]
        raise CoherenceFailure(f"theta_({b} after {a}) != theta_{b} * theta_{a}", pair=(b, a))
    return theta


def extend_from_generators(
    cat: FiniteCat,
    f: Diagram,
    g: Diagram,
    theta_obj: Mapping[str, ChainMap],
    theta_gen: Mapping[str, ChainMap],
) -> HNat:
    """Witnesses on composites by iterated star along the generator path."""
    if set(cat.generators) != set(theta_gen):
        raise NotFree("witnesses must be given on exactly the generating arrows")
    arr = {}
    for a, (s, t) in cat.arrows.items():
        seq = cat.factorisation(a)
        if not seq:
            arr[a] = zero_map(cone(f.obj[s]), g.obj[t])
            continue
        H = theta_gen[seq[0]]
        done = seq[0]
        for gen in seq[1:]:
            H = star(theta_gen[gen], H, f.arr[done], g.arr[gen])
            done = f"{gen}.{done}"
        arr[a] = H
    return HNat(f, g, dict(theta_obj), arr)


def compose_mixed(alpha: StrictNat, beta: HNat) -> HNat:
    """beta after alpha: (beta alpha)_a = beta_a C(alpha_i)."""
    if alpha.target.obj != beta.f.obj:
        raise ShapeMismatch("strict transformation does not end where the homotopy one starts")
    cat = beta.cat
    obj = {i: beta.theta_obj[i] @ alpha.comps[i] for i in cat.objects}
    arr = {a: beta.theta_arr[a] @ cone_map(alpha.comps[cat.src(a)]) for a in cat.arrows}
    return HNat(alpha.source, beta.g, obj, arr)


def compose_mixed2(beta: HNat, gamma: StrictNat) -> HNat:
    """gamma after beta: (gamma beta)_a = gamma_j beta_a."""
    if gamma.source.obj != beta.g.obj:
        raise ShapeMismatch("homotopy transformation does not end where the strict one starts")
    cat = beta.cat
    obj = {i: gamma.comps[i] @ beta.theta_obj[i] for i in cat.objects}
    arr = {a: gamma.comps[cat.dst(a)] @ beta.theta_arr[a] for a in cat.arrows}
    return HNat(beta.f, gamma.target, obj, arr)


def hnat_equal(x: HNat, y: HNat) -> bool:
    return (
        x.f.obj == y.f.obj and x.g.obj == y.g.obj
        and all(x.theta_obj[i] == y.theta_obj[i] for i in x.cat.objects)
        and all(x.theta_arr[a] == y.theta_arr[a] for a in x.cat.arrows)
    )


# the cylinder and its zig-zag


def y_object(f: ChainMap) -> ChainComplex:
    """Y(f) = y + Cx for f: x -> y (a plain direct sum)."""
    return direct_sum(f.target, cone(f.source))


def y_arrow(f: ChainMap, f2: ChainMap, a: ChainMap, b: ChainMap, H: ChainMap) -> ChainMap:
    """(b, -H; 0, Ca): Y(f) -> Y(f2) for a square (a, b, H) from f to f2."""
    return sum_map(
        [f.target, cone(f.source)], [f2.target, cone(f2.source)],
        [[b, -H], [None, cone_map(a)]],
    )


def j1(f: ChainMap) -> ChainMap:
    """(f; -iota_x): x -> Y(f)."""
    x, y = f.source, f.target
    return sum_map([x], [y, cone(x)], [[f], [-iota(x)]])


def j2(f: ChainMap) -> ChainMap:
    """(id; 0): y -> Y(f)."""
    x, y = f.source, f.target
    return sum_map([y], [y, cone(x)], [[identity(y)], [None]])


def p_map(f: ChainMap) -> ChainMap:
    """(id, 0): Y(f) -> y."""
    x, y = f.source, f.target
    return sum_map([y, cone(x)], [y], [[identity(y), None]])


def Y_of(theta: HNat) -> Diagram:
    cat = theta.cat
    obj = {i: y_object(theta.theta_obj[i]) for i in cat.objects}
    arr = {}
    for a, (s, t) in cat.arrows.items():
        arr[a] = y_arrow(theta.theta_obj[s], theta.theta_obj[t], theta.f.arr[a], theta.g.arr[a], theta.theta_arr[a])
    return Diagram(cat, obj, arr)


def J1(theta: HNat) -> StrictNat:
    return StrictNat(theta.f, Y_of(theta), {i: j1(theta.theta_obj[i]) for i in theta.cat.objects})


def J2(theta: HNat) -> StrictNat:
    return StrictNat(theta.g, Y_of(theta), {i: j2(theta.theta_obj[i]) for i in theta.cat.objects})


@dataclass(frozen=True)
class ZigZag:
    """f --J1--> Y(theta) <--J2-- g."""

    Y: Diagram
    J1: StrictNat
    J2: StrictNat


def zigzag(theta: HNat) -> ZigZag:
    for i, m in theta.theta_obj.items():
        if not is_quasi_iso(m):
            raise ComponentNotEquivalence(f"theta_{i} is not a quasi-isomorphism")
    z = ZigZag(Y_of(theta), J1(theta), J2(theta))
    for name, nat in (("J1", z.J1), ("J2", z.J2)):
        for i, m in nat.comps.items():
            if not is_quasi_iso(m):
                raise ComponentNotEquivalence(f"{name} component at {i} is not a quasi-isomorphism")
    return z


# the example built from homotopy commutative squares


@dataclass(frozen=True)
class SquareInstance:
    """Diagrams s, t, Y over the path category of composable squares, and eps, p, j1, j2."""

    cat: FiniteCat
    s: Diagram
    t: Diagram
    Y: Diagram
    eps: HNat
    p: HNat
    J1: StrictNat
    J2: StrictNat


def _p_arrow(f: ChainMap, f2: ChainMap, H: ChainMap) -> ChainMap:
    """(0, -H r_x) on C(Y(f)) = C(y) + CCx, laid out degreewise as Y(f)_{n-1} + Y(f)_n."""
    x, y = f.source, f.target
    ring = x.ring
    Hr = H @ r_map(x)
    cx = cone(x)
    src = cone(y_object(f))
    comps = {}
    for n in src.degrees():
        m = Hr.comp(n)
        k = cx.rank(n - 1)
        left = m.submatrix(0, m.rows, 0, k)
        right = m.submatrix(0, m.rows, k, m.cols)
        comps[n] = _grid(
            ring, [f2.target.rank(n)], [y.rank(n - 1), k, y.rank(n), cx.rank(n)],
            {(0, 1): -left, (0, 3): -right},
        )
    return ChainMap(src, f2.target, comps)


def square_instance(squares: Sequence) -> SquareInstance:
    """Build the eps/p data over the path category of the given composable squares.

    Each square is an HSquare (a, b, H) from [f] to [g]; consecutive squares
    must share the middle chain map.
    """
    n = len(squares)
    for k in range(n - 1):
        if squares[k].g != squares[k + 1].f:
            raise ShapeMismatch("squares are not composable")
    cat = path_category(n)
    maps = [squares[0].f] + [sq.g for sq in squares]
    s = diagram_from_generators(cat, {str(i): m.source for i, m in enumerate(maps)},
                                {f"a{k + 1}": sq.a for k, sq in enumerate(squares)})
    t = diagram_from_generators(cat, {str(i): m.target for i, m in enumerate(maps)},
                                {f"a{k + 1}": sq.b for k, sq in enumerate(squares)})
    eps = extend_from_generators(cat, s, t, {str(i): m for i, m in enumerate(maps)},
                                 {f"a{k + 1}": sq.H for k, sq in enumerate(squares)})
    Yd = Y_of(eps)
    p_obj = {str(i): p_map(m) for i, m in enumerate(maps)}
    p_arr = {}
    for a, (i, j) in cat.arrows.items():
        p_arr[a] = _p_arrow(maps[int(i)], maps[int(j)], eps.theta_arr[a])
    p = HNat(Yd, t, p_obj, p_arr)
    J1n = StrictNat(s, Yd, {str(i): j1(m) for i, m in enumerate(maps)})
    J2n = StrictNat(t, Yd, {str(i): j2(m) for i, m in enumerate(maps)})
    return SquareInstance(cat, s, t, Yd, eps, p, J1n, J2n)


def epsilon_p_instance(squares) -> dict[str, bool]:
    """Named checks of the eps/p example; every value is True when the identities hold."""
    if not isinstance(squares, (list, tuple)):
        squares = [squares]
    inst = square_instance(squares)
    report: dict[str, bool] = {}

    def ok(fn) -> bool:
        try:
            fn()
        except Exception:  # noqa: BLE001 - any failure is a failed check
            return False
        return True

    report["eps_coherent"] = ok(lambda: validate_hnat(inst.eps))
    report["p_coherent"] = ok(lambda: validate_hnat(inst.p))
    report["Y_functorial"] = inst.Y.is_functorial()
    report["J1_natural"] = inst.J1.is_natural()
    report["J2_natural"] = inst.J2.is_natural()
    report["p_J1_is_eps"] = hnat_equal(compose_mixed(inst.J1, inst.p), inst.eps)
    report["p_J2_is_id"] = hnat_equal(compose_mixed(inst.J2, inst.p), strict_as_hnat(identity_nat(inst.t)))
    report["p_quasi_iso"] = all(is_quasi_iso(m) for m in inst.p.theta_obj.values())
    report["j2_quasi_iso"] = all(is_quasi_iso(m) for m in inst.J2.comps.values())
    return report
