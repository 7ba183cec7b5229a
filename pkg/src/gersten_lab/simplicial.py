"""Level-wise checks for simplicial families of homotopy natural transformations.

A truncated simplicial index category is given by finite categories J_n
(n <= N) and, for every monotone phi: [m] -> [n], a functor
J(phi): J_n -> J_m.  Functors f, g come as diagrams f_n, g_n on J_n with
structure maps f_phi: f_m J(phi) -> f_n (strict natural transformations;
the identity when f_m J(phi) is literally f_n).  The family theta_n is
compatible when theta_n f_phi = g_phi (theta_m J(phi)) as homotopy natural
transformations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Mapping

from gersten_lab.chain import cone, cone_map, sum_map
from gersten_lab.errors import LevelIncompatible, NotFunctorial, ShapeMismatch
from gersten_lab.hnat import (
    J1,
    J2,
    Diagram,
    FiniteCat,
    HNat,
    StrictNat,
    Y_of,
    compose_mixed,
    compose_mixed2,
    hnat_equal,
    identity_nat,
    validate_hnat,
)


def monotone_maps(m: int, n: int) -> list[tuple[int, ...]]:
    """All non-decreasing phi: [m] -> [n], as tuples of images."""
    return list(combinations_with_replacement(range(n + 1), m + 1))


def all_monotone(N: int) -> list[tuple[int, tuple[int, ...]]]:
    """(n, phi) for every monotone phi: [m] -> [n] with m, n <= N."""
    return [(n, phi) for n in range(N + 1) for m in range(N + 1) for phi in monotone_maps(m, n)]


@dataclass(frozen=True)
class IndexFunctor:
    source: FiniteCat
    target: FiniteCat
    obj: Mapping[str, str]
    arr: Mapping[str, str]

    def check(self) -> "IndexFunctor":
        s, t = self.source, self.target
        for a, (i, j) in s.arrows.items():
            if t.arrows[self.arr[a]] != (self.obj[i], self.obj[j]):
                raise NotFunctorial(f"index functor moves the endpoints of {a}")
        for i, e in s.identities.items():
            if self.arr[e] != t.identities[self.obj[i]]:
                raise NotFunctorial(f"index functor does not preserve the identity of {i}")
        for (b, a), ba in s.compose.items():
            if t.compose[(self.arr[b], self.arr[a])] != self.arr[ba]:
                raise NotFunctorial(f"index functor does not preserve {b} after {a}")
        return self

    def then(self, other: "IndexFunctor") -> "IndexFunctor":
        """other after self."""
        return IndexFunctor(
            self.source, other.target,
            {i: other.obj[v] for i, v in self.obj.items()},
            {a: other.arr[v] for a, v in self.arr.items()},
        )


def identity_functor(cat: FiniteCat) -> IndexFunctor:
    return IndexFunctor(cat, cat, {i: i for i in cat.objects}, {a: a for a in cat.arrows})


def pull_back_diagram(d: Diagram, F: IndexFunctor) -> Diagram:
    return Diagram(F.source, {i: d.obj[F.obj[i]] for i in F.source.objects},
                   {a: d.arr[F.arr[a]] for a in F.source.arrows})


def pull_back_strict(alpha: StrictNat, F: IndexFunctor) -> StrictNat:
    return StrictNat(pull_back_diagram(alpha.source, F), pull_back_diagram(alpha.target, F),
                     {i: alpha.comps[F.obj[i]] for i in F.source.objects})


def pull_back_hnat(theta: HNat, F: IndexFunctor) -> HNat:
    return HNat(
        pull_back_diagram(theta.f, F), pull_back_diagram(theta.g, F),
        {i: theta.theta_obj[F.obj[i]] for i in F.source.objects},
        {a: theta.theta_arr[F.arr[a]] for a in F.source.arrows},
    )


def _compose_strict(beta: StrictNat, alpha: StrictNat) -> StrictNat:
    return StrictNat(alpha.source, beta.target, {i: beta.comps[i] @ alpha.comps[i] for i in alpha.comps})


def _strict_equal(x: StrictNat, y: StrictNat) -> bool:
    return x.source.obj == y.source.obj and x.target.obj == y.target.obj and all(
        x.comps[i] == y.comps[i] for i in x.comps
    )


@dataclass(frozen=True)
class SimplicialHNat:
    """Levels 0..N of a simplicial homotopy natural transformation.

    ``index[(n, phi)]`` is J(phi): J_n -> J_m; ``f_maps`` / ``g_maps`` hold
    the structure transformations, missing entries meaning identities.
    """

    N: int
    levels: Mapping[int, HNat]
    index: Mapping[tuple, IndexFunctor]
    f_maps: Mapping[tuple, StrictNat] = field(default_factory=dict)
    g_maps: Mapping[tuple, StrictNat] = field(default_factory=dict)

    def f_phi(self, n: int, phi: tuple) -> StrictNat:
        return self._structure(self.f_maps, n, phi, "f")

    def g_phi(self, n: int, phi: tuple) -> StrictNat:
        return self._structure(self.g_maps, n, phi, "g")

    def _structure(self, table, n, phi, which) -> StrictNat:
        got = table.get((n, phi))
        if got is not None:
            return got
        m = len(phi) - 1
        F = self.index[(n, phi)]
        lower = getattr(self.levels[m], which)
        upper = getattr(self.levels[n], which)
        src = pull_back_diagram(lower, F)
        if src.obj != upper.obj or any(src.arr[a] != upper.arr[a] for a in upper.cat.arrows):
            raise LevelIncompatible(f"{which}_{m} J(phi) differs from {which}_{n} and no structure map is given",
                                    phi=(n, phi))
        return identity_nat(upper)


def y_structure(theta_m: HNat, theta_n: HNat, F: IndexFunctor, fphi: StrictNat, gphi: StrictNat,
                y_m: Diagram | None = None, y_n: Diagram | None = None) -> StrictNat:
    """Y(f_phi, g_phi) = diag(g_phi, C f_phi): Y(theta_m) J(phi) -> Y(theta_n)."""
    src = pull_back_diagram(y_m or Y_of(theta_m), F)
    tgt = y_n or Y_of(theta_n)
    comps = {}
    for i in F.source.objects:
        a_i, b_i = fphi.comps[i], gphi.comps[i]
        th_m = theta_m.theta_obj[F.obj[i]]
        th_n = theta_n.theta_obj[i]
        comps[i] = sum_map(
            [th_m.target, cone(th_m.source)],
            [th_n.target, cone(th_n.source)],
            [[b_i, None], [None, cone_map(a_i)]],
        )
    return StrictNat(src, tgt, comps)


def simplicial_levels_check(data: SimplicialHNat) -> dict:
    """Raises LevelIncompatible at the first phi where theta_n f_phi != g_phi theta_m."""
    if data.N > 3:
        raise ShapeMismatch("levels are checked up to N = 3")
    report = {"levels_valid": True, "maps_checked": 0, "index_functorial": True,
              "Y_natural": True, "Y_functorial": True, "J1_compatible": True, "J2_compatible": True}
    for n in range(data.N + 1):
        validate_hnat(data.levels[n])
    maps = all_monotone(data.N)
    ys = {}
    cyl = {n: Y_of(th) for n, th in data.levels.items()}
    j1s = {n: J1(th) for n, th in data.levels.items()}
    j2s = {n: J2(th) for n, th in data.levels.items()}
    for n, phi in maps:
        m = len(phi) - 1
        F = data.index[(n, phi)].check()
        th_n, th_m = data.levels[n], data.levels[m]
        fphi, gphi = data.f_phi(n, phi), data.g_phi(n, phi)
        lhs = compose_mixed(fphi, th_n)
        rhs = compose_mixed2(pull_back_hnat(th_m, F), gphi)
        if not hnat_equal(lhs, rhs):
            raise LevelIncompatible(f"theta_{n} f_phi != g_phi theta_{m} for phi = {phi}", phi=(n, phi))
        y = y_structure(th_m, th_n, F, fphi, gphi, cyl[m], cyl[n])
        ys[(n, phi)] = y
        if not y.is_natural():
            report["Y_natural"] = False
        j1_lhs = _compose_strict(y, pull_back_strict(j1s[m], F))
        j1_rhs = _compose_strict(j1s[n], fphi)
        if not _strict_equal(j1_lhs, j1_rhs):
            report["J1_compatible"] = False
        j2_lhs = _compose_strict(y, pull_back_strict(j2s[m], F))
        j2_rhs = _compose_strict(j2s[n], gphi)
        if not _strict_equal(j2_lhs, j2_rhs):
            report["J2_compatible"] = False
        report["maps_checked"] += 1
    # functoriality: J(phi psi) = J(psi) J(phi) and Y_{phi psi} = Y_phi (Y_psi J(phi))
    for n, phi in maps:
        m = len(phi) - 1
        for psi in (p for mm in range(data.N + 1) for p in monotone_maps(mm, m)):
            comp = tuple(phi[k] for k in psi)
            F_phi, F_psi, F_comp = data.index[(n, phi)], data.index[(m, psi)], data.index[(n, comp)]
            if dict(F_phi.then(F_psi).obj) != dict(F_comp.obj) or dict(F_phi.then(F_psi).arr) != dict(F_comp.arr):
                report["index_functorial"] = False
                continue
            whiskered = pull_back_strict(ys[(m, psi)], F_phi)
            if not _strict_equal(_compose_strict(ys[(n, phi)], whiskered), ys[(n, comp)]):
                report["Y_functorial"] = False
    return report


# example families


def discrete_times(cat: FiniteCat, labels: list[str]) -> FiniteCat:
    """cat x (discrete set of labels)."""
    objs = tuple(f"{i}|{c}" for i in cat.objects for c in labels)
    arrows = {f"{a}|{c}": (f"{s}|{c}", f"{t}|{c}") for a, (s, t) in cat.arrows.items() for c in labels}
    comp = {(f"{b}|{c}", f"{a}|{c}"): f"{ba}|{c}" for (b, a), ba in cat.compose.items() for c in labels}
    ids = {f"{i}|{c}": f"{e}|{c}" for i, e in cat.identities.items() for c in labels}
    return FiniteCat(objs, arrows, comp, ids)


def _thresholds(n: int) -> list[tuple[int, ...]]:
    """Monotone maps [n] -> [1]."""
    return monotone_maps(n, 1)


def _label(c: tuple[int, ...]) -> str:
    return "".join(map(str, c))


def constant_family(theta: HNat, N: int = 3) -> SimplicialHNat:
    """theta at every level, identity index functors and structure maps."""
    cat = theta.cat
    F = identity_functor(cat)
    return SimplicialHNat(N, {n: theta for n in range(N + 1)}, {key: F for key in all_monotone(N)})


def degeneracy_extended(theta: HNat, N: int = 3) -> SimplicialHNat:
    """Level n lives on J_0 x Hom([n], [1]) and is pulled back from theta along the projection.

    J(phi) acts on the second factor by precomposition, so the index
    functors are non-trivial while the structure maps are identities.
    """
    cat = theta.cat
    cats = {n: discrete_times(cat, [_label(c) for c in _thresholds(n)]) for n in range(N + 1)}
    levels = {}
    for n, cn in cats.items():
        proj = IndexFunctor(cn, cat, {o: o.split("|")[0] for o in cn.objects},
                            {a: a.split("|")[0] for a in cn.arrows})
        levels[n] = pull_back_hnat(theta, proj)
    index = {}
    for n, phi in all_monotone(N):
        m = len(phi) - 1

        def move(label, phi=phi):
            base, c = label.split("|")
            return f"{base}|{''.join(c[k] for k in phi)}"

        index[(n, phi)] = IndexFunctor(cats[n], cats[m], {o: move(o) for o in cats[n].objects},
                                       {a: move(a) for a in cats[n].arrows})
    return SimplicialHNat(N, levels, index)


def break_level(data: SimplicialHNat, n: int, scalar) -> SimplicialHNat:
    """Scale all of theta_n by ``scalar``.  Level n stays a valid homotopy natural
    transformation, but it no longer matches the other levels unless scalar = 1."""
    th = data.levels[n]
    levels = dict(data.levels)
    levels[n] = HNat(
        th.f, th.g,
        {i: m.scale(scalar) for i, m in th.theta_obj.items()},
        {a: m.scale(scalar) for a, m in th.theta_arr.items()},
    )
    return SimplicialHNat(data.N, levels, data.index, data.f_maps, data.g_maps)
