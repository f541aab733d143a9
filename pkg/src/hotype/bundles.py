"""Principal bundles over ordered simplicial complexes, in cocycle form.

A bundle assigns an object ``h(v)`` to every vertex and a morphism
``γ_uv : h(u) -> h(v)`` to every increasing edge ``u < v``, subject to
``γ_uv γ_vw = γ_uw`` on triangles.  Walking an edge backwards uses the
inverse.  Over a simplicial base this is the whole story: the vertex-star
cover trivializes every such bundle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import (BaseMismatch, CocycleViolation, NonExhaustive, NotALoop, NotPrincipal,
                     NotSameFiber, NotSimplicial, ParseError, SourceTargetMismatch, TooLarge,
                     ValidationError)
from .groupoid import FiniteGroupoid, arrow_groupoid
from .simplicial import (OrderedSimplicialComplex, SemiSimplicialSet, SimplicialMap,
                         delta_set_from_complex, nerve)

DEFAULT_SEARCH_LIMIT = 1_000_000
DEFAULT_ENUMERATION_BOUND = 100_000


@dataclass(frozen=True, eq=False)
class CocycleBundle:
    base: OrderedSimplicialComplex
    groupoid: FiniteGroupoid
    h: Mapping[str, str]
    gamma: Mapping[tuple[str, str], str]

    def __eq__(self, other):
        if not isinstance(other, CocycleBundle):
            return NotImplemented
        return (self.base == other.base and self.groupoid == other.groupoid
                and dict(self.h) == dict(other.h) and dict(self.gamma) == dict(other.gamma))

    def __hash__(self):
        return hash((self.base, tuple(sorted(self.h.items())), tuple(sorted(self.gamma.items()))))

    def __repr__(self):
        edges = ", ".join(f"{u}{v}:{m}" for (u, v), m in self.gamma.items())
        return f"CocycleBundle({edges})"

    def edge(self, u: str, v: str) -> str:
        """Transition along ``u -> v`` in either direction."""
        if (u, v) in self.gamma:
            return self.gamma[u, v]
        return self.groupoid.inverse(self.gamma[v, u])

    def to_json(self, groupoid_ref=None) -> dict:
        return {
            "base": self.base.to_json(),
            "groupoid": self.groupoid.to_json() if groupoid_ref is None else groupoid_ref,
            "h": {v: self.h[v] for v in self.base.vertices},
            "gamma": {f"{u},{v}": self.gamma[u, v] for u, v in self.base.edges()},
        }


def validate_bundle(base: OrderedSimplicialComplex, groupoid: FiniteGroupoid,
                    h: Mapping, gamma: Mapping) -> CocycleBundle:
    h = {str(k): str(v) for k, v in h.items()}
    gamma = {(str(u), str(v)): str(m) for (u, v), m in gamma.items()}
    if set(h) != set(base.vertices):
        raise ValidationError("h must assign an object to every vertex and nothing else")
    objs = set(groupoid.objects)
    for v, o in h.items():
        if o not in objs:
            raise ValidationError(f"h({v}) = {o} is not an object", vertex=v)
    edges = base.edges()
    if set(gamma) != set(edges):
        extra = sorted(set(gamma) - set(edges))
        missing = sorted(set(edges) - set(gamma))
        raise ValidationError("γ must label exactly the increasing edges",
                              extra=[list(e) for e in extra], missing=[list(e) for e in missing])
    mors = set(groupoid.morphisms)
    for (u, v) in edges:
        m = gamma[u, v]
        if m not in mors or groupoid.src[m] != h[u] or groupoid.tgt[m] != h[v]:
            raise SourceTargetMismatch(f"γ_{u}{v} = {m} is not a morphism {h[u]} -> {h[v]}",
                                       edge=[u, v], morphism=m)
    for u, v, w in base.simplices_of_dim(2):
        if groupoid.table[gamma[u, v], gamma[v, w]] != gamma[u, w]:
            raise CocycleViolation(f"γ_{u}{v} γ_{v}{w} != γ_{u}{w}", triangle=[u, v, w])
    return CocycleBundle(base, groupoid, h, {e: gamma[e] for e in edges})


def trivial_bundle(base: OrderedSimplicialComplex, groupoid: FiniteGroupoid, obj=None) -> CocycleBundle:
    obj = groupoid.objects[0] if obj is None else obj
    return validate_bundle(base, groupoid, {v: obj for v in base.vertices},
                           {e: groupoid.identity[obj] for e in base.edges()})


def circle(n: int = 3) -> OrderedSimplicialComplex:
    """Boundary of an n-gon on vertices ``v0 < ... < v{n-1}``."""
    verts = [f"v{i}" for i in range(n)]
    return OrderedSimplicialComplex.from_facets(verts, [(verts[i], verts[(i + 1) % n]) for i in range(n)])


def bundle_from_json(data: dict, groupoid: FiniteGroupoid | None = None) -> CocycleBundle:
    """Parse the bundle format; an explicit ``groupoid`` overrides the embedded one."""
    from .groupoid import validate_groupoid
    extra = set(data) - {"base", "groupoid", "h", "gamma"}
    if extra:
        raise ParseError(f"unknown bundle fields: {sorted(extra)}")
    try:
        base = OrderedSimplicialComplex.from_facets(data["base"]["vertices"], data["base"]["simplices"])
        if groupoid is None:
            groupoid = validate_groupoid(data["groupoid"])
        gamma = {}
        for key, m in data["gamma"].items():
            parts = key.split(",")
            if len(parts) != 2:
                raise ParseError(f"edge keys are 'u,v': {key!r}")
            gamma[parts[0], parts[1]] = m
        h = data["h"]
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"malformed bundle description: {exc}") from None
    return validate_bundle(base, groupoid, h, gamma)


def check_isomorphism(b0: CocycleBundle, b1: CocycleBundle, lam: Mapping[str, str]) -> bool:
    """``λ_u γ¹_uv = γ⁰_uv λ_v`` on every edge, with ``λ_v : h0(v) -> h1(v)``."""
    g = b0.groupoid
    for v in b0.base.vertices:
        m = lam.get(v)
        if m is None or g.src[m] != b0.h[v] or g.tgt[m] != b1.h[v]:
            return False
    return all(g.table[lam[u], b1.gamma[u, v]] == g.table[b0.gamma[u, v], lam[v]]
               for u, v in b0.base.edges())


def _same_setting(b0, b1):
    if b0.base != b1.base or b0.groupoid != b1.groupoid:
        raise BaseMismatch("bundles live over different bases or groupoids")


def _components(base: OrderedSimplicialComplex) -> list[list[str]]:
    adj = {v: [] for v in base.vertices}
    for u, v in base.edges():
        adj[u].append(v)
        adj[v].append(u)
    seen, comps = set(), []
    for root in base.vertices:
        if root in seen:
            continue
        comp, queue = [], deque([root])
        seen.add(root)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def are_isomorphic(b0: CocycleBundle, b1: CocycleBundle) -> dict[str, str] | None:
    """Vertex-wise ``λ`` realizing an isomorphism ``b0 -> b1``, or None.

    On each component the root value is tried in id order (identity first);
    it determines ``λ`` everywhere else by transport along edges.
    """
    _same_setting(b0, b1)
    g = b0.groupoid
    lam: dict[str, str] = {}
    for comp in _components(b0.base):
        root = comp[0]
        members = set(comp)
        edges = [(u, v) for u, v in b0.base.edges() if u in members]
        for start in _identity_first(g, g.hom(b0.h[root], b1.h[root])):
            trial = {root: start}
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for a, b in edges:
                    if a == u and b not in trial:
                        trial[b] = g.table[g.table[g.inverse(b0.gamma[a, b]), trial[a]], b1.gamma[a, b]]
                        queue.append(b)
                    elif b == u and a not in trial:
                        trial[a] = g.table[g.table[b0.gamma[a, b], trial[b]], g.inverse(b1.gamma[a, b])]
                        queue.append(a)
            if all(g.table[trial[u], b1.gamma[u, v]] == g.table[b0.gamma[u, v], trial[v]]
                   for u, v in edges):
                lam.update(trial)
                break
        else:
            return None
    return lam


def _identity_first(g: FiniteGroupoid, morphisms: Iterable[str]) -> list[str]:
    idents = set(g.identity.values())
    return sorted(morphisms, key=lambda m: (m not in idents, m))


def pullback_bundle(b: CocycleBundle, source: OrderedSimplicialComplex,
                    f: Mapping[str, str]) -> CocycleBundle:
    """Pull ``b`` back along a vertex map ``source -> base(b)``.

    ``f`` must send simplices to simplices and be weakly increasing on each
    simplex; collapsed edges get identities.
    """
    pos = b.base.position
    f = {str(k): str(v) for k, v in f.items()}
    for v in source.vertices:
        if f.get(v) not in pos:
            raise NotSimplicial(f"vertex {v} has no image in the base", vertex=v)
    for s in source.simplices:
        image = [f[v] for v in s]
        if any(pos[a] > pos[c] for a, c in zip(image, image[1:])):
            raise NotSimplicial(f"{s} -> {image} does not preserve the vertex order", simplex=list(s))
        if tuple(dict.fromkeys(image)) not in b.base.simplices:
            raise NotSimplicial(f"image of {s} is not a simplex", simplex=list(s))
    g = b.groupoid
    h = {v: b.h[f[v]] for v in source.vertices}
    gamma = {(u, v): g.identity[h[u]] if f[u] == f[v] else b.gamma[f[u], f[v]]
             for u, v in source.edges()}
    return validate_bundle(source, g, h, gamma)


def holonomy(b: CocycleBundle, loop: Sequence[str]) -> str:
    """Ordered composite of transitions around a closed vertex path."""
    loop = [str(v) for v in loop]
    if len(loop) < 2 or loop[0] != loop[-1]:
        raise NotALoop("a loop is a vertex path of length >= 1 that ends where it starts")
    g = b.groupoid
    out = g.identity[b.h[loop[0]]]
    for u, v in zip(loop, loop[1:]):
        if (u, v) not in b.gamma and (v, u) not in b.gamma:
            raise NotALoop(f"{u} -> {v} is not an edge", step=[u, v])
        out = g.table[out, b.edge(u, v)]
    return out


# -- classifying maps and total spaces ---------------------------------------------------

def classifying_map(b: CocycleBundle, n: int | None = None) -> SimplicialMap:
    """Simplicial map base -> nerve: ``v -> h(v)`` and ``v0<...<vk -> (γ_v0v1, ..., γ_vk-1vk)``.

    Face commutation is verified on construction; it is equivalent to the
    cocycle condition.
    """
    n = max(b.base.dim, 0) if n is None else n
    if n < b.base.dim:
        raise ValueError(f"truncation {n} below base dimension {b.base.dim}")
    gamma = b.gamma

    def image(k, s):
        if k == 0:
            return b.h[s[0]]
        return tuple(gamma.get((u, v)) for u, v in zip(s, s[1:]))

    return SimplicialMap.from_keys(delta_set_from_complex(b.base), nerve(b.groupoid, n), image)


@dataclass(eq=False)
class TorsorPresentation:
    """A semi-simplicial total object over a base with a groupoid action.

    ``projection[n][x]`` is the base simplex under total simplex ``x``;
    ``anchor`` and ``action`` are given on total vertices (level-0 keys).
    """

    base: OrderedSimplicialComplex
    groupoid: FiniteGroupoid
    total: SemiSimplicialSet
    projection: list[list[tuple[str, ...]]]
    anchor: dict[Hashable, str]
    action: dict[tuple[Hashable, str], Hashable]
    _fibers: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        for key in self.total.levels[0]:
            self._fibers.setdefault(self.projection[0][self.total.index[0][key]][0], []).append(key)

    def fiber(self, v: str) -> list:
        return self._fibers.get(v, [])

    def over(self, key) -> str:
        return self.projection[0][self.total.index[0][key]][0]

    def check(self):
        """The two commuting squares of an X-space plus simplicial projection."""
        g = self.groupoid
        t = self.total
        for n in range(1, len(t.levels)):
            for x, fs in enumerate(t.faces[n]):
                s = self.projection[n][x]
                for i, y in enumerate(fs):
                    if self.projection[n - 1][y] != s[:i] + s[i + 1:]:
                        raise NotPrincipal("projection does not commute with faces",
                                           level=n, simplex=repr(t.levels[n][x]))
        for e in t.levels[0]:
            q = self.anchor[e]
            for d in g.morphisms:
                defined = (e, d) in self.action
                if defined != (g.src[d] == q):
                    raise NotPrincipal("action domain is not {q(e) = src(δ)}", vertex=repr(e), morphism=d)
                if not defined:
                    continue
                e2 = self.action[e, d]
                if self.over(e2) != self.over(e):
                    raise NotPrincipal("action moves points between fibers", vertex=repr(e), morphism=d)
                if self.anchor[e2] != g.tgt[d]:
                    raise NotPrincipal("q(e.δ) != tgt(δ)", vertex=repr(e), morphism=d)
                for d2 in g.out_of(g.tgt[d]):
                    if self.action[e2, d2] != self.action[e, g.table[d, d2]]:
                        raise NotPrincipal("action is not associative", vertex=repr(e),
                                           morphisms=[d, d2])
            if self.action[e, g.identity[q]] != e:
                raise NotPrincipal("identity does not act trivially", vertex=repr(e))


def total_space(b: CocycleBundle) -> TorsorPresentation:
    """Pullback of the universal bundle along the classifying map, built directly.

    Level-n simplices are ``(σ, γ')`` with ``src(γ') = h(last vertex of σ)``;
    ``d_i`` for ``i < n`` deletes a vertex and keeps ``γ'``, ``d_n`` replaces
    ``γ'`` by ``γ_{v(n-1) v(n)} γ'``.  The groupoid acts by ``γ' -> γ' δ``.
    """
    g = b.groupoid
    base_levels = [b.base.simplices_of_dim(n) for n in range(b.base.dim + 1)] or [[]]
    levels = [[(s, m) for s in lvl for m in g.out_of(b.h[s[-1]])] for lvl in base_levels]
    index = [{k: i for i, k in enumerate(lvl)} for lvl in levels]
    faces = [[()] * len(levels[0])]
    for n in range(1, len(levels)):
        fn = []
        for s, m in levels[n]:
            f = [index[n - 1][s[:i] + s[i + 1:], m] for i in range(n)]
            f.append(index[n - 1][s[:-1], g.table[b.gamma[s[-2], s[-1]], m]])
            fn.append(tuple(f))
        faces.append(fn)
    total = SemiSimplicialSet(levels, faces, complete=True)
    projection = [[s for s, _ in lvl] for lvl in levels]
    anchor = {k: g.tgt[k[1]] for k in levels[0]}
    action = {(k, d): (k[0], g.table[k[1], d]) for k in levels[0] for d in g.out_of(g.tgt[k[1]])}
    t = TorsorPresentation(b.base, g, total, projection, anchor, action)
    t.check()
    # the action is simplicial on every level
    for n in range(1, len(levels)):
        for (s, m), fs in zip(levels[n], faces[n]):
            for d in g.out_of(g.tgt[m]):
                moved = faces[n][index[n][s, g.table[m, d]]]
                for i, y in enumerate(fs):
                    ys, ym = levels[n - 1][y]
                    if moved[i] != index[n - 1][ys, g.table[ym, d]]:
                        raise NotPrincipal("action does not commute with faces", level=n)
    return t


class DivisionMap(dict):
    """``(e1, e2) -> δ`` with ``e1 . δ = e2`` for points in a common fiber."""

    def __init__(self, torsor: TorsorPresentation, table):
        super().__init__(table)
        self.torsor = torsor

    def __missing__(self, key):
        e1, e2 = key
        if self.torsor.over(e1) != self.torsor.over(e2):
            raise NotSameFiber(f"{e1!r} and {e2!r} lie over different vertices")
        raise KeyError(key)


def division_map(t: TorsorPresentation) -> DivisionMap:
    """Fiberwise division; raises NotPrincipal unless the action is free and transitive."""
    g = t.groupoid
    table = {}
    for v in t.base.vertices:
        fiber = t.fiber(v)
        for e1 in fiber:
            for d in g.out_of(t.anchor[e1]):
                e2 = t.action[e1, d]
                if (e1, e2) in table:
                    raise NotPrincipal("action is not free", vertex=repr(e1),
                                       morphisms=[table[e1, e2], d])
                table[e1, e2] = d
        for e1, e2 in product(fiber, repeat=2):
            if (e1, e2) not in table:
                raise NotPrincipal("action is not transitive on a fiber", pair=[repr(e1), repr(e2)])
    return DivisionMap(t, table)


def bundle_from_torsor(t: TorsorPresentation, sections: Mapping[str, Hashable] | None = None) -> CocycleBundle:
    """Recover a cocycle from local sections (default: first point of each fiber).

    ``h(v) = q(s(v))``; ``γ_uv`` divides the transport of ``s(u)`` along the
    edge into ``s(v)``.
    """
    div = division_map(t)
    if sections is None:
        sections = {v: t.fiber(v)[0] for v in t.base.vertices if t.fiber(v)}
    for v in t.base.vertices:
        if v not in sections or t.over(sections[v]) != v:
            raise NotPrincipal(f"no section point over {v}", vertex=v)
    tot = t.total
    h = {v: t.anchor[sections[v]] for v in t.base.vertices}
    gamma = {}
    if len(tot.levels) > 1:
        lifts: dict[tuple, list[int]] = {}
        for x, fs in enumerate(tot.faces[1]):
            lifts.setdefault((t.projection[1][x], fs[1]), []).append(fs[0])
        for u, v in t.base.edges():
            ends = lifts.get(((u, v), tot.index[0][sections[u]]), [])
            if len(ends) != 1:
                raise NotPrincipal(f"edge {u}{v} has {len(ends)} lifts from the section", edge=[u, v])
            gamma[u, v] = div[tot.levels[0][ends[0]], sections[v]]
    return validate_bundle(t.base, t.groupoid, h, gamma)


def universal_pullback(b: CocycleBundle) -> TorsorPresentation:
    """Levelwise fiber product of ``Bp: E X -> B X`` with the classifying map.

    Level n pairs a base simplex with an arrow-groupoid string lying over its
    image string.  A level-0 point is ``(v, γ)`` with ``γ`` an arrow starting
    at ``h(v)``; ``q`` is its target and the action post-composes.
    """
    g = b.groupoid
    n = max(b.base.dim, 0)
    cm = classifying_map(b, n)
    arrows = arrow_groupoid(g)
    ea = nerve(arrows.groupoid, n)
    p = arrows.projection
    over: list[dict] = []
    for k, lvl in enumerate(ea.levels):
        buckets: dict = {}
        for key in lvl:
            img = p.obj(key) if k == 0 else tuple(p(m) for m in key)
            buckets.setdefault(img, []).append(key)
        over.append(buckets)
    base_ds = cm.source
    levels, projection = [], []
    for k, lvl in enumerate(base_ds.levels):
        keys = []
        for x, s in enumerate(lvl):
            img = cm.target.levels[k][cm.maps[k][x]]
            keys.extend((s, e) for e in over[k].get(img, []))
        levels.append(keys)
        projection.append([s for s, _ in keys])
    index = [{key: i for i, key in enumerate(lvl)} for lvl in levels]
    faces = [[()] * len(levels[0])]
    for k in range(1, len(levels)):
        faces.append([tuple(index[k - 1][base_ds.levels[k - 1][base_ds.faces[k][base_ds.index[k][s]][i]],
                                         ea.levels[k - 1][ea.faces[k][ea.index[k][e]][i]]]
                            for i in range(k + 1))
                      for s, e in levels[k]])
    total = SemiSimplicialSet(levels, faces, complete=True)
    anchor = {key: arrows.target_map[key[1]] for key in levels[0]}
    action = {(key, d): (key[0], g.table[key[1], d])
              for key in levels[0] for d in g.out_of(anchor[key])}
    t = TorsorPresentation(b.base, g, total, projection, anchor, action)
    t.check()
    return t


def torsor_isomorphism(t1: TorsorPresentation, t2: TorsorPresentation,
                       vertex_map: Mapping[Hashable, Hashable]) -> SimplicialMap:
    """Extend a bijection of total vertices to all levels and verify it is an isomorphism.

    Higher simplices are matched by (base simplex, vertex tuple); the result
    must be bijective, commute with faces, and preserve projection, anchor
    and action.
    """
    if t1.base != t2.base or t1.groupoid != t2.groupoid:
        raise BaseMismatch("torsors over different bases or groupoids")
    a, b = t1.total, t2.total
    v0 = {a.index[0][k]: b.index[0][vertex_map[k]] for k in a.levels[0]}
    if sorted(v0.values()) != list(range(len(b.levels[0]))) or len(v0) != len(b.levels[0]):
        raise NotPrincipal("vertex map is not a bijection")
    maps = [[v0[x] for x in range(len(a.levels[0]))]]
    for n in range(1, len(a.levels)):
        lookup = {}
        for y in range(len(b.levels[n])):
            sig = (t2.projection[n][y], b.vertices(n, y))
            if sig in lookup:
                raise NotPrincipal("simplices are not determined by their vertices", level=n)
            lookup[sig] = y
        row = []
        for x in range(len(a.levels[n])):
            sig = (t1.projection[n][x], tuple(v0[i] for i in a.vertices(n, x)))
            if sig not in lookup:
                raise NotPrincipal("vertex map does not extend to a simplex", level=n)
            row.append(lookup[sig])
        if sorted(row) != list(range(len(b.levels[n]))):
            raise NotPrincipal(f"level {n} map is not a bijection", level=n)
        maps.append(row)
    f = SimplicialMap(a, b, maps)
    for n in range(len(maps)):
        if any(t1.projection[n][x] != t2.projection[n][y] for x, y in enumerate(maps[n])):
            raise NotPrincipal("projection not preserved", level=n)
    for k in a.levels[0]:
        if t1.anchor[k] != t2.anchor[vertex_map[k]]:
            raise NotPrincipal("anchor not preserved", vertex=repr(k))
    for (k, d), k2 in t1.action.items():
        if t2.action[vertex_map[k], d] != vertex_map[k2]:
            raise NotPrincipal("action not preserved", vertex=repr(k), morphism=d)
    return f


# -- concordance -------------------------------------------------------------------

def prism_vertex(v: str, end: int) -> str:
    return f"{v}@{end}"


def prism(base: OrderedSimplicialComplex) -> OrderedSimplicialComplex:
    """Standard triangulation of ``base × [0, 1]`` on vertices ``v@0 < v@1 < w@0 < ...``.

    Each base n-simplex contributes ``[v0@0 .. vj@0, vj@1 .. vn@1]`` for
    ``j = 0 .. n``.
    """
    verts = [prism_vertex(v, t) for v in base.vertices for t in (0, 1)]
    facets = []
    for s in base.simplices:
        for j in range(len(s)):
            facets.append([prism_vertex(v, 0) for v in s[:j + 1]] + [prism_vertex(v, 1) for v in s[j:]])
    return OrderedSimplicialComplex.from_facets(verts, facets)


def end_restriction(c: CocycleBundle, base: OrderedSimplicialComplex, end: int) -> CocycleBundle:
    return pullback_bundle(c, base, {v: prism_vertex(v, end) for v in base.vertices})


@dataclass(frozen=True)
class ConcordanceCertificate:
    """Prism cocycle with end identifications ``β_i : b_i -> prism|end i``."""

    prism: CocycleBundle
    beta0: dict[str, str]
    beta1: dict[str, str]

    def ends(self, base: OrderedSimplicialComplex):
        return end_restriction(self.prism, base, 0), end_restriction(self.prism, base, 1)

    def to_json(self):
        body = self.prism.to_json()
        body.pop("groupoid")
        return {"concordant": True, "prism": body, "beta0": dict(sorted(self.beta0.items())),
                "beta1": dict(sorted(self.beta1.items()))}


def _triangles_by_edge(k: OrderedSimplicialComplex):
    out: dict[tuple, list[tuple]] = {}
    for tri in k.simplices_of_dim(2):
        a, b, c = tri
        for e in ((a, b), (b, c), (a, c)):
            out.setdefault(e, []).append(tri)
    return out


def are_concordant(b0: CocycleBundle, b1: CocycleBundle,
                   search_limit: int = DEFAULT_SEARCH_LIMIT) -> ConcordanceCertificate | None:
    """Exhaustive search for a prism cocycle joining ``b0`` to ``b1``.

    The 0-end is pinned to ``b0`` (``β0`` = identities): any concordance can
    be gauged into that form.  The remaining prism edges are assigned in
    prism-vertex order, verticals first, identities before other ids, with labels forced
    by the triangle condition wherever two sides are known.  Every complete
    cocycle is tested for an isomorphism of its 1-end with ``b1``.
    Raises NonExhaustive if more than ``search_limit`` labels are tried.
    """
    _same_setting(b0, b1)
    if search_limit < 1:
        raise ValueError("search_limit must be >= 1")
    g = b0.groupoid
    base = b0.base
    pk = prism(base)
    ppos = pk.position
    h: dict[str, str] = {prism_vertex(v, 0): b0.h[v] for v in base.vertices}
    gamma: dict[tuple[str, str], str] = {(prism_vertex(u, 0), prism_vertex(v, 0)): b0.gamma[u, v]
                                         for u, v in base.edges()}
    # by later endpoint, vertical edge first, then by earlier endpoint
    todo = sorted((e for e in pk.edges() if e not in gamma),
                  key=lambda e: (ppos[e[1]], ppos[e[1]] - ppos[e[0]] != 1 or ppos[e[1]] % 2 == 0,
                                 ppos[e[0]]))
    tris = _triangles_by_edge(pk)
    states = 0

    def forced(edge):
        for a, b, c in tris.get(edge, ()):
            ab, bc, ac = gamma.get((a, b)), gamma.get((b, c)), gamma.get((a, c))
            if edge == (a, c) and ab is not None and bc is not None:
                return g.table[ab, bc]
            if edge == (a, b) and bc is not None and ac is not None:
                return g.table[ac, g.inverse(bc)]
            if edge == (b, c) and ab is not None and ac is not None:
                return g.table[g.inverse(ab), ac]
        return None

    def consistent(edge):
        for a, b, c in tris.get(edge, ()):
            ab, bc, ac = gamma.get((a, b)), gamma.get((b, c)), gamma.get((a, c))
            if None not in (ab, bc, ac) and g.table[ab, bc] != ac:
                return False
        return True

    def search(i):
        nonlocal states
        if i == len(todo):
            c = validate_bundle(pk, g, h, gamma)
            beta1 = are_isomorphic(b1, end_restriction(c, base, 1))
            if beta1 is None:
                return None
            return ConcordanceCertificate(c, {v: g.identity[b0.h[v]] for v in base.vertices}, beta1)
        u, v = todo[i]
        fresh = v not in h
        f = forced((u, v))
        if f is not None:
            cands = [f] if g.src[f] == h[u] and (fresh or g.tgt[f] == h[v]) else []
        elif fresh:
            cands = _identity_first(g, g.out_of(h[u]))
        else:
            cands = _identity_first(g, g.hom(h[u], h[v]))
        for m in cands:
            states += 1
            if states > search_limit:
                raise NonExhaustive(f"search exceeded {search_limit} states", search_limit=search_limit)
            gamma[u, v] = m
            if fresh:
                h[v] = g.tgt[m]
            if consistent((u, v)):
                found = search(i + 1)
                if found is not None:
                    return found
            del gamma[u, v]
            if fresh:
                del h[v]
        return None

    return search(0)


@dataclass(frozen=True)
class BundleEnumeration:
    bundles: list[CocycleBundle]
    classes: list[list[int]]

    @property
    def class_count(self):
        return len(self.classes)


def enumerate_cocycles(base: OrderedSimplicialComplex, groupoid: FiniteGroupoid,
                       bound: int = DEFAULT_ENUMERATION_BOUND) -> list[CocycleBundle]:
    """All valid cocycles, ordered by (h in vertex order, γ in edge order)."""
    edges = base.edges()
    size = len(groupoid.morphisms) ** len(edges) * len(groupoid.objects) ** len(base.vertices)
    if size > bound:
        raise TooLarge(f"candidate space {size} exceeds bound {bound}", bound=size, limit=bound)
    g = groupoid
    triangles = base.simplices_of_dim(2)
    out = []
    for objs in product(g.objects, repeat=len(base.vertices)):
        h = dict(zip(base.vertices, objs))
        for labels in product(*(g.hom(h[u], h[v]) for u, v in edges)):
            gamma = dict(zip(edges, labels))
            if all(g.table[gamma[a, b], gamma[b, c]] == gamma[a, c] for a, b, c in triangles):
                out.append(CocycleBundle(base, g, h, gamma))
    return out


def enumerate_bundles(base: OrderedSimplicialComplex, groupoid: FiniteGroupoid,
                      bound: int = DEFAULT_ENUMERATION_BOUND,
                      search_limit: int = DEFAULT_SEARCH_LIMIT) -> BundleEnumeration:
    """All cocycles, partitioned into concordance classes.

    Each bundle is compared against the first member of every existing class;
    concordance is an equivalence relation, so this yields the closure.
    """
    bundles = enumerate_cocycles(base, groupoid, bound)
    classes: list[list[int]] = []
    for i, b in enumerate(bundles):
        for cls in classes:
            if are_concordant(bundles[cls[0]], b, search_limit) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
    return BundleEnumeration(bundles, classes)
