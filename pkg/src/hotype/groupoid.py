"""Finite groupoids, functors and natural transformations.

Composition is diagrammatic throughout: ``compose(x, y)`` is "x then y" and
is defined exactly when ``tgt(x) == src(y)``.  Object and morphism ids are
strings; every enumeration runs in lexicographic id order.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, NamedTuple

from networkx.utils import UnionFind

from .errors import (AxiomError, FunctorError, NaturalityError, NotACover, NotAGroup,
                     NotAnAction, ParseError, UnknownObject, ValidationError)


def pair_id(*parts) -> str:
    """Compound id used by the constructors, e.g. ``(g,y)``."""
    return "(" + ",".join(str(p) for p in parts) + ")"


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    objects: tuple[str, ...]
    morphisms: tuple[str, ...]
    src: Mapping[str, str]
    tgt: Mapping[str, str]
    identity: Mapping[str, str]
    table: Mapping[tuple[str, str], str]
    inverses: Mapping[str, str]
    _out: dict = field(default_factory=dict, repr=False)
    _hom: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for m in self.morphisms:
            self._out.setdefault(self.src[m], []).append(m)
            self._hom.setdefault((self.src[m], self.tgt[m]), []).append(m)

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return self is other or self.digest() == other.digest()

    def __hash__(self):
        return hash(self.digest())

    def __repr__(self):
        return f"FiniteGroupoid({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def compose(self, x: str, y: str) -> str:
        try:
            return self.table[x, y]
        except KeyError:
            raise ValueError(f"{x} and {y} are not composable") from None

    def composable(self, x, y):
        return self.tgt[x] == self.src[y]

    def inverse(self, x: str) -> str:
        return self.inverses[x]

    def out_of(self, obj: str) -> list[str]:
        """Morphisms with source ``obj``, sorted."""
        return self._out.get(obj, [])

    def hom(self, x: str, y: str) -> list[str]:
        return self._hom.get((x, y), [])

    def vertex_group(self, obj):
        return self.hom(obj, obj)

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": m, "src": self.src[m], "tgt": self.tgt[m]} for m in self.morphisms],
            "identities": {o: self.identity[o] for o in self.objects},
            "compose": [[x, y, self.table[x, y]] for x, y in sorted(self.table)],
            "inverses": {m: self.inverses[m] for m in self.morphisms},
        }

    def digest(self) -> str:
        """Short content hash; used as the groupoid id in reports."""
        if "digest" not in self._cache:
            blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
            self._cache["digest"] = hashlib.sha256(blob.encode()).hexdigest()
        return self._cache["digest"][:12]


_FIELDS = {"objects", "morphisms", "identities", "compose", "inverses"}


def _build(objects, morphisms, src, tgt, identity, table, inverses) -> FiniteGroupoid:
    objs = tuple(sorted(objects))
    mors = tuple(sorted(morphisms))
    return FiniteGroupoid(objs, mors, dict(src), dict(tgt), dict(identity), dict(table),
                          dict(inverses))


def check_axioms(g: FiniteGroupoid) -> None:
    """Exhaustively check every groupoid axiom; raise AxiomError at the first failure."""
    objs = set(g.objects)
    for m in g.morphisms:
        if g.src.get(m) not in objs or g.tgt.get(m) not in objs:
            raise AxiomError("source/target in objects", [m])
    mors = set(g.morphisms)
    for o in g.objects:
        e = g.identity.get(o)
        if e not in mors:
            raise AxiomError("identity exists", [o])
        if g.src[e] != o or g.tgt[e] != o:
            raise AxiomError("identity endpoints", [o, e])
    for (x, y), z in g.table.items():
        if x not in mors or y not in mors or z not in mors:
            raise AxiomError("composition ids exist", [x, y, z])
        if g.tgt[x] != g.src[y]:
            raise AxiomError("composition defined only on composable pairs", [x, y])
    for x in g.morphisms:
        for y in g.out_of(g.tgt[x]):
            z = g.table.get((x, y))
            if z is None:
                raise AxiomError("composition defined on composable pairs", [x, y])
            if g.src[z] != g.src[x] or g.tgt[z] != g.tgt[y]:
                raise AxiomError("composite endpoints", [x, y, z])
    for x in g.morphisms:
        if g.table[g.identity[g.src[x]], x] != x or g.table[x, g.identity[g.tgt[x]]] != x:
            raise AxiomError("unit law", [x])
    for x in g.morphisms:
        for y in g.out_of(g.tgt[x]):
            xy = g.table[x, y]
            for z in g.out_of(g.tgt[y]):
                if g.table[xy, z] != g.table[x, g.table[y, z]]:
                    raise AxiomError("associativity", [x, y, z])
    for x in g.morphisms:
        xi = g.inverses.get(x)
        if xi not in mors or g.src[xi] != g.tgt[x] or g.tgt[xi] != g.src[x]:
            raise AxiomError("inverse law", [x])
        if g.table[x, xi] != g.identity[g.src[x]] or g.table[xi, x] != g.identity[g.tgt[x]]:
            raise AxiomError("inverse law", [x])


def validate_groupoid(raw) -> FiniteGroupoid:
    """Parse the JSON groupoid format (a dict or a JSON string) and certify it."""
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ParseError("groupoid must be a JSON object")
    extra = set(raw) - _FIELDS
    if extra:
        raise ParseError(f"unknown fields: {sorted(extra)}", fields=sorted(extra))
    missing = _FIELDS - set(raw)
    if missing:
        raise ParseError(f"missing fields: {sorted(missing)}", fields=sorted(missing))
    try:
        objects = [str(o) for o in raw["objects"]]
        src, tgt, mors = {}, {}, []
        for entry in raw["morphisms"]:
            if set(entry) != {"id", "src", "tgt"}:
                raise ParseError(f"morphism entry needs exactly id/src/tgt: {entry}")
            m = str(entry["id"])
            mors.append(m)
            src[m], tgt[m] = str(entry["src"]), str(entry["tgt"])
        identity = {str(k): str(v) for k, v in raw["identities"].items()}
        table = {}
        for triple in raw["compose"]:
            if len(triple) != 3:
                raise ParseError(f"composition entries are [left, right, result]: {triple}")
            x, y, z = (str(t) for t in triple)
            if (x, y) in table and table[x, y] != z:
                raise ParseError(f"composition of {x},{y} listed twice")
            table[x, y] = z
        inverses = {str(k): str(v) for k, v in raw["inverses"].items()}
    except (TypeError, AttributeError, KeyError) as exc:
        raise ParseError(f"malformed groupoid description: {exc}") from None
    if len(set(objects)) != len(objects) or len(set(mors)) != len(mors):
        raise ParseError("duplicate object or morphism ids")
    unknown = [o for o in list(src.values()) + list(tgt.values()) + list(identity)
               if o not in set(objects)]
    if unknown:
        raise ParseError(f"unknown object ids: {sorted(set(unknown))}")
    known = set(mors)
    unknown = [m for m in list(identity.values()) + list(inverses) + list(inverses.values())
               if m not in known]
    unknown += [m for k, v in table.items() for m in (*k, v) if m not in known]
    if unknown:
        raise ParseError(f"unknown morphism ids: {sorted(set(unknown))}")
    g = _build(objects, mors, src, tgt, identity, table, inverses)
    check_axioms(g)
    return g


# -- constructors -------------------------------------------------------------

def _group_identity(elements, table):
    for e in elements:
        if all(table[e, x] == x and table[x, e] == x for x in elements):
            return e
    return None


def check_group(table: Mapping[tuple[str, str], str]) -> tuple[list[str], str]:
    """Validate a multiplication table ``{(a, b): ab}``; return (elements, unit)."""
    elements = sorted({str(a) for pair in table for a in pair})
    els = set(elements)
    for a, b in product(elements, repeat=2):
        if (a, b) not in table or table[a, b] not in els:
            raise NotAGroup(f"table not closed at ({a}, {b})", witness=[a, b])
    for a, b, c in product(elements, repeat=3):
        if table[table[a, b], c] != table[a, table[b, c]]:
            raise NotAGroup(f"not associative at ({a}, {b}, {c})", witness=[a, b, c])
    e = _group_identity(elements, table)
    if e is None:
        raise NotAGroup("no two-sided unit", witness=[])
    for a in elements:
        if not any(table[a, b] == e and table[b, a] == e for b in elements):
            raise NotAGroup(f"{a} has no inverse", witness=[a])
    return elements, e


def groupoid_from_group(table: Mapping[tuple[str, str], str], obj: str = "*") -> FiniteGroupoid:
    """One-object groupoid of a group; ``compose(x, y)`` is the table product ``xy``."""
    table = {(str(a), str(b)): str(c) for (a, b), c in table.items()}
    elements, e = check_group(table)
    inverses = {a: next(b for b in elements if table[a, b] == e) for a in elements}
    return _build([obj], elements, {a: obj for a in elements}, {a: obj for a in elements},
                  {obj: e}, table, inverses)


def cyclic_group(n: int) -> dict[tuple[str, str], str]:
    """Multiplication table of Z/n on the labels ``"0" .. "n-1"``."""
    return {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}


def symmetric_group(n: int) -> dict[tuple[str, str], str]:
    """Table of S_n on permutation labels in one-line notation (``"012"`` is the unit).

    ``table[p, q]`` is "apply p, then q".
    """
    from itertools import permutations
    perms = ["".join(map(str, p)) for p in permutations(range(n))]
    return {(p, q): "".join(q[int(p[i])] for i in range(n)) for p in perms for q in perms}


def action_groupoid(group: Mapping[tuple[str, str], str], carrier: Iterable,
                    action) -> FiniteGroupoid:
    """Groupoid of a left action: morphism ``(g,y)`` goes from ``y`` to ``g.y``.

    ``action`` is a mapping ``{(g, y): g.y}`` or a callable ``(g, y) -> g.y``.
    Composition ``(g,y)`` then ``(h,g.y)`` is ``(hg, y)``.
    """
    table = {(str(a), str(b)): str(c) for (a, b), c in group.items()}
    elements, e = check_group(table)
    points = sorted({str(y) for y in carrier})
    act: Callable = action if callable(action) else (lambda g, y: action[g, y])
    move = {}
    for g, y in product(elements, points):
        try:
            z = str(act(g, y))
        except KeyError:
            raise NotAnAction(f"action undefined at ({g}, {y})", witness=[g, y]) from None
        if z not in points:
            raise NotAnAction(f"{g}.{y} = {z} leaves the carrier", witness=[g, y])
        move[g, y] = z
    for y in points:
        if move[e, y] != y:
            raise NotAnAction(f"unit moves {y}", witness=[e, y])
    for a, b, y in product(elements, elements, points):
        if move[table[a, b], y] != move[a, move[b, y]]:
            raise NotAnAction(f"(ab).y != a.(b.y) at ({a}, {b}, {y})", witness=[a, b, y])
    mid = {(g, y): pair_id(g, y) for g, y in product(elements, points)}
    src = {mid[g, y]: y for g, y in mid}
    tgt = {mid[g, y]: move[g, y] for g, y in mid}
    comp = {}
    for g, y in mid:
        for h in elements:
            comp[mid[g, y], mid[h, move[g, y]]] = mid[table[h, g], y]
    inv_el = {a: next(b for b in elements if table[a, b] == e) for a in elements}
    inverses = {mid[g, y]: mid[inv_el[g], move[g, y]] for g, y in mid}
    identity = {y: mid[e, y] for y in points}
    return _build(points, mid.values(), src, tgt, identity, comp, inverses)


def cech_groupoid(carrier: Iterable, cover: list[Iterable]) -> FiniteGroupoid:
    """Groupoid of a cover: objects ``(s,i)`` for s in U_i, one arrow ``(s,i,j)`` per s in U_i ∩ U_j."""
    points = sorted({str(s) for s in carrier})
    sets = [{str(s) for s in u} for u in cover]
    covered = set().union(*sets) if sets else set()
    uncovered = [s for s in points if s not in covered]
    if uncovered:
        raise NotACover(uncovered)
    stray = sorted(covered - set(points))
    if stray:
        raise ValidationError(f"cover mentions points outside the carrier: {stray}")
    objs, src, tgt, comp, inverses, identity = [], {}, {}, {}, {}, {}
    for s in points:
        idx = [i for i, u in enumerate(sets) if s in u]
        for i in idx:
            objs.append(pair_id(s, i))
            identity[pair_id(s, i)] = pair_id(s, i, i)
        for i, j in product(idx, repeat=2):
            m = pair_id(s, i, j)
            src[m], tgt[m] = pair_id(s, i), pair_id(s, j)
            inverses[m] = pair_id(s, j, i)
            for k in idx:
                comp[m, pair_id(s, j, k)] = pair_id(s, i, k)
    return _build(objs, src.keys(), src, tgt, identity, comp, inverses)


def trivial_groupoid(carrier: Iterable) -> FiniteGroupoid:
    """Discrete groupoid: only identities, with ids equal to the objects."""
    points = sorted({str(s) for s in carrier})
    ident = {s: s for s in points}
    return _build(points, points, ident, ident, ident, {(s, s): s for s in points}, ident)


def pair_groupoid(carrier: Iterable) -> FiniteGroupoid:
    """Indiscrete groupoid: exactly one morphism ``(a,b)`` between any two objects."""
    points = sorted({str(s) for s in carrier})
    mors = {pair_id(a, b): (a, b) for a, b in product(points, repeat=2)}
    comp = {(pair_id(a, b), pair_id(b, c)): pair_id(a, c)
            for a, b, c in product(points, repeat=3)}
    return _build(points, mors, {m: ab[0] for m, ab in mors.items()},
                  {m: ab[1] for m, ab in mors.items()}, {a: pair_id(a, a) for a in points},
                  comp, {pair_id(a, b): pair_id(b, a) for a, b in product(points, repeat=2)})


# -- functors -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str]

    def __post_init__(self):
        s, t = self.source, self.target
        for o in s.objects:
            if self.object_map.get(o) not in set(t.objects):
                raise FunctorError(f"object {o} has no image", witness=[o])
        tm = set(t.morphisms)
        for m in s.morphisms:
            fm = self.morphism_map.get(m)
            if fm not in tm:
                raise FunctorError(f"morphism {m} has no image", witness=[m])
            if t.src[fm] != self.object_map[s.src[m]] or t.tgt[fm] != self.object_map[s.tgt[m]]:
                raise FunctorError(f"{m} -> {fm} does not respect source/target", witness=[m])
        for o in s.objects:
            if self.morphism_map[s.identity[o]] != t.identity[self.object_map[o]]:
                raise FunctorError(f"identity of {o} not preserved", witness=[o])
        for (x, y), z in s.table.items():
            if t.table[self.morphism_map[x], self.morphism_map[y]] != self.morphism_map[z]:
                raise FunctorError(f"composition {x}.{y} not preserved", witness=[x, y])

    def __call__(self, item: str) -> str:
        """Apply to a morphism id (objects go through ``obj``)."""
        return self.morphism_map[item]

    def obj(self, o: str) -> str:
        return self.object_map[o]

    def then(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """Composite ``other ∘ self``."""
        if other.source != self.target:
            raise FunctorError("functors are not composable")
        return GroupoidFunctor(self.source, other.target,
                               {o: other.object_map[v] for o, v in self.object_map.items()},
                               {m: other.morphism_map[v] for m, v in self.morphism_map.items()})

    def is_isomorphism(self) -> bool:
        return (len(set(self.object_map.values())) == len(self.target.objects) == len(self.source.objects)
                and len(set(self.morphism_map.values())) == len(self.target.morphisms)
                == len(self.source.morphisms))


def identity_functor(g: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(g, g, {o: o for o in g.objects}, {m: m for m in g.morphisms})


def terminal_functor(g: FiniteGroupoid, point: str = "pt") -> GroupoidFunctor:
    """The unique functor to ``trivial_groupoid({point})``."""
    return GroupoidFunctor(g, trivial_groupoid([point]), {o: point for o in g.objects},
                           {m: point for m in g.morphisms})


def cech_projection(carrier, cover) -> GroupoidFunctor:
    """Forget the cover index: ``cech_groupoid(carrier, cover) -> trivial_groupoid(carrier)``."""
    c = cech_groupoid(carrier, cover)
    point_of = {}
    for s in trivial_groupoid(carrier).objects:
        for i in range(len(cover)):
            point_of[pair_id(s, i)] = s
            for j in range(len(cover)):
                point_of[pair_id(s, i, j)] = s
    return GroupoidFunctor(c, trivial_groupoid(carrier), {o: point_of[o] for o in c.objects},
                           {m: point_of[m] for m in c.morphisms})


@dataclass(frozen=True, eq=False)
class NaturalTransformation:
    """Components ``T_x : F(x) -> G(x)`` with ``F(f) T_y = T_x G(f)`` for every ``f: x -> y``."""

    source_functor: GroupoidFunctor
    target_functor: GroupoidFunctor
    components: Mapping[str, str]

    def __post_init__(self):
        F, G = self.source_functor, self.target_functor
        if F.source != G.source or F.target != G.target:
            raise NaturalityError("functors have different endpoints")
        d = F.target
        for x in F.source.objects:
            t = self.components.get(x)
            if t not in set(d.morphisms) or d.src[t] != F.obj(x) or d.tgt[t] != G.obj(x):
                raise NaturalityError(f"component at {x} has wrong endpoints", witness=[x])
        for f in F.source.morphisms:
            x, y = F.source.src[f], F.source.tgt[f]
            if d.table[F(f), self.components[y]] != d.table[self.components[x], G(f)]:
                raise NaturalityError(f"naturality square fails at {f}", witness=[f])

    def is_identity(self) -> bool:
        d = self.source_functor.target
        return all(d.identity[d.src[t]] == t for t in self.components.values())

    def precompose(self, H: GroupoidFunctor) -> "NaturalTransformation":
        """Whiskering ``T ∘ H``."""
        return NaturalTransformation(H.then(self.source_functor), H.then(self.target_functor),
                                     {x: self.components[H.obj(x)] for x in H.source.objects})


def conjugation_transformation(g: FiniteGroupoid, element: str) -> NaturalTransformation:
    """For a one-object groupoid: ``id => c`` where ``c(f) = element⁻¹ f element``."""
    if len(g.objects) != 1:
        raise ValueError("conjugation is defined here for one-object groupoids")
    inv = g.inverse(element)
    conj = {m: g.compose(g.compose(inv, m), element) for m in g.morphisms}
    ident = identity_functor(g)
    c = GroupoidFunctor(g, g, {o: o for o in g.objects}, conj)
    return NaturalTransformation(ident, c, {g.objects[0]: element})


# -- arrow and comma groupoids ------------------------------------------------

class ArrowGroupoid(NamedTuple):
    groupoid: FiniteGroupoid
    projection: GroupoidFunctor
    target_map: dict[str, str]


def arrow_groupoid(x: FiniteGroupoid) -> ArrowGroupoid:
    """Arrows of ``x`` over a common target.

    A morphism from ``γ: a -> y`` to ``γ': a' -> y`` is the unique
    ``δ = γ γ'⁻¹`` with ``δ γ' = γ``; its id is ``(γ,γ')``.
    """
    objs = list(x.morphisms)
    by_target: dict[str, list[str]] = {}
    for g in objs:
        by_target.setdefault(x.tgt[g], []).append(g)
    src, tgt, comp, inverses, pmap = {}, {}, {}, {}, {}
    for group in by_target.values():
        for a, b in product(group, repeat=2):
            m = pair_id(a, b)
            src[m], tgt[m] = a, b
            inverses[m] = pair_id(b, a)
            pmap[m] = x.compose(a, x.inverse(b))
            for c in group:
                comp[m, pair_id(b, c)] = pair_id(a, c)
    a = _build(objs, src.keys(), src, tgt, {g: pair_id(g, g) for g in objs}, comp, inverses)
    p = GroupoidFunctor(a, x, {g: x.src[g] for g in objs}, pmap)
    return ArrowGroupoid(a, p, {g: x.tgt[g] for g in objs})


def target_functor(x: FiniteGroupoid, arrows: ArrowGroupoid | None = None) -> GroupoidFunctor:
    """ζ as a functor from the arrow groupoid to ``trivial_groupoid(x.objects)``."""
    arrows = arrows or arrow_groupoid(x)
    a = arrows.groupoid
    return GroupoidFunctor(a, trivial_groupoid(x.objects), dict(arrows.target_map),
                           {m: arrows.target_map[a.src[m]] for m in a.morphisms})


def full_subgroupoid(g: FiniteGroupoid, objects: Iterable[str]) -> FiniteGroupoid:
    keep = set(objects)
    mors = [m for m in g.morphisms if g.src[m] in keep and g.tgt[m] in keep]
    ms = set(mors)
    return _build(keep, mors, {m: g.src[m] for m in mors}, {m: g.tgt[m] for m in mors},
                  {o: g.identity[o] for o in keep},
                  {k: v for k, v in g.table.items() if k[0] in ms and k[1] in ms},
                  {m: g.inverses[m] for m in mors})


def comma_over_object(x: FiniteGroupoid, y: str) -> FiniteGroupoid:
    """Arrows with target ``y``; ``identity(y)`` is a terminal object."""
    if y not in set(x.objects):
        raise UnknownObject(f"unknown object {y}", object=y)
    arrows = arrow_groupoid(x)
    c = full_subgroupoid(arrows.groupoid, [g for g in x.morphisms if x.tgt[g] == y])
    terminal = x.identity[y]
    assert all(len(c.hom(o, terminal)) == 1 for o in c.objects), "comma object lost its terminal object"
    return c


# -- weak equivalences ----------------------------------------------------------

@dataclass(frozen=True)
class WeakEquivalenceResult:
    ok: bool
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def iso_classes(g: FiniteGroupoid) -> list[list[str]]:
    """Connected components (isomorphism classes of objects), sorted."""
    uf = UnionFind(g.objects)
    for m in g.morphisms:
        uf.union(g.src[m], g.tgt[m])
    return sorted(sorted(s) for s in uf.to_sets())


def is_weak_equivalence(f: GroupoidFunctor) -> WeakEquivalenceResult:
    """Essentially surjective and fully faithful, checked exhaustively."""
    s, t = f.source, f.target
    hit = set(f.object_map.values())
    for cls in iso_classes(t):
        if not hit.intersection(cls):
            return WeakEquivalenceResult(False, {"kind": "not_essentially_surjective",
                                                 "missed_class": cls})
    for a, b in product(s.objects, repeat=2):
        homs = s.hom(a, b)
        images = {f(m) for m in homs}
        target_size = len(t.hom(f.obj(a), f.obj(b)))
        if len(images) != len(homs) or len(images) != target_size:
            return WeakEquivalenceResult(False, {
                "kind": "not_fully_faithful", "objects": [a, b],
                "source_hom": len(homs), "image": len(images), "target_hom": target_size})
    return WeakEquivalenceResult(True)
