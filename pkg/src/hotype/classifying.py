"""Classifying spaces of finite groupoids and the universal total object.

``BX`` is observed through the homology of its truncated nerve; ``EX`` is
the classifying space of the arrow groupoid.  Morita invariance is checked
by showing that the mapping cone of the induced chain map is acyclic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvarianceFailed, NotAWeakEquivalence
from .groupoid import (ArrowGroupoid, FiniteGroupoid, GroupoidFunctor, NaturalTransformation,
                       arrow_groupoid, identity_functor, is_weak_equivalence, pair_id, target_functor,
                       trivial_groupoid)
from .simplicial import (ChainComplex, HomologyProfile, chain_complex, homology, induced_map,
                         nerve)
from .smith import IntMatrix, block

__all__ = [
    "ClassifyingSpaceReport", "MoritaReport", "UniversalTotal", "UnitSection",
    "classifying_homology", "mapping_cone", "morita_invariance_check", "nerve",
    "string_counts", "unit_section", "universal_total",
]


@dataclass(frozen=True)
class ClassifyingSpaceReport:
    groupoid: str
    truncation: int
    level_counts: tuple[int, ...]
    homology: HomologyProfile

    def to_json(self):
        return {"groupoid": self.groupoid, "truncation": self.truncation,
                "level_counts": list(self.level_counts), "homology": self.homology.to_json()}


def _truncation(k_max, truncation):
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if truncation is None:
        return k_max + 1
    if truncation < k_max + 1:
        raise ValueError(f"truncation {truncation} < k_max + 1 = {k_max + 1}")
    return truncation


def string_counts(x: FiniteGroupoid, n: int) -> list[int]:
    """|N_k| for k <= n from hom-set sizes alone, without listing strings."""
    counts = [len(x.objects)]
    ending = {o: 1 for o in x.objects}  # strings of the current length ending at o
    for _ in range(n):
        nxt = dict.fromkeys(x.objects, 0)
        for m in x.morphisms:
            nxt[x.tgt[m]] += ending[x.src[m]]
        ending = nxt
        counts.append(sum(ending.values()))
    return counts


def classifying_homology(x: FiniteGroupoid, k_max: int, truncation: int | None = None) -> ClassifyingSpaceReport:
    n = _truncation(k_max, truncation)
    s = nerve(x, n)
    counts = tuple(s.counts())
    assert list(counts) == string_counts(x, n), "nerve enumeration disagrees with hom counts"
    return ClassifyingSpaceReport(x.digest(), n, counts, homology(chain_complex(s), k_max))


@dataclass(frozen=True)
class UniversalTotal:
    """``EX = B(X↓X)``: its report, the arrow groupoid, and ``Bζ`` on vertices."""

    report: ClassifyingSpaceReport
    arrows: ArrowGroupoid
    target_map: dict

    def to_json(self):
        out = self.report.to_json()
        out["target_map"] = dict(sorted(self.target_map.items()))
        return out


def universal_total(x: FiniteGroupoid, k_max: int, truncation: int | None = None) -> UniversalTotal:
    arrows = arrow_groupoid(x)
    report = classifying_homology(arrows.groupoid, k_max, truncation)
    return UniversalTotal(report, arrows, dict(arrows.target_map))


@dataclass(frozen=True)
class UnitSection:
    """``σ: X0 -> X↓X`` picking identities, and ``T: id => σζ``."""

    sigma: GroupoidFunctor
    zeta: GroupoidFunctor
    retraction: NaturalTransformation
    arrows: ArrowGroupoid


def unit_section(x: FiniteGroupoid) -> UnitSection:
    arrows = arrow_groupoid(x)
    a = arrows.groupoid
    zeta = target_functor(x, arrows)
    base = trivial_groupoid(x.objects)
    sigma = GroupoidFunctor(base, a, {o: x.identity[o] for o in base.objects},
                            {o: a.identity[x.identity[o]] for o in base.morphisms})
    zs = sigma.then(zeta)
    assert zs.object_map == identity_functor(base).object_map and \
        zs.morphism_map == identity_functor(base).morphism_map, "ζσ != id"
    # T at γ: y0 -> y is the arrow-groupoid morphism γ -> id_y, i.e. δ = γ itself
    comps = {g: pair_id(g, x.identity[x.tgt[g]]) for g in a.objects}
    t = NaturalTransformation(identity_functor(a), zeta.then(sigma), comps)
    assert t.precompose(sigma).is_identity(), "Tσ is not the identity transformation"
    return UnitSection(sigma, zeta, t, arrows)


def mapping_cone(maps: list[IntMatrix], c: ChainComplex, d: ChainComplex) -> ChainComplex:
    """Cone of ``f: C -> D``: degree n is ``C_{n-1} ⊕ D_n`` with ∂ = [[-∂C, 0], [f, ∂D]].

    Built through the top degree of ``D``.
    """
    top = d.top
    ranks = [d.ranks[0]] + [c.ranks[n - 1] + d.ranks[n] for n in range(1, top + 1)]
    bounds = [IntMatrix(0, ranks[0])]
    for n in range(1, top + 1):
        c_rows = c.ranks[n - 2] if n >= 2 else 0
        minus_dc = -c.boundary(n - 1) if n >= 2 else IntMatrix(0, c.ranks[0])
        bounds.append(block(minus_dc, IntMatrix(c_rows, d.ranks[n]),
                            maps[n - 1], d.boundary(n)))
    return ChainComplex(ranks, bounds)


@dataclass(frozen=True)
class MoritaReport:
    source: ClassifyingSpaceReport
    target: ClassifyingSpaceReport
    cone_ranks: tuple[int, ...]
    cone_homology: HomologyProfile
    invariant: bool

    def to_json(self):
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "cone_ranks": list(self.cone_ranks), "cone_homology": self.cone_homology.to_json(),
                "invariant": self.invariant}


def morita_invariance_check(f: GroupoidFunctor, k_max: int) -> MoritaReport:
    """Homology of BX and BY agree and ``Bf`` is a homology isomorphism through ``k_max``.

    Cone acyclicity through ``k_max`` gives isomorphisms below ``k_max`` and
    a surjection in degree ``k_max``; equal profiles upgrade the latter to an
    isomorphism because finitely generated abelian groups are Hopfian.
    """
    we = is_weak_equivalence(f)
    if not we:
        raise NotAWeakEquivalence("functor is not a weak equivalence", witness=we.witness)
    n = k_max + 1
    sm = induced_map(f, n)
    cs, cd = chain_complex(sm.source), chain_complex(sm.target)
    rs = ClassifyingSpaceReport(f.source.digest(), n, tuple(sm.source.counts()), homology(cs, k_max))
    rt = ClassifyingSpaceReport(f.target.digest(), n, tuple(sm.target.counts()), homology(cd, k_max))
    maps = sm.chain_maps()
    for k in range(1, n + 1):
        if cd.boundary(k) @ maps[k] != maps[k - 1] @ cs.boundary(k):
            raise InvarianceFailed(f"induced map is not a chain map in degree {k}", degree=k)
    cone = mapping_cone(maps, cs, cd)
    ch = homology(cone, k_max)
    for k, (b, t) in enumerate(ch.degrees):
        if b or t:
            raise InvarianceFailed(f"mapping cone has homology in degree {k}", degree=k)
    if rs.homology != rt.homology:
        bad = next(k for k in range(k_max + 1) if rs.homology.degrees[k] != rt.homology.degrees[k])
        raise InvarianceFailed(f"homology profiles differ in degree {bad}", degree=bad)
    return MoritaReport(rs, rt, tuple(cone.ranks), ch, True)
