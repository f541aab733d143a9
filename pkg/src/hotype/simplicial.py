"""Semi-simplicial sets, their chain complexes and exact integral homology.

Chains follow the thick realization: there is one generator per simplex at
every level, degenerate nerve strings included, and ``∂ = Σ (-1)^i d_i``.
The normalized complex is available only as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .errors import (BoundaryCheckFailed, FaceIdentityError, HomotopyIdentityFailed,
                     SimplicialMapError, TruncationTooShallow, ValidationError)
from .groupoid import FiniteGroupoid, GroupoidFunctor, NaturalTransformation
from .smith import IntMatrix, divisors, invariant_factors, matmul_dense, smith_form


@dataclass(eq=False)
class SemiSimplicialSet:
    """Graded finite sets with face maps only.

    ``levels[n]`` lists the simplex keys of dimension ``n``;
    ``faces[n][x]`` is the tuple ``(d_0 x, ..., d_n x)`` of indices into
    ``levels[n - 1]`` (empty tuples at level 0).  ``complete`` marks sets
    with nothing above the top level; nerves are truncations and are not.
    """

    levels: list[list[Hashable]]
    faces: list[list[tuple[int, ...]]]
    complete: bool = False
    check: bool = field(default=True, repr=False)
    index: list[dict] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.levels) != len(self.faces):
            raise FaceIdentityError("levels and faces disagree in length")
        self.index = [{k: i for i, k in enumerate(lvl)} for lvl in self.levels]
        for n, lvl in enumerate(self.levels):
            if len(self.index[n]) != len(lvl):
                raise FaceIdentityError(f"duplicate simplex keys at level {n}")
        if self.check:
            self.check_face_identities()

    @property
    def truncation(self) -> int:
        return len(self.levels) - 1

    def counts(self) -> list[int]:
        return [len(lvl) for lvl in self.levels]

    def face(self, n: int, i: int, x: int) -> int:
        return self.faces[n][x][i]

    def check_face_identities(self):
        """``d_i d_j = d_{j-1} d_i`` for ``i < j`` on every simplex."""
        for n in range(1, len(self.levels)):
            below = len(self.levels[n - 1])
            for x, fs in enumerate(self.faces[n]):
                if len(fs) != n + 1 or any(not 0 <= y < below for y in fs):
                    raise FaceIdentityError(f"bad face tuple at level {n}",
                                            level=n, simplex=repr(self.levels[n][x]))
            if n < 2:
                continue
            for x, fs in enumerate(self.faces[n]):
                for j in range(n + 1):
                    for i in range(j):
                        if self.faces[n - 1][fs[j]][i] != self.faces[n - 1][fs[i]][j - 1]:
                            raise FaceIdentityError(
                                f"d_{i} d_{j} != d_{j - 1} d_{i} at level {n}",
                                level=n, simplex=repr(self.levels[n][x]), i=i, j=j)

    def vertices(self, n: int, x: int) -> tuple[int, ...]:
        """Level-0 indices of the vertices of simplex ``x`` at level ``n``, in order."""
        out = []
        for i in range(n + 1):
            m, y, k = n, x, i
            while m > 0:
                if k < m:
                    y = self.faces[m][y][m]
                else:
                    y = self.faces[m][y][0]
                    k -= 1
                m -= 1
            out.append(y)
        return tuple(out)

    def relabel(self, keymap: Callable[[int, Hashable], Hashable], order=None) -> "SemiSimplicialSet":
        """Copy with new keys (and optionally a new order per level)."""
        perms = []
        for n, lvl in enumerate(self.levels):
            perm = list(range(len(lvl))) if order is None else list(order(n, len(lvl)))
            perms.append(perm)
        pos = [{old: new for new, old in enumerate(p)} for p in perms]
        levels = [[keymap(n, self.levels[n][old]) for old in perms[n]]
                  for n in range(len(self.levels))]
        faces = [[tuple(pos[n - 1][y] for y in self.faces[n][old]) if n else ()
                  for old in perms[n]] for n in range(len(self.levels))]
        return SemiSimplicialSet(levels, faces, self.complete)


@dataclass(frozen=True)
class OrderedSimplicialComplex:
    """A simplicial complex on a totally ordered vertex list, closed under faces.

    Simplices are tuples of vertices sorted by vertex position.
    """

    vertices: tuple[str, ...]
    simplices: frozenset

    def __post_init__(self):
        pos = self.position
        for s in self.simplices:
            if not s or any(v not in pos for v in s):
                raise ValidationError(f"simplex {s} uses unknown vertices")
            if len(set(s)) != len(s) or list(s) != sorted(s, key=pos.get):
                raise ValidationError(f"simplex {s} is not strictly increasing")
            for k in range(1, len(s)):
                for f in combinations(s, k):
                    if f not in self.simplices:
                        raise ValidationError(f"face {f} of {s} missing")
        for v in self.vertices:
            if (v,) not in self.simplices:
                raise ValidationError(f"vertex {v} missing as a 0-simplex")

    @classmethod
    def from_facets(cls, vertices: Sequence, facets: Iterable[Iterable]) -> "OrderedSimplicialComplex":
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise ValidationError("duplicate vertices")
        pos = {v: i for i, v in enumerate(verts)}
        simplices = {(v,) for v in verts}
        for facet in facets:
            facet = [str(v) for v in facet]
            if any(v not in pos for v in facet):
                raise ValidationError(f"facet {facet} uses unknown vertices")
            s = tuple(sorted(set(facet), key=pos.get))
            for k in range(1, len(s) + 1):
                simplices.update(combinations(s, k))
        return cls(verts, frozenset(simplices))

    @property
    def position(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def simplices_of_dim(self, n: int) -> list[tuple[str, ...]]:
        pos = self.position
        return sorted((s for s in self.simplices if len(s) == n + 1),
                      key=lambda s: [pos[v] for v in s])

    def edges(self):
        return self.simplices_of_dim(1)

    def to_json(self):
        facets = [list(s) for s in sorted(self.simplices, key=lambda s: [self.position[v] for v in s])
                  if not any(set(s) < set(t) for t in self.simplices)]
        return {"vertices": list(self.vertices), "simplices": facets}


def delta_set_from_complex(k: OrderedSimplicialComplex) -> SemiSimplicialSet:
    """Level n holds the n-simplices; ``d_i`` deletes the i-th vertex."""
    levels = [k.simplices_of_dim(n) for n in range(k.dim + 1)] or [[]]
    index = [{s: i for i, s in enumerate(lvl)} for lvl in levels]
    faces = [[()] * len(levels[0])]
    for n in range(1, len(levels)):
        faces.append([tuple(index[n - 1][s[:i] + s[i + 1:]] for i in range(n + 1))
                      for s in levels[n]])
    return SemiSimplicialSet(levels, faces, complete=True)


def nerve(x: FiniteGroupoid, n: int) -> SemiSimplicialSet:
    """Nerve truncated at level ``n``: composable strings ``(f1, ..., fk)``.

    Level 0 keys are object ids, higher keys are tuples of morphism ids in
    lexicographic order.  ``d_0`` drops ``f1``, ``d_k`` drops ``fk`` and the
    inner faces compose neighbours.  Identity strings are kept.
    """
    if n < 0:
        raise ValueError("truncation must be >= 0")
    levels: list[list] = [list(x.objects)]
    if n >= 1:
        levels.append(sorted((m,) for m in x.morphisms))
    for k in range(2, n + 1):
        levels.append(sorted(s + (m,) for s in levels[-1] for m in x.out_of(x.tgt[s[-1]])))
    index = [{s: i for i, s in enumerate(lvl)} for lvl in levels]
    faces = [[()] * len(levels[0])]
    if n >= 1:
        faces.append([(index[0][x.tgt[m]], index[0][x.src[m]]) for (m,) in levels[1]])
    for k in range(2, n + 1):
        idx = index[k - 1]
        fk = []
        for s in levels[k]:
            f = [idx[s[1:]]]
            for i in range(1, k):
                f.append(idx[s[:i - 1] + (x.table[s[i - 1], s[i]],) + s[i + 1:]])
            f.append(idx[s[:-1]])
            fk.append(tuple(f))
        faces.append(fk)
    return SemiSimplicialSet(levels, faces)


def is_degenerate_string(x: FiniteGroupoid) -> Callable[[int, Hashable], bool]:
    """Predicate for nerve strings that contain an identity morphism."""
    idents = set(x.identity.values())
    return lambda n, key: n > 0 and any(m in idents for m in key)


@dataclass(eq=False)
class SimplicialMap:
    """Level-respecting assignment ``maps[n][x]`` (indices) that commutes with faces."""

    source: SemiSimplicialSet
    target: SemiSimplicialSet
    maps: list[list[int]]

    def __post_init__(self):
        if len(self.maps) != len(self.source.levels) or self.target.truncation < self.source.truncation:
            raise SimplicialMapError("map levels do not match the source truncation")
        for n, m in enumerate(self.maps):
            if len(m) != len(self.source.levels[n]) or any(
                    not 0 <= y < len(self.target.levels[n]) for y in m):
                raise SimplicialMapError(f"level {n} assignment is not total")
        for n in range(1, len(self.maps)):
            below = self.maps[n - 1]
            tf = self.target.faces[n]
            for x, fs in enumerate(self.source.faces[n]):
                img = tf[self.maps[n][x]]
                for i, y in enumerate(fs):
                    if img[i] != below[y]:
                        raise SimplicialMapError(
                            f"face d_{i} does not commute at level {n}",
                            level=n, simplex=repr(self.source.levels[n][x]), i=i)

    @classmethod
    def from_keys(cls, source, target, keymap: Callable[[int, Hashable], Hashable]):
        """Build from a function on simplex keys; unknown images are an error."""
        maps = []
        for n, lvl in enumerate(source.levels):
            idx = target.index[n]
            row = []
            for key in lvl:
                img = keymap(n, key)
                if img not in idx:
                    raise SimplicialMapError(f"image {img!r} of {key!r} is not a simplex",
                                             level=n, simplex=repr(key))
                row.append(idx[img])
            maps.append(row)
        return cls(source, target, maps)

    def chain_map(self, n: int) -> IntMatrix:
        return IntMatrix(len(self.target.levels[n]), len(self.source.levels[n]),
                         [{y: 1} for y in self.maps[n]])

    def chain_maps(self) -> list[IntMatrix]:
        return [self.chain_map(n) for n in range(len(self.maps))]


# -- chains and homology -------------------------------------------------------

@dataclass(eq=False)
class ChainComplex:
    """``ranks[n]`` generators in degree n; ``boundaries[n]: C_n -> C_{n-1}``.

    ``boundaries[0]`` is the zero map to the zero group.  A ``complete``
    complex is zero above its top degree; otherwise it is a truncation.
    """

    ranks: list[int]
    boundaries: list[IntMatrix]
    complete: bool = False

    def __post_init__(self):
        for n in range(2, len(self.boundaries)):
            if not (self.boundaries[n - 1] @ self.boundaries[n]).is_zero():
                raise BoundaryCheckFailed(f"∂∂ != 0 in degree {n}", degree=n)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def rank(self, n: int) -> int:
        return self.ranks[n] if n <= self.top else 0

    def boundary(self, n: int) -> IntMatrix:
        if n == 0:
            return IntMatrix(0, self.ranks[0])
        if n > self.top:
            return IntMatrix(self.rank(n - 1), 0)
        return self.boundaries[n]


def chain_complex(s: SemiSimplicialSet, keep: Callable[[int, Hashable], bool] | None = None) -> ChainComplex:
    """Alternating-face complex of ``s``.

    With ``keep`` given, only simplices it accepts become generators and
    faces landing elsewhere are dropped; that is the quotient by the
    complementary subcomplex (used for the normalized nerve complex).
    """
    basis = [[x for x, key in enumerate(lvl) if keep is None or keep(n, key)]
             for n, lvl in enumerate(s.levels)]
    pos = [{x: i for i, x in enumerate(b)} for b in basis]
    bounds = [IntMatrix(0, len(basis[0]))]
    for n in range(1, len(s.levels)):
        cols = []
        for x in basis[n]:
            col: dict[int, int] = {}
            for i, y in enumerate(s.faces[n][x]):
                r = pos[n - 1].get(y)
                if r is None:
                    continue
                v = col.get(r, 0) + (-1 if i % 2 else 1)
                if v:
                    col[r] = v
                else:
                    col.pop(r, None)
            cols.append(col)
        bounds.append(IntMatrix(len(basis[n - 1]), len(basis[n]), cols))
    return ChainComplex([len(b) for b in basis], bounds, s.complete)


def normalized_nerve_complex(x: FiniteGroupoid, n: int) -> ChainComplex:
    """Nerve chains modulo strings that contain an identity."""
    degenerate = is_degenerate_string(x)
    return chain_complex(nerve(x, n), keep=lambda k, key: not degenerate(k, key))


@dataclass(frozen=True)
class HomologyProfile:
    """``degrees[k] = (betti, torsion)`` with torsion a divisibility chain."""

    degrees: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        for betti, tors in self.degrees:
            if betti < 0 or any(t < 2 for t in tors):
                raise ValueError("malformed homology profile")
            if any(b % a for a, b in zip(tors, tors[1:])):
                raise ValueError("torsion is not a divisibility chain")

    @classmethod
    def of(cls, *groups) -> "HomologyProfile":
        """Build from ``(betti, [torsion...])`` pairs or bare betti ints."""
        out = []
        for g in groups:
            if isinstance(g, int):
                out.append((g, ()))
            else:
                out.append((g[0], tuple(g[1])))
        return cls(tuple(out))

    def betti(self, k):
        return self.degrees[k][0]

    def torsion(self, k):
        return self.degrees[k][1]

    def is_reduced_acyclic(self) -> bool:
        """Zero reduced homology: only free H_0 survives."""
        return all(not tors for _, tors in self.degrees) and all(
            b == 0 for b, _ in self.degrees[1:])

    def to_json(self):
        return {"degrees": [{"k": k, "betti": b, "torsion": list(t)}
                            for k, (b, t) in enumerate(self.degrees)]}

    @classmethod
    def from_json(cls, data):
        degs = sorted(data["degrees"], key=lambda d: d["k"])
        return cls(tuple((d["betti"], tuple(d["torsion"])) for d in degs))

    def __str__(self):
        parts = []
        for b, tors in self.degrees:
            terms = (["Z"] if b == 1 else [f"Z^{b}"] if b else []) + [f"Z/{t}" for t in tors]
            parts.append(" + ".join(terms) or "0")
        return "(" + ", ".join(parts) + ")"


def homology(c: ChainComplex, k_max: int) -> HomologyProfile:
    """H_0..H_{k_max} via Smith normal form; needs degree ``k_max + 1`` present."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    if c.top < k_max + 1 and not c.complete:
        raise TruncationTooShallow(
            f"H_{k_max} needs chains in degree {k_max + 1}; complex stops at {c.top}",
            k_max=k_max, top=c.top)
    divs = [divisors(c.boundary(n)) for n in range(k_max + 2)]
    degrees = []
    for k in range(k_max + 1):
        betti = c.rank(k) - len(divs[k]) - len(divs[k + 1])
        degrees.append((betti, tuple(invariant_factors(divs[k + 1]))))
    return HomologyProfile(tuple(degrees))


class HomologyBasis:
    """Named generators of H_k plus a coordinate map for cycles.

    Coordinates list the torsion generators first (reduced mod their
    orders), then the free ones.
    """

    def __init__(self, c: ChainComplex, k: int):
        if c.top < k + 1 and not c.complete:
            raise TruncationTooShallow(f"H_{k} needs degree {k + 1}", k_max=k, top=c.top)
        n = c.rank(k)
        d_k, _, _, V, Vi = smith_form(c.boundary(k)) if c.boundary(k).nrows else ([], None, None, _eye(n), _eye(n))
        r = len(d_k)
        z = n - r
        bnext = c.boundary(k + 1).to_dense()
        a = [row for row in matmul_dense(Vi, bnext)[r:]] if bnext else [[] for _ in range(z)]
        if z and c.rank(k + 1):
            d, P, Pi, _, _ = smith_form(a)
        else:
            d, P, Pi = [], _eye(z), _eye(z)
        self.k = k
        self._r = r
        self._Vi = Vi
        self._P = P
        kern = [row[r:] for row in V]
        gens = matmul_dense(kern, Pi) if z else [[] for _ in range(n)]
        self.orders = [x for x in d if x > 1]
        self.free_rank = z - len(d)
        keep = [i for i, x in enumerate(d) if x > 1] + list(range(len(d), z))
        self._keep = keep
        self.generators = [{row: gens[row][i] for row in range(n) if gens[row][i]} for i in keep]

    @property
    def profile(self):
        return (self.free_rank, tuple(self.orders))

    def coordinates(self, cycle: dict[int, int]) -> tuple[int, ...]:
        vec = [sum(row[j] * v for j, v in cycle.items()) for row in self._Vi]
        if any(vec[: self._r]):
            raise ValueError("chain is not a cycle")
        x = vec[self._r:]
        y = [sum(p * xi for p, xi in zip(row, x)) for row in self._P]
        out = []
        for pos, i in enumerate(self._keep):
            if pos < len(self.orders):
                out.append(y[i] % self.orders[pos])
            else:
                out.append(y[i])
        return tuple(out)


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def induced_homology_map(f: IntMatrix, source: HomologyBasis, target: HomologyBasis) -> list[tuple[int, ...]]:
    """Images of the source generators, in target coordinates."""
    return [target.coordinates(f.apply(g)) for g in source.generators]


# -- maps induced by functors ------------------------------------------------------

def nerve_key_map(f: GroupoidFunctor) -> Callable[[int, Hashable], Hashable]:
    return lambda n, key: f.obj(key) if n == 0 else tuple(f(m) for m in key)


def induced_map(f: GroupoidFunctor, n: int) -> SimplicialMap:
    """``(f1, ..., fk) -> (F f1, ..., F fk)`` between nerves truncated at ``n``."""
    return SimplicialMap.from_keys(nerve(f.source, n), nerve(f.target, n), nerve_key_map(f))


@dataclass(eq=False)
class ChainHomotopy:
    """Prism operator ``P_n : C_n -> D_{n+1}`` with ``∂P + P∂ = G# - F#``."""

    source: ChainComplex
    target: ChainComplex
    lower: list[IntMatrix]
    upper: list[IntMatrix]
    operators: list[IntMatrix]


def nat_trans_chain_homotopy(t: NaturalTransformation, n: int) -> ChainHomotopy:
    """Chain homotopy between the maps induced by ``F`` and ``G`` on nerves.

    For a string ``x0 -f1-> ... -fk-> xk`` the prism sends it to
    ``Σ_j (-1)^j (F f1, ..., F fj, T_{xj}, G f_{j+1}, ..., G fk)``.
    The identity is verified in degrees ``0 .. n-1``.
    """
    if n < 2:
        raise ValueError("chain homotopy needs truncation >= 2")
    F, G = t.source_functor, t.target_functor
    src, dst = F.source, F.target
    ns, nd = nerve(src, n), nerve(dst, n)
    cs, cd = chain_complex(ns), chain_complex(nd)
    fmap = SimplicialMap.from_keys(ns, nd, nerve_key_map(F))
    gmap = SimplicialMap.from_keys(ns, nd, nerve_key_map(G))
    comp = t.components
    ops = []
    for k in range(n):
        idx = nd.index[k + 1]
        cols = []
        for key in ns.levels[k]:
            if k == 0:
                objs = [key]
                key = ()
            else:
                objs = [src.src[key[0]]] + [src.tgt[m] for m in key]
            col: dict[int, int] = {}
            for j in range(k + 1):
                s = tuple(F(m) for m in key[:j]) + (comp[objs[j]],) + tuple(G(m) for m in key[j:])
                row = idx[s]
                v = col.get(row, 0) + (-1 if j % 2 else 1)
                if v:
                    col[row] = v
                else:
                    col.pop(row, None)
            cols.append(col)
        ops.append(IntMatrix(len(nd.levels[k + 1]), len(ns.levels[k]), cols))
    fs, gs = fmap.chain_maps(), gmap.chain_maps()
    for k in range(n):
        lhs = cd.boundary(k + 1) @ ops[k]
        if k > 0:
            lhs = lhs + ops[k - 1] @ cs.boundary(k)
        if lhs != gs[k] - fs[k]:
            raise HomotopyIdentityFailed(f"∂P + P∂ != G# - F# in degree {k}", degree=k)
    return ChainHomotopy(cs, cd, fs, gs, ops)
