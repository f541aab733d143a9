"""
Three presentations of a point
==============================

Groupoids related by a weak equivalence (essentially surjective and fully
faithful) present the same stack, so their classifying spaces must have the
same homology.  Here we check that with the mapping cone of the induced
chain map: an acyclic cone means the map is an isomorphism on homology.
"""

from hotype import (GroupoidFunctor, action_groupoid, cyclic_group, is_weak_equivalence,
                    morita_invariance_check, pair_groupoid, terminal_functor, trivial_groupoid)

point = trivial_groupoid(["pt"])
swap = {("0", "a"): "a", ("0", "b"): "b", ("1", "a"): "b", ("1", "b"): "a"}
free = action_groupoid(cyclic_group(2), ["a", "b"], swap)
pair = pair_groupoid(range(4))

functors = {
    "free Z/2 action -> point": terminal_functor(free),
    "pair groupoid -> point": terminal_functor(pair),
    "point -> pair groupoid": GroupoidFunctor(point, pair, {"pt": "0"}, {"pt": "(0,0)"}),
}
for name, f in functors.items():
    r = morita_invariance_check(f, k_max=3)
    print(f"{name:28s} source {r.source.homology}  target {r.target.homology}  cone {r.cone_homology}")

# A group mapped to a point is not faithful, so it is rejected up front
z2 = action_groupoid(cyclic_group(2), ["pt"], lambda g, y: y)
print("Z/2 -> point:", is_weak_equivalence(terminal_functor(z2)).witness)
