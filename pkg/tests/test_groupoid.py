import json

import pytest
from hypothesis import given, settings, strategies as st

from hotype.errors import AxiomError, NotACover, NotAGroup, NotAnAction, ParseError, UnknownObject
from hotype.groupoid import (GroupoidFunctor, action_groupoid, arrow_groupoid, cech_groupoid,
                             cech_projection, comma_over_object, cyclic_group, groupoid_from_group,
                             identity_functor, is_weak_equivalence, iso_classes, pair_groupoid,
                             symmetric_group, terminal_functor, trivial_groupoid, validate_groupoid)

SWAP = {("0", "a"): "a", ("0", "b"): "b", ("1", "a"): "b", ("1", "b"): "a"}


def free_z2():
    return action_groupoid(cyclic_group(2), ["a", "b"], SWAP)


def z2_raw(bad=False):
    g = groupoid_from_group(cyclic_group(2)).to_json()
    if bad:
        g["compose"] = [[x, y, "1" if (x, y) == ("1", "1") else z] for x, y, z in g["compose"]]
    return g


def is_isomorphic(a, b):
    """Small-groupoid isomorphism by brute force over object and morphism bijections."""
    from itertools import permutations
    if len(a.objects) != len(b.objects) or len(a.morphisms) != len(b.morphisms):
        return False
    for objs in permutations(b.objects):
        om = dict(zip(a.objects, objs))
        for mors in permutations(b.morphisms):
            mm = dict(zip(a.morphisms, mors))
            if all(b.src[mm[m]] == om[a.src[m]] and b.tgt[mm[m]] == om[a.tgt[m]] for m in a.morphisms) \
                    and all(b.table.get((mm[x], mm[y])) == mm[z] for (x, y), z in a.table.items()):
                return True
    return False


# -- validation ---------------------------------------------------------------

def test_terminal_groupoid_validates():
    g = validate_groupoid({"objects": ["pt"], "morphisms": [{"id": "e", "src": "pt", "tgt": "pt"}],
                           "identities": {"pt": "e"}, "compose": [["e", "e", "e"]],
                           "inverses": {"e": "e"}})
    assert len(g.morphisms) == 1


def test_broken_z2_table_names_inverse_law():
    with pytest.raises(AxiomError) as exc:
        validate_groupoid(z2_raw(bad=True))
    assert exc.value.axiom == "inverse law"
    assert "1" in exc.value.witness


def test_cech_groupoid_round_trips_through_validation():
    c = cech_groupoid([1, 2, 3], [[1, 2], [2, 3]])
    v = validate_groupoid(json.dumps(c.to_json()))
    assert len(v.morphisms) == 6 and v == c


@pytest.mark.parametrize("mutate", [
    lambda r: r.update(extra=1),
    lambda r: r.pop("inverses"),
    lambda r: r["morphisms"].append({"id": "z", "src": "nowhere", "tgt": "*"}),
    lambda r: r["compose"].append(["0", "0"]),
])
def test_malformed_input_is_a_parse_error(mutate):
    raw = z2_raw()
    mutate(raw)
    with pytest.raises(ParseError):
        validate_groupoid(raw)


def test_invalid_json_text():
    with pytest.raises(ParseError):
        validate_groupoid("{not json")


def test_missing_composition_is_rejected():
    raw = z2_raw()
    raw["compose"] = raw["compose"][1:]
    with pytest.raises(AxiomError):
        validate_groupoid(raw)


# -- constructors -----------------------------------------------------------------

def test_group_counts():
    z2 = groupoid_from_group(cyclic_group(2))
    assert (len(z2.objects), len(z2.morphisms)) == (1, 2)
    s3 = groupoid_from_group(symmetric_group(3))
    assert (len(s3.objects), len(s3.morphisms), len(s3.table)) == (1, 6, 36)


def test_group_composition_is_diagrammatic():
    s3 = groupoid_from_group(symmetric_group(3))
    # "102" swaps 0,1 and "021" swaps 1,2; doing 102 first sends 0 -> 1 -> 2
    assert s3.compose("102", "021") == "201"
    assert s3.compose("021", "102") == "120"


def test_non_associative_magma_is_not_a_group():
    # x*y = (-x - y) mod 3 is commutative with no unit and fails associativity
    table = {(str(a), str(b)): str((-a - b) % 3) for a in range(3) for b in range(3)}
    with pytest.raises(NotAGroup):
        groupoid_from_group(table)


def test_free_swap_action_counts():
    g = free_z2()
    assert (len(g.objects), len(g.morphisms)) == (2, 4)
    assert g.src["(1,a)"] == "a" and g.tgt["(1,a)"] == "b"


def test_trivial_action_on_point_is_the_group():
    g = action_groupoid(cyclic_group(2), ["pt"], lambda h, y: y)
    assert is_isomorphic(g, groupoid_from_group(cyclic_group(2)))


def test_broken_action_is_rejected():
    # rotation by g on two points cannot satisfy g.g.g = e
    bad = {("0", "a"): "a", ("0", "b"): "b", ("1", "a"): "b", ("1", "b"): "a",
           ("2", "a"): "b", ("2", "b"): "a"}
    with pytest.raises(NotAnAction):
        action_groupoid(cyclic_group(3), ["a", "b"], bad)


def test_cech_counts_and_composition():
    c = cech_groupoid([1, 2, 3], [[1, 2], [2, 3]])
    assert (len(c.objects), len(c.morphisms)) == (4, 6)
    assert c.compose("(2,0,1)", "(2,1,0)") == "(2,0,0)"
    assert c.src["(2,0,1)"] == "(2,0)" and c.tgt["(2,0,1)"] == "(2,1)"


def test_cech_with_single_set_is_the_trivial_groupoid():
    assert is_isomorphic(cech_groupoid([1, 2, 3], [[1, 2, 3]]), trivial_groupoid([1, 2, 3]))


def test_cover_missing_a_point():
    with pytest.raises(NotACover) as exc:
        cech_groupoid([1, 2, 3], [[1, 2]])
    assert exc.value.uncovered == ["3"]


def test_trivial_groupoid_examples():
    assert len(trivial_groupoid(["pt"]).morphisms) == 1
    t = trivial_groupoid([1, 2, 3])
    assert (len(t.objects), len(t.morphisms)) == (3, 3)
    e = trivial_groupoid([])
    assert e.objects == () or list(e.objects) == []
    assert len(e.morphisms) == 0


# -- arrow and comma groupoids --------------------------------------------------

def test_arrow_groupoid_of_z2_is_the_pair_groupoid():
    a = arrow_groupoid(groupoid_from_group(cyclic_group(2)))
    assert (len(a.groupoid.objects), len(a.groupoid.morphisms)) == (2, 4)
    assert is_isomorphic(a.groupoid, pair_groupoid(["x", "y"]))
    # the unique morphism gamma -> gamma' projects to gamma * gamma'^-1
    assert a.projection("(1,0)") == "1"


def test_arrow_groupoid_of_discrete_is_itself():
    t = trivial_groupoid([1, 2])
    assert is_isomorphic(arrow_groupoid(t).groupoid, t)


def test_arrow_groupoid_of_s3():
    a = arrow_groupoid(groupoid_from_group(symmetric_group(3))).groupoid
    assert (len(a.objects), len(a.morphisms)) == (6, 36)


def test_comma_examples():
    z2 = groupoid_from_group(cyclic_group(2))
    assert is_isomorphic(comma_over_object(z2, "*"), pair_groupoid([1, 2]))
    c = comma_over_object(trivial_groupoid([1, 2]), "1")
    assert (len(c.objects), len(c.morphisms)) == (1, 1)
    s3 = groupoid_from_group(symmetric_group(3))
    c = comma_over_object(s3, "*")
    assert is_isomorphic(c, pair_groupoid(range(6)))
    assert all(len(c.hom(o, "012")) == 1 for o in c.objects)
    with pytest.raises(UnknownObject):
        comma_over_object(s3, "nope")


# -- weak equivalences ---------------------------------------------------------

def test_free_quotient_is_a_weak_equivalence():
    assert is_weak_equivalence(terminal_functor(free_z2()))


def test_cech_projection_is_a_weak_equivalence():
    assert is_weak_equivalence(cech_projection([1, 2, 3], [[1, 2], [2, 3]]))


def test_group_to_point_is_not_faithful():
    r = is_weak_equivalence(terminal_functor(groupoid_from_group(cyclic_group(2))))
    assert not r
    assert (r.witness["source_hom"], r.witness["target_hom"]) == (2, 1)


def test_missing_iso_class_is_reported():
    inc = GroupoidFunctor(trivial_groupoid([1]), trivial_groupoid([1, 2]), {"1": "1"}, {"1": "1"})
    r = is_weak_equivalence(inc)
    assert not r and r.witness["missed_class"] == ["2"]


# -- generated examples ----------------------------------------------------------

@st.composite
def groupoids(draw):
    kind = draw(st.sampled_from(["cyclic", "pair", "trivial", "cech", "action", "s3"]))
    if kind == "cyclic":
        return groupoid_from_group(cyclic_group(draw(st.integers(1, 5))))
    if kind == "pair":
        return pair_groupoid(range(draw(st.integers(1, 4))))
    if kind == "trivial":
        return trivial_groupoid(range(draw(st.integers(0, 4))))
    if kind == "s3":
        return groupoid_from_group(symmetric_group(3))
    if kind == "action":
        # translation on Z/n plus some fixed points
        n = draw(st.integers(1, 4))
        fixed = [f"f{i}" for i in range(draw(st.integers(0, 2)))]
        return action_groupoid(cyclic_group(n), [str(i) for i in range(n)] + fixed,
                               lambda g, y: y if y in fixed else (int(g) + int(y)) % n)
    pts = list(range(draw(st.integers(1, 4))))
    cover = draw(st.lists(st.sets(st.sampled_from(pts), min_size=1), min_size=1, max_size=3))
    cover.append(set(pts))
    return cech_groupoid(pts, cover)


@settings(max_examples=40, deadline=None)
@given(groupoids())
def test_identity_is_a_weak_equivalence(g):
    assert is_weak_equivalence(identity_functor(g))


@settings(max_examples=40, deadline=None)
@given(groupoids())
def test_arrow_groupoid_has_singleton_homs_over_each_target(g):
    a = arrow_groupoid(g)
    for x in a.groupoid.objects:
        for y in a.groupoid.objects:
            expected = 1 if a.target_map[x] == a.target_map[y] else 0
            assert len(a.groupoid.hom(x, y)) == expected


@settings(max_examples=40, deadline=None)
@given(groupoids())
def test_comma_has_terminal_identity(g):
    for y in g.objects:
        c = comma_over_object(g, y)
        assert all(len(c.hom(o, g.identity[y])) == 1 for o in c.objects)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.data())
def test_cech_projection_always_passes(n, data):
    pts = list(range(n))
    cover = data.draw(st.lists(st.sets(st.sampled_from(pts), min_size=1), min_size=1, max_size=4))
    cover.append(set(data.draw(st.sets(st.sampled_from(pts)))) | (set(pts) - set().union(*cover)))
    cover = [c for c in cover if c]
    assert is_weak_equivalence(cech_projection(pts, cover))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_weak_equivalences_compose(n, m):
    # free transitive action -> point -> pair groupoid
    act = action_groupoid(cyclic_group(n), range(n), lambda g, y: (int(g) + int(y)) % n)
    f = terminal_functor(act)
    pair = pair_groupoid(range(m))
    into = GroupoidFunctor(f.target, pair, {"pt": "0"}, {"pt": "(0,0)"})
    assert is_weak_equivalence(f) and is_weak_equivalence(into)
    assert is_weak_equivalence(f.then(into))


def test_iso_classes_use_all_morphisms():
    c = cech_groupoid([1, 2, 3], [[1, 2], [2, 3]])
    assert iso_classes(c) == [["(1,0)"], ["(2,0)", "(2,1)"], ["(3,1)"]]
