import pytest
from hypothesis import given, settings, strategies as st

from hotype.classifying import (classifying_homology, mapping_cone, morita_invariance_check,
                                string_counts, unit_section, universal_total)
from hotype.errors import NotAWeakEquivalence
from hotype.groupoid import (GroupoidFunctor, action_groupoid, cech_groupoid, cech_projection,
                             cyclic_group, groupoid_from_group, pair_groupoid, symmetric_group,
                             terminal_functor, trivial_groupoid)
from hotype.simplicial import HomologyProfile, chain_complex, homology, induced_map, nerve, \
    nat_trans_chain_homotopy
from oracles import abelianization_order, periodic_resolution_homology

Z2 = groupoid_from_group(cyclic_group(2))
S3 = groupoid_from_group(symmetric_group(3))
CECH = cech_groupoid([1, 2, 3], [[1, 2], [2, 3]])
FREE = action_groupoid(cyclic_group(2), "ab", lambda g, y: y if g == "0" else {"a": "b", "b": "a"}[y])


def test_nerve_level_counts():
    assert nerve(trivial_groupoid([1, 2, 3]), 2).counts() == [3, 3, 3]
    assert nerve(Z2, 3).counts() == [1, 2, 4, 8]
    assert nerve(CECH, 1).counts() == [4, 6]


def test_nerve_faces():
    s = nerve(S3, 2)
    x = s.index[2]["102", "021"]
    faces = [s.levels[1][f] for f in s.faces[2][x]]
    assert faces == [("021",), ("201",), ("102",)]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([Z2, S3, CECH, FREE, trivial_groupoid("xy"), pair_groupoid(range(3))]),
       st.integers(0, 3))
def test_counts_follow_the_string_recursion(g, n):
    assert nerve(g, n).counts() == string_counts(g, n)


def test_z3_report():
    r = classifying_homology(groupoid_from_group(cyclic_group(3)), 4)
    assert list(r.homology.degrees) == periodic_resolution_homology(3, 4)
    assert r.truncation == 5 and r.level_counts == (1, 3, 9, 27, 81, 243)


def test_free_quotient_is_a_point():
    assert classifying_homology(FREE, 3).homology == \
        classifying_homology(trivial_groupoid(["pt"]), 3).homology == HomologyProfile.of(1, 0, 0, 0)


def test_s3_h1():
    (b, tors) = classifying_homology(S3, 1).homology.degrees[1]
    assert b == 0 and tors == (abelianization_order(symmetric_group(3)),)


def test_truncation_override():
    r = classifying_homology(Z2, 2, truncation=4)
    assert r.truncation == 4 and len(r.homology.degrees) == 3
    with pytest.raises(ValueError):
        classifying_homology(Z2, 2, truncation=2)


def test_report_json():
    j = classifying_homology(Z2, 1).to_json()
    assert set(j) == {"groupoid", "truncation", "level_counts", "homology"}
    assert j["level_counts"] == [1, 2, 4]


# -- E X ----------------------------------------------------------------------

def test_euniv_examples():
    assert universal_total(Z2, 3).report.homology == HomologyProfile.of(1, 0, 0, 0)
    assert universal_total(trivial_groupoid([1, 2]), 0).report.homology == HomologyProfile.of(2)
    assert universal_total(S3, 2).report.homology == HomologyProfile.of(1, 0, 0)


def test_euniv_target_map():
    u = universal_total(CECH, 1)
    assert u.target_map["(2,0,1)"] == "(2,1)"
    assert u.report.homology.betti(0) == 4


def test_unit_section_z2():
    s = unit_section(Z2)
    assert s.sigma.obj("*") == "0"
    # T at gamma is the unique arrow gamma -> id, whose underlying morphism is gamma
    comp = s.retraction.components
    assert comp == {"0": "(0,0)", "1": "(1,0)"}
    assert s.arrows.projection(comp["1"]) == "1"


def test_unit_section_discrete_is_iso():
    s = unit_section(trivial_groupoid([1, 2]))
    assert s.sigma.is_isomorphism() and s.retraction.is_identity()


@pytest.mark.parametrize("g", [Z2, S3, CECH], ids=["z2", "s3", "cech"])
def test_retraction_homotopy(g):
    s = unit_section(g)
    nat_trans_chain_homotopy(s.retraction, 3)


# -- Morita ---------------------------------------------------------------------

def test_free_quotient_morita():
    r = morita_invariance_check(terminal_functor(FREE), 3)
    assert r.invariant and r.cone_homology == HomologyProfile.of(0, 0, 0, 0)
    assert r.source.homology == r.target.homology


def test_cech_morita():
    r = morita_invariance_check(cech_projection([1, 2, 3], [[1, 2], [2, 3]]), 2)
    assert r.source.homology == HomologyProfile.of(3, 0, 0)


def test_group_to_point_is_rejected():
    with pytest.raises(NotAWeakEquivalence):
        morita_invariance_check(terminal_functor(Z2), 2)


def test_cone_detects_non_equivalence():
    # Z/2 -> point: the cone carries the torsion of BZ/2 (shifted by one)
    f = terminal_functor(Z2)
    m = induced_map(f, 3)
    cone = mapping_cone(m.chain_maps(), chain_complex(m.source), chain_complex(m.target))
    assert homology(cone, 2).degrees[2] == (0, (2,))


def test_pair_groupoid_morita_both_ways():
    p = pair_groupoid(range(4))
    inc = GroupoidFunctor(trivial_groupoid(["pt"]), p, {"pt": "0"}, {"pt": "(0,0)"})
    assert morita_invariance_check(inc, 3).invariant
    assert morita_invariance_check(terminal_functor(p), 3).invariant
