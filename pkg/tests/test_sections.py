"""Tests for tower and cospan sections: construction-time validation, the
componentwise weq/cofibration classifier, tower fibrations and fibrancy, and
the truncation-tower builders.

Random complexes are direct sums of elementary pieces with closed-form
homology, as in the complex tests.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towercalc.complexes import (
    ChainComplex,
    ChainMap,
    direct_sum,
    disk_complex,
    homology,
    homology_group,
    is_quasi_iso,
    moore_complex,
    sphere_complex,
    zero_complex,
)
from towercalc.errors import IllFormedMap, StabilizationViolated
from towercalc.exactalg import FpAbelianGroup, IntegerMatrix, Presentation
from towercalc.sections import (
    CospanSection,
    SectionMorphism,
    TowerSection,
    classify_injective,
    constant_tower,
    free_postnikov_tower,
    identity_morphism,
    is_homotopy_cartesian,
    is_post_fibrant,
    is_tow_cofibrant,
    is_tower_fibration,
    postnikov_tower,
)
from towercalc.trunc import connective_cover, postnikov_section

# ---------------------------------------------------------------------------
# builders


def cyclic_layer(t, n):
    return ChainComplex(n, (Presentation(1, IntegerMatrix.from_rows([[t]])),), ())


def _piece(kind, n, t):
    if kind == 0:
        return sphere_complex(n)
    if kind == 1:
        return disk_complex(n)
    if kind == 2:
        return moore_complex(t, n)
    return cyclic_layer(t, n)


def build_sum(pieces):
    out = zero_complex()
    for kind, n, t in pieces:
        out = direct_sum(out, _piece(kind, n, t))
    return out


piece_st = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(2, 7))
pieces_st = st.lists(piece_st, min_size=1, max_size=3)
free_pieces_st = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 3), st.integers(2, 7)),
    min_size=1, max_size=3)


# ---------------------------------------------------------------------------
# construction-time validation


def test_tower_requires_matching_endpoints():
    s0, s1 = sphere_complex(0), sphere_complex(1)
    with pytest.raises(IllFormedMap):
        TowerSection((s0, s1), (ChainMap.identity(s0),), 1)


def test_tower_rejects_false_stabilization_claim():
    x, y = sphere_complex(0), sphere_complex(0, 2)
    proj = ChainMap(y, x, (IntegerMatrix.from_rows([[1, 0]]),))
    with pytest.raises(StabilizationViolated) as exc:
        TowerSection((x, y), (proj,), 0)
    assert exc.value.index == 0


def test_cospan_checks_leg_endpoints():
    s = sphere_complex(0)
    with pytest.raises(IllFormedMap):
        CospanSection(s, s, sphere_complex(1), ChainMap.identity(s), ChainMap.identity(s))


def test_morphism_squares_must_commute():
    s = sphere_complex(0)
    tower = constant_tower(s, 1)
    double = ChainMap(s, s, (IntegerMatrix.from_rows([[2]]),))
    with pytest.raises(IllFormedMap):
        SectionMorphism(tower, tower, (ChainMap.identity(s), double))


# ---------------------------------------------------------------------------
# componentwise classification


def test_identity_morphism_is_weq_and_cofibration():
    tower = postnikov_tower(moore_complex(3, 1), 2)
    cert = classify_injective(identity_morphism(tower))
    assert cert.passed
    assert cert.witness == {"weq": True, "cofib": True}


def test_cover_inclusion_is_a_cofibration_but_not_a_weq():
    x = direct_sum(sphere_complex(0), sphere_complex(2))
    cover, j = connective_cover(x, 0)
    phi = SectionMorphism(constant_tower(cover, 1), constant_tower(x, 1), (j, j))
    cert = classify_injective(phi)
    assert cert.witness["cofib"]
    assert not cert.witness["weq"]  # H_0 is dropped by the cover


def test_non_injective_component_is_flagged_with_its_level():
    s = sphere_complex(0)
    zero_tower = constant_tower(zero_complex(), 1)
    phi = SectionMorphism(constant_tower(s, 1), zero_tower,
                          (ChainMap.zero_map(s, zero_complex()),) * 2)
    cert = classify_injective(phi)
    assert not cert.witness["cofib"]
    bad = [c for c in cert.children if c.check == "componentwise_cofibration"][0]
    assert bad.witness["level"] == 0 and bad.witness["degree"] == 0


def test_torsion_cokernel_blocks_the_cofibration_verdict():
    s = sphere_complex(0)
    double = ChainMap(s, s, (IntegerMatrix.from_rows([[2]]),))
    phi = SectionMorphism(constant_tower(s, 0), constant_tower(s, 0), (double,))
    cert = classify_injective(phi)
    assert not cert.witness["cofib"]
    assert cert.witness["weq"] is False  # x2 is not an iso on H_0


def first_summand_inclusion(a, b):
    """The inclusion of a into b = direct_sum(a, rest)."""
    comps = []
    for i in a.span():
        ga, gb = a.pres_at(i).generators, b.pres_at(i).generators
        comps.append(IntegerMatrix.from_cols(
            [tuple(1 if r == col else 0 for r in range(gb)) for col in range(ga)],
            rows=gb))
    return ChainMap(a, b, tuple(comps))


@given(free_pieces_st, free_pieces_st)
@settings(max_examples=30, deadline=None)
def test_composite_of_cofibrations_is_a_cofibration(left, right):
    a = build_sum(left)
    b = direct_sum(a, build_sum(right))
    c = direct_sum(b, sphere_complex(1))
    phi1 = SectionMorphism(constant_tower(a, 0), constant_tower(b, 0),
                           (first_summand_inclusion(a, b),))
    phi2 = SectionMorphism(constant_tower(b, 0), constant_tower(c, 0),
                           (first_summand_inclusion(b, c),))
    assert classify_injective(phi1).witness["cofib"]
    assert classify_injective(phi2).witness["cofib"]
    composite = SectionMorphism(
        phi1.source, phi2.target,
        tuple(g.compose(f) for f, g in zip(phi1.components, phi2.components)))
    assert classify_injective(composite).witness["cofib"]


# ---------------------------------------------------------------------------
# tower fibrations


def test_projection_to_the_zero_tower_is_a_fibration():
    x = direct_sum(moore_complex(2, 1), sphere_complex(0))
    tower = postnikov_tower(x, 2)
    zt = constant_tower(zero_complex(), 2)
    phi = SectionMorphism(tower, zt, tuple(
        ChainMap.zero_map(tower.level(i), zero_complex()) for i in range(3)))
    assert is_tower_fibration(phi).passed


def test_missing_pullback_generator_fails_with_witness():
    s1 = sphere_complex(1)
    double = ChainMap(s1, s1, (IntegerMatrix.from_rows([[2]]),))
    tower = TowerSection((s1, s1), (double,), 1)
    zt = constant_tower(zero_complex(), 1)
    phi = SectionMorphism(tower, zt,
                          (ChainMap.zero_map(s1, zero_complex()),) * 2)
    cert = is_tower_fibration(phi)
    assert not cert.passed
    assert cert.failures()[0].witness["degree"] == 1


# ---------------------------------------------------------------------------
# fibrancy of towers


def test_postnikov_tower_is_fibrant():
    x = direct_sum(moore_complex(4, 0), sphere_complex(2))
    assert is_post_fibrant(postnikov_tower(x, 3)).passed


def test_zero_tower_is_fibrant():
    assert is_post_fibrant(constant_tower(zero_complex(), 2)).passed


def test_non_surjective_structure_map_fails_fibrancy_both_ways():
    m = moore_complex(2, 0)
    zero_map = ChainMap(m, m, (IntegerMatrix.zero(1, 1), IntegerMatrix.zero(1, 1)))
    tower = TowerSection((m, m), (zero_map,), 1)
    cert = is_post_fibrant(tower)
    assert not cert.passed
    for route in cert.children:
        assert not route.passed


# ---------------------------------------------------------------------------
# homotopy-cartesian and cofibrant towers


def test_constant_tower_is_homotopy_cartesian():
    x = direct_sum(moore_complex(2, 0), sphere_complex(1))
    assert is_homotopy_cartesian(constant_tower(x, 2)).passed


def test_dropping_a_level_breaks_homotopy_cartesianness():
    s = sphere_complex(0)
    zc = zero_complex()
    tower = TowerSection(
        (zc, zc, s),
        (ChainMap.zero_map(zc, zc), ChainMap.zero_map(s, zc)),
        2)
    cert = is_homotopy_cartesian(tower)
    assert not cert.passed
    assert cert.failures()[0].witness["level"] == 1


def test_torsion_level_is_not_cofibrant():
    tower = postnikov_tower(moore_complex(2, 0), 1)
    cert = is_tow_cofibrant(tower)
    assert not cert.passed
    assert any(c.check == "level_free" and not c.passed for c in cert.children)


def test_structure_map_dropping_homology_is_not_cofibrant():
    s = sphere_complex(0)
    tower = TowerSection((s, s), (ChainMap(s, s, (IntegerMatrix.zero(1, 1),)),), 1)
    cert = is_tow_cofibrant(tower)
    assert not cert.passed
    assert any(c.check == "structure_map_weq" and not c.passed for c in cert.children)


def test_homotopy_cartesian_cospan_with_truncated_vertex():
    x = direct_sum(moore_complex(3, 1), sphere_complex(0))
    p, q = postnikov_section(x, 1)
    cospan = CospanSection(x, p, x, q, q, ("plain", "ptype:1", "plain"))
    assert is_homotopy_cartesian(cospan).passed


def test_homotopy_cartesian_cospan_fails_on_a_dead_leg():
    x = sphere_complex(0)
    p, q = postnikov_section(x, 1)
    dead = ChainMap.zero_map(zero_complex(), p)
    cospan = CospanSection(zero_complex(), p, x, dead, q, ("point", "ptype:1", "plain"))
    cert = is_homotopy_cartesian(cospan)
    assert not cert.passed
    assert cert.failures()[0].check == "left_leg_weq"


# ---------------------------------------------------------------------------
# tower builders


def test_sphere_tower_levels():
    tower = postnikov_tower(sphere_complex(2), 4)
    assert tower.level(0).is_zero and tower.level(1).is_zero
    for i in (2, 3, 4):
        assert tower.level(i) == sphere_complex(2)
    assert tower.stabilization == 2


def test_moore_tower_homology_per_level():
    x = moore_complex(2, 1)  # degrees 2, 1; homology Z/2 in degree 1
    tower = postnikov_tower(x, 3)
    assert homology_group(tower.level(0), 0).is_zero
    assert homology_group(tower.level(1), 1) == FpAbelianGroup.cyclic(2)
    for i in (2, 3):
        assert homology(tower.level(i)) == homology(x)


def test_tower_length_must_reach_the_top_degree():
    with pytest.raises(ValueError):
        postnikov_tower(sphere_complex(3), 1)


@given(pieces_st)
@settings(max_examples=25, deadline=None)
def test_postnikov_tower_is_fibrant_and_its_free_model_is_cofibrant(pieces):
    x = build_sum(pieces)
    m = max(x.top_deg, 0) + 1
    tower = postnikov_tower(x, m)
    assert is_post_fibrant(tower).passed
    free_tower, compare = free_postnikov_tower(x, m)
    assert is_tow_cofibrant(free_tower).passed
    assert is_homotopy_cartesian(free_tower).passed
    for comp in compare.components:
        assert is_quasi_iso(comp).passed


@given(pieces_st)
@settings(max_examples=25, deadline=None)
def test_free_tower_levels_match_truncated_homology(pieces):
    x = build_sum(pieces)
    m = max(x.top_deg, 0)
    free_tower, _ = free_postnikov_tower(x, m)
    for n in range(m + 1):
        assert homology(free_tower.level(n)) == homology(x).truncated(n)
        assert free_tower.level(n).is_degreewise_free
